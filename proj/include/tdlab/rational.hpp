#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <stdexcept>
#include <string>

namespace tdlab {

using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

// Every persisted numeric value is an exact rational "num/den" in lowest
// terms with a positive denominator; no floating point anywhere.
std::string rat_str(const Rat& r);

// Accepts "p" and "p/q" (optional leading '-').
Rat parse_rat(const std::string& text);

// 2^e with e possibly negative.
Rat rat_pow2(int e);

struct ParseError : std::runtime_error {
  std::size_t position;
  ParseError(const std::string& msg, std::size_t pos)
      : std::runtime_error(msg + " at position " + std::to_string(pos)), position(pos) {}
};

struct PreconditionError : std::runtime_error {
  explicit PreconditionError(const std::string& msg) : std::runtime_error(msg) {}
};

// A witness construction cannot be realized at the current stage's resolution.
struct ResolutionError : std::runtime_error {
  explicit ResolutionError(const std::string& msg) : std::runtime_error(msg) {}
};

inline std::string rat_str(const Rat& r) {
  return boost::multiprecision::numerator(r).str() + "/" +
         boost::multiprecision::denominator(r).str();
}

inline Rat parse_rat(const std::string& text) {
  auto slash = text.find('/');
  try {
    if (slash == std::string::npos) return Rat(Int(text));
    Int num(text.substr(0, slash));
    Int den(text.substr(slash + 1));
    if (den == 0) throw ParseError("zero denominator", slash + 1);
    return Rat(num, den);
  } catch (const std::exception&) {
    throw ParseError("malformed rational '" + text + "'", 0);
  }
}

inline Rat rat_pow2(int e) {
  Int p = 1;
  p <<= (e < 0 ? -e : e);
  return e < 0 ? Rat(1, p) : Rat(p);
}

}  // namespace tdlab
