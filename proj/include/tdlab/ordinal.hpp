#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <vector>

#include "tdlab/rational.hpp"

namespace tdlab {

/// Ordinal below epsilon_0 in Cantor normal form:
/// sum of w^e_i * c_i with e_1 > e_2 > ... (each e_i itself an Ordinal)
/// and every c_i >= 1. The empty sum is 0.
class Ordinal {
 public:
  struct Term;

  Ordinal();
  Ordinal(const Ordinal&);
  Ordinal(Ordinal&&) noexcept;
  Ordinal& operator=(const Ordinal&);
  Ordinal& operator=(Ordinal&&) noexcept;
  ~Ordinal();

  static Ordinal natural(std::uint64_t n);
  static Ordinal omega();
  // w^exponent * coeff, coeff >= 1.
  static Ordinal omega_power(const Ordinal& exponent, std::uint64_t coeff = 1);

  bool is_zero() const;
  bool is_finite() const;  // 0 or a positive natural
  // Finite value; precondition: is_finite().
  std::uint64_t finite_value() const;

  const std::vector<Term>& terms() const;

  friend std::strong_ordering operator<=>(const Ordinal& a, const Ordinal& b);
  friend bool operator==(const Ordinal& a, const Ordinal& b);

 private:
  std::vector<Term> terms_;
  friend Ordinal add(const Ordinal&, const Ordinal&);
  friend Ordinal parse_ordinal(const std::string&);
  friend Ordinal left_difference(const Ordinal&, const Ordinal&);
  friend Ordinal predecessor(const Ordinal&);
  friend Ordinal fundamental_sequence(const Ordinal&, std::uint64_t);
  friend std::pair<Ordinal, std::uint64_t> split_limit_plus_finite(const Ordinal&);
};

struct Ordinal::Term {
  Ordinal exponent;
  std::uint64_t coeff;
};

enum class Parity { even, odd };

// Grammar: ord := term ('+' term)*
//          term := 'w' ('^' '(' ord ')' | '^' nat)? ('*' nat)? | nat
// Terms in any order are summed left to right (normalized, not rejected).
Ordinal parse_ordinal(const std::string& text);
std::string format_ordinal(const Ordinal& a);

Ordinal add(const Ordinal& a, const Ordinal& b);

// a = limitPart + n with limitPart zero or a limit ordinal.
std::pair<Ordinal, std::uint64_t> split_limit_plus_finite(const Ordinal& a);

Parity parity(const Ordinal& a);

bool is_limit(const Ordinal& a);
bool is_successor(const Ordinal& a);

// Precondition: a is a successor.
Ordinal predecessor(const Ordinal& a);

// Canonical fundamental sequence of a limit ordinal g, indexed from 0:
//   (gamma + w^1)[n]      = gamma + n
//   (gamma + w^(e+1))[n]  = gamma + w^e * (n+1)   for e >= 1
//   (gamma + w^lam)[n]    = gamma + w^(lam[n])    for limit lam
// Strictly increasing in n with supremum g.
Ordinal fundamental_sequence(const Ordinal& g, std::uint64_t n);

// The unique d with add(a, d) == b; precondition a <= b.
Ordinal left_difference(const Ordinal& a, const Ordinal& b);

}  // namespace tdlab
