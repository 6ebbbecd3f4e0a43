#include "tdlab/ordinal.hpp"

#include <algorithm>
#include <cctype>

namespace tdlab {

Ordinal::Ordinal() = default;
Ordinal::Ordinal(const Ordinal&) = default;
Ordinal::Ordinal(Ordinal&&) noexcept = default;
Ordinal& Ordinal::operator=(const Ordinal&) = default;
Ordinal& Ordinal::operator=(Ordinal&&) noexcept = default;
Ordinal::~Ordinal() = default;

Ordinal Ordinal::natural(std::uint64_t n) {
  Ordinal a;
  if (n > 0) a.terms_.push_back(Term{Ordinal(), n});
  return a;
}

Ordinal Ordinal::omega() { return omega_power(natural(1), 1); }

Ordinal Ordinal::omega_power(const Ordinal& exponent, std::uint64_t coeff) {
  Ordinal a;
  if (coeff == 0) return a;
  a.terms_.push_back(Term{exponent, coeff});
  return a;
}

bool Ordinal::is_zero() const { return terms_.empty(); }

bool Ordinal::is_finite() const {
  return terms_.empty() || (terms_.size() == 1 && terms_[0].exponent.is_zero());
}

std::uint64_t Ordinal::finite_value() const {
  if (terms_.empty()) return 0;
  return terms_[0].coeff;
}

const std::vector<Ordinal::Term>& Ordinal::terms() const { return terms_; }

std::strong_ordering operator<=>(const Ordinal& a, const Ordinal& b) {
  std::size_t n = std::min(a.terms_.size(), b.terms_.size());
  for (std::size_t i = 0; i < n; ++i) {
    auto c = a.terms_[i].exponent <=> b.terms_[i].exponent;
    if (c != std::strong_ordering::equal) return c;
    auto d = a.terms_[i].coeff <=> b.terms_[i].coeff;
    if (d != std::strong_ordering::equal) return d;
  }
  return a.terms_.size() <=> b.terms_.size();
}

bool operator==(const Ordinal& a, const Ordinal& b) {
  return (a <=> b) == std::strong_ordering::equal;
}

Ordinal add(const Ordinal& a, const Ordinal& b) {
  if (b.terms_.empty()) return a;
  const Ordinal& e = b.terms_[0].exponent;
  Ordinal out;
  // Left absorption: terms of a with exponent below b's leading exponent vanish.
  for (const auto& t : a.terms_) {
    if (t.exponent > e) {
      out.terms_.push_back(t);
    } else if (t.exponent == e) {
      out.terms_.push_back(Ordinal::Term{e, t.coeff + b.terms_[0].coeff});
      for (std::size_t i = 1; i < b.terms_.size(); ++i) out.terms_.push_back(b.terms_[i]);
      return out;
    } else {
      break;
    }
  }
  for (const auto& t : b.terms_) out.terms_.push_back(t);
  return out;
}

std::pair<Ordinal, std::uint64_t> split_limit_plus_finite(const Ordinal& a) {
  Ordinal limit_part = a;
  std::uint64_t n = 0;
  if (!a.terms_.empty() && a.terms_.back().exponent.is_zero()) {
    n = a.terms_.back().coeff;
    limit_part.terms_.pop_back();
  }
  return {limit_part, n};
}

Parity parity(const Ordinal& a) {
  auto [limit_part, n] = split_limit_plus_finite(a);
  return (n % 2 == 0) ? Parity::even : Parity::odd;
}

bool is_limit(const Ordinal& a) {
  return !a.is_zero() && !a.terms().back().exponent.is_zero();
}

bool is_successor(const Ordinal& a) {
  return !a.is_zero() && a.terms().back().exponent.is_zero();
}

Ordinal predecessor(const Ordinal& a) {
  if (!is_successor(a)) throw PreconditionError("predecessor requires a successor ordinal");
  Ordinal out = a;
  if (out.terms_.back().coeff > 1) {
    out.terms_.back().coeff -= 1;
  } else {
    out.terms_.pop_back();
  }
  return out;
}

Ordinal fundamental_sequence(const Ordinal& g, std::uint64_t n) {
  if (!is_limit(g)) throw PreconditionError("fundamental_sequence requires a limit ordinal");
  // Peel one w^e off the last term: g = gamma + w^e.
  Ordinal gamma = g;
  Ordinal e = g.terms_.back().exponent;
  if (gamma.terms_.back().coeff > 1) {
    gamma.terms_.back().coeff -= 1;
  } else {
    gamma.terms_.pop_back();
  }
  if (is_limit(e)) return add(gamma, Ordinal::omega_power(fundamental_sequence(e, n)));
  Ordinal ep = predecessor(e);
  if (ep.is_zero()) return add(gamma, Ordinal::natural(n));
  return add(gamma, Ordinal::omega_power(ep, n + 1));
}

Ordinal left_difference(const Ordinal& a, const Ordinal& b) {
  if (a > b) throw PreconditionError("left_difference requires a <= b");
  // Strip the common prefix of terms; the remainder of b is the difference,
  // with the coefficient at the first mismatch adjusted.
  std::size_t i = 0;
  while (i < a.terms_.size() && i < b.terms_.size() &&
         a.terms_[i].exponent == b.terms_[i].exponent &&
         a.terms_[i].coeff == b.terms_[i].coeff) {
    ++i;
  }
  Ordinal out;
  if (i == a.terms_.size()) {
    for (std::size_t j = i; j < b.terms_.size(); ++j) out.terms_.push_back(b.terms_[j]);
    return out;
  }
  // a and b share exponent at i with differing coefficients (a's smaller).
  out.terms_.push_back(
      Ordinal::Term{b.terms_[i].exponent, b.terms_[i].coeff - a.terms_[i].coeff});
  for (std::size_t j = i + 1; j < b.terms_.size(); ++j) out.terms_.push_back(b.terms_[j]);
  return out;
}

namespace {

struct OrdParser {
  const std::string& s;
  std::size_t pos = 0;

  explicit OrdParser(const std::string& text) : s(text) {}

  bool eof() const { return pos >= s.size(); }
  char peek() const { return s[pos]; }

  std::uint64_t nat() {
    if (eof() || !std::isdigit(static_cast<unsigned char>(peek())))
      throw ParseError("expected a natural number", pos);
    std::uint64_t v = 0;
    while (!eof() && std::isdigit(static_cast<unsigned char>(peek()))) {
      v = v * 10 + static_cast<std::uint64_t>(peek() - '0');
      ++pos;
    }
    return v;
  }

  Ordinal term() {
    if (eof()) throw ParseError("expected a term", pos);
    if (peek() != 'w') return Ordinal::natural(nat());
    ++pos;
    Ordinal exponent = Ordinal::natural(1);
    if (!eof() && peek() == '^') {
      ++pos;
      if (!eof() && peek() == '(') {
        ++pos;
        exponent = ord();
        if (eof() || peek() != ')') throw ParseError("expected ')'", pos);
        ++pos;
      } else {
        exponent = Ordinal::natural(nat());
      }
    }
    std::uint64_t coeff = 1;
    if (!eof() && peek() == '*') {
      ++pos;
      coeff = nat();
      if (coeff == 0) throw ParseError("coefficient must be >= 1", pos);
    }
    return Ordinal::omega_power(exponent, coeff);
  }

  Ordinal ord() {
    Ordinal acc = term();
    while (!eof() && peek() == '+') {
      ++pos;
      acc = add(acc, term());
    }
    return acc;
  }
};

void format_term(const Ordinal::Term& t, std::string& out) {
  if (t.exponent.is_zero()) {
    out += std::to_string(t.coeff);
    return;
  }
  out += 'w';
  if (!(t.exponent == Ordinal::natural(1))) {
    out += '^';
    if (t.exponent.is_finite()) {
      out += std::to_string(t.exponent.finite_value());
    } else {
      out += '(';
      out += format_ordinal(t.exponent);
      out += ')';
    }
  }
  if (t.coeff != 1) {
    out += '*';
    out += std::to_string(t.coeff);
  }
}

}  // namespace

Ordinal parse_ordinal(const std::string& text) {
  std::string trimmed = text;
  while (!trimmed.empty() && std::isspace(static_cast<unsigned char>(trimmed.back())))
    trimmed.pop_back();
  std::size_t start = 0;
  while (start < trimmed.size() && std::isspace(static_cast<unsigned char>(trimmed[start])))
    ++start;
  trimmed = trimmed.substr(start);
  OrdParser p(trimmed);
  Ordinal a = p.ord();
  if (!p.eof()) throw ParseError("trailing input in ordinal literal", p.pos);
  return a;
}

std::string format_ordinal(const Ordinal& a) {
  if (a.is_zero()) return "0";
  std::string out;
  bool first = true;
  for (const auto& t : a.terms()) {
    if (!first) out += '+';
    format_term(t, out);
    first = false;
  }
  return out;
}

}  // namespace tdlab
