#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hecke/integer.hpp"
#include "hecke/matrix.hpp"

namespace hecke {

/// Univariate polynomial over the prime field F_p, coefficients low to high,
/// always trimmed (no trailing zeros; the zero polynomial is empty).
class FpPoly {
 public:
  FpPoly() = default;
  FpPoly(std::int64_t p, std::vector<std::int64_t> coeffs);
  static FpPoly constant(std::int64_t p, std::int64_t c) { return FpPoly(p, {c}); }
  static FpPoly x(std::int64_t p) { return FpPoly(p, {0, 1}); }
  static FpPoly from_ints(std::int64_t p, const std::vector<Int>& coeffs);

  std::int64_t prime() const noexcept { return p_; }
  int degree() const noexcept { return static_cast<int>(c_.size()) - 1; }
  bool is_zero() const noexcept { return c_.empty(); }
  bool is_one() const noexcept { return c_.size() == 1 && c_[0] == 1; }
  std::int64_t coeff(std::size_t i) const { return i < c_.size() ? c_[i] : 0; }
  std::int64_t lead() const { return c_.empty() ? 0 : c_.back(); }
  const std::vector<std::int64_t>& coeffs() const noexcept { return c_; }
  std::vector<Int> to_ints() const;

  FpPoly monic() const;
  FpPoly derivative() const;
  std::int64_t eval(std::int64_t x) const;

  friend bool operator==(const FpPoly& a, const FpPoly& b) { return a.p_ == b.p_ && a.c_ == b.c_; }
  friend bool operator<(const FpPoly& a, const FpPoly& b);
  friend FpPoly operator+(const FpPoly& a, const FpPoly& b);
  friend FpPoly operator-(const FpPoly& a, const FpPoly& b);
  friend FpPoly operator*(const FpPoly& a, const FpPoly& b);

  /// Human-readable, e.g. "x^2 + 3*x + 1".
  std::string to_string() const;

 private:
  void trim();
  std::int64_t p_ = 2;
  std::vector<std::int64_t> c_;
};

struct FpDivMod {
  FpPoly quotient;
  FpPoly remainder;
};

FpDivMod divmod(const FpPoly& a, const FpPoly& b);
FpPoly operator%(const FpPoly& a, const FpPoly& b);
FpPoly operator/(const FpPoly& a, const FpPoly& b);
FpPoly gcd(const FpPoly& a, const FpPoly& b);

/// s, t with s*a + t*b = gcd(a, b) (monic).
struct FpBezout {
  FpPoly g, s, t;
};
FpBezout extended_gcd(const FpPoly& a, const FpPoly& b);

FpPoly powmod(const FpPoly& base, const Int& exponent, const FpPoly& modulus);

struct FpFactor {
  FpPoly poly;  // monic irreducible
  int multiplicity;
};

/// Complete factorization of a nonzero polynomial into monic irreducibles,
/// sorted by (degree, coefficients). The leading coefficient is dropped.
std::vector<FpFactor> factor(const FpPoly& f);
bool is_irreducible(const FpPoly& f);

/// Roots in F_p, ascending.
std::vector<std::int64_t> roots(const FpPoly& f);

/// Product of the distinct monic irreducible factors.
FpPoly radical(const FpPoly& f);

/// Characteristic polynomial det(xI - A) of a square matrix over F_p.
FpPoly charpoly_mod_p(const IntMatrix& a, std::int64_t p);

/// Minimal polynomial of the element `x` of a matrix algebra with identity
/// element `unit` (an idempotent commuting with x), over F_p.
FpPoly minimal_polynomial_mod_p(const IntMatrix& x, const IntMatrix& unit, std::int64_t p);

/// Evaluate f(x) in the algebra with identity `unit`, entries reduced mod p.
IntMatrix eval_mod_p(const FpPoly& f, const IntMatrix& x, const IntMatrix& unit);

}  // namespace hecke
