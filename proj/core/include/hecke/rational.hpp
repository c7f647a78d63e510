#pragma once

#include <optional>
#include <vector>

#include "hecke/integer.hpp"
#include "hecke/matrix.hpp"
#include "hecke/zp_poly.hpp"

namespace hecke {

/// Polynomial over Q, coefficients low to high, trimmed.
using QPoly = std::vector<Rational>;

namespace qpoly {

QPoly trim(QPoly p);
int degree(const QPoly& p);
QPoly from_z(const ZPoly& p);
/// Monic polynomial with integer coefficients, or nullopt if not integral.
std::optional<ZPoly> to_z(const QPoly& p);
QPoly mul(const QPoly& a, const QPoly& b);
QPoly sub(const QPoly& a, const QPoly& b);
QPoly derivative(const QPoly& p);
QPoly monic(const QPoly& p);
std::pair<QPoly, QPoly> divmod(const QPoly& a, const QPoly& b);
QPoly gcd(const QPoly& a, const QPoly& b);

}  // namespace qpoly

struct ZFactor {
  ZPoly poly;  // monic irreducible over Q
  int multiplicity;
};

/// Factor a monic integer polynomial over Q (Zassenhaus). Factors are sorted
/// by degree, then coefficients.
std::vector<ZFactor> factor_over_q(const ZPoly& f);

// ---------------------------------------------------------------------------
// Exact linear algebra over Q and Z.

RatMatrix to_rational(const IntMatrix& m);
std::size_t rank_q(const RatMatrix& a);

/// Minimal polynomial of x in a matrix algebra whose identity is the
/// idempotent `unit`, over Q (monic).
QPoly minimal_polynomial_q(const RatMatrix& x, const RatMatrix& unit);

/// Evaluate f(x) with identity `unit`.
RatMatrix eval_q(const QPoly& f, const RatMatrix& x, const RatMatrix& unit);

/// A solution of A x = b over Q.
std::optional<std::vector<Rational>> solve_q(const RatMatrix& a, const std::vector<Rational>& b);

/// Saturated Z-basis (columns, in row Hermite normal form after
/// transposition) of {x in Z^d : A x = 0} for a rational matrix A.
IntMatrix integer_kernel(const RatMatrix& a);

/// Row Hermite normal form of an integer matrix, zero rows dropped.
IntMatrix hermite_form(const IntMatrix& a);

}  // namespace hecke
