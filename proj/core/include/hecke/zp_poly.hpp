#pragma once

#include <optional>
#include <vector>

#include "hecke/fpoly.hpp"
#include "hecke/integer.hpp"
#include "hecke/matrix.hpp"
#include "hecke/prime_power.hpp"

namespace hecke {

/// Polynomial over Z/ell^N (or Z, when no modulus is applied), coefficients
/// low to high.
using ZPoly = std::vector<Int>;

namespace zpoly {

ZPoly trim(ZPoly p);
ZPoly reduce(const ZPoly& p, const PrimePower& pp);
int degree(const ZPoly& p);
bool is_monic(const ZPoly& p, const PrimePower& pp);

ZPoly add(const ZPoly& a, const ZPoly& b, const PrimePower& pp);
ZPoly sub(const ZPoly& a, const ZPoly& b, const PrimePower& pp);
ZPoly mul(const ZPoly& a, const ZPoly& b, const PrimePower& pp);
ZPoly mul_exact(const ZPoly& a, const ZPoly& b);
ZPoly derivative(const ZPoly& p, const PrimePower& pp);

struct DivMod {
  ZPoly quotient;
  ZPoly remainder;
};
/// Division by a monic divisor.
DivMod divmod_monic(const ZPoly& a, const ZPoly& b, const PrimePower& pp);

Int eval(const ZPoly& p, const Int& x, const PrimePower& pp);

/// p(x + a).
ZPoly taylor_shift(const ZPoly& p, const Int& a, const PrimePower& pp);

FpPoly to_fp(const ZPoly& p, const Int& ell);
ZPoly from_fp(const FpPoly& p);

/// Lift f = prod(factors) mod ell (pairwise coprime, monic) to monic factors
/// modulo ell^N. The last returned factor absorbs the leading coefficient
/// of f; all others are monic of the residual degrees.
std::vector<ZPoly> hensel_lift(const ZPoly& f, const std::vector<FpPoly>& factors, const PrimePower& pp);

/// Characteristic polynomial det(xI - A) over Z/ell^N, by the division-free
/// Berkowitz recurrence.
ZPoly charpoly(const IntMatrix& a, const PrimePower& pp);

/// Valuation of the discriminant of a monic polynomial, from the Smith form
/// of its Sylvester matrix; nullopt when it is not determined at this
/// precision.
std::optional<int> discriminant_valuation(const ZPoly& f, const PrimePower& pp);

std::string to_string(const ZPoly& p);

}  // namespace zpoly
}  // namespace hecke
