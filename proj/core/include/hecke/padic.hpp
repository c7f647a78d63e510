#pragma once

#include <compare>
#include <memory>
#include <string>
#include <vector>

#include "hecke/integer.hpp"
#include "hecke/matrix.hpp"
#include "hecke/prime_power.hpp"
#include "hecke/zp_poly.hpp"

namespace hecke {

/// A valuation normalised so that v(ell) = 1, stored exactly as
/// lambda-units over the ramification index e. Zero-at-precision is an
/// "at least" value equal to the precision and never an exact one.
class Valuation {
 public:
  static Valuation exact(int lambda_units, int e) { return Valuation(false, lambda_units, e); }
  static Valuation at_least(int lambda_units, int e) { return Valuation(true, lambda_units, e); }

  bool is_at_least() const noexcept { return at_least_; }
  bool is_exact() const noexcept { return !at_least_; }
  int lambda_units() const noexcept { return lambda_; }
  int ramification() const noexcept { return e_; }
  Rational normalised() const { return Rational(lambda_, e_); }

  /// Same value with the lambda of a ring of ramification e' (must divide
  /// evenly, i.e. e | e').
  Valuation in_units_of(int e_prime) const;

  /// Compare by normalised value; an at-least value sorts after an exact
  /// value of the same size.
  friend std::strong_ordering operator<=>(const Valuation& a, const Valuation& b);
  friend bool operator==(const Valuation& a, const Valuation& b) = default;

  /// "1/2", ">=3", "5/2" ...
  std::string to_string() const;

 private:
  Valuation(bool at_least, int lambda, int e) : at_least_(at_least), lambda_(lambda), e_(e) {}
  bool at_least_;
  int lambda_;
  int e_;
};

class LocalRing;
using RingRef = std::shared_ptr<const LocalRing>;
class RingElement;

/// O / ell^N O for O = Z_ell[x]/(g) a discrete valuation ring with
/// ramification e and residue degree f (deg g = e f). The trivial ring
/// g = x over Z/ell^N has e = f = 1.
class LocalRing : public std::enable_shared_from_this<LocalRing> {
 public:
  const PrimePower& base() const noexcept { return pp_; }
  const Int& ell() const noexcept { return pp_.ell(); }
  int precision() const noexcept { return pp_.precision(); }
  const ZPoly& defining_poly() const noexcept { return poly_; }
  int degree() const noexcept { return static_cast<int>(poly_.size()) - 1; }
  int ramification() const noexcept { return e_; }
  int residue_degree() const noexcept { return f_; }
  /// Precision measured in powers of the uniformiser: e * N.
  int lambda_precision() const noexcept { return e_ * pp_.precision(); }
  bool is_base() const noexcept { return degree() == 1; }
  /// Short hash identifying (ell, e, defining polynomial).
  const std::string& poly_hash() const noexcept { return hash_; }

  RingElement zero() const;
  RingElement one() const;
  RingElement from_int(const Int& c) const;
  RingElement generator() const;  // the class of x
  RingElement uniformizer() const;
  RingElement from_coords(IntVector coords) const;

  /// Same defining data, new precision (precision may only go down or up
  /// when the defining polynomial is exact over Z).
  RingRef with_precision(int precision) const;

  /// Multiply coefficient vectors modulo (g, ell^N).
  IntVector multiply(const IntVector& a, const IntVector& b) const;

  /// Header line used in serialized records.
  std::string descriptor() const;

  friend bool same_ring(const LocalRing& a, const LocalRing& b) {
    return a.pp_ == b.pp_ && a.poly_ == b.poly_ && a.e_ == b.e_;
  }

 private:
  friend RingRef make_ring(const Int& ell, int precision, const ZPoly& defining_poly, int e);
  friend RingRef base_ring(const PrimePower& pp);
  LocalRing(PrimePower pp, ZPoly poly, int e, int f, ZPoly uniformizer);

  PrimePower pp_;
  ZPoly poly_;
  int e_;
  int f_;
  ZPoly uniformizer_;
  std::string hash_;
};

/// Build and validate a local ring. Throws InvalidArgument on a non-monic
/// polynomial, non-prime ell, or a residual factorisation inconsistent with
/// the claimed (e, f) split (including a non-maximal order for e > 1).
RingRef make_ring(const Int& ell, int precision, const ZPoly& defining_poly, int e);

/// Z/ell^N as a LocalRing.
RingRef base_ring(const PrimePower& pp);

class RingElement {
 public:
  RingElement() = default;
  RingElement(RingRef ring, IntVector coords);

  const RingRef& ring() const noexcept { return ring_; }
  const IntVector& coords() const noexcept { return c_; }

  bool is_zero() const;
  bool is_unit() const;
  Valuation valuation() const;

  RingElement operator-() const;
  friend RingElement operator+(const RingElement& a, const RingElement& b);
  friend RingElement operator-(const RingElement& a, const RingElement& b);
  friend RingElement operator*(const RingElement& a, const RingElement& b);
  friend bool operator==(const RingElement& a, const RingElement& b);

  RingElement pow(unsigned long k) const;
  /// Multiplicative inverse; the element must be a unit.
  RingElement inverse() const;

  /// Matrix of multiplication by this element in the power basis.
  IntMatrix mult_matrix() const;

  /// Characteristic polynomial of multiplication, over Z/ell^N.
  ZPoly charpoly() const;

  /// "[c0,c1,...]".
  std::string to_string() const;

 private:
  RingRef ring_;
  IntVector c_;
};

/// Polynomial with coefficients in a LocalRing, low to high.
using RingPoly = std::vector<RingElement>;

RingElement eval(const RingPoly& f, const RingElement& x);
RingPoly derivative(const RingPoly& f);
RingPoly poly_mul(const RingPoly& a, const RingPoly& b);
RingPoly poly_add(const RingPoly& a, const RingPoly& b);
RingPoly lift_poly(const ZPoly& f, const RingRef& ring);

/// lambda-adic precision needed so that O / lambda^w extends Z / ell^m.
int quotient_exponent(int e, int m);

/// Bezout data (a, b) with 1 = a f + b f'.
struct BezoutCertificate {
  RingPoly a;
  RingPoly b;
};

/// Solve for a certificate by linear algebra over Z/ell^N. Throws when f
/// and f' are not coprime in the ring.
BezoutCertificate bezout_certificate(const RingPoly& f);

struct HenselLift {
  RingElement root;
  /// lambda-adic valuation of f(a_n) for n = 0, 1, ... (last is the
  /// at-least sentinel once the root is exact at precision).
  std::vector<Valuation> residuals;
};

/// Newton iteration a_n = a_{n-1} - f(a_{n-1}) b(a_{n-1}).
HenselLift hensel_lift_root(const RingPoly& f, const RingElement& a0, const BezoutCertificate& cert);

}  // namespace hecke
