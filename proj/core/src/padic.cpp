#include "hecke/padic.hpp"

#include <algorithm>
#include <sstream>

#include "hecke/error.hpp"
#include "hecke/fpoly.hpp"
#include "hecke/hash.hpp"

namespace hecke {

// ---------------------------------------------------------------- Valuation

Valuation Valuation::in_units_of(int e_prime) const {
  require(e_prime % e_ == 0, "valuation: ramification " + std::to_string(e_) + " does not divide " +
                                 std::to_string(e_prime));
  return Valuation(at_least_, lambda_ * (e_prime / e_), e_prime);
}

std::strong_ordering operator<=>(const Valuation& a, const Valuation& b) {
  const long lhs = static_cast<long>(a.lambda_) * b.e_;
  const long rhs = static_cast<long>(b.lambda_) * a.e_;
  if (lhs != rhs) return lhs <=> rhs;
  return static_cast<int>(a.at_least_) <=> static_cast<int>(b.at_least_);
}

std::string Valuation::to_string() const {
  Rational q = normalised();
  return (at_least_ ? ">=" : "") + q.get_str();
}

// ---------------------------------------------------------------- LocalRing

LocalRing::LocalRing(PrimePower pp, ZPoly poly, int e, int f, ZPoly uniformizer)
    : pp_(std::move(pp)), poly_(std::move(poly)), e_(e), f_(f), uniformizer_(std::move(uniformizer)) {
  hash_ = short_hash(pp_.ell().get_str() + "|" + std::to_string(e_) + "|" + zpoly::to_string(poly_));
}

RingRef make_ring(const Int& ell, int precision, const ZPoly& defining_poly, int e) {
  PrimePower pp(ell, precision);
  ZPoly g = zpoly::reduce(defining_poly, pp);
  const int D = zpoly::degree(g);
  require(D >= 1, "defining polynomial must have degree >= 1");
  require(g.back() == 1, "defining polynomial " + zpoly::to_string(defining_poly) + " is not monic");
  require(e >= 1 && D % e == 0, "ramification index " + std::to_string(e) + " does not divide degree " +
                                    std::to_string(D));
  const int f = D / e;
  const std::int64_t p = ell.get_si();
  FpPoly gbar = zpoly::to_fp(g, ell);
  auto facs = factor(gbar);
  if (facs.size() != 1 || facs[0].multiplicity != e || facs[0].poly.degree() != f) {
    std::ostringstream os;
    os << "inconsistent split: " << zpoly::to_string(g) << " mod " << ell.get_str() << " factors as";
    for (const auto& fc : facs) os << " (" << fc.poly.to_string() << ")^" << fc.multiplicity;
    os << ", expected an irreducible of degree " << f << " to the power " << e;
    fail(ErrorKind::InvalidArgument, os.str());
  }
  const FpPoly& h = facs[0].poly;
  ZPoly h_lift = zpoly::from_fp(h);
  ZPoly uniformizer;
  if (e == 1) {
    uniformizer = {ell};
  } else {
    uniformizer = h_lift;
    if (precision >= 2) {
      // Dedekind: Z_ell[x]/(g) is maximal iff h does not divide
      // (g - h~^e)/ell mod ell.
      ZPoly he = {Int(1)};
      for (int i = 0; i < e; ++i) he = zpoly::mul_exact(he, h_lift);
      PrimePower sq(ell, 2);
      ZPoly diff = zpoly::sub(g, he, sq);
      for (auto& c : diff) {
        ensure(mpz_divisible_p(c.get_mpz_t(), ell.get_mpz_t()) != 0, "make_ring: residual mismatch");
        c /= ell;
      }
      FpPoly r = FpPoly::from_ints(p, diff);
      if ((r % h).is_zero()) {
        fail(ErrorKind::InvalidArgument, "inconsistent split: Z_" + ell.get_str() + "[x]/(" +
                                             zpoly::to_string(g) +
                                             ") is not a discrete valuation ring (Dedekind criterion fails)");
      }
    }
  }
  uniformizer.resize(static_cast<std::size_t>(D), Int(0));
  auto ring = std::shared_ptr<LocalRing>(new LocalRing(pp, g, e, f, {}));
  // Reduce the uniformiser into the ring.
  ring->uniformizer_ = ring->from_coords(uniformizer).coords();
  return ring;
}

RingRef base_ring(const PrimePower& pp) {
  return std::shared_ptr<LocalRing>(new LocalRing(pp, ZPoly{Int(0), Int(1)}, 1, 1, ZPoly{pp.reduce(pp.ell())}));
}

RingElement LocalRing::zero() const { return from_int(0); }
RingElement LocalRing::one() const { return from_int(1); }

RingElement LocalRing::from_int(const Int& c) const {
  IntVector v(static_cast<std::size_t>(degree()), Int(0));
  v[0] = pp_.reduce(c);
  return RingElement(shared_from_this(), std::move(v));
}

RingElement LocalRing::generator() const {
  IntVector v(static_cast<std::size_t>(degree()), Int(0));
  if (degree() == 1) {
    v[0] = pp_.reduce(-poly_[0]);
  } else {
    v[1] = 1;
  }
  return RingElement(shared_from_this(), std::move(v));
}

RingElement LocalRing::uniformizer() const { return RingElement(shared_from_this(), uniformizer_); }

RingElement LocalRing::from_coords(IntVector coords) const {
  const auto D = static_cast<std::size_t>(degree());
  if (coords.size() > D) {
    coords = zpoly::divmod_monic(coords, poly_, pp_).remainder;
  }
  coords.resize(D, Int(0));
  for (auto& c : coords) c = pp_.reduce(c);
  return RingElement(shared_from_this(), std::move(coords));
}

RingRef LocalRing::with_precision(int precision) const {
  if (is_base()) return base_ring(pp_.with_precision(precision));
  return make_ring(pp_.ell(), precision, poly_, e_);
}

IntVector LocalRing::multiply(const IntVector& a, const IntVector& b) const {
  const auto D = static_cast<std::size_t>(degree());
  if (D == 1) return {pp_.reduce(a[0] * b[0])};
  ZPoly prod = zpoly::mul_exact(a, b);
  ZPoly r = zpoly::divmod_monic(prod, poly_, pp_).remainder;
  r.resize(D, Int(0));
  return r;
}

std::string LocalRing::descriptor() const {
  std::ostringstream os;
  os << "ell=" << pp_.ell().get_str() << " N=" << pp_.precision() << " e=" << e_ << " f=" << f_
     << " poly=" << zpoly::to_string(poly_) << " hash=" << hash_;
  return os.str();
}

// -------------------------------------------------------------- RingElement

RingElement::RingElement(RingRef ring, IntVector coords) : ring_(std::move(ring)), c_(std::move(coords)) {
  require(ring_ != nullptr, "ring element without a ring");
  require(c_.size() == static_cast<std::size_t>(ring_->degree()), "ring element has wrong coordinate count");
}

namespace {
void check_compatible(const RingElement& a, const RingElement& b) {
  require(a.ring() && b.ring() && (a.ring() == b.ring() || same_ring(*a.ring(), *b.ring())),
          "ring elements live in different rings");
}
}  // namespace

bool RingElement::is_zero() const {
  return std::all_of(c_.begin(), c_.end(), [](const Int& x) { return x == 0; });
}

bool RingElement::is_unit() const { return valuation() == Valuation::exact(0, ring_->ramification()); }

Valuation RingElement::valuation() const {
  const LocalRing& R = *ring_;
  const int N = R.precision();
  const int e = R.ramification();
  if (is_zero()) return Valuation::at_least(e * N, e);
  if (R.degree() == 1) return Valuation::exact(R.base().valuation(c_[0]), 1);
  SmithForm sf = smith_form(mult_matrix(), R.base());
  const int q = sf.exps.front();
  if (q >= N) return Valuation::at_least(e * N, e);
  const int count = static_cast<int>(std::count(sf.exps.begin(), sf.exps.end(), q));
  const int f = R.residue_degree();
  ensure(count % f == 0 && count / f <= e, "valuation: ring is not a discrete valuation ring");
  const int s = e - count / f;
  return Valuation::exact(q * e + s, e);
}

RingElement RingElement::operator-() const {
  IntVector v = c_;
  for (auto& x : v) x = ring_->base().reduce(-x);
  return RingElement(ring_, std::move(v));
}

RingElement operator+(const RingElement& a, const RingElement& b) {
  check_compatible(a, b);
  IntVector v(a.c_.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = a.ring_->base().reduce(a.c_[i] + b.c_[i]);
  return RingElement(a.ring_, std::move(v));
}

RingElement operator-(const RingElement& a, const RingElement& b) {
  check_compatible(a, b);
  IntVector v(a.c_.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = a.ring_->base().reduce(a.c_[i] - b.c_[i]);
  return RingElement(a.ring_, std::move(v));
}

RingElement operator*(const RingElement& a, const RingElement& b) {
  check_compatible(a, b);
  return RingElement(a.ring_, a.ring_->multiply(a.c_, b.c_));
}

bool operator==(const RingElement& a, const RingElement& b) {
  return a.ring_ && b.ring_ && same_ring(*a.ring_, *b.ring_) && a.c_ == b.c_;
}

RingElement RingElement::pow(unsigned long k) const {
  RingElement result = ring_->one();
  RingElement base = *this;
  while (k > 0) {
    if (k & 1UL) result = result * base;
    k >>= 1;
    if (k > 0) base = base * base;
  }
  return result;
}

RingElement RingElement::inverse() const {
  require(is_unit(), "inverse of a non-unit");
  IntVector one(c_.size(), Int(0));
  one[0] = 1;
  auto x = solve_mod(mult_matrix(), one, ring_->base());
  ensure(x.has_value(), "unit inverse: linear system inconsistent");
  return RingElement(ring_, *x);
}

IntMatrix RingElement::mult_matrix() const {
  const auto D = static_cast<std::size_t>(ring_->degree());
  IntMatrix m(D, D);
  IntVector basis(D, Int(0));
  for (std::size_t j = 0; j < D; ++j) {
    std::fill(basis.begin(), basis.end(), Int(0));
    basis[j] = 1;
    if (D == 1) basis[0] = 1;
    IntVector col = ring_->multiply(c_, basis);
    for (std::size_t i = 0; i < D; ++i) m(i, j) = col[i];
  }
  return m;
}

ZPoly RingElement::charpoly() const { return zpoly::charpoly(mult_matrix(), ring_->base()); }

std::string RingElement::to_string() const { return zpoly::to_string(c_); }

// -------------------------------------------------------------- polynomials

RingElement eval(const RingPoly& f, const RingElement& x) {
  RingElement r = x.ring()->zero();
  for (std::size_t i = f.size(); i-- > 0;) r = r * x + f[i];
  return r;
}

RingPoly derivative(const RingPoly& f) {
  RingPoly d;
  for (std::size_t i = 1; i < f.size(); ++i) d.push_back(f[i] * f[i].ring()->from_int(Int(static_cast<unsigned long>(i))));
  if (d.empty() && !f.empty()) d.push_back(f[0].ring()->zero());
  return d;
}

RingPoly poly_mul(const RingPoly& a, const RingPoly& b) {
  require(!a.empty() && !b.empty(), "poly_mul: empty polynomial");
  RingPoly r(a.size() + b.size() - 1, a[0].ring()->zero());
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) r[i + j] = r[i + j] + a[i] * b[j];
  return r;
}

RingPoly poly_add(const RingPoly& a, const RingPoly& b) {
  const RingRef& R = a.empty() ? b.at(0).ring() : a[0].ring();
  RingPoly r(std::max(a.size(), b.size()), R->zero());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = r[i] + a[i];
  for (std::size_t i = 0; i < b.size(); ++i) r[i] = r[i] + b[i];
  return r;
}

RingPoly lift_poly(const ZPoly& f, const RingRef& ring) {
  RingPoly r;
  for (const auto& c : f) r.push_back(ring->from_int(c));
  return r;
}

int quotient_exponent(int e, int m) {
  require(e >= 1 && m >= 1, "quotient_exponent: e and m must be positive");
  return e * (m - 1) + 1;
}

BezoutCertificate bezout_certificate(const RingPoly& f) {
  require(f.size() >= 2, "bezout_certificate: polynomial must have degree >= 1");
  const RingRef& R = f[0].ring();
  const std::size_t n = f.size() - 1;
  RingPoly fp = derivative(f);
  fp.resize(n, R->zero());
  const std::size_t na = n - 1;  // deg a <= n - 2
  const std::size_t nb = n;      // deg b <= n - 1
  const std::size_t neq = 2 * n - 1;
  const auto D = static_cast<std::size_t>(R->degree());
  IntMatrix sys(neq * D, (na + nb) * D);
  auto place = [&](std::size_t eq, std::size_t unknown, const RingElement& coef) {
    IntMatrix m = coef.mult_matrix();
    for (std::size_t i = 0; i < D; ++i)
      for (std::size_t j = 0; j < D; ++j) sys(eq * D + i, unknown * D + j) += m(i, j);
  };
  for (std::size_t i = 0; i < na; ++i)
    for (std::size_t k = 0; k <= n; ++k) place(i + k, i, f[k]);
  for (std::size_t i = 0; i < nb; ++i)
    for (std::size_t k = 0; k < n; ++k) place(i + k, na + i, fp[k]);
  IntVector rhs(neq * D, Int(0));
  rhs[0] = 1;
  auto sol = solve_mod(reduce(sys, R->base()), rhs, R->base());
  require(sol.has_value(), "bezout_certificate: f and f' are not coprime over the ring");
  BezoutCertificate cert;
  for (std::size_t i = 0; i < na; ++i)
    cert.a.push_back(R->from_coords(IntVector(sol->begin() + static_cast<std::ptrdiff_t>(i * D),
                                              sol->begin() + static_cast<std::ptrdiff_t>((i + 1) * D))));
  for (std::size_t i = 0; i < nb; ++i)
    cert.b.push_back(R->from_coords(IntVector(sol->begin() + static_cast<std::ptrdiff_t>((na + i) * D),
                                              sol->begin() + static_cast<std::ptrdiff_t>((na + i + 1) * D))));
  if (cert.a.empty()) cert.a.push_back(R->zero());
  return cert;
}

HenselLift hensel_lift_root(const RingPoly& f, const RingElement& a0, const BezoutCertificate& cert) {
  require(f.size() >= 2, "hensel_lift_root: polynomial must have degree >= 1");
  const RingRef& R = a0.ring();
  // Certificate check: a f + b f' == 1 coefficientwise.
  RingPoly lhs = poly_add(poly_mul(cert.a, f), poly_mul(cert.b, derivative(f)));
  for (std::size_t i = 0; i < lhs.size(); ++i) {
    const RingElement want = i == 0 ? R->one() : R->zero();
    require(lhs[i] == want, "hensel_lift_root: invalid Bezout certificate (1 != a f + b f' at precision)");
  }
  HenselLift out;
  RingElement a = a0;
  RingElement fa = eval(f, a);
  Valuation v = fa.valuation();
  out.residuals.push_back(v);
  require(v.lambda_units() >= 1, "hensel_lift_root: f(a0) is not divisible by the uniformiser");
  const int r = v.lambda_units();
  const int cap = R->lambda_precision();
  int max_steps = 1;
  while ((r << (max_steps - 1)) < cap) ++max_steps;  // ceil(log2(cap / r)) + 1
  int steps = 0;
  while (!fa.is_zero()) {
    ensure(++steps <= max_steps, "hensel_lift_root: no convergence within the Newton step bound");
    a = a - fa * eval(cert.b, a);
    fa = eval(f, a);
    out.residuals.push_back(fa.valuation());
  }
  out.root = a;
  return out;
}

}  // namespace hecke
