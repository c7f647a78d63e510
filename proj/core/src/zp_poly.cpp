#include "hecke/zp_poly.hpp"

#include <sstream>

#include "hecke/error.hpp"
#include "hecke/matrix.hpp"

namespace hecke::zpoly {

ZPoly trim(ZPoly p) {
  while (!p.empty() && p.back() == 0) p.pop_back();
  return p;
}

ZPoly reduce(const ZPoly& p, const PrimePower& pp) {
  ZPoly r(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) r[i] = pp.reduce(p[i]);
  return trim(std::move(r));
}

int degree(const ZPoly& p) {
  for (std::size_t i = p.size(); i-- > 0;)
    if (p[i] != 0) return static_cast<int>(i);
  return -1;
}

bool is_monic(const ZPoly& p, const PrimePower& pp) {
  ZPoly r = reduce(p, pp);
  return !r.empty() && r.back() == 1;
}

ZPoly add(const ZPoly& a, const ZPoly& b, const PrimePower& pp) {
  ZPoly r(std::max(a.size(), b.size()), Int(0));
  for (std::size_t i = 0; i < a.size(); ++i) r[i] += a[i];
  for (std::size_t i = 0; i < b.size(); ++i) r[i] += b[i];
  return reduce(r, pp);
}

ZPoly sub(const ZPoly& a, const ZPoly& b, const PrimePower& pp) {
  ZPoly r(std::max(a.size(), b.size()), Int(0));
  for (std::size_t i = 0; i < a.size(); ++i) r[i] += a[i];
  for (std::size_t i = 0; i < b.size(); ++i) r[i] -= b[i];
  return reduce(r, pp);
}

ZPoly mul_exact(const ZPoly& a, const ZPoly& b) {
  if (a.empty() || b.empty()) return {};
  ZPoly r(a.size() + b.size() - 1, Int(0));
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0) continue;
    for (std::size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
  }
  return trim(std::move(r));
}

ZPoly mul(const ZPoly& a, const ZPoly& b, const PrimePower& pp) { return reduce(mul_exact(a, b), pp); }

ZPoly derivative(const ZPoly& p, const PrimePower& pp) {
  ZPoly r;
  for (std::size_t i = 1; i < p.size(); ++i) r.push_back(p[i] * static_cast<unsigned long>(i));
  return reduce(r, pp);
}

DivMod divmod_monic(const ZPoly& a, const ZPoly& b, const PrimePower& pp) {
  ZPoly bb = reduce(b, pp);
  require(!bb.empty() && bb.back() == 1, "divmod_monic: divisor is not monic");
  ZPoly r = reduce(a, pp);
  const int db = degree(bb);
  const int da = degree(r);
  if (da < db) return {{}, r};
  ZPoly q(static_cast<std::size_t>(da - db + 1), Int(0));
  r.resize(static_cast<std::size_t>(da + 1), Int(0));
  for (int i = da; i >= db; --i) {
    Int c = pp.reduce(r[static_cast<std::size_t>(i)]);
    q[static_cast<std::size_t>(i - db)] = c;
    if (c == 0) continue;
    for (int j = 0; j <= db; ++j) r[static_cast<std::size_t>(i - db + j)] -= c * bb[static_cast<std::size_t>(j)];
  }
  return {reduce(q, pp), reduce(r, pp)};
}

Int eval(const ZPoly& p, const Int& x, const PrimePower& pp) {
  Int r = 0;
  for (std::size_t i = p.size(); i-- > 0;) r = pp.reduce(r * x + p[i]);
  return r;
}

ZPoly taylor_shift(const ZPoly& p, const Int& a, const PrimePower& pp) {
  // Horner in the polynomial ring: q = q*(x + a) + c.
  ZPoly q;
  for (std::size_t i = p.size(); i-- > 0;) {
    ZPoly next(q.size() + 1, Int(0));
    for (std::size_t j = 0; j < q.size(); ++j) {
      next[j + 1] += q[j];
      next[j] += q[j] * a;
    }
    next[0] += p[i];
    q = reduce(next, pp);
  }
  return q;
}

FpPoly to_fp(const ZPoly& p, const Int& ell) { return FpPoly::from_ints(ell.get_si(), p); }

ZPoly from_fp(const FpPoly& p) { return p.to_ints(); }

namespace {

// Lift f = g0 * h0 mod ell with g0 monic to f = g * h mod ell^N.
std::pair<ZPoly, ZPoly> lift_pair(const ZPoly& f, const FpPoly& g0, const FpPoly& h0, const PrimePower& pp) {
  const Int& ell = pp.ell();
  const std::int64_t p = ell.get_si();
  FpBezout bz = extended_gcd(g0, h0);
  require(bz.g.is_one(), "hensel_lift: residual factors are not coprime");
  ZPoly g = from_fp(g0);
  ZPoly h = from_fp(h0);
  Int lj = ell;
  for (int j = 1; j < pp.precision(); ++j) {
    PrimePower next = pp.with_precision(j + 1);
    ZPoly e = sub(f, mul(g, h, next), next);
    for (auto& c : e) {
      ensure(mpz_divisible_p(c.get_mpz_t(), lj.get_mpz_t()) != 0, "hensel_lift: defect not divisible");
      mpz_divexact(c.get_mpz_t(), c.get_mpz_t(), lj.get_mpz_t());
    }
    FpPoly ebar = to_fp(e, ell);
    FpPoly dg = (bz.t * ebar) % g0;
    FpPoly rest = ebar - h0 * dg;
    FpDivMod qr = divmod(rest, g0);
    ensure(qr.remainder.is_zero(), "hensel_lift: inexact correction");
    FpPoly dh = qr.quotient;
    g = add(g, mul_exact({lj}, from_fp(dg)), next);
    h = add(h, mul_exact({lj}, from_fp(dh)), next);
    lj *= ell;
  }
  (void)p;
  return {reduce(g, pp), reduce(h, pp)};
}

}  // namespace

std::vector<ZPoly> hensel_lift(const ZPoly& f, const std::vector<FpPoly>& factors, const PrimePower& pp) {
  require(!factors.empty(), "hensel_lift: no factors");
  std::vector<ZPoly> out;
  ZPoly rest = reduce(f, pp);
  const std::int64_t p = pp.ell().get_si();
  for (std::size_t i = 0; i + 1 < factors.size(); ++i) {
    FpPoly cofactor = FpPoly::constant(p, 1);
    for (std::size_t j = i + 1; j < factors.size(); ++j) cofactor = cofactor * factors[j];
    FpPoly rest_bar = to_fp(rest, pp.ell());
    FpDivMod qr = divmod(rest_bar, factors[i]);
    require(qr.remainder.is_zero(), "hensel_lift: factors do not divide f mod ell");
    auto [g, h] = lift_pair(rest, factors[i].monic(), qr.quotient, pp);
    out.push_back(std::move(g));
    rest = std::move(h);
  }
  out.push_back(rest);
  return out;
}

ZPoly charpoly(const IntMatrix& a, const PrimePower& pp) {
  require(a.square(), "charpoly: matrix must be square");
  const std::size_t n = a.rows();
  // Berkowitz: build the coefficient vector of det(xI - A) from leading
  // principal submatrices, using only ring operations.
  std::vector<Int> c = {Int(1)};  // charpoly of the empty matrix, high to low
  for (std::size_t r = 0; r < n; ++r) {
    // A_r = [[a_rr, R], [C, A_{r-1}]] with the new row/col first in the
    // recurrence; here we take the top-left r x r block as M.
    const Int arr = a(r, r);
    std::vector<Int> col(r), row(r);
    for (std::size_t i = 0; i < r; ++i) {
      col[i] = a(i, r);
      row[i] = a(r, i);
    }
    // Toeplitz entries: 1, -a_rr, -R C, -R M C, -R M^2 C, ...
    std::vector<Int> t(r + 2);
    t[0] = 1;
    t[1] = pp.reduce(-arr);
    std::vector<Int> v = col;
    for (std::size_t k = 2; k < r + 2; ++k) {
      Int s = 0;
      for (std::size_t i = 0; i < r; ++i) s += row[i] * v[i];
      t[k] = pp.reduce(-s);
      std::vector<Int> w(r, Int(0));
      for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < r; ++j) w[i] += a(i, j) * v[j];
      for (auto& x : w) x = pp.reduce(x);
      v = std::move(w);
    }
    std::vector<Int> next(r + 2, Int(0));
    for (std::size_t i = 0; i < r + 2; ++i)
      for (std::size_t j = 0; j <= i && j < c.size(); ++j) next[i] += t[i - j] * c[j];
    for (auto& x : next) x = pp.reduce(x);
    c = std::move(next);
  }
  ZPoly out(c.rbegin(), c.rend());
  return reduce(out, pp);
}

std::string to_string(const ZPoly& p) {
  std::ostringstream os;
  os << '[';
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (i) os << ',';
    os << p[i].get_str();
  }
  os << ']';
  return os.str();
}

std::optional<int> discriminant_valuation(const ZPoly& f_in, const PrimePower& pp) {
  const ZPoly f = reduce(f_in, pp);
  const int n = degree(f);
  require(n >= 1 && f.back() == 1, "discriminant_valuation: polynomial must be monic");
  if (n == 1) return 0;
  ZPoly df(static_cast<std::size_t>(n));
  for (std::size_t k = 0; k < df.size(); ++k) df[k] = pp.reduce(f[k + 1] * static_cast<unsigned long>(k + 1));
  const auto size = static_cast<std::size_t>(2 * n - 1);
  IntMatrix syl(size, size);
  for (std::size_t r = 0; r + 1 < static_cast<std::size_t>(n); ++r)
    for (std::size_t k = 0; k < f.size(); ++k) syl(r, r + f.size() - 1 - k) = f[k];
  for (std::size_t r = 0; r < static_cast<std::size_t>(n); ++r)
    for (std::size_t k = 0; k < df.size(); ++k) syl(static_cast<std::size_t>(n) - 1 + r, r + df.size() - 1 - k) = df[k];
  const SmithForm sf = smith_form(syl, pp);
  int total = 0;
  for (int e : sf.exps) {
    if (e >= pp.precision()) return std::nullopt;
    total += e;
  }
  return total;
}

}  // namespace hecke::zpoly
