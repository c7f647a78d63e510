#include "hecke/qell.hpp"

#include <algorithm>

#include "hecke/error.hpp"

namespace hecke {

namespace {

// The current variable z is related to the original x by x = alpha + ell^beta z.
struct Affine {
  Int alpha;
  int beta;
};

struct Context {
  Int ell;
  std::vector<QlPiece> out;
};

Int exact_div(const Int& a, const Int& b) {
  Int q;
  mpz_divexact(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return q;
}

ZPoly to_original(const ZPoly& p, const Affine& t, const PrimePower& pp) {
  // ell^(beta k) p((x - alpha) / ell^beta) = sum_j p_j ell^(beta (k - j)) (x - alpha)^j
  const std::size_t k = p.size() - 1;
  const Int lb = ipow(pp.ell(), static_cast<unsigned long>(t.beta));
  ZPoly acc(k + 1, Int(0));
  ZPoly power = {Int(1)};
  const ZPoly lin = {Int(-t.alpha), Int(1)};
  for (std::size_t j = 0; j <= k; ++j) {
    const Int scale = p[j] * ipow(lb, static_cast<unsigned long>(k - j));
    for (std::size_t i = 0; i < power.size(); ++i) acc[i] += scale * power[i];
    power = zpoly::mul_exact(power, lin);
  }
  return zpoly::reduce(acc, pp);
}

void unresolved(Context& ctx, const ZPoly& p, const Affine& t, int precision, bool needs_precision) {
  QlPiece piece;
  piece.needs_precision = needs_precision;
  piece.degree = zpoly::degree(p);
  piece.precision = std::max(precision, 1);
  piece.block = to_original(p, t, PrimePower(ctx.ell, piece.precision));
  ctx.out.push_back(std::move(piece));
}

void resolved(Context& ctx, RingRef ring, const RingElement& z, const Affine& t) {
  QlPiece piece;
  piece.resolved = true;
  piece.degree = ring->degree();
  piece.precision = ring->precision();
  piece.root = ring->from_int(t.alpha) + ring->from_int(ipow(ctx.ell, static_cast<unsigned long>(t.beta))) * z;
  piece.ring = std::move(ring);
  ctx.out.push_back(std::move(piece));
}

void split(Context& ctx, const ZPoly& p, int M, const Affine& t);

// q monic of degree k with q == z^k mod ell, and Z_ell[z]/(q) not maximal.
void newton(Context& ctx, const ZPoly& q, int M, const Affine& t) {
  const Int& ell = ctx.ell;
  const int k = zpoly::degree(q);
  auto V = [&](int j) { return valuation_capped(q[static_cast<std::size_t>(j)], ell, M); };
  std::vector<int> v(static_cast<std::size_t>(k) + 1);
  for (int j = 0; j <= k; ++j) v[static_cast<std::size_t>(j)] = V(j);
  auto vat = [&](int j) { return static_cast<long>(v[static_cast<std::size_t>(j)]); };
  // Lower convex hull, capped values treated as M. Exact vertices stay
  // vertices whatever the capped values really are.
  std::vector<int> hull;
  for (int j = 0; j <= k; ++j) {
    while (hull.size() >= 2) {
      const int a = hull[hull.size() - 2], b = hull.back();
      if ((vat(b) - vat(a)) * (j - a) >= (vat(j) - vat(a)) * (b - a)) hull.pop_back();
      else break;
    }
    hull.push_back(j);
  }
  for (std::size_t h = 1; h + 1 < hull.size(); ++h) {
    const int i = hull[h];
    if (v[static_cast<std::size_t>(i)] >= M) continue;
    const int prev = hull[h - 1], next = hull[h + 1];
    // Roots on the left of the vertex are larger in valuation; the left
    // slope is a lower bound when its endpoint is capped.
    const Rational left(vat(prev) - vat(i), i - prev);
    const Rational right(vat(i) - vat(next), next - i);
    Int fl;
    mpz_fdiv_q(fl.get_mpz_t(), right.get_num_mpz_t(), right.get_den_mpz_t());
    const long s = fl.get_si() + 1;
    if (!(Rational(s) < left)) continue;
    const long vv = vat(i) + s * i;
    const int Mt = M - static_cast<int>(vv);
    if (Mt < 1) {
      unresolved(ctx, q, t, M, true);
      return;
    }
    // q(ell^s z) / ell^vv == u z^i mod ell; split off the factor z^i.
    PrimePower pt(ell, Mt);
    const Int lvv = ipow(ell, static_cast<unsigned long>(vv));
    ZPoly qt(q.size());
    for (int j = 0; j <= k; ++j) {
      const Int num = q[static_cast<std::size_t>(j)] * ipow(ell, static_cast<unsigned long>(s * j));
      qt[static_cast<std::size_t>(j)] = pt.reduce(exact_div(num, lvv));
    }
    const std::int64_t p = ell.get_si();
    std::vector<std::int64_t> zi(static_cast<std::size_t>(i) + 1, 0);
    zi.back() = 1;
    const Int u = mod(qt[static_cast<std::size_t>(i)], ell);
    auto parts = zpoly::hensel_lift(qt, {FpPoly(p, zi), FpPoly::constant(p, u.get_si())}, pt);
    ZPoly a(static_cast<std::size_t>(i) + 1);
    for (int j = 0; j <= i; ++j)
      a[static_cast<std::size_t>(j)] =
          pt.reduce(parts[0][static_cast<std::size_t>(j)] * ipow(ell, static_cast<unsigned long>(s * (i - j))));
    auto dm = zpoly::divmod_monic(zpoly::reduce(q, pt), a, pt);
    ensure(zpoly::trim(dm.remainder).empty() || std::all_of(dm.remainder.begin(), dm.remainder.end(),
                                                            [](const Int& c) { return c == 0; }),
           "factor_qell: Newton split does not divide");
    split(ctx, a, Mt, t);
    split(ctx, dm.quotient, Mt, t);
    return;
  }
  // All roots have valuation at least the last slope: rescale by its floor.
  const int last = hull[hull.size() - 2];
  const bool capped = v[static_cast<std::size_t>(last)] >= M;
  const long c = vat(last) / (k - last);
  if (c == 0) {
    unresolved(ctx, q, t, M, capped);
    return;
  }
  const int Mn = M - static_cast<int>(c) * k;
  if (Mn < 1) {
    unresolved(ctx, q, t, M, true);
    return;
  }
  PrimePower pn(ell, Mn);
  ZPoly r(q.size());
  for (int j = 0; j <= k; ++j)
    r[static_cast<std::size_t>(j)] =
        pn.reduce(exact_div(q[static_cast<std::size_t>(j)], ipow(ell, static_cast<unsigned long>(c * (k - j)))));
  split(ctx, r, Mn, Affine{t.alpha, t.beta + static_cast<int>(c)});
}

void split(Context& ctx, const ZPoly& p_in, int M, const Affine& t) {
  if (M < 1) {
    unresolved(ctx, p_in, t, 1, true);
    return;
  }
  const PrimePower pp(ctx.ell, M);
  const ZPoly p = zpoly::reduce(p_in, pp);
  const int k = zpoly::degree(p);
  ensure(k >= 1 && p.back() == 1, "factor_qell: expected a monic polynomial");
  if (k == 1) {
    auto ring = base_ring(pp);
    resolved(ctx, ring, ring->from_int(-p[0]), t);
    return;
  }
  const std::int64_t ell = ctx.ell.get_si();
  const auto facs = factor(zpoly::to_fp(p, ctx.ell));
  if (facs.size() > 1) {
    std::vector<FpPoly> powers;
    for (const auto& fc : facs) {
      FpPoly pk = FpPoly::constant(ell, 1);
      for (int i = 0; i < fc.multiplicity; ++i) pk = pk * fc.poly;
      powers.push_back(pk);
    }
    for (const auto& g : zpoly::hensel_lift(p, powers, pp)) split(ctx, g, M, t);
    return;
  }
  const FpPoly& h = facs[0].poly;
  const int m = facs[0].multiplicity;
  if (m == 1) {
    auto ring = make_ring(ctx.ell, M, p, 1);
    resolved(ctx, ring, ring->generator(), t);
    return;
  }
  if (M < 2) {
    unresolved(ctx, p, t, M, true);
    return;
  }
  try {
    auto ring = make_ring(ctx.ell, M, p, m);
    resolved(ctx, ring, ring->generator(), t);
    return;
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::InvalidArgument) throw;
  }
  if (h.degree() != 1) {
    unresolved(ctx, p, t, M, false);
    return;
  }
  const Int a = mod(Int(static_cast<long>(-h.coeff(0))), ctx.ell);
  const ZPoly q = zpoly::taylor_shift(p, a, pp);
  newton(ctx, q, M, Affine{t.alpha + ipow(ctx.ell, static_cast<unsigned long>(t.beta)) * a, t.beta});
}

}  // namespace

std::vector<QlPiece> factor_qell(const ZPoly& f, const PrimePower& pp) {
  require(zpoly::is_monic(f, pp), "factor_qell: polynomial must be monic");
  Context ctx{pp.ell(), {}};
  split(ctx, f, pp.precision(), Affine{Int(0), 0});
  return std::move(ctx.out);
}

}  // namespace hecke
