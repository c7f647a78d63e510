#include "hecke/congruence.hpp"

#include <algorithm>
#include <numeric>

#include "hecke/error.hpp"

namespace hecke {

std::string to_string(CongruenceKind k) { return k == CongruenceKind::Weak ? "weak" : "strong"; }
std::string to_string(IndexPolicy p) { return p == IndexPolicy::Coprime ? "coprime" : "all"; }

CongruenceKind parse_congruence_kind(const std::string& s) {
  if (s == "weak") return CongruenceKind::Weak;
  if (s == "strong") return CongruenceKind::Strong;
  fail(ErrorKind::InvalidArgument, "unknown congruence kind '" + s + "'");
}

IndexPolicy parse_index_policy(const std::string& s) {
  if (s == "coprime") return IndexPolicy::Coprime;
  if (s == "all") return IndexPolicy::All;
  fail(ErrorKind::InvalidArgument, "unknown index policy '" + s + "'");
}

namespace {

std::int64_t excluded_modulus(const Int& ell, const CompareOptions& o) {
  if (o.policy == IndexPolicy::All) return 1;
  std::int64_t m = ell.get_si();
  for (int level : o.levels) {
    require(level >= 1, "levels must be positive");
    m = std::lcm(m, static_cast<std::int64_t>(level));
  }
  return m;
}

}  // namespace

std::vector<int> compared_indices(const Int& ell, int bound, const CompareOptions& options) {
  const std::int64_t m = excluded_modulus(ell, options);
  std::vector<int> out;
  for (int n = 1; n <= bound; ++n)
    if (std::gcd(static_cast<std::int64_t>(n), m) == 1) out.push_back(n);
  return out;
}

Valuation min_valuation(const std::map<int, Valuation>& breakdown, int e, int lambda_precision) {
  Valuation best = Valuation::at_least(lambda_precision, e);
  for (const auto& [n, v] : breakdown)
    if (v < best) best = v;
  return best;
}

namespace {

struct WeakInput {
  RingRef ring;
  std::vector<RingElement> g;
};

WeakInput prepare_weak(const std::vector<RingElement>& g, const EllAdicOrbit& orbit, int up_to) {
  require(!g.empty(), "weak congruence: empty coefficient list");
  const RingRef& R = g.front().ring();
  require(R->ell() == orbit.pp.ell(), "weak congruence: residue characteristics differ (" + to_string(R->ell()) +
                                          " vs " + to_string(orbit.pp.ell()) + ")");
  require(up_to >= 1 && static_cast<std::size_t>(up_to) <= g.size(),
          "weak congruence: " + std::to_string(g.size()) + " coefficients given, " + std::to_string(up_to) +
              " needed");
  require(up_to <= orbit.space->bound, "weak congruence: bound " + std::to_string(up_to) +
                                           " exceeds the orbit table (" + std::to_string(orbit.space->bound) + ")");
  const int P = std::min(R->precision(), orbit.pp.precision());
  WeakInput in;
  in.ring = P == R->precision() ? R : R->with_precision(P);
  for (int n = 1; n <= up_to; ++n) in.g.push_back(in.ring->from_coords(g[static_cast<std::size_t>(n - 1)].coords()));
  for (int ni : orbit.basis_indices)
    require(ni <= up_to, "weak congruence: basis index " + std::to_string(ni) + " beyond the coefficients given");
  return in;
}

RingElement defect(const WeakInput& in, const EllAdicOrbit& orbit, int n) {
  const IntVector& a = orbit.dual.at(n);
  RingElement h = in.g[static_cast<std::size_t>(n - 1)];
  for (std::size_t i = 0; i < a.size(); ++i)
    h = h - in.g[static_cast<std::size_t>(orbit.basis_indices[i] - 1)] * in.ring->from_int(a[i]);
  return h;
}

}  // namespace

RingElement weak_defect(const std::vector<RingElement>& g, const EllAdicOrbit& orbit, int n) {
  int up_to = n;
  for (int ni : orbit.basis_indices) up_to = std::max(up_to, ni);
  return defect(prepare_weak(g, orbit, up_to), orbit, n);
}

CongruenceRecord congruence_exponent_weak(const std::vector<RingElement>& g, const EllAdicOrbit& orbit, int bound,
                                          const CompareOptions& options) {
  int up_to = bound;
  for (int ni : orbit.basis_indices) up_to = std::max(up_to, ni);
  const WeakInput in = prepare_weak(g, orbit, up_to);
  CongruenceRecord rec;
  rec.kind = CongruenceKind::Weak;
  rec.sturm_bound_used = bound;
  rec.precision_used = in.ring->precision();
  rec.policy = options.policy;
  rec.excluded_modulus = excluded_modulus(orbit.pp.ell(), options);
  for (int n : compared_indices(orbit.pp.ell(), bound, options)) rec.breakdown.emplace(n, defect(in, orbit, n).valuation());
  rec.exponent = min_valuation(rec.breakdown, in.ring->ramification(), in.ring->lambda_precision());
  return rec;
}

RingElement embed(const RingElement& x, const RingElement& image) {
  const RingRef& R = image.ring();
  RingElement acc = R->zero();
  const IntVector& c = x.coords();
  for (std::size_t i = c.size(); i-- > 0;) acc = acc * image + R->from_int(c[i]);
  return acc;
}

namespace {

IntMatrix kron(const IntMatrix& a, const IntMatrix& b) {
  IntMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      for (std::size_t k = 0; k < b.rows(); ++k)
        for (std::size_t l = 0; l < b.cols(); ++l) out(i * b.rows() + k, j * b.cols() + l) = a(i, j) * b(k, l);
  return out;
}

std::vector<IntMatrix> exact_powers(const IntMatrix& x, std::size_t count) {
  std::vector<IntMatrix> out{IntMatrix::identity(x.rows())};
  while (out.size() < count) out.push_back(out.back() * x);
  return out;
}

}  // namespace

std::vector<Embedding> common_embeddings(const RingRef& a_in, const RingRef& b_in, int precision, int cap) {
  require(a_in->ell() == b_in->ell(), "common ring: residue characteristics differ");
  require(precision >= 1 && precision <= a_in->precision() && precision <= b_in->precision(),
          "common ring: precision exceeds an input ring");
  const RingRef a = a_in->with_precision(precision);
  const RingRef b = b_in->with_precision(precision);
  if (a->is_base()) return {Embedding{b, b->zero(), b->generator()}};
  if (b->is_base()) return {Embedding{a, a->generator(), a->zero()}};

  const auto da = static_cast<std::size_t>(a->degree());
  const auto db = static_cast<std::size_t>(b->degree());
  const auto xs = exact_powers(a->generator().mult_matrix(), da);
  const auto ys = exact_powers(b->generator().mult_matrix(), db);
  // Label 1 + i + da*j is x^i y^j acting on the tensor product.
  auto space = std::make_shared<HeckeSpace>();
  space->dim = da * db;
  space->provenance = "tensor product of " + a->descriptor() + " and " + b->descriptor();
  for (std::size_t j = 0; j < db; ++j)
    for (std::size_t i = 0; i < da; ++i)
      space->matrices.emplace(static_cast<int>(1 + i + da * j), kron(xs[i], ys[j]));
  space->bound = static_cast<int>(da * db);
  const int x_label = 2;
  const int y_label = static_cast<int>(1 + da);

  std::vector<Embedding> out;
  for (const auto& orbit : ell_adic_orbits(space, a->ell(), precision)) {
    for (const auto& f : qell_orbits(orbit, QellOptions{std::max(cap, precision)})) {
      if (!f.resolved)
        fail(ErrorKind::Computation, "common ring: tensor factor of degree " + std::to_string(f.rank) +
                                         " not separated (working precision " +
                                         std::to_string(f.working_precision) + ")");
      out.push_back(Embedding{f.ring, f.coefficients[static_cast<std::size_t>(x_label - 1)],
                              f.coefficients[static_cast<std::size_t>(y_label - 1)]});
    }
  }
  return out;
}

CongruenceRecord congruence_exponent_strong(const PadicEigenform& f, const PadicEigenform& g, int bound,
                                            const CompareOptions& options) {
  require(f.resolved && g.resolved, "strong congruence: both eigenforms must be resolved");
  require(f.ring->ell() == g.ring->ell(), "strong congruence: residue characteristics differ");
  require(bound >= 1 && static_cast<std::size_t>(bound) <= f.coefficients.size() &&
              static_cast<std::size_t>(bound) <= g.coefficients.size(),
          "strong congruence: bound " + std::to_string(bound) + " exceeds the stored coefficients");
  const int P = std::min(f.ring->precision(), g.ring->precision());
  const auto embeddings = common_embeddings(f.ring, g.ring, P);
  const auto indices = compared_indices(f.ring->ell(), bound, options);

  CongruenceRecord best;
  bool have = false;
  for (const auto& emb : embeddings) {
    CongruenceRecord rec;
    rec.kind = CongruenceKind::Strong;
    rec.sturm_bound_used = bound;
    rec.precision_used = emb.ring->precision();
    rec.policy = options.policy;
    rec.excluded_modulus = excluded_modulus(f.ring->ell(), options);
    for (int n : indices) {
      const auto k = static_cast<std::size_t>(n - 1);
      const RingElement x = f.ring->from_coords(f.coefficients[k].coords());
      const RingElement y = g.ring->from_coords(g.coefficients[k].coords());
      rec.breakdown.emplace(n, (embed(x, emb.left_generator) - embed(y, emb.right_generator)).valuation());
    }
    rec.exponent = min_valuation(rec.breakdown, emb.ring->ramification(), emb.ring->lambda_precision());
    if (!have || best.exponent < rec.exponent) {
      best = std::move(rec);
      have = true;
    }
  }
  ensure(have, "strong congruence: no embedding found");
  return best;
}

Rational WitnessReport::density() const {
  if (primes_scanned == 0) return Rational(0);
  std::vector<std::int64_t> ps;
  for (const auto& w : witnesses) ps.push_back(w.p);
  ps.erase(std::unique(ps.begin(), ps.end()), ps.end());
  Rational d(static_cast<long>(ps.size()), static_cast<long>(primes_scanned));
  d.canonicalize();
  return d;
}

WitnessReport level_raising_witnesses(const PadicEigenform& f, int level, int m, std::int64_t lo, std::int64_t hi) {
  require(f.resolved, "witnesses: eigenform " + std::to_string(f.index) + " is unresolved");
  require(level >= 1, "witnesses: level must be positive");
  require(m >= 1 && m <= f.ring->lambda_precision(),
          "witnesses: m = " + std::to_string(m) + " outside 1.." + std::to_string(f.ring->lambda_precision()) +
              " (attained lambda-precision)");
  require(lo <= hi, "witnesses: empty or reversed prime range");
  WitnessReport rep;
  rep.m = m;
  rep.lo = lo;
  rep.hi = hi;
  const std::int64_t bad = std::lcm(f.ring->ell().get_si(), static_cast<std::int64_t>(level));
  const RingRef& R = f.ring;
  for (std::int64_t p : primes_in_range(std::max<std::int64_t>(lo, 2), hi - 1)) {
    if (bad % p == 0) continue;
    if (static_cast<std::size_t>(p) > f.coefficients.size())
      fail(ErrorKind::NotComputed, "witnesses: a_" + std::to_string(p) + " unavailable (coefficient bound " +
                                       std::to_string(f.coefficients.size()) + ")");
    ++rep.primes_scanned;
    const RingElement& ap = f.coefficients[static_cast<std::size_t>(p - 1)];
    for (int sign : {1, -1}) {
      const Valuation v = (ap - R->from_int(Int(sign) * Int(p + 1))).valuation();
      if (v.lambda_units() >= m) rep.witnesses.push_back(Witness{p, sign, v});
    }
  }
  return rep;
}

}  // namespace hecke
