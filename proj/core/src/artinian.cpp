#include "hecke/artinian.hpp"

#include <algorithm>
#include <deque>
#include <numeric>

#include "hecke/error.hpp"
#include "hecke/fp_span.hpp"

namespace hecke {

namespace {

std::int64_t small_prime(const PrimePower& pp) {
  require(pp.ell().fits_slong_p() && pp.ell() < Int(1L << 31), "residue characteristic too large");
  return pp.ell().get_si();
}

bool entries_less(const IntMatrix& a, const IntMatrix& b) {
  return std::lexicographical_compare(a.data().begin(), a.data().end(), b.data().begin(), b.data().end());
}

// Split the piece with unit `unit` along the coprime factorization of the
// minimal polynomial of x (an element of the piece). Returns {unit} when the
// minimal polynomial is a prime power.
std::vector<IntMatrix> split_piece(const IntMatrix& unit, const IntMatrix& x, std::int64_t p) {
  const FpPoly m = minimal_polynomial_mod_p(x, unit, p);
  const auto facs = factor(m);
  if (facs.size() <= 1) return {unit};
  std::vector<IntMatrix> out;
  for (const auto& fc : facs) {
    FpPoly pk = FpPoly::constant(p, 1);
    for (int i = 0; i < fc.multiplicity; ++i) pk = pk * fc.poly;
    const FpPoly q = m / pk;
    const FpBezout bz = extended_gcd(q, pk);
    ensure(bz.g.is_one(), "split_piece: factors not coprime");
    out.push_back(eval_mod_p((bz.s * q) % m, x, unit));
  }
  return out;
}

IntMatrix combine(const std::vector<IntMatrix>& basis, const std::vector<std::int64_t>& coords,
                  const PrimePower& pp) {
  ensure(!basis.empty(), "combine: empty basis");
  IntMatrix acc(basis[0].rows(), basis[0].cols());
  for (std::size_t i = 0; i < coords.size(); ++i)
    if (coords[i] != 0) acc = add_mod(acc, scale_mod(Int(static_cast<long>(coords[i])), basis[i], pp), pp);
  return acc;
}

// Number of maximal ideals of a piece: dimension of the fixed space of the
// Frobenius b -> b^ell. Returns a fixed non-scalar element when there is more
// than one.
std::optional<IntMatrix> frobenius_splitter(const CommutingMatrixAlgebra& residual, const IntMatrix& unit) {
  const PrimePower& field = residual.modulus();
  const std::int64_t p = small_prime(field);
  const auto basis = residual.monomial_basis(unit);
  const std::size_t k = basis.size();
  if (k <= 1) return std::nullopt;
  FpSpan span(p, unit.rows() * unit.cols());
  for (const auto& b : basis) span.insert(flatten_mod(b, p));
  IntMatrix frob(k, k);
  for (std::size_t i = 0; i < k; ++i) {
    auto c = span.coordinates(flatten_mod(pow_mod(basis[i], static_cast<unsigned long>(p), field), p));
    ensure(c.has_value(), "frobenius: image outside the algebra");
    for (std::size_t j = 0; j < k; ++j) frob(j, i) = Int(static_cast<long>((*c)[j]));
    frob(i, i) -= 1;
  }
  const IntMatrix ker = kernel_mod(frob, field);
  if (rank_mod_ell(ker, field) <= 1) return std::nullopt;
  FpSpan scalars(p, unit.rows() * unit.cols());
  scalars.insert(flatten_mod(unit, p));
  for (std::size_t c = 0; c < ker.cols(); ++c) {
    std::vector<std::int64_t> w(k);
    for (std::size_t j = 0; j < k; ++j) w[j] = mod(ker(j, c), field.ell()).get_si();
    IntMatrix x = combine(basis, w, field);
    if (!scalars.contains(flatten_mod(x, p))) return x;
  }
  fail(ErrorKind::Internal, "frobenius: fixed space has no non-scalar element");
}

struct AlgebraBasis {
  std::vector<IntMatrix> basis;
  FpSpan span;
};

AlgebraBasis algebra_basis(const CommutingMatrixAlgebra& a) {
  const std::int64_t p = small_prime(a.modulus());
  AlgebraBasis out{a.monomial_basis(IntMatrix::identity(a.dim())), FpSpan(p, a.dim() * a.dim())};
  for (const auto& b : out.basis) out.span.insert(flatten_mod(b, p));
  return out;
}

IdempotentLift lift_with(const IntMatrix& e0, const CommutingMatrixAlgebra& a, const AlgebraBasis& ab) {
  const PrimePower& pp = a.modulus();
  const PrimePower field = pp.with_precision(1);
  const std::int64_t p = small_prime(pp);
  require(e0.rows() == a.dim() && e0.cols() == a.dim(), "lift_idempotent: shape mismatch");
  require(is_zero_mod(sub_mod(mul_mod(e0, e0, field), e0, field), field),
          "lift_idempotent: e0 is not idempotent mod ell");
  auto coords = ab.span.coordinates(flatten_mod(e0, p));
  require(coords.has_value(), "lift_idempotent: e0 is not in the algebra");
  IntMatrix e = combine(ab.basis, *coords, pp);
  IdempotentLift out;
  const int N = pp.precision();
  for (;;) {
    const IntMatrix e2 = mul_mod(e, e, pp);
    const int defect = matrix_valuation(sub_mod(e2, e, pp), pp);
    out.defects.push_back(defect);
    if (defect >= N) break;
    const IntMatrix e3 = mul_mod(e2, e, pp);
    e = sub_mod(scale_mod(Int(3), e2, pp), scale_mod(Int(2), e3, pp), pp);
  }
  int bound = 0;
  while ((1 << bound) < N) ++bound;
  ensure(static_cast<int>(out.defects.size()) - 1 <= bound, "lift_idempotent: no convergence");
  out.idempotent = std::move(e);
  return out;
}

}  // namespace

CommutingMatrixAlgebra::CommutingMatrixAlgebra(PrimePower pp, std::size_t dim, Generators generators)
    : pp_(std::move(pp)), dim_(dim) {
  require(dim >= 1, "algebra: dimension must be positive");
  for (auto& [label, m] : generators) {
    require(label >= 1, "algebra: labels must be positive");
    require(m.rows() == dim && m.cols() == dim, "algebra: generator " + std::to_string(label) + " has wrong shape");
    gens_.emplace(label, reduce(m, pp_));
  }
  for (auto i = gens_.begin(); i != gens_.end(); ++i)
    for (auto j = std::next(i); j != gens_.end(); ++j)
      require(commute_mod(i->second, j->second, pp_),
              "algebra: generators " + std::to_string(i->first) + " and " + std::to_string(j->first) +
                  " do not commute");
}

CommutingMatrixAlgebra CommutingMatrixAlgebra::with_precision(int precision) const {
  return CommutingMatrixAlgebra(pp_.with_precision(precision), dim_, gens_);
}

std::vector<IntMatrix> CommutingMatrixAlgebra::monomial_basis(const IntMatrix& unit) const {
  const std::int64_t p = small_prime(pp_);
  FpSpan span(p, dim_ * dim_);
  std::vector<IntMatrix> basis;
  const IntMatrix u = reduce(unit, pp_);
  if (!span.insert(flatten_mod(u, p))) return basis;
  basis.push_back(u);
  for (std::size_t next = 0; next < basis.size(); ++next) {
    for (const auto& [label, t] : gens_) {
      IntMatrix c = mul_mod(t, basis[next], pp_);
      if (span.insert(flatten_mod(c, p))) basis.push_back(std::move(c));
    }
  }
  return basis;
}

IdempotentSet decompose_mod_ell(const CommutingMatrixAlgebra& a) {
  const CommutingMatrixAlgebra residual = a.with_precision(1);
  const PrimePower& field = residual.modulus();
  const std::int64_t p = small_prime(field);
  std::vector<IntMatrix> pieces{IntMatrix::identity(a.dim())};
  for (const auto& [label, t] : residual.generators()) {
    std::vector<IntMatrix> next;
    for (const auto& e : pieces) {
      auto parts = split_piece(e, mul_mod(t, e, field), p);
      next.insert(next.end(), parts.begin(), parts.end());
    }
    pieces = std::move(next);
  }
  std::deque<IntMatrix> queue(pieces.begin(), pieces.end());
  IdempotentSet out;
  while (!queue.empty()) {
    IntMatrix e = std::move(queue.front());
    queue.pop_front();
    auto x = frobenius_splitter(residual, e);
    if (!x) {
      out.idempotents.push_back(std::move(e));
      continue;
    }
    auto parts = split_piece(e, *x, p);
    ensure(parts.size() > 1, "decompose: Frobenius element failed to split");
    queue.insert(queue.end(), parts.begin(), parts.end());
  }
  std::sort(out.idempotents.begin(), out.idempotents.end(), entries_less);
  out.precision = 1;
  return out;
}

IdempotentLift lift_idempotent_traced(const IntMatrix& e0, const CommutingMatrixAlgebra& a) {
  return lift_with(e0, a, algebra_basis(a));
}

IntMatrix lift_idempotent(const IntMatrix& e0, const CommutingMatrixAlgebra& a) {
  return lift_idempotent_traced(e0, a).idempotent;
}

IdempotentSet lift_idempotents(const IdempotentSet& residual, const CommutingMatrixAlgebra& a) {
  const AlgebraBasis ab = algebra_basis(a);
  IdempotentSet out;
  out.precision = a.modulus().precision();
  for (const auto& e0 : residual.idempotents) out.idempotents.push_back(lift_with(e0, a, ab).idempotent);
  return out;
}

IntMatrix project(const LocalFactor& f, const IntMatrix& m, const PrimePower& pp) {
  const IntMatrix tu = mul_mod(m, f.basis, pp);
  IntMatrix out(f.rank, f.rank);
  for (std::size_t i = 0; i < f.rank; ++i)
    for (std::size_t j = 0; j < f.rank; ++j) out(i, j) = tu(f.pivots[i], j);
  return out;
}

std::vector<LocalFactor> local_factors(const CommutingMatrixAlgebra& a) {
  const PrimePower& pp = a.modulus();
  const PrimePower field = pp.with_precision(1);
  const std::int64_t p = small_prime(pp);
  const IdempotentSet lifted = lift_idempotents(decompose_mod_ell(a), a);
  std::vector<LocalFactor> out;
  std::size_t total = 0;
  for (const auto& e : lifted.idempotents) {
    LocalFactor f;
    f.idempotent = e;
    // Coordinates on which the image of e restricts isomorphically: the
    // first rows of e independent mod ell (Nakayama).
    const std::size_t d = a.dim();
    FpSpan rows(p, d);
    for (std::size_t i = 0; i < d; ++i) {
      std::vector<std::int64_t> row(d);
      for (std::size_t j = 0; j < d; ++j) row[j] = mod(e(i, j), pp.ell()).get_si();
      if (rows.insert(row)) f.pivots.push_back(i);
    }
    f.rank = f.pivots.size();
    IntMatrix ep(f.rank, d);
    for (std::size_t i = 0; i < f.rank; ++i)
      for (std::size_t j = 0; j < d; ++j) ep(i, j) = e(f.pivots[i], j);
    IntMatrix y(d, f.rank);
    for (std::size_t c = 0; c < f.rank; ++c) {
      IntVector unit(f.rank);
      unit[c] = 1;
      auto sol = solve_mod(ep, unit, pp);
      ensure(sol.has_value(), "local_factors: image of an idempotent is not free");
      for (std::size_t j = 0; j < d; ++j) y(j, c) = (*sol)[j];
    }
    f.basis = mul_mod(e, y, pp);
    for (const auto& [label, t] : a.generators()) f.projected.emplace(label, project(f, t, pp));
    int degree = 1;
    for (const auto& [label, t] : a.generators()) {
      const auto facs = factor(minimal_polynomial_mod_p(mul_mod(t, e, field), reduce(e, field), p));
      ensure(facs.size() == 1, "local_factors: factor is not local");
      degree = std::lcm(degree, facs[0].poly.degree());
    }
    f.residue_degree = degree;
    total += f.rank;
    out.push_back(std::move(f));
  }
  ensure(total == a.dim(), "local_factors: ranks do not sum to the dimension");
  return out;
}

std::vector<int> basis_indices(const LocalFactor& f, const PrimePower& pp) {
  const std::int64_t p = small_prime(pp);
  const std::size_t r = f.rank;
  std::vector<int> labels{1};
  for (const auto& [label, m] : f.projected)
    if (label != 1) labels.push_back(label);
  IntMatrix span(r * r, labels.size());
  for (std::size_t c = 0; c < labels.size(); ++c) {
    const IntMatrix m = labels[c] == 1 ? IntMatrix::identity(r) : f.projected.at(labels[c]);
    for (std::size_t k = 0; k < r * r; ++k) span(k, c) = m.data()[k];
  }
  const SmithForm sf = smith_form(span, pp);
  if (sf.rank < r)
    fail(ErrorKind::Computation, "basis indices: stored labels span rank " + std::to_string(sf.rank) + " of " +
                                     std::to_string(r) + "; coefficient bound too small or precision too low");
  // Coordinates of each label in a basis of the span: rows of Q^{-1}.
  const IntMatrix qinv = inverse_mod(sf.Q, pp);
  std::vector<std::size_t> rows;
  for (std::size_t i = 0; i < sf.exps.size(); ++i)
    if (sf.exps[i] < pp.precision()) rows.push_back(i);
  FpSpan coords(p, rows.size());
  std::vector<int> out;
  for (std::size_t c = 0; c < labels.size() && coords.size() < r; ++c) {
    std::vector<std::int64_t> v(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) v[i] = Int(qinv(rows[i], c) % p).get_si();
    if (coords.insert(v)) out.push_back(labels[c]);
  }
  ensure(!out.empty() && out.front() == 1, "basis indices: identity is not a basis element");
  if (sf.rank > r || coords.size() < r)
    fail(ErrorKind::Computation, "basis indices: the Hecke algebra of the factor is not free of rank " +
                                     std::to_string(r));
  return out;
}

int span_defect(const LocalFactor& f, const PrimePower& pp) {
  const std::size_t r = f.rank;
  IntMatrix span(r * r, f.projected.size() + 1);
  std::size_t c = 0;
  const IntMatrix id = IntMatrix::identity(r);
  for (std::size_t k = 0; k < r * r; ++k) span(k, c) = id.data()[k];
  for (const auto& [label, m] : f.projected) {
    ++c;
    for (std::size_t k = 0; k < r * r; ++k) span(k, c) = m.data()[k];
  }
  const SmithForm sf = smith_form(span, pp);
  int worst = 0;
  for (std::size_t i = 0; i < sf.exps.size(); ++i)
    if (sf.exps[i] < pp.precision()) worst = std::max(worst, sf.exps[i]);
  return worst;
}

}  // namespace hecke
