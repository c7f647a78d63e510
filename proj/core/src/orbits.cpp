#include "hecke/orbits.hpp"

#include <algorithm>
#include <limits>
#include <set>
#include <sstream>

#include "hecke/error.hpp"
#include "hecke/qell.hpp"
#include "hecke/zp_poly.hpp"

namespace hecke {

bool fingerprint_less(const Fingerprint& a, const Fingerprint& b) {
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

std::string fingerprint_string(const Fingerprint& f) {
  std::ostringstream os;
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (i) os << ';';
    os << i + 2 << ':' << zpoly::to_string(zpoly::from_fp(f[i]));
  }
  return os.str();
}

namespace {

IntVector flatten(const IntMatrix& m) { return m.data(); }

IntVector reduce_vec(IntVector v, const PrimePower& pp) {
  for (auto& x : v) x = pp.reduce(x);
  return v;
}

IntMatrix basis_matrix(const LocalFactor& f, const std::vector<int>& idx) {
  const std::size_t r = f.rank;
  IntMatrix b(r * r, idx.size());
  for (std::size_t i = 0; i < idx.size(); ++i) {
    const IntMatrix m = idx[i] == 1 ? IntMatrix::identity(r) : f.projected.at(idx[i]);
    for (std::size_t k = 0; k < r * r; ++k) b(k, i) = m.data()[k];
  }
  return b;
}

IntVector coordinates(const IntMatrix& basis, const IntMatrix& m, const PrimePower& pp) {
  auto x = solve_mod(basis, flatten(m), pp);
  if (!x) fail(ErrorKind::Internal, "dual basis: element outside the span of the basis operators");
  return *x;
}

}  // namespace

std::map<int, IntVector> dual_basis(const LocalFactor& f, const std::vector<int>& idx, const PrimePower& fpp,
                                    const PrimePower& pp) {
  const IntMatrix basis = basis_matrix(f, idx);
  std::map<int, IntVector> out;
  for (const auto& [n, m] : f.projected) {
    auto it = std::find(idx.begin(), idx.end(), n);
    if (it != idx.end()) {
      // Echelonised by definition.
      IntVector e(idx.size(), Int(0));
      e[static_cast<std::size_t>(it - idx.begin())] = 1;
      out.emplace(n, e);
      continue;
    }
    out.emplace(n, reduce_vec(coordinates(basis, m, fpp), pp));
  }
  if (!out.count(1)) {
    IntVector e(idx.size(), Int(0));
    e[0] = 1;
    out.emplace(1, e);
  }
  return out;
}

std::vector<EllAdicOrbit> ell_adic_orbits(std::shared_ptr<const HeckeSpace> s, const Int& ell, int precision) {
  require(s != nullptr, "ell_adic_orbits: no space");
  const PrimePower pp(ell, precision);
  int work = precision;
  std::vector<LocalFactor> factors;
  for (;;) {
    const PrimePower wpp(ell, work);
    factors = local_factors(CommutingMatrixAlgebra(wpp, s->dim, s->matrices));
    int slack = 0;
    for (const auto& f : factors) slack = std::max(slack, span_defect(f, wpp));
    if (work >= precision + slack) break;
    work = precision + slack;
  }
  const PrimePower wpp(ell, work);
  std::vector<EllAdicOrbit> out;
  for (auto& f : factors) {
    EllAdicOrbit o;
    o.space = s;
    o.pp = pp;
    o.factor_pp = wpp;
    o.basis_indices = basis_indices(f, wpp);
    o.dual = dual_basis(f, o.basis_indices, wpp, pp);
    for (const auto& [n, m] : f.projected)
      if (n > 1) o.fingerprint.push_back(radical(charpoly_mod_p(m, ell.get_si())));
    o.factor = std::move(f);
    out.push_back(std::move(o));
  }
  std::stable_sort(out.begin(), out.end(), [](const EllAdicOrbit& a, const EllAdicOrbit& b) {
    if (fingerprint_less(a.fingerprint, b.fingerprint)) return true;
    if (fingerprint_less(b.fingerprint, a.fingerprint)) return false;
    return a.rank() < b.rank();
  });
  for (std::size_t i = 0; i < out.size(); ++i) out[i].index = static_cast<int>(i) + 1;
  return out;
}

IntMatrix regular_representation(const EllAdicOrbit& o, int n) {
  const std::size_t r = o.rank();
  const IntMatrix basis = basis_matrix(o.factor, o.basis_indices);
  const IntMatrix mn = n == 1 ? IntMatrix::identity(r) : o.factor.projected.at(n);
  IntMatrix out(r, r);
  for (std::size_t j = 0; j < r; ++j) {
    const int nj = o.basis_indices[j];
    const IntMatrix mj = nj == 1 ? IntMatrix::identity(r) : o.factor.projected.at(nj);
    const IntVector c = coordinates(basis, mul_mod(mn, mj, o.factor_pp), o.factor_pp);
    for (std::size_t i = 0; i < r; ++i) out(i, j) = o.pp.reduce(c[i]);
  }
  return out;
}

namespace {

struct Generic {
  IntVector coeffs;
  IntMatrix rep;
  ZPoly charpoly;
};

// Candidate elements of the factor, ordered by the discriminant valuation of
// their characteristic polynomial (undetermined last).
std::vector<Generic> generic_candidates(const EllAdicOrbit& o) {
  const std::size_t r = o.rank();
  const PrimePower& pp = o.pp;
  std::vector<IntMatrix> reps;
  for (int n : o.basis_indices) reps.push_back(regular_representation(o, n));
  auto build = [&](const IntVector& g) {
    IntMatrix t(r, r);
    for (std::size_t i = 0; i < r; ++i) t = add_mod(t, scale_mod(g[i], reps[i], pp), pp);
    return Generic{g, t, zpoly::charpoly(t, pp)};
  };
  if (r == 1) return {build({Int(1)})};
  std::vector<IntVector> coeffs;
  for (const auto& [n, a] : o.dual)
    if (n > 1) coeffs.push_back(a);
  for (long c = 1; c <= 3; ++c) {
    IntVector g(r, Int(0));
    Int w = 1;
    for (std::size_t i = 1; i < r; ++i) {
      g[i] = w;
      w *= c + 1;
    }
    coeffs.push_back(g);
  }
  for (std::size_t i = 1; i < r; ++i)
    for (std::size_t j = i; j < r; ++j) {
      IntVector prod(r);
      for (std::size_t k = 0; k < r; ++k) prod[k] = reps[i](k, j);
      coeffs.push_back(prod);
      Int shift = pp.ell();
      for (int k = 1; k <= 2; ++k, shift *= pp.ell()) {
        IntVector g = prod;
        g[i] = pp.reduce(g[i] + shift);
        coeffs.push_back(g);
      }
    }
  std::vector<std::pair<int, Generic>> scored;
  std::set<ZPoly> seen;
  for (const auto& g : coeffs) {
    Generic cand = build(g);
    if (!seen.insert(cand.charpoly).second) continue;
    const auto score = zpoly::discriminant_valuation(cand.charpoly, pp);
    scored.emplace_back(score ? *score : std::numeric_limits<int>::max(), std::move(cand));
  }
  std::stable_sort(scored.begin(), scored.end(),
                   [](const auto& x, const auto& y) { return x.first < y.first; });
  std::vector<Generic> out;
  for (auto& [score, g] : scored) out.push_back(std::move(g));
  return out;
}

// Factor the characteristic polynomial of successive candidates until one
// separates completely; otherwise keep the one leaving the least unresolved.
std::pair<Generic, std::vector<QlPiece>> choose_generic(const EllAdicOrbit& o) {
  constexpr std::size_t kAttempts = 12;
  auto candidates = generic_candidates(o);
  std::optional<std::pair<Generic, std::vector<QlPiece>>> best;
  int best_unresolved = std::numeric_limits<int>::max();
  for (std::size_t i = 0; i < candidates.size() && i < kAttempts; ++i) {
    auto pieces = factor_qell(candidates[i].charpoly, o.pp);
    int unresolved = 0;
    bool separable = true;
    for (const auto& piece : pieces)
      if (!piece.resolved) {
        unresolved += piece.degree;
        separable = separable && piece.needs_precision;
      }
    // Prefer complete separation, then pieces that more precision can split.
    const int score = unresolved == 0 ? 0 : (separable ? 1 : 2) * 1000 + unresolved;
    if (score < best_unresolved) {
      best_unresolved = score;
      best.emplace(std::move(candidates[i]), std::move(pieces));
    }
    if (score == 0) break;
  }
  return std::move(*best);
}

struct Solved {
  std::vector<RingElement> w;
  int determined = 0;
};

// Left eigenvector w (w_1 = 1) of rep with eigenvalue theta, over theta's ring.
Solved eigenvector(const IntMatrix& rep, const RingElement& theta) {
  const RingRef& R = theta.ring();
  const PrimePower& pp = R->base();
  const std::size_t r = rep.rows();
  const std::size_t D = static_cast<std::size_t>(R->degree());
  Solved out;
  if (r == 1) {
    out.w = {R->one()};
    const Valuation v = (R->from_int(rep(0, 0)) - theta).valuation();
    out.determined = v.is_at_least() ? pp.precision() : v.lambda_units() / R->ramification();
    return out;
  }
  const IntMatrix mt = theta.mult_matrix();
  IntMatrix a(r * D, (r - 1) * D);
  IntVector rhs(r * D, Int(0));
  for (std::size_t j = 0; j < r; ++j) {
    for (std::size_t i = 1; i < r; ++i)
      for (std::size_t k = 0; k < D; ++k) {
        a(j * D + k, (i - 1) * D + k) += rep(i, j);
        if (i == j)
          for (std::size_t l = 0; l < D; ++l) a(j * D + k, (i - 1) * D + l) -= mt(k, l);
      }
    RingElement c = R->from_int(-rep(0, j));
    if (j == 0) c = c + theta;
    for (std::size_t k = 0; k < D; ++k) rhs[j * D + k] = c.coords()[k];
  }
  const BestSolution sol = solve_best_mod(reduce(a, pp), rhs, pp);
  out.w.push_back(R->one());
  for (std::size_t i = 1; i < r; ++i) {
    IntVector c(sol.x.begin() + static_cast<std::ptrdiff_t>((i - 1) * D),
                sol.x.begin() + static_cast<std::ptrdiff_t>(i * D));
    out.w.push_back(R->from_coords(c));
  }
  out.determined = sol.determined_precision;
  return out;
}

std::vector<RingElement> reduce_all(const std::vector<RingElement>& xs, const RingRef& R) {
  std::vector<RingElement> out;
  for (const auto& x : xs) out.push_back(R->from_coords(x.coords()));
  return out;
}

bool coords_less(const std::vector<RingElement>& a, const std::vector<RingElement>& b) {
  for (std::size_t i = 0; i < std::min(a.size(), b.size()); ++i) {
    const auto& x = a[i].coords();
    const auto& y = b[i].coords();
    if (x != y) return std::lexicographical_compare(x.begin(), x.end(), y.begin(), y.end());
  }
  return a.size() < b.size();
}

}  // namespace

std::vector<PadicEigenform> qell_orbits(const EllAdicOrbit& orbit, const QellOptions& options) {
  const int N0 = orbit.pp.precision();
  require(options.precision_cap >= N0, "qell_orbits: precision cap below the working precision");
  int work = N0;
  std::vector<PadicEigenform> out;
  for (;;) {
    std::optional<EllAdicOrbit> recomputed;
    if (work != N0) {
      auto all = ell_adic_orbits(orbit.space, orbit.pp.ell(), work);
      ensure(static_cast<std::size_t>(orbit.index) <= all.size(), "qell_orbits: orbit lost at higher precision");
      recomputed = std::move(all[static_cast<std::size_t>(orbit.index) - 1]);
      ensure(recomputed->fingerprint == orbit.fingerprint && recomputed->rank() == orbit.rank(),
             "qell_orbits: orbit changed at higher precision");
    }
    const EllAdicOrbit& cur = recomputed ? *recomputed : orbit;
    const auto [gen, pieces] = choose_generic(cur);
    out.clear();
    bool need_more = false;
    for (const auto& piece : pieces) {
      PadicEigenform f;
      f.working_precision = work;
      f.generic = gen.coeffs;
      f.rank = static_cast<std::size_t>(piece.degree);
      if (!piece.resolved) {
        f.resolved = false;
        f.attained_precision = 0;
        f.defining_poly = zpoly::reduce(piece.block, PrimePower(cur.pp.ell(), std::min(piece.precision, N0)));
        need_more = need_more || piece.needs_precision;
        out.push_back(std::move(f));
        continue;
      }
      const Solved s = eigenvector(reduce(gen.rep, piece.ring->base()), piece.root);
      const int attained = std::min(s.determined, piece.ring->precision());
      if (attained < N0) need_more = true;
      if (attained < 1) {
        f.resolved = false;
        f.defining_poly = zpoly::reduce(piece.root.charpoly(), PrimePower(cur.pp.ell(), 1));
        out.push_back(std::move(f));
        continue;
      }
      const int keep = std::min(attained, N0);
      f.ring = piece.ring->with_precision(keep);
      f.attained_precision = keep;
      std::vector<RingElement> b;
      for (int n = 1; n <= cur.space->bound; ++n) {
        const IntVector& a = cur.dual.at(n);
        RingElement acc = piece.ring->zero();
        for (std::size_t i = 0; i < a.size(); ++i) acc = acc + piece.ring->from_int(a[i]) * s.w[i];
        b.push_back(acc);
      }
      f.coefficients = reduce_all(b, f.ring);
      f.defining_poly = zpoly::reduce(piece.root.charpoly(), f.ring->base());
      out.push_back(std::move(f));
    }
    if (!need_more || work >= options.precision_cap) break;
    work = std::min(2 * work, options.precision_cap);
  }
  for (auto& f : out) {
    f.generic = zpoly::reduce(f.generic, orbit.pp);
    f.generic.resize(orbit.rank(), Int(0));
  }
  std::stable_sort(out.begin(), out.end(), [](const PadicEigenform& a, const PadicEigenform& b) {
    if (a.resolved != b.resolved) return a.resolved;
    if (a.rank != b.rank) return a.rank < b.rank;
    if (a.resolved) {
      if (a.ring->ramification() != b.ring->ramification()) return a.ring->ramification() < b.ring->ramification();
      if (a.ring->degree() == b.ring->degree() && a.ring->defining_poly() != b.ring->defining_poly())
        return std::lexicographical_compare(a.ring->defining_poly().begin(), a.ring->defining_poly().end(),
                                            b.ring->defining_poly().begin(), b.ring->defining_poly().end());
      return coords_less(a.coefficients, b.coefficients);
    }
    return std::lexicographical_compare(a.defining_poly.begin(), a.defining_poly.end(), b.defining_poly.begin(),
                                        b.defining_poly.end());
  });
  std::size_t total = 0;
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i].index = static_cast<int>(i) + 1;
    total += out[i].rank;
  }
  ensure(total == orbit.rank(), "qell_orbits: ranks do not sum to the orbit rank");
  return out;
}

std::vector<RingElement> eigenform_coefficients(const PadicEigenform& f, int up_to) {
  require(f.resolved, "eigenform " + std::to_string(f.index) + " is unresolved");
  require(up_to >= 1 && static_cast<std::size_t>(up_to) <= f.coefficients.size(),
          "coefficient bound " + std::to_string(up_to) + " exceeds the stored " +
              std::to_string(f.coefficients.size()));
  return {f.coefficients.begin(), f.coefficients.begin() + up_to};
}

Fingerprint eigenform_fingerprint(const PadicEigenform& f) {
  require(f.resolved, "eigenform " + std::to_string(f.index) + " is unresolved");
  Fingerprint out;
  const std::int64_t p = f.ring->ell().get_si();
  for (std::size_t n = 1; n < f.coefficients.size(); ++n)
    out.push_back(radical(charpoly_mod_p(f.coefficients[n].mult_matrix(), p)));
  return out;
}

}  // namespace hecke
