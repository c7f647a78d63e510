#pragma once

#include <map>
#include <vector>

#include "hecke/fpoly.hpp"
#include "hecke/matrix.hpp"
#include "hecke/prime_power.hpp"

namespace hecke {

/// Commuting d x d matrices over Z/ell^N with positive integer labels. The
/// identity is always part of the algebra, whether or not it is listed.
class CommutingMatrixAlgebra {
 public:
  using Generators = std::map<int, IntMatrix>;

  /// Throws InvalidArgument on a shape mismatch, a non-positive label or a
  /// non-commuting pair.
  CommutingMatrixAlgebra(PrimePower pp, std::size_t dim, Generators generators);

  const PrimePower& modulus() const noexcept { return pp_; }
  std::size_t dim() const noexcept { return dim_; }
  const Generators& generators() const noexcept { return gens_; }

  /// The same generators read at another precision (only lowering is exact).
  CommutingMatrixAlgebra with_precision(int precision) const;

  /// Products of generators forming a Z/ell^N-module basis of the algebra
  /// (a basis of its reduction mod ell, which lifts by Nakayama), found
  /// breadth-first from `unit`. Pass the identity for the whole algebra or an
  /// idempotent for one of its pieces.
  std::vector<IntMatrix> monomial_basis(const IntMatrix& unit) const;

 private:
  PrimePower pp_;
  std::size_t dim_;
  Generators gens_;
};

/// Complete orthogonal primitive idempotents.
struct IdempotentSet {
  std::vector<IntMatrix> idempotents;
  int precision = 1;
};

/// Primitive idempotents of the algebra reduced mod ell, sorted by their
/// entries.
IdempotentSet decompose_mod_ell(const CommutingMatrixAlgebra& a);

struct IdempotentLift {
  IntMatrix idempotent;
  /// Valuation of e_n^2 - e_n for n = 0, 1, ... (capped at N).
  std::vector<int> defects;
};

/// Lifts e0 (idempotent mod ell, inside the algebra) to an exact idempotent
/// mod ell^N via e_n = 3 e_{n-1}^2 - 2 e_{n-1}^3.
IdempotentLift lift_idempotent_traced(const IntMatrix& e0, const CommutingMatrixAlgebra& a);
IntMatrix lift_idempotent(const IntMatrix& e0, const CommutingMatrixAlgebra& a);

/// Lifts of every idempotent in `residual`.
IdempotentSet lift_idempotents(const IdempotentSet& residual, const CommutingMatrixAlgebra& a);

struct LocalFactor {
  IntMatrix idempotent;
  std::size_t rank = 0;
  /// d x r, columns spanning the image of the idempotent; the rows listed in
  /// `pivots` form the r x r identity.
  IntMatrix basis;
  std::vector<std::size_t> pivots;
  /// Action of every generator on the basis (r x r), keyed by label.
  std::map<int, IntMatrix> projected;
  int residue_degree = 1;
};

/// Project a d x d matrix commuting with the idempotent onto the factor.
IntMatrix project(const LocalFactor& f, const IntMatrix& m, const PrimePower& pp);

std::vector<LocalFactor> local_factors(const CommutingMatrixAlgebra& a);

/// Labels n_1 < ... < n_r (with n_1 = 1) whose projections form a basis of
/// the factor, chosen greedily by increasing label. Throws Computation when
/// the stored labels do not span.
std::vector<int> basis_indices(const LocalFactor& f, const PrimePower& pp);

/// Largest elementary divisor exponent of the span of the projected
/// generators inside End(Z/ell^N)^r: precision lost when expressing
/// elements in a basis of the factor.
int span_defect(const LocalFactor& f, const PrimePower& pp);

}  // namespace hecke
