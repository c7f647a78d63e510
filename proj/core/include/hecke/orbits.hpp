#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "hecke/artinian.hpp"
#include "hecke/fpoly.hpp"
#include "hecke/hecke_space.hpp"
#include "hecke/padic.hpp"

namespace hecke {

/// Minimal polynomials over F_ell of the residual eigenvalues of T_2, ...,
/// T_B. Equal fingerprints mean congruent modulo a uniformiser.
using Fingerprint = std::vector<FpPoly>;
bool fingerprint_less(const Fingerprint& a, const Fingerprint& b);
std::string fingerprint_string(const Fingerprint& f);

/// A local factor of T (x) Z_ell (a Z_ell-orbit of eigenforms).
struct EllAdicOrbit {
  std::shared_ptr<const HeckeSpace> space;
  PrimePower pp{Int(2), 1};
  int index = 0;  // 1-based, in sorted order
  /// The factor is held at a precision high enough that coordinates in the
  /// basis T_{n_i} are determined modulo ell^N.
  PrimePower factor_pp{Int(2), 1};
  LocalFactor factor;
  std::vector<int> basis_indices;
  /// a_{n,i}: T_n = sum_i a_{n,i} T_{n_i} on the factor, for 1 <= n <= B.
  std::map<int, IntVector> dual;
  Fingerprint fingerprint;

  std::size_t rank() const noexcept { return factor.rank; }
};

std::vector<EllAdicOrbit> ell_adic_orbits(std::shared_ptr<const HeckeSpace> s, const Int& ell, int precision);

/// Coefficient table of the factor with respect to the given basis indices,
/// solved modulo factor_pp and reduced modulo pp.
std::map<int, IntVector> dual_basis(const LocalFactor& f, const std::vector<int>& basis_indices,
                                    const PrimePower& factor_pp, const PrimePower& pp);

/// Matrix of multiplication by T_n on the basis T_{n_1}, ..., T_{n_r}.
IntMatrix regular_representation(const EllAdicOrbit& orbit, int n);

/// One Q_ell-orbit of eigenforms inside a Z_ell-orbit.
struct PadicEigenform {
  int index = 0;  // 1-based within the orbit
  bool resolved = true;
  /// Dimension over Q_ell of the part of the factor it accounts for.
  std::size_t rank = 0;
  RingRef ring;
  /// b_1, ..., b_B (resolved only).
  std::vector<RingElement> coefficients;
  /// Precision (powers of ell) to which the coefficients are determined.
  int attained_precision = 0;
  /// Working precision at which it was computed.
  int working_precision = 0;
  /// Q_ell-irreducible factor of the characteristic polynomial of the
  /// element `generic` (coefficients on the basis T_{n_i}), or the
  /// unseparated block when unresolved.
  ZPoly defining_poly;
  IntVector generic;

  int attained_lambda() const { return ring ? ring->ramification() * attained_precision : attained_precision; }
};

struct QellOptions {
  /// Working precision is doubled up to this cap when separation fails.
  int precision_cap = 64;
};

std::vector<PadicEigenform> qell_orbits(const EllAdicOrbit& orbit, const QellOptions& options = {});

/// b_1, ..., b_up_to.
std::vector<RingElement> eigenform_coefficients(const PadicEigenform& f, int up_to);

Fingerprint eigenform_fingerprint(const PadicEigenform& f);

}  // namespace hecke
