#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "hecke/matrix.hpp"
#include "hecke/rational.hpp"

namespace hecke {

/// Commuting integer Hecke matrices T_1, ..., T_B on one basis of a space of
/// cusp forms of level N and weight k.
struct HeckeSpace {
  int level = 1;
  int weight = 2;
  std::size_t dim = 0;
  int bound = 0;
  std::map<int, IntMatrix> matrices;
  std::string provenance;
  /// Optional metadata ("eisenstein_dim", "old_dim", "new_dim").
  std::map<std::string, long> metadata;

  const IntMatrix& T(int n) const;
};

/// Checks shapes, T_1 = identity, labels 1..B and pairwise commutativity.
void validate(const HeckeSpace& s);

/// Non-fatal findings, e.g. a coefficient bound below the Sturm bound.
std::vector<std::string> warnings(const HeckeSpace& s);

/// Parse "HMAT v1". Errors name the offending line.
HeckeSpace parse_hmat(std::string_view text);
std::string format_hmat(const HeckeSpace& s);

/// ceil(k N prod_{p | N} (1 + 1/p) / 12).
int sturm_bound(int level, int weight);

/// a_n of the weight-2 newform of level 11 for 1 <= n <= bound, from point
/// counts on y^2 + y = x^3 - x^2 - 10x - 20.
std::vector<Int> level11_coefficients(int bound);
HeckeSpace level11_space(int bound);

/// One Galois orbit of T (x) Q, on the saturated lattice image(e) cap Z^d.
struct QOrbit {
  int number = 0;  // 1-based, in sorted order
  std::size_t rank = 0;
  RatMatrix idempotent;
  IntMatrix lattice;  // d x r
  HeckeSpace space;   // the T_n restricted to the lattice
};

std::vector<QOrbit> rational_orbits(const HeckeSpace& s);

}  // namespace hecke
