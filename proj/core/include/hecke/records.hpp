#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "hecke/congruence.hpp"
#include "hecke/matrix.hpp"
#include "hecke/orbits.hpp"
#include "hecke/zp_poly.hpp"

namespace hecke {

/// level.weight.qorbit[.ell[.factor[.eigenform]]]
struct StoreKey {
  int level = 0;
  int weight = 0;
  int qorbit = 0;
  std::int64_t ell = 0;
  int factor = 0;
  int eigenform = 0;

  /// 3 (Q-orbit), 4 (ell data), 5 (Z_ell-orbit) or 6 (Q_ell-orbit).
  int depth() const noexcept { return eigenform ? 6 : factor ? 5 : ell ? 4 : 3; }
  StoreKey qorbit_key() const { return {level, weight, qorbit}; }
  StoreKey factor_key() const { return {level, weight, qorbit, ell, factor}; }

  friend auto operator<=>(const StoreKey&, const StoreKey&) = default;
};

std::string to_string(const StoreKey& k);
StoreKey parse_key(std::string_view text);

struct SpaceRecord {
  int level = 0;
  int weight = 0;
  std::size_t dim = 0;
  int bound = 0;
  int sturm_bound = 0;
  std::map<std::string, long> metadata;
  int qorbits = 0;
  std::string provenance;
  std::string hmat_sha256;

  friend bool operator==(const SpaceRecord&, const SpaceRecord&) = default;
};

struct QOrbitRecord {
  StoreKey key;
  std::size_t rank = 0;
  std::string hmat_sha256;

  friend bool operator==(const QOrbitRecord&, const QOrbitRecord&) = default;
};

/// Columns: a basis of the Q-orbit lattice in the coordinates of the space.
struct LatticeRecord {
  StoreKey key;
  IntMatrix basis;

  friend bool operator==(const LatticeRecord&, const LatticeRecord&) = default;
};

struct IdempotentRecord {
  StoreKey key;  // depth 4
  int precision = 0;
  std::vector<IntMatrix> idempotents;

  friend bool operator==(const IdempotentRecord&, const IdempotentRecord&) = default;
};

struct FlOrbitRecord {
  StoreKey key;  // depth 5
  int precision = 0;
  std::size_t rank = 0;
  int residue_degree = 1;
  std::vector<int> basis_indices;
  /// Radicals of the mod-ell characteristic polynomials of T_2, T_3, ...
  std::vector<ZPoly> fingerprint;
  IntMatrix basis;  // d x r integral basis of the component
  std::map<int, IntVector> dual;

  friend bool operator==(const FlOrbitRecord&, const FlOrbitRecord&) = default;
};

struct QlOrbitRecord {
  StoreKey key;  // depth 6
  bool resolved = true;
  std::size_t rank = 0;
  int precision = 0;  // attained, powers of ell
  int working_precision = 0;
  ZPoly ring_poly;  // empty when unresolved
  int ring_e = 1;
  int ring_f = 1;
  std::string ring_hash;
  ZPoly defining_poly;
  IntVector generic;
  std::vector<IntVector> coefficients;  // b_1, b_2, ... as coordinate vectors

  friend bool operator==(const QlOrbitRecord&, const QlOrbitRecord&) = default;
};

struct PolyRecord {
  StoreKey key;  // depth 6
  int precision = 0;
  std::string ring_hash;
  bool resolved = true;
  int prime_bound = 0;
  std::vector<std::pair<std::int64_t, ZPoly>> polys;

  friend bool operator==(const PolyRecord&, const PolyRecord&) = default;
};

std::string serialize(const SpaceRecord& r);
std::string serialize(const QOrbitRecord& r);
std::string serialize(const LatticeRecord& r);
std::string serialize(const IdempotentRecord& r);
std::string serialize(const FlOrbitRecord& r);
std::string serialize(const QlOrbitRecord& r);
std::string serialize(const PolyRecord& r);
std::string serialize(const CongruenceRecord& r);
std::string serialize(const WitnessReport& r);

SpaceRecord parse_space_record(std::string_view text);
QOrbitRecord parse_qorbit_record(std::string_view text);
LatticeRecord parse_lattice_record(std::string_view text);
IdempotentRecord parse_idempotent_record(std::string_view text);
FlOrbitRecord parse_fl_orbit_record(std::string_view text);
QlOrbitRecord parse_ql_orbit_record(std::string_view text);
PolyRecord parse_poly_record(std::string_view text);
CongruenceRecord parse_congruence_record(std::string_view text);
WitnessReport parse_witness_report(std::string_view text);

/// First line of a record ("ORBIT v1" ...), used to dispatch on file content.
std::string record_tag(std::string_view text);

/// Records from computed objects.
FlOrbitRecord make_fl_orbit_record(const StoreKey& key, const EllAdicOrbit& o);
QlOrbitRecord make_ql_orbit_record(const StoreKey& key, const PadicEigenform& f);
/// Rebuild the ring and coefficients (resolved records only).
PadicEigenform to_eigenform(const QlOrbitRecord& r);
/// Rebuild enough of an orbit for weak comparisons.
EllAdicOrbit to_orbit(const FlOrbitRecord& r, std::shared_ptr<const HeckeSpace> space);

}  // namespace hecke
