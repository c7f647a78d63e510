#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "hecke/store.hpp"

namespace hecke {

/// q1: the Q_ell-orbits of a Q-orbit. Throws NotComputed when absent.
std::vector<QlOrbitRecord> query_ql_orbits(const Store& store, const StoreKey& qorbit, std::int64_t ell);

struct WeightLowering {
  enum class Status { Found, NoCongruence, Incomplete };
  Status status = Status::NoCongruence;
  /// Eigenforms of the smallest weight congruent mod ell^n, with that weight.
  std::vector<std::pair<QlOrbitRecord, int>> results;
  /// Eigenform pairs lacking a strong congruence record.
  std::vector<std::pair<std::string, std::string>> missing;
};

/// q2: strong weight lowering modulo ell^n (normalised units).
WeightLowering query_weight_lowering(const Store& store, const StoreKey& qorbit, std::int64_t ell, int n);

/// q3: characteristic polynomials of T_p, p <= prime_bound, on each
/// Q_ell-orbit; one POLY file per orbit written to `out_dir`.
std::vector<PolyRecord> export_hecke_polynomials(const Store& store, const StoreKey& qorbit, std::int64_t ell,
                                                 std::optional<int> prime_bound = std::nullopt);
std::vector<std::filesystem::path> write_poly_files(const std::vector<PolyRecord>& polys,
                                                    const std::filesystem::path& out_dir);

}  // namespace hecke
