#pragma once

#include <optional>
#include <vector>

#include "hecke/congruence.hpp"
#include "hecke/store.hpp"

namespace hecke {

/// Left is an eigenform; right is a Z_ell-orbit (weak) or an eigenform (strong).
struct SweepPair {
  StoreKey left;
  StoreKey right;
};

struct SweepOptions {
  int workers = 1;
  /// Coefficient bound; defaults to the largest bound both sides support.
  std::optional<int> bound;
  IndexPolicy policy = IndexPolicy::Coprime;
};

struct SweepResult {
  std::vector<CongruenceRecord> records;  // in pair order
  std::size_t items = 0;
  std::size_t computed = 0;  // work items evaluated by this run
  std::size_t reused = 0;    // results already present in the store
};

/// Evaluates every (pair, index) work item once across all workers and
/// processes sharing the store, then records one congruence per pair.
SweepResult congruence_sweep(Store& store, const std::vector<SweepPair>& pairs, const SweepOptions& options = {});

/// All unordered pairs of distinct resolved eigenforms at ell in the store,
/// optionally restricted to the given levels and weights.
std::vector<SweepPair> strong_pairs(const Store& store, std::int64_t ell, const std::vector<int>& levels = {},
                                    const std::vector<int>& weights = {});

}  // namespace hecke
