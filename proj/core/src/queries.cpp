#include "hecke/queries.hpp"

#include <map>

#include "hecke/error.hpp"

namespace hecke {

std::vector<QlOrbitRecord> query_ql_orbits(const Store& store, const StoreKey& qorbit, std::int64_t ell) {
  store.qorbit(qorbit);
  const StoreKey lkey{qorbit.level, qorbit.weight, qorbit.qorbit, ell};
  if (!store.has_ell_data(qorbit, ell))
    fail(ErrorKind::NotComputed, "not computed: no " + std::to_string(ell) + "-adic orbits for " + to_string(qorbit));
  return store.ql_orbits(lkey);
}

namespace {

bool reaches(const Valuation& v, int n) { return v.normalised() >= n; }

std::pair<std::string, std::string> unordered(std::string a, std::string b) {
  if (b < a) std::swap(a, b);
  return {std::move(a), std::move(b)};
}

}  // namespace

WeightLowering query_weight_lowering(const Store& store, const StoreKey& qorbit, std::int64_t ell, int n) {
  require(n >= 1, "q2: exponent must be positive");
  const auto own = query_ql_orbits(store, qorbit, ell);

  // Per unordered pair, the record with the largest bound (then the smallest exponent).
  std::map<std::pair<std::string, std::string>, CongruenceRecord> best;
  for (const auto& c : store.congruences()) {
    if (c.kind != CongruenceKind::Strong) continue;
    const auto key = unordered(c.left, c.right);
    auto it = best.find(key);
    if (it == best.end() || c.sturm_bound_used > it->second.sturm_bound_used ||
        (c.sturm_bound_used == it->second.sturm_bound_used && c.exponent < it->second.exponent))
      best[key] = c;
  }

  WeightLowering out;
  std::vector<std::pair<QlOrbitRecord, int>> hits;
  for (const auto& f : own)
    if (f.resolved && f.precision >= n) hits.emplace_back(f, qorbit.weight);

  for (const auto& qk : store.qorbit_keys()) {
    if (qk == qorbit || !store.has_ell_data(qk, ell)) continue;
    for (const auto& g : store.ql_orbits({qk.level, qk.weight, qk.qorbit, ell})) {
      if (!g.resolved) continue;
      bool congruent = false;
      for (const auto& f : own) {
        if (!f.resolved) continue;
        const auto pair = unordered(to_string(f.key), to_string(g.key));
        auto it = best.find(pair);
        if (it == best.end()) {
          out.missing.emplace_back(to_string(f.key), to_string(g.key));
          continue;
        }
        congruent = congruent || reaches(it->second.exponent, n);
      }
      if (congruent) hits.emplace_back(g, qk.weight);
    }
  }
  if (!out.missing.empty()) {
    out.status = WeightLowering::Status::Incomplete;
    return out;
  }
  if (hits.empty()) {
    out.status = WeightLowering::Status::NoCongruence;
    return out;
  }
  int lowest = hits.front().second;
  for (const auto& h : hits) lowest = std::min(lowest, h.second);
  for (auto& h : hits)
    if (h.second == lowest) out.results.push_back(std::move(h));
  std::sort(out.results.begin(), out.results.end(),
            [](const auto& a, const auto& b) { return a.first.key < b.first.key; });
  out.status = WeightLowering::Status::Found;
  return out;
}

std::vector<PolyRecord> export_hecke_polynomials(const Store& store, const StoreKey& qorbit, std::int64_t ell,
                                                 std::optional<int> prime_bound) {
  std::vector<PolyRecord> out;
  for (const auto& rec : query_ql_orbits(store, qorbit, ell)) {
    PolyRecord p;
    p.key = rec.key;
    p.resolved = rec.resolved;
    p.precision = rec.precision;
    p.ring_hash = rec.ring_hash;
    if (rec.resolved) {
      const int available = static_cast<int>(rec.coefficients.size());
      const int bound = prime_bound.value_or(available);
      if (bound > available)
        fail(ErrorKind::NotComputed, "not computed: " + to_string(rec.key) + " stores T_n only up to n = " +
                                         std::to_string(available));
      p.prime_bound = bound;
      const PadicEigenform f = to_eigenform(rec);
      for (std::int64_t q : primes_in_range(2, bound))
        p.polys.emplace_back(q, f.coefficients[static_cast<std::size_t>(q - 1)].charpoly());
    } else {
      p.prime_bound = prime_bound.value_or(0);
    }
    out.push_back(std::move(p));
  }
  return out;
}

std::vector<std::filesystem::path> write_poly_files(const std::vector<PolyRecord>& polys,
                                                    const std::filesystem::path& out_dir) {
  std::vector<std::filesystem::path> out;
  for (const auto& p : polys) {
    const auto path = out_dir / (to_string(p.key) + ".POLY");
    write_file_if_changed(path, serialize(p));
    out.push_back(path);
  }
  return out;
}

}  // namespace hecke
