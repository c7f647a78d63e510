#pragma once

#include <filesystem>
#include <vector>

#include "hecke/congruence.hpp"
#include "hecke/error.hpp"
#include "hecke/records.hpp"
#include "hecke/queries.hpp"
#include "hecke/store.hpp"
#include "hecke/sweep.hpp"
#include "test_helpers.hpp"

namespace hecke::testing {

/// Small spaces covering the orbit shapes: rank 1, split, unramified,
/// ramified, residually glued, several Q-orbits, weight twins.
inline std::vector<HeckeSpace> corpus_spaces() {
  std::vector<HeckeSpace> out;
  out.push_back(level11_space(50));
  const auto a = level11_coefficients(30);
  out.push_back(scalar_space(11, 4, a, 25));
  out.push_back(scalar_space(11, 6, a, 1));

  const IntMatrix s6 = companion({-6, 0, 1});
  out.push_back(space_of({s6, s6 * s6, s6 + IntMatrix::identity(2)}, 7, 2));
  out.push_back(space_of({mat({{0, 2}, {1, 0}}), mat({{1, 4}, {2, 1}}), mat({{2, 0}, {0, 2}})}, 3, 2));
  const IntMatrix r5 = companion({-5, 0, 1});
  out.push_back(space_of({r5, r5 + IntMatrix::identity(2), r5 * r5}, 13, 2));
  const IntMatrix g = companion({126, -127, 1});
  out.push_back(space_of({g, g * g, g + g}, 17, 2));

  const IntMatrix s2 = companion({-2, 0, 1});
  const IntMatrix t2 = block_diag({mat({{-2}}), s6, s2});
  const IntMatrix t3 = block_diag({mat({{-1}}), s6 * s6, s2 + IntMatrix::identity(2)});
  const IntMatrix t4 = t2 * t2 - 2 * IntMatrix::identity(5);
  out.push_back(space_of({t2, t3, t4}, 19, 2));
  return out;
}

inline constexpr int kCorpusPrecision = 4;

/// Ingests and decomposes the corpus at ell = 5 (level 11 also at 2, 3, 7),
/// sweeps the level-11 and level-7 pairs, and exports POLY and WITNESS files
/// under root/exports.
inline void build_corpus_store(Store& store) {
  for (const auto& s : corpus_spaces())
    for (const auto& k : store.ingest(s)) {
      store.decompose(k, 5, kCorpusPrecision);
      if (k.level == 11 && k.weight == 2)
        for (std::int64_t ell : {2, 3, 7}) store.decompose(k, ell, kCorpusPrecision);
    }
  auto pairs = strong_pairs(store, 5, {11});
  for (const auto& p : strong_pairs(store, 5, {7})) pairs.push_back(p);
  pairs.push_back({{11, 4, 1, 5, 1, 1}, {11, 2, 1, 5, 1}});
  congruence_sweep(store, pairs, {2, std::nullopt, IndexPolicy::Coprime});

  const auto exports = store.root() / "exports";
  for (const auto& k : store.qorbit_keys()) write_poly_files(export_hecke_polynomials(store, k, 5), exports);
  const auto f = to_eigenform(store.ql_orbit({11, 2, 1, 5, 1, 1}));
  auto report = level_raising_witnesses(f, 11, 1, 2, 50);
  report.eigenform = "11.2.1.5.1.1";
  write_file_if_changed(exports / "11.2.1.5.1.1.m1.WITNESS", serialize(report));
}

/// Parse a stored file by its header and serialize it again.
inline std::string reserialize(const std::string& text) {
  const std::string tag = record_tag(text);
  if (tag == "HMAT v1") return format_hmat(parse_hmat(text));
  if (tag == "SPACE v1") return serialize(parse_space_record(text));
  if (tag == "QORBIT v1") return serialize(parse_qorbit_record(text));
  if (tag == "LATTICE v1") return serialize(parse_lattice_record(text));
  if (tag == "IDEM v1") return serialize(parse_idempotent_record(text));
  if (tag == "ORBIT v1") return serialize(parse_fl_orbit_record(text));
  if (tag == "EIGF v1") return serialize(parse_ql_orbit_record(text));
  if (tag == "POLY v1") return serialize(parse_poly_record(text));
  if (tag == "CONG v1") return serialize(parse_congruence_record(text));
  if (tag == "WITNESS v1") return serialize(parse_witness_report(text));
  if (tag == "HSTORE v1") return text;
  fail(ErrorKind::StoreCorruption, "unknown record tag " + tag);
}

/// Snapshot of a store without the claim files, which name the host.
inline std::map<std::string, std::string> corpus_snapshot(const std::filesystem::path& root) {
  auto snap = snapshot(root);
  std::erase_if(snap, [](const auto& kv) { return kv.first.starts_with("claims/"); });
  return snap;
}

}  // namespace hecke::testing
