#pragma once

#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "hecke/hecke_space.hpp"
#include "hecke/orbits.hpp"
#include "hecke/records.hpp"

namespace hecke {

/// Directory-backed store of spaces, orbits, eigenforms and congruences.
/// One entity per text file; congruences are content-addressed.
class Store {
 public:
  /// Opens an existing store, or initialises an empty directory when
  /// `create` is set.
  static Store open(const std::filesystem::path& root, bool create = false);

  const std::filesystem::path& root() const noexcept { return root_; }

  /// Stores the space and its Q-orbits; returns the Q-orbit keys. Re-ingesting
  /// identical content writes nothing.
  std::vector<StoreKey> ingest(const HeckeSpace& s);

  std::vector<SpaceRecord> spaces() const;
  SpaceRecord space(int level, int weight) const;
  HeckeSpace full_space(int level, int weight) const;
  std::vector<StoreKey> qorbit_keys() const;
  QOrbitRecord qorbit(const StoreKey& key) const;
  LatticeRecord lattice(const StoreKey& key) const;
  std::shared_ptr<const HeckeSpace> qorbit_space(const StoreKey& key) const;

  struct Decomposition {
    IdempotentRecord idempotents;
    std::vector<FlOrbitRecord> orbits;
    std::vector<QlOrbitRecord> eigenforms;
  };
  /// Z_ell- and Q_ell-orbits of a Q-orbit at precision N, written under
  /// key.ell. Replaces data stored at another precision.
  Decomposition decompose(const StoreKey& qorbit, std::int64_t ell, int precision, const QellOptions& options = {});

  bool has_ell_data(const StoreKey& qorbit, std::int64_t ell) const;
  IdempotentRecord idempotents(const StoreKey& ell_key) const;
  std::vector<FlOrbitRecord> fl_orbits(const StoreKey& ell_key) const;
  FlOrbitRecord fl_orbit(const StoreKey& key) const;
  /// Eigenforms under an ell key (depth 4) or a factor key (depth 5).
  std::vector<QlOrbitRecord> ql_orbits(const StoreKey& key) const;
  QlOrbitRecord ql_orbit(const StoreKey& key) const;
  bool exists(const StoreKey& key) const;

  /// Content-addressed insert; returns the record id and whether it was new.
  std::pair<std::string, bool> record_congruence(const CongruenceRecord& rec);
  std::vector<CongruenceRecord> congruences() const;

  /// Claim protocol for deduplicated work items.
  enum class Claim { Won, Done, Busy };
  Claim claim(const std::string& id);
  void publish(const std::string& id, const std::string& result);
  std::optional<std::string> result(const std::string& id) const;
  std::size_t claim_count() const;

  /// Full-store consistency check; an empty list means the store is sound.
  std::vector<std::string> validate() const;

  std::filesystem::path space_dir(int level, int weight) const;
  std::filesystem::path path_of(const StoreKey& key) const;

 private:
  explicit Store(std::filesystem::path root) : root_(std::move(root)) {}
  std::filesystem::path root_;
};

/// Writes `content` unless the file already holds it (atomic rename).
void write_file_if_changed(const std::filesystem::path& p, const std::string& content);
/// Atomic create-if-absent; false when the file already exists.
bool create_file_exclusive(const std::filesystem::path& p, const std::string& content);
std::string read_file(const std::filesystem::path& p);

}  // namespace hecke
