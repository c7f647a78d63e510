#include "hecke/store.hpp"

#include <signal.h>
#include <unistd.h>

#include <atomic>
#include <cerrno>
#include <fstream>
#include <set>
#include <sstream>
#include <thread>

#include "hecke/error.hpp"
#include "hecke/hash.hpp"

namespace fs = std::filesystem;

namespace hecke {

namespace {

constexpr const char* kStoreHeader = "HSTORE v1\n";

[[noreturn]] void corrupt(const std::string& what) { fail(ErrorKind::StoreCorruption, what); }
[[noreturn]] void missing(const std::string& what) { fail(ErrorKind::NotComputed, what); }

fs::path temp_name(const fs::path& p) {
  static std::atomic<unsigned long> counter{0};
  std::ostringstream os;
  os << ".tmp." << ::getpid() << '.' << std::hash<std::thread::id>{}(std::this_thread::get_id()) << '.'
     << counter.fetch_add(1) << '.' << p.filename().string();
  return p.parent_path() / os.str();
}

void write_raw(const fs::path& p, const std::string& content) {
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  out << content;
  out.close();
  if (!out) fail(ErrorKind::StoreCorruption, "cannot write " + p.string());
}

std::string hostname() {
  char buf[256] = {};
  ::gethostname(buf, sizeof buf - 1);
  return buf;
}

std::string owner_line() { return "owner: " + hostname() + " " + std::to_string(::getpid()) + "\n"; }

bool owner_dead(const std::string& content) {
  std::istringstream is(content);
  std::string tag, host;
  long pid = 0;
  if (!(is >> tag >> host >> pid) || tag != "owner:") return true;
  if (host != hostname()) return false;
  if (pid == ::getpid()) return false;
  return ::kill(static_cast<pid_t>(pid), 0) != 0 && errno == ESRCH;
}

std::vector<fs::path> sorted_entries(const fs::path& dir) {
  std::vector<fs::path> out;
  if (!fs::is_directory(dir)) return out;
  for (const auto& e : fs::directory_iterator(dir)) {
    const std::string name = e.path().filename().string();
    if (name.rfind(".tmp.", 0) == 0) continue;
    out.push_back(e.path());
  }
  std::sort(out.begin(), out.end());
  return out;
}

template <class T, class F>
T parse_file(const fs::path& p, F parse) {
  try {
    return parse(read_file(p));
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::StoreCorruption) corrupt(p.string() + ": " + e.what());
    throw;
  }
}

int numbered(const fs::path& p, char prefix) {
  const std::string name = p.filename().string();
  if (name.size() < 2 || name[0] != prefix) return 0;
  const std::string digits = name.substr(1, name.find('.') == std::string::npos ? std::string::npos : name.find('.') - 1);
  if (digits.empty() || digits.find_first_not_of("0123456789") != std::string::npos) return 0;
  return std::stoi(digits);
}

}  // namespace

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) missing("cannot read " + p.string());
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_file_if_changed(const fs::path& p, const std::string& content) {
  if (fs::exists(p)) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    if (os.str() == content) return;
  }
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
  const fs::path tmp = temp_name(p);
  write_raw(tmp, content);
  fs::rename(tmp, p);
}

bool create_file_exclusive(const fs::path& p, const std::string& content) {
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
  const fs::path tmp = temp_name(p);
  write_raw(tmp, content);
  std::error_code ec;
  fs::create_hard_link(tmp, p, ec);
  fs::remove(tmp);
  if (!ec) return true;
  if (ec == std::errc::file_exists) return false;
  fail(ErrorKind::StoreCorruption, "cannot create " + p.string() + ": " + ec.message());
}

Store Store::open(const fs::path& root, bool create) {
  const fs::path marker = root / "STORE";
  if (!fs::exists(marker)) {
    if (!create) missing("no store at " + root.string() + " (run ingest first)");
    fs::create_directories(root);
    create_file_exclusive(marker, kStoreHeader);
  }
  if (read_file(marker) != kStoreHeader) corrupt(marker.string() + ": unknown store version");
  return Store(root);
}

fs::path Store::space_dir(int level, int weight) const {
  return root_ / "spaces" / (std::to_string(level) + "." + std::to_string(weight));
}

fs::path Store::path_of(const StoreKey& k) const {
  fs::path p = space_dir(k.level, k.weight) / ("q" + std::to_string(k.qorbit));
  if (k.ell) p /= "l" + std::to_string(k.ell);
  if (k.factor) p /= "o" + std::to_string(k.factor);
  if (k.eigenform) p /= "e" + std::to_string(k.eigenform) + ".EIGF";
  return p;
}

std::vector<StoreKey> Store::ingest(const HeckeSpace& s) {
  hecke::validate(s);
  const std::string hmat = format_hmat(s);
  const std::string digest = sha256_hex(hmat);
  const fs::path dir = space_dir(s.level, s.weight);
  if (fs::exists(dir / "SPACE")) {
    const SpaceRecord existing = space(s.level, s.weight);
    if (existing.hmat_sha256 != digest)
      fail(ErrorKind::InvalidArgument, "space " + std::to_string(s.level) + "." + std::to_string(s.weight) +
                                           " is already stored with different matrices");
    std::vector<StoreKey> keys;
    for (int q = 1; q <= existing.qorbits; ++q) keys.push_back({s.level, s.weight, q});
    return keys;
  }
  const auto orbits = rational_orbits(s);
  write_file_if_changed(dir / "hecke.hmat", hmat);
  std::vector<StoreKey> keys;
  for (const auto& o : orbits) {
    const StoreKey key{s.level, s.weight, o.number};
    const fs::path qdir = path_of(key);
    const std::string qhmat = format_hmat(o.space);
    write_file_if_changed(qdir / "hecke.hmat", qhmat);
    write_file_if_changed(qdir / "LATTICE", serialize(LatticeRecord{key, o.lattice}));
    write_file_if_changed(qdir / "QORBIT", serialize(QOrbitRecord{key, o.rank, sha256_hex(qhmat)}));
    keys.push_back(key);
  }
  SpaceRecord rec;
  rec.level = s.level;
  rec.weight = s.weight;
  rec.dim = s.dim;
  rec.bound = s.bound;
  rec.sturm_bound = sturm_bound(s.level, s.weight);
  rec.metadata = s.metadata;
  rec.qorbits = static_cast<int>(orbits.size());
  rec.provenance = s.provenance;
  rec.hmat_sha256 = digest;
  write_file_if_changed(dir / "SPACE", serialize(rec));
  return keys;
}

std::vector<SpaceRecord> Store::spaces() const {
  std::vector<SpaceRecord> out;
  for (const auto& d : sorted_entries(root_ / "spaces"))
    if (fs::exists(d / "SPACE")) out.push_back(parse_file<SpaceRecord>(d / "SPACE", parse_space_record));
  std::sort(out.begin(), out.end(), [](const SpaceRecord& a, const SpaceRecord& b) {
    return std::pair(a.level, a.weight) < std::pair(b.level, b.weight);
  });
  return out;
}

SpaceRecord Store::space(int level, int weight) const {
  const fs::path p = space_dir(level, weight) / "SPACE";
  if (!fs::exists(p)) missing("space " + std::to_string(level) + "." + std::to_string(weight) + " not ingested");
  return parse_file<SpaceRecord>(p, parse_space_record);
}

HeckeSpace Store::full_space(int level, int weight) const {
  space(level, weight);
  return parse_file<HeckeSpace>(space_dir(level, weight) / "hecke.hmat", parse_hmat);
}

std::vector<StoreKey> Store::qorbit_keys() const {
  std::vector<StoreKey> out;
  for (const auto& s : spaces())
    for (int q = 1; q <= s.qorbits; ++q) out.push_back({s.level, s.weight, q});
  return out;
}

QOrbitRecord Store::qorbit(const StoreKey& key) const {
  const fs::path p = path_of(key.qorbit_key()) / "QORBIT";
  if (!fs::exists(p)) missing("Q-orbit " + to_string(key.qorbit_key()) + " not stored");
  return parse_file<QOrbitRecord>(p, parse_qorbit_record);
}

LatticeRecord Store::lattice(const StoreKey& key) const {
  qorbit(key);
  return parse_file<LatticeRecord>(path_of(key.qorbit_key()) / "LATTICE", parse_lattice_record);
}

std::shared_ptr<const HeckeSpace> Store::qorbit_space(const StoreKey& key) const {
  const QOrbitRecord q = qorbit(key);
  const fs::path p = path_of(key.qorbit_key()) / "hecke.hmat";
  const std::string text = read_file(p);
  if (sha256_hex(text) != q.hmat_sha256) corrupt(p.string() + ": content does not match its recorded hash");
  return std::make_shared<const HeckeSpace>(parse_file<HeckeSpace>(p, parse_hmat));
}

Store::Decomposition Store::decompose(const StoreKey& qkey, std::int64_t ell, int precision,
                                      const QellOptions& options) {
  require(is_prime(ell), "ell = " + std::to_string(ell) + " is not prime");
  require(precision >= 1, "precision must be positive");
  const auto space = qorbit_space(qkey);
  const StoreKey lkey{qkey.level, qkey.weight, qkey.qorbit, ell};
  const auto orbits = ell_adic_orbits(space, Int(static_cast<long>(ell)), precision);

  Decomposition out;
  out.idempotents.key = lkey;
  out.idempotents.precision = precision;
  std::vector<std::pair<fs::path, std::string>> files;
  for (const auto& o : orbits) {
    const StoreKey okey{lkey.level, lkey.weight, lkey.qorbit, ell, o.index};
    out.idempotents.idempotents.push_back(reduce(o.factor.idempotent, o.pp));
    out.orbits.push_back(make_fl_orbit_record(okey, o));
    files.emplace_back(path_of(okey) / "ORBIT", serialize(out.orbits.back()));
    for (const auto& f : qell_orbits(o, options)) {
      StoreKey ekey = okey;
      ekey.eigenform = f.index;
      out.eigenforms.push_back(make_ql_orbit_record(ekey, f));
      files.emplace_back(path_of(ekey), serialize(out.eigenforms.back()));
    }
  }
  const fs::path ldir = path_of(lkey);
  std::set<fs::path> keep;
  for (const auto& [p, c] : files) {
    keep.insert(p);
    keep.insert(p.parent_path());
  }
  keep.insert(ldir / "IDEM");
  if (fs::exists(ldir)) {
    std::vector<fs::path> stale;
    for (const auto& e : fs::recursive_directory_iterator(ldir))
      if (!keep.count(e.path())) stale.push_back(e.path());
    for (const auto& p : stale) fs::remove_all(p);
  }
  for (const auto& [p, c] : files) write_file_if_changed(p, c);
  write_file_if_changed(ldir / "IDEM", serialize(out.idempotents));
  return out;
}

bool Store::has_ell_data(const StoreKey& qkey, std::int64_t ell) const {
  return fs::exists(path_of({qkey.level, qkey.weight, qkey.qorbit, ell}) / "IDEM");
}

IdempotentRecord Store::idempotents(const StoreKey& key) const {
  const StoreKey lkey{key.level, key.weight, key.qorbit, key.ell};
  if (!has_ell_data(lkey, key.ell))
    missing("not computed: no " + std::to_string(key.ell) + "-adic data for " + to_string(key.qorbit_key()));
  return parse_file<IdempotentRecord>(path_of(lkey) / "IDEM", parse_idempotent_record);
}

std::vector<FlOrbitRecord> Store::fl_orbits(const StoreKey& key) const {
  const IdempotentRecord idem = idempotents(key);
  std::vector<FlOrbitRecord> out;
  for (std::size_t i = 1; i <= idem.idempotents.size(); ++i) {
    StoreKey k = idem.key;
    k.factor = static_cast<int>(i);
    out.push_back(fl_orbit(k));
  }
  return out;
}

FlOrbitRecord Store::fl_orbit(const StoreKey& key) const {
  const fs::path p = path_of(key.factor_key()) / "ORBIT";
  if (!fs::exists(p)) missing("not computed: orbit " + to_string(key.factor_key()));
  auto rec = parse_file<FlOrbitRecord>(p, parse_fl_orbit_record);
  if (rec.key != key.factor_key()) corrupt(p.string() + ": key does not match its location");
  return rec;
}

std::vector<QlOrbitRecord> Store::ql_orbits(const StoreKey& key) const {
  std::vector<QlOrbitRecord> out;
  for (const auto& o : key.factor ? std::vector<FlOrbitRecord>{fl_orbit(key)} : fl_orbits(key)) {
    for (const auto& p : sorted_entries(path_of(o.key))) {
      if (p.extension() != ".EIGF") continue;
      auto rec = parse_file<QlOrbitRecord>(p, parse_ql_orbit_record);
      if (path_of(rec.key) != p) corrupt(p.string() + ": key does not match its location");
      out.push_back(std::move(rec));
    }
  }
  std::sort(out.begin(), out.end(), [](const QlOrbitRecord& a, const QlOrbitRecord& b) { return a.key < b.key; });
  return out;
}

QlOrbitRecord Store::ql_orbit(const StoreKey& key) const {
  require(key.depth() == 6, "eigenform key expected, got " + to_string(key));
  const fs::path p = path_of(key);
  if (!fs::exists(p)) missing("not computed: eigenform " + to_string(key));
  return parse_file<QlOrbitRecord>(p, parse_ql_orbit_record);
}

bool Store::exists(const StoreKey& key) const {
  switch (key.depth()) {
    case 3: return fs::exists(path_of(key) / "QORBIT");
    case 4: return fs::exists(path_of(key) / "IDEM");
    case 5: return fs::exists(path_of(key) / "ORBIT");
    default: return fs::exists(path_of(key));
  }
}

std::pair<std::string, bool> Store::record_congruence(const CongruenceRecord& rec) {
  for (const auto& ref : {rec.left, rec.right}) {
    StoreKey k;
    try {
      k = parse_key(ref);
    } catch (const Error&) {
      fail(ErrorKind::InvalidArgument, "congruence endpoint '" + ref + "' is not a store key");
    }
    if (k.depth() < 5 || !exists(k)) fail(ErrorKind::InvalidArgument, "dangling congruence endpoint " + ref);
  }
  const std::string text = serialize(rec);
  const std::string id = short_hash(text, 24);
  return {id, create_file_exclusive(root_ / "congruences" / (id + ".CONG"), text)};
}

std::vector<CongruenceRecord> Store::congruences() const {
  std::vector<CongruenceRecord> out;
  for (const auto& p : sorted_entries(root_ / "congruences"))
    if (p.extension() == ".CONG") out.push_back(parse_file<CongruenceRecord>(p, parse_congruence_record));
  return out;
}

Store::Claim Store::claim(const std::string& id) {
  const fs::path dir = root_ / "claims";
  if (fs::exists(dir / (id + ".result"))) return Claim::Done;
  for (int attempt = 0; attempt < 2; ++attempt) {
    if (create_file_exclusive(dir / (id + ".claim"), owner_line())) {
      // Another worker may have finished between the check and the claim.
      if (fs::exists(dir / (id + ".result"))) return Claim::Done;
      return Claim::Won;
    }
    if (fs::exists(dir / (id + ".result"))) return Claim::Done;
    std::string owner;
    try {
      owner = read_file(dir / (id + ".claim"));
    } catch (const Error&) {
      continue;
    }
    if (!owner_dead(owner)) return Claim::Busy;
    std::error_code ec;
    fs::remove(dir / (id + ".claim"), ec);
  }
  return Claim::Busy;
}

void Store::publish(const std::string& id, const std::string& result) {
  create_file_exclusive(root_ / "claims" / (id + ".result"), result);
}

std::optional<std::string> Store::result(const std::string& id) const {
  const fs::path p = root_ / "claims" / (id + ".result");
  if (!fs::exists(p)) return std::nullopt;
  return read_file(p);
}

std::size_t Store::claim_count() const {
  std::size_t n = 0;
  for (const auto& p : sorted_entries(root_ / "claims"))
    if (p.extension() == ".claim") ++n;
  return n;
}

std::vector<std::string> Store::validate() const {
  std::vector<std::string> problems;
  auto check = [&](const std::string& where, auto&& fn) {
    try {
      fn();
    } catch (const std::exception& e) {
      problems.push_back(where + ": " + e.what());
    }
  };
  check("STORE", [&] {
    if (read_file(root_ / "STORE") != kStoreHeader) throw Error(ErrorKind::StoreCorruption, "bad store header");
  });
  for (const auto& dir : sorted_entries(root_ / "spaces")) {
    if (!fs::exists(dir / "SPACE")) {
      problems.push_back(dir.string() + ": incomplete ingest (no SPACE record)");
      continue;
    }
    check(dir.string(), [&] {
      const SpaceRecord s = parse_file<SpaceRecord>(dir / "SPACE", parse_space_record);
      if (space_dir(s.level, s.weight) != dir) throw Error(ErrorKind::StoreCorruption, "SPACE does not match its directory");
      const std::string hmat = read_file(dir / "hecke.hmat");
      if (sha256_hex(hmat) != s.hmat_sha256) throw Error(ErrorKind::StoreCorruption, "hecke.hmat hash mismatch");
      const HeckeSpace full = parse_hmat(hmat);
      std::size_t rank_sum = 0;
      for (int q = 1; q <= s.qorbits; ++q) {
        const StoreKey qk{s.level, s.weight, q};
        const QOrbitRecord qr = qorbit(qk);
        if (qr.key != qk) throw Error(ErrorKind::StoreCorruption, "QORBIT key mismatch at " + to_string(qk));
        rank_sum += qr.rank;
        const auto qs = qorbit_space(qk);
        const LatticeRecord lat = lattice(qk);
        if (lat.basis.rows() != full.dim || lat.basis.cols() != qr.rank)
          throw Error(ErrorKind::StoreCorruption, "LATTICE shape mismatch at " + to_string(qk));
        for (const auto& ld : sorted_entries(path_of(qk))) {
          const int ell = numbered(ld, 'l');
          if (!ell || !fs::is_directory(ld)) continue;
          const StoreKey lk{s.level, s.weight, q, ell};
          check(ld.string(), [&] {
            const IdempotentRecord idem = idempotents(lk);
            std::size_t orank = 0;
            std::size_t count = 0;
            for (const auto& od : sorted_entries(ld)) {
              if (!numbered(od, 'o') || !fs::is_directory(od)) continue;
              ++count;
            }
            if (count != idem.idempotents.size())
              throw Error(ErrorKind::StoreCorruption, "IDEM count does not match the stored orbits");
            for (const auto& o : fl_orbits(lk)) {
              orank += o.rank;
              std::size_t erank = 0;
              for (const auto& e : ql_orbits(o.key)) erank += e.rank;
              if (erank != o.rank)
                throw Error(ErrorKind::StoreCorruption, "eigenform ranks under " + to_string(o.key) + " sum to " +
                                                           std::to_string(erank) + ", not " + std::to_string(o.rank));
            }
            if (orank != qr.rank) throw Error(ErrorKind::StoreCorruption, "orbit ranks do not sum to the Q-orbit rank");
          });
        }
        (void)qs;
      }
      if (rank_sum != full.dim) throw Error(ErrorKind::StoreCorruption, "Q-orbit ranks do not sum to the dimension");
    });
  }
  for (const auto& p : sorted_entries(root_ / "congruences")) {
    check(p.string(), [&] {
      const std::string text = read_file(p);
      const CongruenceRecord c = parse_congruence_record(text);
      if (p.filename().string() != short_hash(text, 24) + ".CONG")
        throw Error(ErrorKind::StoreCorruption, "file name is not the content hash");
      for (const auto& ref : {c.left, c.right})
        if (!exists(parse_key(ref))) throw Error(ErrorKind::StoreCorruption, "dangling endpoint " + ref);
    });
  }
  return problems;
}

}  // namespace hecke
