#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "config.hpp"
#include "hecke/error.hpp"
#include "hecke/hecke_space.hpp"
#include "hecke/queries.hpp"
#include "hecke/store.hpp"
#include "hecke/sweep.hpp"

using namespace hecke;
using hecke::cli::CommandConfig;

namespace {

enum Exit { kOk = 0, kUsage = 2, kNotComputed = 3, kComputation = 4, kCorruption = 5 };

int exit_code(ErrorKind k) {
  switch (k) {
    case ErrorKind::InvalidArgument: return kUsage;
    case ErrorKind::NotComputed: return kNotComputed;
    case ErrorKind::StoreCorruption: return kCorruption;
    case ErrorKind::Computation:
    case ErrorKind::Internal: return kComputation;
  }
  return kComputation;
}

struct Output {
  bool machine = false;
  std::ostream& out = std::cout;
};

std::string read_input(const std::string& path) {
  if (path == "-") {
    std::ostringstream os;
    os << std::cin.rdbuf();
    return os.str();
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::InvalidArgument, "cannot read " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

StoreKey key_at_depth(const std::string& text, std::size_t lo, std::size_t hi) {
  const StoreKey k = parse_key(text);
  require(k.depth() >= lo && k.depth() <= hi, "key " + text + " has the wrong depth for this command");
  return k;
}

/// "11.2" names every Q-orbit of a space; "11.2.1" names one.
std::vector<StoreKey> qorbits_of(const Store& store, const std::string& text) {
  if (std::count(text.begin(), text.end(), '.') == 1) {
    const StoreKey probe = parse_key(text + ".1");
    std::vector<StoreKey> out;
    for (const auto& k : store.qorbit_keys())
      if (k.level == probe.level && k.weight == probe.weight) out.push_back(k);
    if (out.empty()) fail(ErrorKind::NotComputed, "not computed: no space " + text);
    return out;
  }
  const StoreKey k = key_at_depth(text, 3, 3);
  store.qorbit(k);
  return {k};
}

std::string fingerprint_text(const std::vector<ZPoly>& fp) {
  std::string s;
  for (std::size_t i = 0; i < fp.size() && i < 3; ++i) s += (i ? " " : "") + zpoly::to_string(fp[i]);
  if (fp.size() > 3) s += " ...";
  return s;
}

std::string ints(const std::vector<int>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
  return s;
}

void print_orbits(const Output& o, const std::vector<FlOrbitRecord>& orbits) {
  if (o.machine) {
    for (const auto& r : orbits) o.out << serialize(r);
    return;
  }
  o.out << std::left << std::setw(16) << "orbit" << std::setw(6) << "rank" << std::setw(4) << "f" << std::setw(10)
        << "N" << std::setw(14) << "basis" << "fingerprint (T2 T3 T4)\n";
  for (const auto& r : orbits)
    o.out << std::setw(16) << to_string(r.key) << std::setw(6) << r.rank << std::setw(4) << r.residue_degree
          << std::setw(10) << r.precision << std::setw(14) << ints(r.basis_indices) << fingerprint_text(r.fingerprint)
          << "\n";
}

void print_eigenforms(const Output& o, const std::vector<QlOrbitRecord>& forms) {
  if (o.machine) {
    for (const auto& r : forms) o.out << serialize(r);
    return;
  }
  o.out << std::left << std::setw(18) << "eigenform" << std::setw(6) << "rank" << std::setw(4) << "e" << std::setw(4)
        << "f" << std::setw(10) << "attained" << "ring\n";
  for (const auto& r : forms) {
    o.out << std::setw(18) << to_string(r.key) << std::setw(6) << r.rank;
    if (!r.resolved) {
      o.out << std::setw(4) << "-" << std::setw(4) << "-" << std::setw(10) << r.precision
            << "unresolved, defining poly " << zpoly::to_string(r.defining_poly) << "\n";
      continue;
    }
    o.out << std::setw(4) << r.ring_e << std::setw(4) << r.ring_f << std::setw(10) << r.precision
          << zpoly::to_string(r.ring_poly) << "\n";
  }
}

void print_congruences(const Output& o, const std::vector<CongruenceRecord>& recs) {
  if (o.machine) {
    for (const auto& r : recs) o.out << serialize(r);
    return;
  }
  o.out << std::left << std::setw(18) << "left" << std::setw(18) << "right" << std::setw(8) << "kind" << std::setw(10)
        << "exponent" << std::setw(7) << "bound" << "precision\n";
  for (const auto& r : recs)
    o.out << std::setw(18) << r.left << std::setw(18) << r.right << std::setw(8) << to_string(r.kind) << std::setw(10)
          << r.exponent.to_string() << std::setw(7) << r.sturm_bound_used << r.precision_used << "\n";
}

int cmd_ingest(const CommandConfig& c, const Output& o, const std::string& path) {
  const HeckeSpace s = parse_hmat(read_input(path));
  validate(s);
  for (const auto& w : warnings(s)) std::cerr << "hecke: warning: " << w << "\n";
  Store store = Store::open(c.store, true);
  const auto keys = store.ingest(s);
  if (o.machine) {
    o.out << serialize(store.space(s.level, s.weight));
    for (const auto& k : keys) o.out << serialize(store.qorbit(k));
    return kOk;
  }
  o.out << "space " << s.level << "." << s.weight << " dim " << s.dim << ", " << keys.size() << " Q-orbit(s)\n";
  for (const auto& k : keys) o.out << "  " << to_string(k) << " rank " << store.qorbit(k).rank << "\n";
  return kOk;
}

int cmd_decompose(const CommandConfig& c, const Output& o, const std::string& key) {
  Store store = Store::open(c.store);
  std::vector<FlOrbitRecord> orbits;
  std::vector<QlOrbitRecord> forms;
  for (const auto& k : qorbits_of(store, key)) {
    auto d = store.decompose(k, c.ell, c.precision);
    orbits.insert(orbits.end(), d.orbits.begin(), d.orbits.end());
    forms.insert(forms.end(), d.eigenforms.begin(), d.eigenforms.end());
  }
  print_orbits(o, orbits);
  if (!o.machine) o.out << "\n";
  print_eigenforms(o, forms);
  return kOk;
}

int cmd_orbits(const CommandConfig& c, const Output& o, const std::string& key) {
  const Store store = Store::open(c.store);
  std::vector<FlOrbitRecord> orbits;
  for (const auto& k : qorbits_of(store, key)) {
    const StoreKey lk{k.level, k.weight, k.qorbit, c.ell};
    if (!store.has_ell_data(k, c.ell))
      fail(ErrorKind::NotComputed, "not computed: " + to_string(lk) + " (run decompose first)");
    for (auto& r : store.fl_orbits(lk)) orbits.push_back(std::move(r));
  }
  print_orbits(o, orbits);
  return kOk;
}

int cmd_congruence(const CommandConfig& c, const Output& o, const std::string& left, const std::string& right) {
  Store store = Store::open(c.store);
  SweepPair pair{key_at_depth(left, 6, 6), key_at_depth(right, 5, 6)};
  auto r = congruence_sweep(store, {pair}, {1, c.sturm_bound, c.policy});
  print_congruences(o, r.records);
  return kOk;
}

int cmd_sweep(const CommandConfig& c, const Output& o, const std::vector<int>& levels, const std::vector<int>& weights) {
  Store store = Store::open(c.store);
  const auto pairs = strong_pairs(store, c.ell, levels, weights);
  auto r = congruence_sweep(store, pairs, {c.workers, c.sturm_bound, c.policy});
  std::cerr << "hecke: sweep " << pairs.size() << " pairs, " << r.items << " items, " << r.computed << " computed, "
            << r.reused << " reused\n";
  print_congruences(o, r.records);
  return kOk;
}

int cmd_witnesses(const CommandConfig& c, const Output& o, const std::string& key, int m) {
  const Store store = Store::open(c.store);
  const StoreKey k = key_at_depth(key, 6, 6);
  const QlOrbitRecord rec = store.ql_orbit(k);
  std::int64_t hi = c.prime_hi;
  const auto available = static_cast<std::int64_t>(rec.coefficients.size());
  if (rec.resolved && hi > available + 1) {
    hi = std::max(c.prime_lo, available + 1);
    std::cerr << "hecke: warning: " << key << " stores a_n only up to n = " << available << "; scanning primes "
              << c.prime_lo << ":" << hi << "\n";
  }
  auto report = level_raising_witnesses(to_eigenform(rec), k.level, m, c.prime_lo, hi);
  report.eigenform = key;
  if (o.machine) {
    o.out << serialize(report);
    return kOk;
  }
  o.out << report.eigenform << " m=" << m << " primes " << report.lo << " <= p < " << report.hi << ": "
        << report.witnesses.size() << " witness(es) among " << report.primes_scanned << " primes, density "
        << report.density().get_str() << "\n";
  o.out << std::left << std::setw(8) << "p" << std::setw(6) << "sign" << "valuation\n";
  for (const auto& w : report.witnesses)
    o.out << std::setw(8) << w.p << std::setw(6) << (w.sign > 0 ? "+" : "-") << w.valuation.to_string() << "\n";
  return kOk;
}

int cmd_q1(const CommandConfig& c, const Output& o, const std::string& key) {
  const Store store = Store::open(c.store);
  std::vector<QlOrbitRecord> forms;
  for (const auto& k : qorbits_of(store, key))
    for (auto& r : query_ql_orbits(store, k, c.ell)) forms.push_back(std::move(r));
  print_eigenforms(o, forms);
  return kOk;
}

int cmd_q2(const CommandConfig& c, const Output& o, const std::string& key, int n) {
  const Store store = Store::open(c.store);
  const auto r = query_weight_lowering(store, key_at_depth(key, 3, 3), c.ell, n);
  if (r.status == WeightLowering::Status::Incomplete) {
    std::ostringstream msg;
    msg << "not computed: " << r.missing.size() << " congruence(s) missing, first " << r.missing.front().first << " ~ "
        << r.missing.front().second << " (run sweep first)";
    fail(ErrorKind::NotComputed, msg.str());
  }
  if (r.status == WeightLowering::Status::NoCongruence) {
    if (!o.machine) o.out << "no eigenform congruent modulo " << c.ell << "^" << n << "\n";
    return kOk;
  }
  if (o.machine) {
    for (const auto& [rec, w] : r.results) o.out << serialize(rec);
    return kOk;
  }
  o.out << "lowest weight " << r.results.front().second << " modulo " << c.ell << "^" << n << ":\n";
  for (const auto& [rec, w] : r.results) o.out << "  " << to_string(rec.key) << "\n";
  return kOk;
}

int cmd_q3(const CommandConfig& c, const Output& o, const std::string& key, std::optional<int> bound,
           const std::string& out_dir) {
  const Store store = Store::open(c.store);
  std::vector<PolyRecord> polys;
  for (const auto& k : qorbits_of(store, key))
    for (auto& p : export_hecke_polynomials(store, k, c.ell, bound)) polys.push_back(std::move(p));
  if (!out_dir.empty()) {
    for (const auto& f : write_poly_files(polys, out_dir)) std::cerr << "hecke: wrote " << f.string() << "\n";
    return kOk;
  }
  for (const auto& p : polys) {
    if (o.machine) {
      o.out << serialize(p);
      continue;
    }
    o.out << to_string(p.key) << (p.resolved ? "" : " (unresolved)") << " mod " << c.ell << "^" << p.precision << "\n";
    for (const auto& [prime, poly] : p.polys) o.out << "  T" << prime << ": " << zpoly::to_string(poly) << "\n";
  }
  return kOk;
}

int cmd_validate(const CommandConfig& c, const Output& o) {
  const Store store = Store::open(c.store);
  const auto problems = store.validate();
  for (const auto& p : problems) o.out << p << "\n";
  if (!problems.empty()) fail(ErrorKind::StoreCorruption, std::to_string(problems.size()) + " problem(s) in store");
  if (!o.machine) o.out << "store ok\n";
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hecke algebra decomposition and congruence store"};
  app.require_subcommand(1);
  app.fallthrough();

  std::map<std::string, std::string> flags;
  auto setting = [&](const std::string& name, const std::string& help) {
    std::string flag = "--" + name;
    std::replace(flag.begin(), flag.end(), '_', '-');
    app.add_option_function<std::string>(flag, [&flags, name](const std::string& v) { flags[name] = v; }, help);
  };
  setting("store", "store directory");
  setting("ell", "prime ell");
  setting("precision", "precision N (powers of ell)");
  setting("sturm_bound", "coefficient bound for congruence tests");
  setting("workers", "sweep worker threads");
  setting("primes", "prime range LO:HI (LO <= p < HI)");
  setting("index_policy", "compared indices: coprime or all");
  std::string config_path;
  app.add_option("--config", config_path, "config file (name = value lines)");
  Output o;
  app.add_flag("--machine", o.machine, "print store records instead of tables");

  std::function<int(const CommandConfig&)> run;

  std::string arg1, arg2;
  int number = 1;
  std::optional<int> bound;
  std::vector<int> levels, weights;

  auto* ingest = app.add_subcommand("ingest", "ingest an HMAT file ('-' for stdin)");
  ingest->add_option("file", arg1)->required();
  ingest->callback([&] { run = [&](const CommandConfig& c) { return cmd_ingest(c, o, arg1); }; });

  auto* decompose = app.add_subcommand("decompose", "decompose a space (L.K) or Q-orbit (L.K.J) at ell^N");
  decompose->add_option("key", arg1)->required();
  decompose->callback([&] { run = [&](const CommandConfig& c) { return cmd_decompose(c, o, arg1); }; });

  auto* orbits = app.add_subcommand("orbits", "list stored Z_ell-orbits");
  orbits->add_option("key", arg1)->required();
  orbits->callback([&] { run = [&](const CommandConfig& c) { return cmd_orbits(c, o, arg1); }; });

  auto* congruence = app.add_subcommand("congruence", "congruence exponent of an eigenform and an eigenform or orbit");
  congruence->add_option("left", arg1, "eigenform key")->required();
  congruence->add_option("right", arg2, "eigenform key (strong) or orbit key (weak)")->required();
  congruence->callback([&] { run = [&](const CommandConfig& c) { return cmd_congruence(c, o, arg1, arg2); }; });

  auto* sweep = app.add_subcommand("sweep", "strong congruences between all stored eigenforms");
  sweep->add_option("--level", levels, "restrict to these levels");
  sweep->add_option("--weight", weights, "restrict to these weights");
  sweep->callback([&] { run = [&](const CommandConfig& c) { return cmd_sweep(c, o, levels, weights); }; });

  auto* witnesses = app.add_subcommand("witnesses", "level-raising primes for an eigenform");
  witnesses->add_option("key", arg1)->required();
  witnesses->add_option("-m", number, "exponent in lambda-units")->check(CLI::PositiveNumber);
  witnesses->callback([&] { run = [&](const CommandConfig& c) { return cmd_witnesses(c, o, arg1, number); }; });

  auto* query = app.add_subcommand("query", "database queries");
  query->require_subcommand(1);
  auto* q1 = query->add_subcommand("q1", "Q_ell-orbits of a Q-orbit");
  q1->add_option("key", arg1)->required();
  q1->callback([&] { run = [&](const CommandConfig& c) { return cmd_q1(c, o, arg1); }; });
  auto* q2 = query->add_subcommand("q2", "lowest weight congruent modulo ell^n");
  q2->add_option("key", arg1)->required();
  q2->add_option("-n", number, "exponent")->required()->check(CLI::PositiveNumber);
  q2->callback([&] { run = [&](const CommandConfig& c) { return cmd_q2(c, o, arg1, number); }; });
  auto* q3 = query->add_subcommand("q3", "Hecke polynomials of T_p");
  q3->add_option("key", arg1)->required();
  q3->add_option("--max-prime", bound, "largest prime exported");
  q3->add_option("--out", arg2, "write one POLY file per eigenform into this directory");
  q3->callback([&] { run = [&](const CommandConfig& c) { return cmd_q3(c, o, arg1, bound, arg2); }; });

  auto* gen = app.add_subcommand("gen-level11", "HMAT for the level 11 newform by point counting");
  gen->add_option("bound", number, "largest n")->required()->check(CLI::Range(2, 100000));
  gen->add_option("-o,--output", arg1, "output file (default stdout)");
  bool gen_only = false;
  gen->callback([&] { gen_only = true; });

  auto* validate_cmd = app.add_subcommand("validate", "check store integrity");
  validate_cmd->callback([&] { run = [&](const CommandConfig& c) { return cmd_validate(c, o); }; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kUsage;
  }

  try {
    if (gen_only) {
      const std::string text = format_hmat(level11_space(number));
      if (arg1.empty()) {
        std::cout << text;
      } else {
        write_file_if_changed(arg1, text);
      }
      return kOk;
    }
    const auto env = cli::process_env();
    std::optional<std::filesystem::path> config_file;
    if (!config_path.empty())
      config_file = config_path;
    else if (auto v = env("HECKE_CONFIG"))
      config_file = *v;
    const CommandConfig config = cli::resolve_config(flags, env, config_file);
    std::cerr << "hecke: config " << config.describe() << (config_file ? " file=" + config_file->string() : "")
              << "\n";
    return run(config);
  } catch (const Error& e) {
    std::cerr << "hecke: error: " << e.what() << "\n";
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "hecke: error: " << e.what() << "\n";
    return kComputation;
  }
}
