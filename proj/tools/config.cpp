#include "config.hpp"

#include <cstdlib>
#include <sstream>

#include "CLI11.hpp"
#include "hecke/error.hpp"
#include "hecke/integer.hpp"

namespace hecke::cli {

const std::vector<std::string>& setting_names() {
  static const std::vector<std::string> names = {"store",   "ell",    "precision",   "sturm_bound",
                                                 "workers", "primes", "index_policy"};
  return names;
}

namespace {

std::string env_name(const std::string& key) {
  std::string out = "HECKE_";
  for (char c : key) out += static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return out;
}

long long to_number(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    const long long v = std::stoll(value, &used);
    if (used == value.size()) return v;
  } catch (const std::exception&) {
  }
  fail(ErrorKind::InvalidArgument, "config: " + key + " expects an integer, got '" + value + "'");
}

void apply(CommandConfig& c, const std::string& key, const std::string& value) {
  if (key == "store") {
    require(!value.empty(), "config: store path is empty");
    c.store = value;
  } else if (key == "ell") {
    c.ell = to_number(key, value);
    require(c.ell >= 2 && is_prime(Int(static_cast<long>(c.ell))), "config: ell must be prime, got " + value);
  } else if (key == "precision") {
    c.precision = static_cast<int>(to_number(key, value));
    require(c.precision >= 1 && c.precision <= 4096, "config: precision must be in [1, 4096]");
  } else if (key == "sturm_bound") {
    c.sturm_bound = static_cast<int>(to_number(key, value));
    require(*c.sturm_bound >= 1, "config: sturm_bound must be positive");
  } else if (key == "workers") {
    c.workers = static_cast<int>(to_number(key, value));
    require(c.workers >= 1 && c.workers <= 1024, "config: workers must be in [1, 1024]");
  } else if (key == "primes") {
    const auto colon = value.find(':');
    require(colon != std::string::npos, "config: primes expects LO:HI, got '" + value + "'");
    c.prime_lo = to_number(key, value.substr(0, colon));
    c.prime_hi = to_number(key, value.substr(colon + 1));
    require(c.prime_lo >= 2 && c.prime_lo <= c.prime_hi, "config: primes needs 2 <= LO <= HI");
  } else if (key == "index_policy") {
    c.policy = parse_index_policy(value);
  } else {
    fail(ErrorKind::InvalidArgument, "config: unknown setting '" + key + "'");
  }
}

std::map<std::string, std::string> read_config_file(const std::filesystem::path& path) {
  std::vector<CLI::ConfigItem> items;
  try {
    items = CLI::ConfigTOML().from_file(path.string());
  } catch (const CLI::Error& e) {
    fail(ErrorKind::InvalidArgument, "config file " + path.string() + ": " + e.what());
  }
  std::map<std::string, std::string> out;
  for (const auto& item : items) {
    if (item.name == "++" || item.name == "--") continue;  // section markers
    require(item.inputs.size() == 1, "config file " + path.string() + ": " + item.fullname() + " needs one value");
    out[item.fullname()] = item.inputs.front();
  }
  return out;
}

}  // namespace

std::string CommandConfig::describe() const {
  std::ostringstream os;
  os << "store=" << store.string() << " (" << sources.at("store") << ")";
  os << " ell=" << ell << " (" << sources.at("ell") << ")";
  os << " precision=" << precision << " (" << sources.at("precision") << ")";
  os << " sturm_bound=" << (sturm_bound ? std::to_string(*sturm_bound) : "auto") << " (" << sources.at("sturm_bound")
     << ")";
  os << " workers=" << workers << " (" << sources.at("workers") << ")";
  os << " primes=" << prime_lo << ":" << prime_hi << " (" << sources.at("primes") << ")";
  os << " index_policy=" << to_string(policy) << " (" << sources.at("index_policy") << ")";
  return os.str();
}

CommandConfig resolve_config(const std::map<std::string, std::string>& flags, const EnvLookup& env,
                             const std::optional<std::filesystem::path>& config_file) {
  std::map<std::string, std::string> file;
  if (config_file) file = read_config_file(*config_file);
  for (const auto& [k, v] : file)
    require(std::find(setting_names().begin(), setting_names().end(), k) != setting_names().end(),
            "config file " + config_file->string() + ": unknown setting '" + k + "'");

  CommandConfig c;
  for (const auto& key : setting_names()) {
    std::string& source = c.sources[key];
    source = "default";
    if (auto it = flags.find(key); it != flags.end()) {
      apply(c, key, it->second);
      source = "flag";
    } else if (auto v = env(env_name(key))) {
      apply(c, key, *v);
      source = "env";
    } else if (auto f = file.find(key); f != file.end()) {
      apply(c, key, f->second);
      source = "config";
    }
  }
  return c;
}

EnvLookup process_env() {
  return [](const std::string& name) -> std::optional<std::string> {
    if (const char* v = std::getenv(name.c_str()); v != nullptr && *v != '\0') return std::string(v);
    return std::nullopt;
  };
}

}  // namespace hecke::cli
