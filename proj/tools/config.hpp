#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <string>

#include "hecke/congruence.hpp"

namespace hecke::cli {

struct CommandConfig {
  std::filesystem::path store = "hecke-store";
  std::int64_t ell = 5;
  int precision = 4;
  std::optional<int> sturm_bound;
  int workers = 1;
  std::int64_t prime_lo = 2;  // primes lo <= p < hi
  std::int64_t prime_hi = 100;
  IndexPolicy policy = IndexPolicy::Coprime;

  /// Where each value came from: "flag", "env", "config" or "default".
  std::map<std::string, std::string> sources;

  /// One line, key=value (source) in a fixed order.
  std::string describe() const;
};

/// Setting names, in logging order. The environment variable of a setting
/// is HECKE_ followed by its upper-cased name.
const std::vector<std::string>& setting_names();

using EnvLookup = std::function<std::optional<std::string>(const std::string&)>;

/// Merge flags over environment over config file over defaults, then
/// validate. `config_file` (when set) must exist and hold `name = value`
/// lines. Throws InvalidArgument on unknown keys or bad values.
CommandConfig resolve_config(const std::map<std::string, std::string>& flags, const EnvLookup& env,
                             const std::optional<std::filesystem::path>& config_file);

EnvLookup process_env();

}  // namespace hecke::cli
