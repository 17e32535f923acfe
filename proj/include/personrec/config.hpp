#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "personrec/evaluation.hpp"
#include "personrec/generator.hpp"
#include "personrec/interest.hpp"
#include "personrec/recommenders.hpp"

namespace personrec {

class ConfigError : public std::invalid_argument {
 public:
  ConfigError(std::string field, const std::string& message);
  [[nodiscard]] const std::string& field() const { return field_; }

 private:
  std::string field_;
};

/// Flat `section.key = value` settings. `#` starts a comment line;
/// `[section]` headers prefix the keys that follow them.
class KeyValueConfig {
 public:
  static constexpr std::string_view kEnvPrefix = "PERSONREC_";

  static KeyValueConfig parse(std::istream& in, const std::string& source);
  static KeyValueConfig load(const std::filesystem::path& path);

  /// PERSONREC_SECTION_KEY=value overrides `section.key`.
  void apply_environment();
  void apply_environment(const std::vector<std::pair<std::string, std::string>>& env);

  void set(const std::string& key, std::string value) { values_[key] = std::move(value); }
  [[nodiscard]] bool has(const std::string& key) const { return values_.count(key) > 0; }
  [[nodiscard]] const std::map<std::string, std::string>& values() const { return values_; }

  [[nodiscard]] std::string get_string(const std::string& key, std::string fallback) const;
  [[nodiscard]] std::uint64_t get_uint(const std::string& key, std::uint64_t fallback) const;
  [[nodiscard]] double get_double(const std::string& key, double fallback) const;
  [[nodiscard]] bool get_bool(const std::string& key, bool fallback) const;

 private:
  std::map<std::string, std::string> values_;
};

/// Everything `eval`, `recommend` and `stats` need. Command-line flags are
/// applied on top by the CLI.
struct RunConfig {
  std::filesystem::path edges;
  std::filesystem::path activities;
  std::filesystem::path out;
  bool lenient = false;
  bool activities_header = false;
  CategoryScheme scheme;
  ActionWeights weights;
  EvalOptions eval;
  std::vector<RecommenderKind> methods;  // empty means all

  /// Throws ConfigError for unknown keys and bad values.
  static RunConfig from(const KeyValueConfig& cfg);
};

/// Reads the `gen.*` keys. Throws ConfigError.
GeneratorConfig generator_config_from(const KeyValueConfig& cfg);

std::vector<RecommenderKind> parse_method_list(const std::string& field, std::string_view list);

}  // namespace personrec
