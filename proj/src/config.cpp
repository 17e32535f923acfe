#include "personrec/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <set>

extern char** environ;

namespace personrec {

ConfigError::ConfigError(std::string field, const std::string& message)
    : std::invalid_argument(field + ": " + message), field_(std::move(field)) {}

namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char ch) { return static_cast<char>(std::tolower(ch)); });
  return s;
}

const std::set<std::string>& known_keys() {
  static const std::set<std::string> keys{
      "data.edges", "data.activities", "data.activities_header", "data.lenient",
      "data.categories",
      "eval.k", "eval.seed", "eval.methods", "eval.out", "eval.threads",
      "eligibility.min_friends", "eligibility.min_fof", "eligibility.min_activities",
      "skip.min_deleted", "skip.max_deleted",
      "recommend.n", "recommend.score_threshold", "recommend.plus_link_min",
      "recommend.plus_link_factor",
      "gen.users", "gen.categories", "gen.communities", "gen.alpha", "gen.mean_degree",
      "gen.interest_overlap", "gen.interest_concentration", "gen.sociability_dispersion",
      "gen.activity_mean", "gen.activity_dispersion", "gen.seed"};
  return keys;
}

}  // namespace

KeyValueConfig KeyValueConfig::parse(std::istream& in, const std::string& source) {
  KeyValueConfig cfg;
  std::string line;
  std::string section;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    if (t.front() == '[') {
      if (t.back() != ']') {
        throw ConfigError(source + ":" + std::to_string(line_no), "unterminated section header");
      }
      section = lower(trim(std::string_view(t).substr(1, t.size() - 2)));
      continue;
    }
    const auto eq = t.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(source + ":" + std::to_string(line_no), "expected 'key = value'");
    }
    std::string key = lower(trim(std::string_view(t).substr(0, eq)));
    if (!section.empty()) key = section + "." + key;
    cfg.values_[key] = trim(std::string_view(t).substr(eq + 1));
  }
  return cfg;
}

KeyValueConfig KeyValueConfig::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config", "cannot open " + path.string());
  return parse(in, path.string());
}

void KeyValueConfig::apply_environment(
    const std::vector<std::pair<std::string, std::string>>& env) {
  for (const auto& [name, value] : env) {
    if (name.rfind(kEnvPrefix, 0) != 0) continue;
    std::string rest = lower(name.substr(kEnvPrefix.size()));
    const auto sep = rest.find('_');
    if (sep == std::string::npos || sep == 0 || sep + 1 == rest.size()) continue;
    rest[sep] = '.';
    values_[rest] = value;
  }
}

void KeyValueConfig::apply_environment() {
  std::vector<std::pair<std::string, std::string>> env;
  for (char** e = environ; e && *e; ++e) {
    const std::string_view entry(*e);
    const auto eq = entry.find('=');
    if (eq == std::string_view::npos) continue;
    env.emplace_back(std::string(entry.substr(0, eq)), std::string(entry.substr(eq + 1)));
  }
  apply_environment(env);
}

std::string KeyValueConfig::get_string(const std::string& key, std::string fallback) const {
  const auto it = values_.find(key);
  return it == values_.end() ? fallback : it->second;
}

std::uint64_t KeyValueConfig::get_uint(const std::string& key, std::uint64_t fallback) const {
  const auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  std::uint64_t v = 0;
  const auto& s = it->second;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) {
    throw ConfigError(key, "expected a nonnegative integer, got '" + s + "'");
  }
  return v;
}

double KeyValueConfig::get_double(const std::string& key, double fallback) const {
  const auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  const auto& s = it->second;
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size() || !std::isfinite(v)) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ConfigError(key, "expected a number, got '" + s + "'");
  }
}

bool KeyValueConfig::get_bool(const std::string& key, bool fallback) const {
  const auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  const std::string v = lower(it->second);
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw ConfigError(key, "expected true or false, got '" + it->second + "'");
}

std::vector<RecommenderKind> parse_method_list(const std::string& field, std::string_view list) {
  std::vector<RecommenderKind> kinds;
  std::size_t start = 0;
  while (start <= list.size()) {
    const auto comma = list.find(',', start);
    const std::string name = trim(list.substr(start, comma - start));
    if (!name.empty()) {
      const auto kind = parse_recommender(name);
      if (!kind) throw ConfigError(field, "unknown recommender '" + name + "'");
      kinds.push_back(*kind);
    }
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return kinds;
}

RunConfig RunConfig::from(const KeyValueConfig& cfg) {
  for (const auto& [key, value] : cfg.values()) {
    if (key.rfind("weights.", 0) == 0 || known_keys().count(key) > 0) continue;
    throw ConfigError(key, "unknown configuration key");
  }

  RunConfig rc;
  rc.edges = cfg.get_string("data.edges", "");
  rc.activities = cfg.get_string("data.activities", "");
  rc.out = cfg.get_string("eval.out", "");
  rc.lenient = cfg.get_bool("data.lenient", false);
  rc.activities_header = cfg.get_bool("data.activities_header", false);
  rc.scheme.num_categories = cfg.get_uint("data.categories", 11);
  try {
    rc.scheme.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError("data.categories", e.what());
  }

  for (const auto& [key, value] : cfg.values()) {
    if (key.rfind("weights.", 0) != 0) continue;
    const double w = cfg.get_double(key, 1.0);
    if (w < 0.0) throw ConfigError(key, "weight must be nonnegative");
    rc.weights.set(key.substr(8), w);
  }

  EvalOptions& ev = rc.eval;
  ev.k = cfg.get_uint("eval.k", ev.k);
  ev.seed = cfg.get_uint("eval.seed", ev.seed);
  ev.threads = static_cast<unsigned>(cfg.get_uint("eval.threads", ev.threads));
  ev.eligibility.min_friends = cfg.get_uint("eligibility.min_friends", ev.eligibility.min_friends);
  ev.eligibility.min_fof = cfg.get_uint("eligibility.min_fof", ev.eligibility.min_fof);
  ev.eligibility.min_activities =
      cfg.get_uint("eligibility.min_activities", ev.eligibility.min_activities);
  ev.skip.min_deleted = cfg.get_uint("skip.min_deleted", ev.skip.min_deleted);
  ev.skip.max_deleted = cfg.get_uint("skip.max_deleted", ev.skip.max_deleted);
  ev.params.n = cfg.get_uint("recommend.n", ev.params.n);
  ev.params.score_threshold = cfg.get_double("recommend.score_threshold", ev.params.score_threshold);
  ev.params.plus_link_min = cfg.get_double("recommend.plus_link_min", ev.params.plus_link_min);
  ev.params.plus_link_factor =
      cfg.get_double("recommend.plus_link_factor", ev.params.plus_link_factor);
  rc.methods = parse_method_list("eval.methods", cfg.get_string("eval.methods", ""));

  if (ev.k < 2) throw ConfigError("eval.k", "must be at least 2");
  if (ev.params.n < 1) throw ConfigError("recommend.n", "must be at least 1");
  if (!(ev.params.plus_link_factor > 0.0)) {
    throw ConfigError("recommend.plus_link_factor", "must be positive");
  }
  if (ev.skip.min_deleted > ev.skip.max_deleted) {
    throw ConfigError("skip.min_deleted", "exceeds skip.max_deleted");
  }
  return rc;
}

GeneratorConfig generator_config_from(const KeyValueConfig& cfg) {
  GeneratorConfig g;
  g.n_users = cfg.get_uint("gen.users", g.n_users);
  g.num_categories = cfg.get_uint("gen.categories", g.num_categories);
  g.n_communities = cfg.get_uint("gen.communities", g.n_communities);
  g.homophily_weight = cfg.get_double("gen.alpha", g.homophily_weight);
  g.target_mean_degree = cfg.get_double("gen.mean_degree", g.target_mean_degree);
  g.interest_overlap = cfg.get_double("gen.interest_overlap", g.interest_overlap);
  g.interest_concentration = cfg.get_double("gen.interest_concentration", g.interest_concentration);
  g.sociability_dispersion = cfg.get_double("gen.sociability_dispersion", g.sociability_dispersion);
  g.activity_mean = cfg.get_double("gen.activity_mean", g.activity_mean);
  g.activity_dispersion = cfg.get_double("gen.activity_dispersion", g.activity_dispersion);
  g.seed = cfg.get_uint("gen.seed", g.seed);
  return g;
}

}  // namespace personrec
