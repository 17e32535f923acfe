#include "personrec/dataset_io.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <string_view>

namespace personrec {

std::string ParseIssue::to_string() const {
  return source + ":" + std::to_string(line) + ": " + message;
}

namespace {

std::string summarize(const std::vector<ParseIssue>& issues) {
  std::string msg = std::to_string(issues.size()) + " malformed line(s)";
  const std::size_t shown = std::min<std::size_t>(issues.size(), 5);
  for (std::size_t i = 0; i < shown; ++i) msg += "\n  " + issues[i].to_string();
  if (issues.size() > shown) msg += "\n  ...";
  return msg;
}

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  for (;;) {
    const auto comma = line.find(',', start);
    fields.push_back(trim(line.substr(start, comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return fields;
}

template <typename T>
bool parse_uint(std::string_view s, T& value) {
  if (s.empty()) return false;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  return ec == std::errc() && ptr == s.data() + s.size();
}

bool is_skippable(std::string_view line) {
  const auto t = trim(line);
  return t.empty() || t.front() == '#';
}

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  return in;
}

}  // namespace

ParseError::ParseError(std::vector<ParseIssue> issues)
    : std::runtime_error(summarize(issues)), issues_(std::move(issues)) {}

std::vector<Edge> read_edges(std::istream& in, const std::string& source,
                             std::vector<ParseIssue>& issues) {
  std::vector<Edge> edges;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (is_skippable(line)) continue;
    const auto fields = split(line);
    Edge e;
    if (fields.size() != 2 || !parse_uint(fields[0], e.a) || !parse_uint(fields[1], e.b)) {
      issues.push_back({source, line_no, "expected 'user_a,user_b' with nonnegative integer ids"});
      continue;
    }
    edges.push_back(e);
  }
  return edges;
}

std::vector<ActivityEvent> read_activities(std::istream& in, const std::string& source,
                                           bool has_header, std::vector<ParseIssue>& issues) {
  std::vector<ActivityEvent> events;
  std::string line;
  std::size_t line_no = 0;
  bool header_pending = has_header;
  while (std::getline(in, line)) {
    ++line_no;
    if (is_skippable(line)) continue;
    if (header_pending) {
      header_pending = false;
      continue;
    }
    const auto fields = split(line);
    ActivityEvent ev;
    const bool arity = fields.size() == 3 || fields.size() == 4;
    if (!arity || !parse_uint(fields[0], ev.user) || !parse_uint(fields[1], ev.category) ||
        fields[2].empty() || (fields.size() == 4 && !parse_uint(fields[3], ev.multiplicity))) {
      issues.push_back({source, line_no,
                        "expected 'user,category,action_kind[,multiplicity]' with integer "
                        "user, category and multiplicity"});
      continue;
    }
    if (ev.multiplicity == 0) {
      issues.push_back({source, line_no, "multiplicity must be positive"});
      continue;
    }
    ev.action_kind = std::string(fields[2]);
    events.push_back(std::move(ev));
  }
  return events;
}

Dataset load_dataset(const DatasetPaths& paths, const ReadOptions& options) {
  Dataset ds;
  std::vector<Edge> edges;
  {
    auto in = open_input(paths.edges);
    edges = read_edges(in, paths.edges.string(), ds.issues);
  }
  if (!paths.activities.empty()) {
    auto in = open_input(paths.activities);
    ds.events = read_activities(in, paths.activities.string(), options.activities_header,
                                ds.issues);
  }
  if (!ds.issues.empty() && !options.lenient) throw ParseError(ds.issues);

  std::vector<UserId> activity_users;
  activity_users.reserve(ds.events.size());
  for (const auto& ev : ds.events) activity_users.push_back(ev.user);
  ds.graph = SocialGraph::build(edges, activity_users);
  return ds;
}

void write_edges(std::ostream& out, const SocialGraph& g) {
  out << "# user_a,user_b\n";
  for (const Edge& e : g.edges()) out << e.a << ',' << e.b << '\n';
}

void write_activities(std::ostream& out, const std::vector<ActivityEvent>& events) {
  out << "# user,category,action_kind,multiplicity\n";
  for (const auto& ev : events) {
    out << ev.user << ',' << ev.category << ',' << ev.action_kind << ',' << ev.multiplicity
        << '\n';
  }
}

void write_dataset(const DatasetPaths& paths, const SocialGraph& g,
                   const std::vector<ActivityEvent>& events) {
  {
    std::ofstream out(paths.edges, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + paths.edges.string());
    write_edges(out, g);
  }
  std::ofstream out(paths.activities, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + paths.activities.string());
  write_activities(out, events);
}

}  // namespace personrec
