#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "personrec/interest.hpp"
#include "personrec/social_graph.hpp"

namespace personrec {

struct ParseIssue {
  std::string source;
  std::size_t line = 0;
  std::string message;

  [[nodiscard]] std::string to_string() const;
};

class ParseError : public std::runtime_error {
 public:
  explicit ParseError(std::vector<ParseIssue> issues);
  [[nodiscard]] const std::vector<ParseIssue>& issues() const { return issues_; }

 private:
  std::vector<ParseIssue> issues_;
};

struct ReadOptions {
  /// Skip malformed lines (they are still reported) instead of failing.
  bool lenient = false;
  /// The first non-comment line of the activity log is a header.
  bool activities_header = false;
};

/// `user_a,user_b` per line; blank lines and `#` comments are ignored.
/// Malformed lines are appended to `issues`.
std::vector<Edge> read_edges(std::istream& in, const std::string& source,
                             std::vector<ParseIssue>& issues);
/// `user,category,action_kind[,multiplicity]` per line.
std::vector<ActivityEvent> read_activities(std::istream& in, const std::string& source,
                                           bool has_header, std::vector<ParseIssue>& issues);

struct DatasetPaths {
  std::filesystem::path edges;
  std::filesystem::path activities;
};

struct Dataset {
  SocialGraph graph;  // includes users that only appear in the activity log
  std::vector<ActivityEvent> events;
  std::vector<ParseIssue> issues;
};

/// Throws ParseError on malformed lines unless options.lenient, and
/// std::runtime_error when a file cannot be opened.
Dataset load_dataset(const DatasetPaths& paths, const ReadOptions& options = {});

void write_edges(std::ostream& out, const SocialGraph& g);
void write_activities(std::ostream& out, const std::vector<ActivityEvent>& events);
void write_dataset(const DatasetPaths& paths, const SocialGraph& g,
                   const std::vector<ActivityEvent>& events);

}  // namespace personrec
