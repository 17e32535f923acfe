#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace personrec {

struct Rates {
  double precision = 0.0;
  double recall = 0.0;
  double f_measure = 0.0;

  bool operator==(const Rates&) const = default;
};

/// precision = tp / recommendations, recall = tp / relevant, f = harmonic
/// mean. Each rate is 0 when its denominator is 0.
Rates compute_rates(std::uint64_t true_positives, std::uint64_t recommendations,
                    std::uint64_t relevant);

/// Counts for one method in one fold (run).
struct MethodRun {
  std::size_t run = 0;
  std::string method;
  std::uint64_t evaluated_cases = 0;
  std::uint64_t recommendations = 0;  // A
  std::uint64_t true_positives = 0;
  std::uint64_t false_positives = 0;  // A - TP
  std::uint64_t false_negatives = 0;  // deleted_pairs - TP
  std::uint64_t deleted_pairs = 0;    // (user, deleted partner) pairs over evaluated cases
  std::uint64_t deleted_edges = 0;    // fold edges touching an evaluated case
  std::uint64_t reproduced_edges = 0; // of those, recovered from either endpoint
  std::uint64_t beyond_fof = 0;       // recommended users at training distance > 2
  Rates rates;

  bool operator==(const MethodRun&) const = default;
};

/// Totals over all runs. `micro` pools counts before dividing, `macro`
/// averages the per-run rates.
struct MethodSummary {
  std::string method;
  std::uint64_t recommendations = 0;
  std::uint64_t true_positives = 0;
  std::uint64_t false_positives = 0;
  std::uint64_t false_negatives = 0;
  std::uint64_t deleted_pairs = 0;
  std::uint64_t deleted_edges = 0;
  std::uint64_t reproduced_edges = 0;
  std::uint64_t beyond_fof = 0;
  Rates micro;
  Rates macro;
  double recall_edge_base = 0.0;  // reproduced_edges / deleted_edges
  double novelty = 0.0;           // beyond_fof / recommendations

  bool operator==(const MethodSummary&) const = default;
};

struct EvalReport {
  std::vector<std::pair<std::string, std::string>> metadata;
  std::vector<MethodRun> runs;
  std::vector<MethodSummary> summary;

  bool operator==(const EvalReport&) const = default;

  [[nodiscard]] const MethodSummary* find_summary(const std::string& method) const;
  [[nodiscard]] const std::string* find_metadata(const std::string& key) const;
};

/// JSON Lines: one "meta" record, one "run" record per method per fold,
/// then one "summary" record per method. Field order is fixed.
void write_report(const EvalReport& report, std::ostream& out);
void write_report(const EvalReport& report, const std::filesystem::path& path);
EvalReport read_report(std::istream& in);
EvalReport read_report(const std::filesystem::path& path);

/// Plain-text table: recommender, total recommendations, TP, precision,
/// recall, f-measure.
std::string format_summary_table(const EvalReport& report);

}  // namespace personrec
