#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "personrec/social_graph.hpp"

namespace personrec {

/// One categorized platform action (post, comment, awarded point, ...).
struct ActivityEvent {
  UserId user = 0;
  std::uint32_t category = 0;
  std::string action_kind;
  std::uint32_t multiplicity = 1;

  bool operator==(const ActivityEvent&) const = default;
};

struct CategoryScheme {
  static constexpr std::size_t kMaxCategories = 1024;

  std::size_t num_categories = 11;
  std::vector<std::string> names;  // optional labels

  void validate() const;
};

/// Per-action-kind weights; unlisted kinds weigh 1.
class ActionWeights {
 public:
  ActionWeights() = default;

  /// Throws std::invalid_argument for negative or non-finite weights.
  void set(const std::string& kind, double weight);
  [[nodiscard]] double weight(const std::string& kind) const;
  [[nodiscard]] const std::map<std::string, double>& explicit_weights() const { return weights_; }

 private:
  std::map<std::string, double> weights_;
};

struct InterestProfile {
  UserId user = 0;
  std::vector<double> raw;         // weighted category counts
  std::vector<double> normalized;  // raw / total; all zero when inactive
  double total = 0.0;
  std::uint64_t event_count = 0;   // unweighted, sum of multiplicities

  [[nodiscard]] bool active() const { return total > 0.0; }
  bool operator==(const InterestProfile&) const = default;
};

using ProfileMap = std::map<UserId, InterestProfile>;

struct ProfileBuildResult {
  ProfileMap profiles;
  std::vector<std::string> rejected;  // one diagnostic per invalid event
  std::size_t below_minimum = 0;      // users dropped by min_activities
};

/// Accumulates weighted category counts per user. Users whose unweighted
/// event count is below `min_activities` are left out of the result; events
/// with an out-of-range category are rejected with a diagnostic.
ProfileBuildResult build_profiles(std::span<const ActivityEvent> events,
                                  const CategoryScheme& scheme,
                                  const ActionWeights& weights,
                                  std::uint64_t min_activities);

enum class SimilarityMetric { Cosine, Pearson };

const char* to_string(SimilarityMetric metric);

/// dot(a,b) / (|a| |b|); 0 when either norm is zero.
double cosine_similarity(std::span<const double> a, std::span<const double> b);
/// Correlation over the category index; 0 when either vector is constant.
/// Requires at least two entries.
double pearson_similarity(std::span<const double> a, std::span<const double> b);
double similarity(SimilarityMetric metric, std::span<const double> a,
                  std::span<const double> b);

/// Dense symmetric similarity over the active users of a profile map.
class SimilarityMatrix {
 public:
  SimilarityMatrix() = default;
  SimilarityMatrix(const ProfileMap& profiles, SimilarityMetric metric);

  [[nodiscard]] SimilarityMetric metric() const { return metric_; }
  [[nodiscard]] const std::vector<UserId>& users() const { return users_; }
  /// Number of stored unordered pairs.
  [[nodiscard]] std::size_t pair_count() const {
    return users_.size() < 2 ? 0 : users_.size() * (users_.size() - 1) / 2;
  }
  /// Empty for the diagonal or when either user is not active.
  [[nodiscard]] std::optional<double> find(UserId a, UserId b) const;

  [[nodiscard]] std::optional<std::size_t> slot_of(UserId u) const;
  [[nodiscard]] double at_slots(std::size_t i, std::size_t j) const {
    return values_[i * users_.size() + j];
  }

 private:
  SimilarityMetric metric_ = SimilarityMetric::Cosine;
  std::vector<UserId> users_;
  std::vector<double> values_;
};

inline SimilarityMatrix similarity_matrix(const ProfileMap& profiles, SimilarityMetric metric) {
  return SimilarityMatrix(profiles, metric);
}

/// Profiles plus both similarity matrices, built once and shared read-only
/// by every recommender and fold.
class InterestSpace {
 public:
  InterestSpace() = default;
  explicit InterestSpace(ProfileMap profiles);

  [[nodiscard]] const ProfileMap& profiles() const { return profiles_; }
  [[nodiscard]] bool is_active(UserId u) const;
  [[nodiscard]] const SimilarityMatrix& matrix(SimilarityMetric metric) const {
    return metric == SimilarityMetric::Cosine ? cosine_ : pearson_;
  }

 private:
  ProfileMap profiles_;
  SimilarityMatrix cosine_;
  SimilarityMatrix pearson_;
};

}  // namespace personrec
