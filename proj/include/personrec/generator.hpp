#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "personrec/interest.hpp"
#include "personrec/social_graph.hpp"

namespace personrec {

/// Seeded synthetic community of interest. Users belong to interest
/// communities; friendships grow one at a time, each new tie chosen either by
/// interest similarity (homophily, probability alpha) or by shared friends
/// (triadic closure, probability 1 - alpha).
struct GeneratorConfig {
  std::size_t n_users = 350;
  std::size_t num_categories = 11;
  std::size_t n_communities = 4;
  double homophily_weight = 0.5;
  double target_mean_degree = 12.0;
  /// Off-community category mass relative to an own category; 0 makes the
  /// community interest profiles orthogonal.
  double interest_overlap = 0.1;
  /// Gamma shape of the per-user perturbation of the community profile.
  double interest_concentration = 2.0;
  /// Log-normal sigma of per-user weights for initiating new ties.
  double sociability_dispersion = 0.8;
  double activity_mean = 80.0;
  /// Negative-binomial shape of the activity count; smaller is more skewed.
  double activity_dispersion = 1.0;
  std::uint64_t seed = 1;

  [[nodiscard]] double closure_weight() const { return 1.0 - homophily_weight; }
  /// Throws std::invalid_argument naming the offending field.
  void validate() const;
};

struct GeneratedDataset {
  SocialGraph graph;
  std::vector<ActivityEvent> events;
  std::vector<std::size_t> community;        // by user id (ids are 0..n-1)
  std::vector<std::vector<double>> interest;  // latent category distribution per user
};

inline constexpr const char* kActionKinds[] = {"create_post", "comment", "worth_living_point"};

GeneratedDataset generate(const GeneratorConfig& cfg);

}  // namespace personrec
