#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "personrec/interest.hpp"
#include "personrec/recommenders.hpp"
#include "personrec/report.hpp"
#include "personrec/social_graph.hpp"

namespace personrec {

struct EligibilityConfig {
  std::uint64_t min_friends = 3;
  std::uint64_t min_fof = 8;
  std::uint64_t min_activities = 3;
};

/// Largest user set in which every member has an active profile with at
/// least `min_activities` events, and at least `min_friends` friends and
/// `min_fof` friends-of-friends counted inside the set. Computed by
/// repeatedly filtering until nothing changes.
UserSet select_test_group(const SocialGraph& g, const ProfileMap& profiles,
                          const EligibilityConfig& cfg);

/// Summary figures for a user population, as used to describe a test group.
struct GroupStats {
  std::size_t users = 0;
  std::size_t edges = 0;
  std::size_t friendship_records = 0;  // both directions of every edge
  double mean_friends = 0.0;
  double mean_fof = 0.0;
  double mean_activities = 0.0;  // unweighted events; users without events count as 0
  double share_three_or_four_friends = 0.0;
  double share_three_or_four_activities = 0.0;
};

GroupStats describe_group(const SocialGraph& g, const ProfileMap& profiles);

struct FoldPlan {
  std::size_t k = 0;
  std::uint64_t seed = 0;
  std::vector<std::vector<Edge>> folds;  // each sorted, canonical edges
};

/// Seeded uniform partition of `edges` into k folds whose sizes differ by at
/// most one. Throws std::invalid_argument when k < 2 or edges.size() < k.
FoldPlan make_folds(std::span<const Edge> edges, std::size_t k, std::uint64_t seed);

/// Users losing fewer than `min_deleted` or more than `max_deleted` friends
/// in a fold are not evaluated in that fold.
struct SkipRule {
  std::uint64_t min_deleted = 1;
  std::uint64_t max_deleted = 10;

  void validate() const;
  [[nodiscard]] bool evaluates(std::uint64_t deleted) const {
    return deleted >= min_deleted && deleted <= max_deleted;
  }
};

/// Everything a method may look at when recommending for one user in one
/// fold. `deleted_partners` is the held-out truth; only oracle methods in
/// tests should read it.
struct CaseContext {
  const SocialGraph& training;
  const UserSet& eligible;
  UserId user;
  std::span<const UserId> deleted_partners;
  std::size_t fold_index;
};

using RecommendFn = std::function<std::vector<ScoredCandidate>(const CaseContext&)>;

struct Method {
  std::string name;
  RecommendFn recommend;
};

/// Wraps a built-in recommender. The random kind reseeds per fold from
/// params.rng_seed.
Method builtin_method(RecommenderKind kind, std::shared_ptr<const InterestSpace> interests,
                      const RecommendParams& params);

/// Receives every kept recommendation list. Must be thread-safe when the
/// evaluation runs folds on several threads.
using CaseObserver = std::function<void(const CaseContext&, std::string_view method,
                                        std::span<const ScoredCandidate>)>;

struct FoldResult {
  std::size_t fold = 0;
  std::uint64_t cases = 0;            // eligible users considered
  std::uint64_t evaluated_cases = 0;
  std::uint64_t fold_edges = 0;
  std::uint64_t deleted_pairs = 0;
  std::uint64_t deleted_edges = 0;    // fold edges touching an evaluated case
  std::vector<MethodRun> methods;
};

/// Holds out `fold` from `g`, then asks every method for recommendations for
/// each eligible user admitted by the skip rule. Recommendations of the user
/// or of a training friend are dropped before counting.
FoldResult run_fold(const SocialGraph& g, const UserSet& eligible, std::span<const Edge> fold,
                    std::span<const Method> methods, const SkipRule& skip,
                    std::size_t fold_index, const CaseObserver& observer = {});

struct EvalOptions {
  EligibilityConfig eligibility;
  std::size_t k = 10;
  std::uint64_t seed = 1;
  SkipRule skip;
  RecommendParams params;
  unsigned threads = 1;  // does not affect results
};

/// Full protocol: test-group selection, induced graph, k-fold holdout over
/// its edges, aggregation. Deterministic for fixed inputs and seed.
EvalReport cross_validate(const SocialGraph& g, const ProfileMap& profiles,
                          std::span<const Method> methods, const EvalOptions& options,
                          const CaseObserver& observer = {});

/// Convenience overload running built-in recommenders. The random kind's
/// seed is derived from options.seed.
EvalReport cross_validate(const SocialGraph& g, const ProfileMap& profiles,
                          std::span<const RecommenderKind> kinds, const EvalOptions& options,
                          const CaseObserver& observer = {});

}  // namespace personrec
