#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "personrec/interest.hpp"
#include "personrec/social_graph.hpp"

namespace personrec {

enum class RecommenderKind {
  Random,
  InterestCosine,
  InterestPearson,
  FoF,
  InterestCosinePlusLink,
  InterestPearsonPlusLink,
};

inline constexpr RecommenderKind kAllRecommenders[] = {
    RecommenderKind::Random,
    RecommenderKind::InterestPearson,
    RecommenderKind::InterestCosine,
    RecommenderKind::FoF,
    RecommenderKind::InterestPearsonPlusLink,
    RecommenderKind::InterestCosinePlusLink,
};

/// Short machine name, e.g. "interest-cosine-plus-link".
std::string_view to_string(RecommenderKind kind);
/// Human-readable row label, e.g. "Interest Based Cosine plus link".
std::string_view display_name(RecommenderKind kind);
std::optional<RecommenderKind> parse_recommender(std::string_view name);

bool uses_interest(RecommenderKind kind);
bool is_plus_link(RecommenderKind kind);

struct ScoredCandidate {
  UserId candidate = 0;
  double score = 0.0;
  bool had_common_friend = false;
  bool boosted = false;

  bool operator==(const ScoredCandidate&) const = default;
};

struct RecommendParams {
  std::size_t n = 10;
  double score_threshold = 0.0;  // candidates scoring below are dropped
  double plus_link_min = 0.5;
  double plus_link_factor = 1.5;
  std::uint64_t rng_seed = 0;

  /// Throws std::invalid_argument naming the offending field.
  void validate() const;
};

/// 2 * common / (deg(u1) + deg(u2)); 0 when both degrees are zero.
double fof_score(const SocialGraph& g, UserId u1, UserId u2);

double plus_link_adjust(double score, bool has_common_friend, const RecommendParams& params);

/// Candidates the kind would score for `u`, ascending. Never contains `u`
/// or a friend of `u` in `g`.
std::vector<UserId> candidate_pool(RecommenderKind kind, UserId u, const SocialGraph& g,
                                   const InterestSpace& interests, const UserSet& eligible);

/// Top-n candidates for `u`: highest score first, ties by ascending id.
/// Throws UnknownUserError if `u` is not in `g`, std::invalid_argument if an
/// interest kind is asked for a user without an active profile.
std::vector<ScoredCandidate> recommend(RecommenderKind kind, UserId u, const SocialGraph& g,
                                       const InterestSpace& interests, const UserSet& eligible,
                                       const RecommendParams& params);

/// Sorts by descending score then ascending id and keeps the first `n`.
void rank_top_n(std::vector<ScoredCandidate>& candidates, std::size_t n);

}  // namespace personrec
