#include "personrec/recommenders.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "personrec/random.hpp"

namespace personrec {

namespace {

struct KindInfo {
  RecommenderKind kind;
  std::string_view name;
  std::string_view display;
};

constexpr KindInfo kKinds[] = {
    {RecommenderKind::Random, "random", "Random"},
    {RecommenderKind::InterestCosine, "interest-cosine", "Interest Based Cosine"},
    {RecommenderKind::InterestPearson, "interest-pearson", "Interest Based Pearson"},
    {RecommenderKind::FoF, "fof", "FoF"},
    {RecommenderKind::InterestCosinePlusLink, "interest-cosine-plus-link",
     "Interest Based Cosine plus link"},
    {RecommenderKind::InterestPearsonPlusLink, "interest-pearson-plus-link",
     "Interest Based Pearson plus link"},
};

const KindInfo& info(RecommenderKind kind) {
  for (const auto& k : kKinds) {
    if (k.kind == kind) return k;
  }
  throw std::logic_error("unhandled recommender kind");
}

SimilarityMetric metric_of(RecommenderKind kind) {
  return kind == RecommenderKind::InterestPearson || kind == RecommenderKind::InterestPearsonPlusLink
             ? SimilarityMetric::Pearson
             : SimilarityMetric::Cosine;
}

bool better(const ScoredCandidate& x, const ScoredCandidate& y) {
  if (x.score != y.score) return x.score > y.score;
  return x.candidate < y.candidate;
}

}  // namespace

std::string_view to_string(RecommenderKind kind) { return info(kind).name; }
std::string_view display_name(RecommenderKind kind) { return info(kind).display; }

std::optional<RecommenderKind> parse_recommender(std::string_view name) {
  for (const auto& k : kKinds) {
    if (k.name == name) return k.kind;
  }
  return std::nullopt;
}

bool uses_interest(RecommenderKind kind) {
  return kind != RecommenderKind::Random && kind != RecommenderKind::FoF;
}

bool is_plus_link(RecommenderKind kind) {
  return kind == RecommenderKind::InterestCosinePlusLink ||
         kind == RecommenderKind::InterestPearsonPlusLink;
}

void RecommendParams::validate() const {
  if (n < 1) throw std::invalid_argument("n: must be at least 1");
  if (!std::isfinite(score_threshold)) throw std::invalid_argument("score_threshold: must be finite");
  if (!std::isfinite(plus_link_min)) throw std::invalid_argument("plus_link_min: must be finite");
  if (!(plus_link_factor > 0.0) || !std::isfinite(plus_link_factor)) {
    throw std::invalid_argument("plus_link_factor: must be positive");
  }
}

double fof_score(const SocialGraph& g, UserId u1, UserId u2) {
  const auto i = g.index_of(u1);
  const auto j = g.index_of(u2);
  const std::size_t denom = g.degree_at(i) + g.degree_at(j);
  if (denom == 0) return 0.0;
  return 2.0 * static_cast<double>(g.common_friends_at(i, j)) / static_cast<double>(denom);
}

double plus_link_adjust(double score, bool has_common_friend, const RecommendParams& params) {
  if (has_common_friend && score >= params.plus_link_min) return score * params.plus_link_factor;
  return score;
}

std::vector<UserId> candidate_pool(RecommenderKind kind, UserId u, const SocialGraph& g,
                                   const InterestSpace& interests, const UserSet& eligible) {
  const auto ui = g.index_of(u);
  const auto friends = g.neighbors_at(ui);
  auto is_friend = [&](UserId v) {
    return g.contains(v) && std::binary_search(friends.begin(), friends.end(), g.index_of(v));
  };

  std::vector<UserId> pool;
  if (kind == RecommenderKind::FoF) {
    for (UserId v : g.fof_neighborhood(u)) {
      if (eligible.contains(v)) pool.push_back(v);
    }
    return pool;
  }
  for (UserId v : eligible) {
    if (v == u || is_friend(v)) continue;
    if (uses_interest(kind) && !interests.is_active(v)) continue;
    pool.push_back(v);
  }
  return pool;
}

void rank_top_n(std::vector<ScoredCandidate>& candidates, std::size_t n) {
  if (candidates.size() > n) {
    std::partial_sort(candidates.begin(), candidates.begin() + static_cast<std::ptrdiff_t>(n),
                      candidates.end(), better);
    candidates.resize(n);
  } else {
    std::sort(candidates.begin(), candidates.end(), better);
  }
}

std::vector<ScoredCandidate> recommend(RecommenderKind kind, UserId u, const SocialGraph& g,
                                       const InterestSpace& interests, const UserSet& eligible,
                                       const RecommendParams& params) {
  params.validate();
  const auto ui = g.index_of(u);

  // Friends and friends-of-friends of u, for exclusion and the common-friend flag.
  std::vector<std::uint8_t> marks(g.num_users(), 0);
  std::vector<SocialGraph::Index> fof;
  g.fof_at(ui, fof, marks);
  std::vector<std::uint8_t> ring(g.num_users(), 0);  // 1 friend, 2 fof
  ring[ui] = 1;
  for (auto f : g.neighbors_at(ui)) ring[f] = 1;
  for (auto w : fof) ring[w] = 2;
  auto ring_of = [&](UserId v) -> std::uint8_t {
    if (!g.contains(v)) return 0;
    return ring[g.index_of(v)];
  };

  std::vector<ScoredCandidate> scored;
  if (kind == RecommenderKind::FoF) {
    for (auto w : fof) {
      const UserId v = g.id_of(w);
      if (!eligible.contains(v)) continue;
      const double s = 2.0 * static_cast<double>(g.common_friends_at(ui, w)) /
                       static_cast<double>(g.degree_at(ui) + g.degree_at(w));
      if (s >= params.score_threshold) scored.push_back({v, s, true, false});
    }
  } else if (kind == RecommenderKind::Random) {
    const std::uint64_t user_seed = derive_seed(params.rng_seed, u);
    for (UserId v : eligible) {
      if (v == u) continue;
      const auto r = ring_of(v);
      if (r == 1) continue;
      const double s = unit_interval(derive_seed(user_seed, v));
      if (s >= params.score_threshold) scored.push_back({v, s, r == 2, false});
    }
  } else {
    const SimilarityMatrix& m = interests.matrix(metric_of(kind));
    const auto self = m.slot_of(u);
    if (!self || !interests.is_active(u)) {
      throw std::invalid_argument("user " + std::to_string(u) +
                                  " has no active interest profile");
    }
    const bool plus = is_plus_link(kind);
    const auto& actives = m.users();
    for (std::size_t j = 0; j < actives.size(); ++j) {
      const UserId v = actives[j];
      if (v == u || !eligible.contains(v)) continue;
      const auto r = ring_of(v);
      if (r == 1) continue;
      const bool common = r == 2;
      double s = m.at_slots(*self, j);
      bool boosted = false;
      if (plus) {
        boosted = common && s >= params.plus_link_min;
        s = plus_link_adjust(s, common, params);
      }
      if (s >= params.score_threshold) scored.push_back({v, s, common, boosted});
    }
  }
  rank_top_n(scored, params.n);
  return scored;
}

}  // namespace personrec
