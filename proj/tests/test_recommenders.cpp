#include <cmath>
#include <numeric>
#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "personrec/recommenders.hpp"

using namespace personrec;

namespace {

InterestProfile profile(UserId u, std::vector<double> v) {
  InterestProfile p;
  p.user = u;
  p.raw = v;
  p.normalized = v;
  p.total = 0.0;
  for (double x : v) p.total += x;
  p.event_count = 10;
  return p;
}

UserSet all_users(const SocialGraph& g) { return UserSet(g.users()); }

struct Instance {
  std::vector<Edge> edges;
  SocialGraph graph;
  ProfileMap profiles;
};

Instance random_instance(std::mt19937_64& rng, std::size_t n, double p, std::size_t c) {
  Instance inst;
  inst.edges = oracle::random_edges(rng, n, p);
  std::vector<UserId> users(n);
  for (std::size_t i = 0; i < n; ++i) users[i] = i;
  inst.graph = build_graph(inst.edges, users);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (UserId u = 0; u < n; ++u) {
    if (unit(rng) < 0.15) continue;  // no profile
    std::vector<double> v(c);
    double sum = 0;
    for (auto& x : v) sum += (x = unit(rng) < 0.4 ? 0.0 : unit(rng));
    if (sum == 0) v[0] = sum = 1;
    for (auto& x : v) x /= sum;
    inst.profiles.emplace(u, profile(u, v));
  }
  return inst;
}

/// Scores every non-friend with the textbook formula, then sorts.
std::vector<std::pair<UserId, double>> brute_force(RecommenderKind kind, UserId u,
                                                   const Instance& inst,
                                                   const RecommendParams& params) {
  const auto adj = oracle::adjacency(inst.edges, inst.graph.users());
  std::vector<std::pair<UserId, double>> scored;
  for (UserId v : inst.graph.users()) {
    if (v == u || adj.at(u).count(v)) continue;
    double s = 0;
    const bool common = oracle::common(adj, u, v) > 0;
    if (kind == RecommenderKind::FoF) {
      if (!common) continue;
      s = oracle::fof(adj, u, v);
    } else {
      if (!inst.profiles.count(v)) continue;
      const auto& a = inst.profiles.at(u).normalized;
      const auto& b = inst.profiles.at(v).normalized;
      const bool pearson = kind == RecommenderKind::InterestPearson ||
                           kind == RecommenderKind::InterestPearsonPlusLink;
      s = pearson ? oracle::pearson(a, b) : oracle::cosine(a, b);
      if (is_plus_link(kind) && common && s >= params.plus_link_min) s *= params.plus_link_factor;
    }
    if (s >= params.score_threshold) scored.emplace_back(v, s);
  }
  std::sort(scored.begin(), scored.end(), [](const auto& x, const auto& y) {
    return x.second != y.second ? x.second > y.second : x.first < y.first;
  });
  if (scored.size() > params.n) scored.resize(params.n);
  return scored;
}

}  // namespace

TEST_CASE("recommender names round-trip") {
  for (RecommenderKind k : kAllRecommenders) {
    CHECK(parse_recommender(to_string(k)) == k);
    CHECK_FALSE(display_name(k).empty());
  }
  CHECK_FALSE(parse_recommender("nope").has_value());
}

TEST_CASE("fof_score closed form") {
  // u1 = 1 adj {10,11,12,13}; u2 = 2 adj {10,11,20,21,22,23}: 2*2/(4+6)
  const SocialGraph g = build_graph(std::vector<Edge>{
      {1, 10}, {1, 11}, {1, 12}, {1, 13}, {2, 10}, {2, 11}, {2, 20}, {2, 21}, {2, 22}, {2, 23}});
  CHECK(fof_score(g, 1, 2) == doctest::Approx(0.4).epsilon(1e-12));
  CHECK(fof_score(g, 2, 1) == fof_score(g, 1, 2));
  CHECK(fof_score(g, 1, 20) == 0.0);

  const SocialGraph same = build_graph(std::vector<Edge>{{1, 5}, {1, 6}, {1, 7}, {2, 5}, {2, 6}, {2, 7}});
  CHECK(fof_score(same, 1, 2) == 1.0);

  const SocialGraph isolated = build_graph({}, std::vector<UserId>{1, 2});
  CHECK(fof_score(isolated, 1, 2) == 0.0);
  CHECK_THROWS_AS(fof_score(isolated, 1, 3), UnknownUserError);
}

TEST_CASE("fof_score properties") {
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 30; ++trial) {
    const auto edges = oracle::random_edges(rng, 20, 0.2);
    std::vector<UserId> users(20);
    std::iota(users.begin(), users.end(), UserId{0});
    const SocialGraph g = build_graph(edges, users);
    for (UserId u : users) {
      for (UserId v : users) {
        const double s = fof_score(g, u, v);
        CHECK(s == fof_score(g, v, u));
        CHECK(s >= 0.0);
        CHECK(s <= 1.0);
      }
    }
  }
}

TEST_CASE("fof_score is monotone in common friends at fixed degree sum") {
  std::mt19937_64 rng(8);
  int checked = 0;
  for (int trial = 0; trial < 300; ++trial) {
    auto edges = oracle::random_edges(rng, 15, 0.25);
    std::vector<UserId> users(15);
    std::iota(users.begin(), users.end(), UserId{0});
    const SocialGraph g = build_graph(edges, users);
    // Rewire one of v's private friends x to a friend w of u that v lacks.
    const UserId u = 0, v = 1;
    const auto nu = g.neighbors(u);
    const auto nv = g.neighbors(v);
    UserId x = 99, w = 99;
    for (UserId c : nv) {
      if (c != u && !g.are_friends(u, c)) x = c;
    }
    for (UserId c : nu) {
      if (c != v && !g.are_friends(v, c)) w = c;
    }
    if (x == 99 || w == 99) continue;
    std::vector<Edge> rewired;
    for (const Edge& e : g.edges()) {
      if (!(e == Edge{v, x}.canonical())) rewired.push_back(e);
    }
    rewired.push_back({v, w});
    const SocialGraph h = build_graph(rewired, users);
    CHECK(h.degree(u) + h.degree(v) == g.degree(u) + g.degree(v));
    CHECK(h.common_friends(u, v) == g.common_friends(u, v) + 1);
    CHECK(fof_score(h, u, v) > fof_score(g, u, v));
    ++checked;
  }
  CHECK(checked > 20);
}

TEST_CASE("plus_link_adjust") {
  const RecommendParams p;
  CHECK(plus_link_adjust(0.6, true, p) == doctest::Approx(0.9));
  CHECK(plus_link_adjust(0.4, true, p) == 0.4);
  CHECK(plus_link_adjust(0.6, false, p) == 0.6);
  CHECK(plus_link_adjust(0.5, true, p) == doctest::Approx(0.75));
  CHECK(plus_link_adjust(0.9, true, p) == doctest::Approx(1.35));  // no cap
}

TEST_CASE("candidate_pool") {
  const SocialGraph path = build_graph(std::vector<Edge>{{1, 2}, {2, 3}});
  const InterestSpace none;
  CHECK(candidate_pool(RecommenderKind::FoF, 1, path, none, UserSet{1, 2, 3}) ==
        std::vector<UserId>{3});

  const SocialGraph g = build_graph(std::vector<Edge>{{1, 2}, {1, 3}}, std::vector<UserId>{4, 5});
  CHECK(candidate_pool(RecommenderKind::Random, 1, g, none, UserSet{1, 2, 3, 4, 5}).size() == 2);

  // 10 users, users 7..9 inactive, user 0 has friends {1, 2}.
  ProfileMap profiles;
  for (UserId u = 0; u < 10; ++u) {
    InterestProfile p = profile(u, {0.5, 0.5});
    if (u >= 7) p = profile(u, {0.0, 0.0});
    profiles.emplace(u, p);
  }
  const SocialGraph h = build_graph(std::vector<Edge>{{0, 1}, {0, 2}, {3, 4}},
                                    std::vector<UserId>{0, 1, 2, 3, 4, 5, 6, 7, 8, 9});
  const InterestSpace space(profiles);
  const UserSet everyone(h.users());
  const auto pool = candidate_pool(RecommenderKind::InterestCosine, 0, h, space, everyone);
  CHECK(pool.size() == 10 - 3 - 3);
  CHECK(pool == std::vector<UserId>{3, 4, 5, 6});
}

TEST_CASE("rank_top_n breaks ties by ascending id") {
  std::vector<ScoredCandidate> c{{30, 0.1}, {20, 0.9}, {10, 0.9}};
  rank_top_n(c, 2);
  REQUIRE(c.size() == 2);
  CHECK(c[0].candidate == 10);
  CHECK(c[1].candidate == 20);
}

TEST_CASE("recommend returns fewer than n when the pool is small") {
  const SocialGraph g = build_graph(std::vector<Edge>{{1, 2}, {2, 3}, {2, 4}, {2, 5}});
  const auto recs = recommend(RecommenderKind::FoF, 1, g, InterestSpace{}, all_users(g), {});
  CHECK(recs.size() == 3);
  for (const auto& r : recs) CHECK(r.had_common_friend);
  CHECK_THROWS_AS(recommend(RecommenderKind::FoF, 9, g, InterestSpace{}, all_users(g), {}),
                  UnknownUserError);
  CHECK_THROWS_AS(recommend(RecommenderKind::InterestCosine, 1, g, InterestSpace{}, all_users(g), {}),
                  std::invalid_argument);
}

TEST_CASE("plus-link boost reorders a common-friend candidate above a stronger stranger") {
  // u=1 shares friend 50 with X=2; Y=3 shares nobody.
  const SocialGraph g = build_graph(std::vector<Edge>{{1, 50}, {2, 50}, {3, 60}});
  ProfileMap profiles;
  profiles.emplace(1, profile(1, {1.0, 0.0}));
  profiles.emplace(2, profile(2, {0.55, std::sqrt(1 - 0.55 * 0.55)}));
  profiles.emplace(3, profile(3, {0.7, std::sqrt(1 - 0.7 * 0.7)}));
  const InterestSpace space(profiles);
  const UserSet eligible{1, 2, 3};

  const auto plain = recommend(RecommenderKind::InterestCosine, 1, g, space, eligible, {});
  REQUIRE(plain.size() == 2);
  CHECK(plain[0].candidate == 3);

  const auto boosted = recommend(RecommenderKind::InterestCosinePlusLink, 1, g, space, eligible, {});
  REQUIRE(boosted.size() == 2);
  CHECK(boosted[0].candidate == 2);
  CHECK(boosted[0].score == doctest::Approx(0.825));
  CHECK(boosted[0].boosted);
  CHECK(boosted[0].had_common_friend);
  CHECK(boosted[1].candidate == 3);
  CHECK(boosted[1].score == doctest::Approx(0.7));
  CHECK_FALSE(boosted[1].boosted);
}

TEST_CASE("recommend matches a brute-force ranking oracle") {
  std::mt19937_64 rng(1234);
  for (int trial = 0; trial < 60; ++trial) {
    const Instance inst = random_instance(rng, 25, 0.15, 5);
    const InterestSpace space(inst.profiles);
    const UserSet eligible(inst.graph.users());
    RecommendParams params;
    params.n = 1 + rng() % 8;
    params.score_threshold = trial % 3 == 0 ? -1.0 : 0.0;
    for (UserId u : inst.graph.users()) {
      for (RecommenderKind kind : kAllRecommenders) {
        if (kind == RecommenderKind::Random) continue;
        if (uses_interest(kind) && !inst.profiles.count(u)) continue;
        const auto got = recommend(kind, u, inst.graph, space, eligible, params);
        const auto want = brute_force(kind, u, inst, params);
        REQUIRE(got.size() == want.size());
        for (std::size_t i = 0; i < got.size(); ++i) {
          CHECK(got[i].candidate == want[i].first);
          CHECK(std::abs(got[i].score - want[i].second) < 1e-9);
        }
      }
    }
  }
}

TEST_CASE("recommend never returns the user or a current friend") {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 40; ++trial) {
    const Instance inst = random_instance(rng, 30, 0.2, 4);
    const InterestSpace space(inst.profiles);
    const UserSet eligible(inst.graph.users());
    RecommendParams params;
    params.rng_seed = trial;
    for (UserId u : inst.graph.users()) {
      for (RecommenderKind kind : kAllRecommenders) {
        if (uses_interest(kind) && !inst.profiles.count(u)) continue;
        for (const auto& r : recommend(kind, u, inst.graph, space, eligible, params)) {
          CHECK(r.candidate != u);
          CHECK_FALSE(inst.graph.are_friends(u, r.candidate));
          CHECK(r.score >= params.score_threshold);
          if (r.boosted) CHECK(r.had_common_friend);
        }
      }
    }
  }
}

TEST_CASE("plus-link keeps the relative order within boosted and within unboosted") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 40; ++trial) {
    const Instance inst = random_instance(rng, 30, 0.15, 4);
    const InterestSpace space(inst.profiles);
    const UserSet eligible(inst.graph.users());
    RecommendParams params;
    params.n = 30;
    for (UserId u : inst.graph.users()) {
      if (!inst.profiles.count(u)) continue;
      const auto base = recommend(RecommenderKind::InterestCosine, u, inst.graph, space, eligible, params);
      const auto plus = recommend(RecommenderKind::InterestCosinePlusLink, u, inst.graph, space, eligible, params);
      for (bool group : {true, false}) {
        std::vector<UserId> from_plus;
        std::set<UserId> members;
        for (const auto& r : plus) {
          if (r.boosted == group) {
            from_plus.push_back(r.candidate);
            members.insert(r.candidate);
          }
        }
        std::vector<UserId> from_base;
        for (const auto& r : base) {
          if (members.count(r.candidate)) from_base.push_back(r.candidate);
        }
        CHECK(from_plus == from_base);
      }
    }
  }
}

TEST_CASE("random recommender is reproducible per seed") {
  std::mt19937_64 rng(6);
  const Instance inst = random_instance(rng, 30, 0.1, 3);
  const UserSet eligible(inst.graph.users());
  RecommendParams a;
  a.rng_seed = 17;
  RecommendParams b = a;
  b.rng_seed = 18;
  const auto first = recommend(RecommenderKind::Random, 0, inst.graph, InterestSpace{}, eligible, a);
  const auto again = recommend(RecommenderKind::Random, 0, inst.graph, InterestSpace{}, eligible, a);
  const auto other = recommend(RecommenderKind::Random, 0, inst.graph, InterestSpace{}, eligible, b);
  CHECK(first == again);
  CHECK_FALSE(first == other);
  for (const auto& r : first) {
    CHECK(r.score >= 0.0);
    CHECK(r.score < 1.0);
  }
}

TEST_CASE("RecommendParams validation") {
  RecommendParams p;
  p.n = 0;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
  p.n = 1;
  p.plus_link_factor = 0.0;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
}
