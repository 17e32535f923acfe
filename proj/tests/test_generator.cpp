#include <random>
#include <set>

#include "doctest.h"
#include "oracles.hpp"
#include "personrec/evaluation.hpp"
#include "personrec/generator.hpp"

using namespace personrec;

namespace {

/// Degree-preserving randomization by repeated double-edge swaps.
std::vector<Edge> rewire(std::vector<Edge> edges, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::set<Edge> present(edges.begin(), edges.end());
  for (std::size_t step = 0; step < 10 * edges.size(); ++step) {
    const std::size_t i = rng() % edges.size(), j = rng() % edges.size();
    Edge x = edges[i], y = edges[j];
    if (rng() % 2) std::swap(y.a, y.b);
    const Edge nx = Edge{x.a, y.b}.canonical(), ny = Edge{y.a, x.b}.canonical();
    if (nx.a == nx.b || ny.a == ny.b || nx == ny || present.count(nx) || present.count(ny)) continue;
    present.erase(x);
    present.erase(edges[j]);
    present.insert(nx);
    present.insert(ny);
    edges[i] = nx;
    edges[j] = ny;
  }
  return edges;
}

}  // namespace

TEST_CASE("generator is deterministic per seed") {
  GeneratorConfig cfg;
  cfg.n_users = 120;
  cfg.seed = 3;
  const auto a = generate(cfg);
  const auto b = generate(cfg);
  CHECK(a.graph == b.graph);
  CHECK(a.events == b.events);
  cfg.seed = 4;
  CHECK_FALSE(generate(cfg).graph == a.graph);
}

TEST_CASE("generated data satisfies the data-model invariants") {
  GeneratorConfig cfg;
  cfg.n_users = 200;
  cfg.num_categories = 7;
  cfg.seed = 12;
  const auto ds = generate(cfg);
  CHECK(ds.graph.num_users() == 200);
  CHECK(ds.graph.num_edges() == 1200);  // round(12 * 200 / 2)
  CHECK(ds.graph.build_stats().self_loops == 0);
  CHECK(ds.graph.build_stats().duplicates == 0);
  for (const auto& ev : ds.events) {
    CHECK(ev.category < 7);
    CHECK(ev.multiplicity >= 1);
    CHECK(ev.user < 200);
  }
  const auto built = build_profiles(ds.events, CategoryScheme{7, {}}, ActionWeights{}, 0);
  CHECK(built.rejected.empty());
}

TEST_CASE("generator rejects invalid configurations") {
  GeneratorConfig cfg;
  cfg.n_users = 0;
  CHECK_THROWS_AS(generate(cfg), std::invalid_argument);
  cfg.n_users = 10;
  cfg.target_mean_degree = 10;
  CHECK_THROWS_WITH_AS(generate(cfg), doctest::Contains("unreachable"), std::invalid_argument);
  cfg.target_mean_degree = 9;  // complete graph is reachable
  CHECK(generate(cfg).graph.num_edges() == 45);
  cfg.homophily_weight = 1.5;
  CHECK_THROWS_AS(generate(cfg), std::invalid_argument);
}

TEST_CASE("pure homophily with orthogonal communities keeps ties inside communities") {
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    GeneratorConfig cfg;
    cfg.n_users = 160;
    cfg.n_communities = 2;
    cfg.homophily_weight = 1.0;
    cfg.interest_overlap = 0.0;
    cfg.target_mean_degree = 8;
    cfg.seed = seed;
    const auto ds = generate(cfg);
    std::size_t within = 0, across = 0;
    for (const auto& e : ds.graph.edges()) {
      (ds.community[e.a] == ds.community[e.b] ? within : across) += 1;
    }
    CHECK(across < within);
  }
}

TEST_CASE("pure triadic closure clusters more than a degree-matched rewiring") {
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    GeneratorConfig cfg;
    cfg.n_users = 200;
    cfg.homophily_weight = 0.0;
    cfg.target_mean_degree = 8;
    cfg.seed = seed;
    const auto ds = generate(cfg);
    const auto edges = ds.graph.edges();
    const double grown = oracle::clustering(oracle::adjacency(edges));
    const double shuffled = oracle::clustering(oracle::adjacency(rewire(edges, seed)));
    CHECK(grown > shuffled);
  }
}

TEST_CASE("default mixture yields a nonempty test group") {
  GeneratorConfig cfg;
  cfg.n_users = 300;
  cfg.seed = 8;
  const auto ds = generate(cfg);
  const auto profiles = build_profiles(ds.events, CategoryScheme{}, ActionWeights{}, 3).profiles;
  const UserSet group = select_test_group(ds.graph, profiles, EligibilityConfig{});
  CHECK(group.size() > 150);
}
