#include "personrec/generator.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>

#include "personrec/random.hpp"

namespace personrec {

void GeneratorConfig::validate() const {
  auto fail = [](const std::string& msg) { throw std::invalid_argument(msg); };
  if (n_users < 2) fail("users: must be at least 2, got " + std::to_string(n_users));
  if (num_categories < 1 || num_categories > CategoryScheme::kMaxCategories) {
    fail("categories: must be in [1, " + std::to_string(CategoryScheme::kMaxCategories) + "]");
  }
  if (n_communities < 1) fail("communities: must be at least 1");
  if (!(homophily_weight >= 0.0 && homophily_weight <= 1.0)) {
    fail("alpha: homophily weight must be in [0, 1]");
  }
  if (!(target_mean_degree >= 0.0)) fail("mean_degree: must be nonnegative");
  if (target_mean_degree > static_cast<double>(n_users - 1)) {
    fail("mean_degree: " + std::to_string(target_mean_degree) + " is unreachable with " +
         std::to_string(n_users) + " users (maximum " + std::to_string(n_users - 1) + ")");
  }
  if (!(interest_overlap >= 0.0) || !std::isfinite(interest_overlap)) {
    fail("interest_overlap: must be nonnegative");
  }
  if (!(interest_concentration > 0.0)) fail("interest_concentration: must be positive");
  if (!(sociability_dispersion >= 0.0)) fail("sociability_dispersion: must be nonnegative");
  if (!(activity_mean >= 0.0)) fail("activity_mean: must be nonnegative");
  if (!(activity_dispersion > 0.0)) fail("activity_dispersion: must be positive");
}

namespace {

std::size_t sample_cumulative(const std::vector<double>& cumulative, Rng& rng) {
  const double x = rng.uniform() * cumulative.back();
  const auto it = std::upper_bound(cumulative.begin(), cumulative.end(), x);
  return std::min(static_cast<std::size_t>(it - cumulative.begin()), cumulative.size() - 1);
}

double cosine(const std::vector<double>& a, const std::vector<double>& b) {
  double dot = 0, na = 0, nb = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    dot += a[i] * b[i];
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  return na == 0 || nb == 0 ? 0.0 : dot / std::sqrt(na * nb);
}

}  // namespace

GeneratedDataset generate(const GeneratorConfig& cfg) {
  cfg.validate();
  const std::size_t n = cfg.n_users;
  const std::size_t c = cfg.num_categories;
  GeneratedDataset out;

  // Balanced community assignment in shuffled order.
  {
    Rng rng(derive_seed(cfg.seed, "communities"));
    out.community.resize(n);
    for (std::size_t u = 0; u < n; ++u) out.community[u] = u % cfg.n_communities;
    for (std::size_t i = n - 1; i > 0; --i) std::swap(out.community[i], out.community[rng.below(i + 1)]);
  }

  // Latent interests: community profile times per-user gamma noise.
  {
    Rng rng(derive_seed(cfg.seed, "interests"));
    std::gamma_distribution<double> noise(cfg.interest_concentration, 1.0);
    out.interest.assign(n, std::vector<double>(c, 0.0));
    for (std::size_t u = 0; u < n; ++u) {
      const std::size_t com = out.community[u];
      bool any_own = false;
      for (std::size_t i = 0; i < c; ++i) any_own |= (i % cfg.n_communities == com);
      double sum = 0.0;
      for (std::size_t i = 0; i < c; ++i) {
        const bool own = any_own ? i % cfg.n_communities == com : i == com % c;
        const double base = own ? 1.0 : cfg.interest_overlap;
        out.interest[u][i] = base * noise(rng);
        sum += out.interest[u][i];
      }
      if (sum <= 0.0) {
        out.interest[u].assign(c, 1.0 / static_cast<double>(c));
      } else {
        for (double& x : out.interest[u]) x /= sum;
      }
    }
  }

  // Activities: negative-binomial count, multinomial over categories.
  {
    Rng rng(derive_seed(cfg.seed, "activities"));
    const double shape = cfg.activity_dispersion;
    std::gamma_distribution<double> rate(shape, cfg.activity_mean / shape);
    const std::vector<double> kind_cumulative{0.2, 0.7, 1.0};
    for (std::size_t u = 0; u < n; ++u) {
      const double lambda = cfg.activity_mean > 0 ? rate(rng) : 0.0;
      std::poisson_distribution<std::uint64_t> count_dist(std::max(lambda, 1e-12));
      const std::uint64_t count = lambda > 0 ? count_dist(rng) : 0;
      std::vector<double> cumulative(c);
      std::partial_sum(out.interest[u].begin(), out.interest[u].end(), cumulative.begin());
      std::map<std::pair<std::size_t, std::size_t>, std::uint32_t> tally;
      for (std::uint64_t k = 0; k < count; ++k) {
        const std::size_t cat = sample_cumulative(cumulative, rng);
        const std::size_t kind = sample_cumulative(kind_cumulative, rng);
        ++tally[{cat, kind}];
      }
      for (const auto& [key, mult] : tally) {
        out.events.push_back({static_cast<UserId>(u), static_cast<std::uint32_t>(key.first),
                              kActionKinds[key.second], mult});
      }
    }
  }

  // Sequential tie formation.
  const auto target_edges = static_cast<std::size_t>(
      std::llround(cfg.target_mean_degree * static_cast<double>(n) / 2.0));
  std::vector<std::vector<std::uint32_t>> adj(n);
  std::vector<std::uint8_t> mark(n, 0);
  std::vector<Edge> edges;
  edges.reserve(target_edges);
  {
    Rng rng(derive_seed(cfg.seed, "edges"));
    std::vector<double> sociability_cum(n);
    {
      std::normal_distribution<double> z(0.0, 1.0);
      double acc = 0.0;
      for (std::size_t u = 0; u < n; ++u) {
        acc += std::exp(cfg.sociability_dispersion * z(rng));
        sociability_cum[u] = acc;
      }
    }
    std::vector<double> weights(n);
    std::vector<std::uint32_t> fof_count(n, 0);
    std::vector<std::uint32_t> fof_list;

    auto sample_weighted = [&]() -> std::optional<std::size_t> {
      double total = 0.0;
      for (std::size_t v = 0; v < n; ++v) total += weights[v];
      if (!(total > 0.0)) return std::nullopt;
      double x = rng.uniform() * total;
      std::size_t last = n;
      for (std::size_t v = 0; v < n; ++v) {
        if (weights[v] <= 0.0) continue;
        last = v;
        if (x < weights[v]) return v;
        x -= weights[v];
      }
      return last == n ? std::nullopt : std::optional<std::size_t>(last);
    };

    std::size_t stalls = 0;
    while (edges.size() < target_edges) {
      const std::size_t u = sample_cumulative(sociability_cum, rng);
      if (adj[u].size() + 1 >= n) {
        if (++stalls > 100 * n) throw std::runtime_error("generator: mean degree unreachable");
        continue;
      }
      mark[u] = 1;
      for (auto f : adj[u]) mark[f] = 1;

      std::optional<std::size_t> v;
      const bool homophily = rng.uniform() < cfg.homophily_weight;
      if (homophily) {
        for (std::size_t w = 0; w < n; ++w) {
          weights[w] = mark[w] ? 0.0 : cosine(out.interest[u], out.interest[w]);
        }
        v = sample_weighted();
      } else {
        fof_list.clear();
        for (auto f : adj[u]) {
          for (auto w : adj[f]) {
            if (mark[w]) continue;
            if (fof_count[w]++ == 0) fof_list.push_back(w);
          }
        }
        if (!fof_list.empty()) {
          std::sort(fof_list.begin(), fof_list.end());
          double total = 0.0;
          for (auto w : fof_list) total += fof_count[w];
          double x = rng.uniform() * total;
          v = fof_list.back();
          for (auto w : fof_list) {
            if (x < fof_count[w]) {
              v = w;
              break;
            }
            x -= fof_count[w];
          }
          for (auto w : fof_list) fof_count[w] = 0;
        }
      }
      if (!v) {
        // No support for the chosen mechanism: a chance encounter.
        for (std::size_t w = 0; w < n; ++w) weights[w] = mark[w] ? 0.0 : 1.0;
        v = sample_weighted();
      }
      mark[u] = 0;
      for (auto f : adj[u]) mark[f] = 0;
      if (!v) continue;

      adj[u].push_back(static_cast<std::uint32_t>(*v));
      adj[*v].push_back(static_cast<std::uint32_t>(u));
      edges.push_back(Edge{u, *v}.canonical());
      stalls = 0;
    }
  }

  std::vector<UserId> users(n);
  for (std::size_t u = 0; u < n; ++u) users[u] = u;
  out.graph = SocialGraph::build(edges, users);
  return out;
}

}  // namespace personrec
