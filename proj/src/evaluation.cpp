#include "personrec/evaluation.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <exception>
#include <stdexcept>
#include <thread>

#include "personrec/random.hpp"

namespace personrec {

UserSet select_test_group(const SocialGraph& g, const ProfileMap& profiles,
                          const EligibilityConfig& cfg) {
  std::vector<UserId> keep;
  for (UserId u : g.users()) {
    const auto it = profiles.find(u);
    if (it != profiles.end() && it->second.active() &&
        it->second.event_count >= cfg.min_activities) {
      keep.push_back(u);
    }
  }
  UserSet group(std::move(keep));
  for (;;) {
    const SocialGraph sub = g.induced(group);
    std::vector<UserId> next;
    std::vector<std::uint8_t> marks(sub.num_users(), 0);
    std::vector<SocialGraph::Index> fof;
    for (SocialGraph::Index i = 0; i < sub.num_users(); ++i) {
      if (sub.degree_at(i) < cfg.min_friends) continue;
      fof.clear();
      sub.fof_at(i, fof, marks);
      if (fof.size() < cfg.min_fof) continue;
      next.push_back(sub.id_of(i));
    }
    if (next.size() == group.size()) return group;
    group = UserSet(std::move(next));
  }
}

GroupStats describe_group(const SocialGraph& g, const ProfileMap& profiles) {
  GroupStats s;
  s.users = g.num_users();
  s.edges = g.num_edges();
  s.friendship_records = 2 * s.edges;
  if (s.users == 0) return s;
  std::vector<std::uint8_t> marks(g.num_users(), 0);
  std::vector<SocialGraph::Index> fof;
  double fof_total = 0.0, activities = 0.0;
  std::size_t few_friends = 0, few_activities = 0;
  for (SocialGraph::Index i = 0; i < g.num_users(); ++i) {
    fof.clear();
    g.fof_at(i, fof, marks);
    fof_total += static_cast<double>(fof.size());
    const auto d = g.degree_at(i);
    if (d == 3 || d == 4) ++few_friends;
    const auto it = profiles.find(g.id_of(i));
    const std::uint64_t events = it == profiles.end() ? 0 : it->second.event_count;
    activities += static_cast<double>(events);
    if (events == 3 || events == 4) ++few_activities;
  }
  const auto n = static_cast<double>(s.users);
  s.mean_friends = static_cast<double>(s.friendship_records) / n;
  s.mean_fof = fof_total / n;
  s.mean_activities = activities / n;
  s.share_three_or_four_friends = static_cast<double>(few_friends) / n;
  s.share_three_or_four_activities = static_cast<double>(few_activities) / n;
  return s;
}

FoldPlan make_folds(std::span<const Edge> edges, std::size_t k, std::uint64_t seed) {
  if (k < 2) throw std::invalid_argument("k: must be at least 2, got " + std::to_string(k));
  if (edges.size() < k) {
    throw std::invalid_argument("make_folds: " + std::to_string(edges.size()) +
                                " edges cannot fill " + std::to_string(k) + " folds");
  }
  std::vector<Edge> order;
  order.reserve(edges.size());
  for (const Edge& e : edges) order.push_back(e.canonical());
  std::sort(order.begin(), order.end());

  Rng rng(seed);
  for (std::size_t i = order.size() - 1; i > 0; --i) {
    std::swap(order[i], order[rng.below(i + 1)]);
  }
  FoldPlan plan;
  plan.k = k;
  plan.seed = seed;
  plan.folds.resize(k);
  for (std::size_t i = 0; i < order.size(); ++i) plan.folds[i % k].push_back(order[i]);
  for (auto& fold : plan.folds) std::sort(fold.begin(), fold.end());
  return plan;
}

void SkipRule::validate() const {
  if (min_deleted > max_deleted) {
    throw std::invalid_argument("skip rule: min_deleted (" + std::to_string(min_deleted) +
                                ") exceeds max_deleted (" + std::to_string(max_deleted) + ")");
  }
}

Method builtin_method(RecommenderKind kind, std::shared_ptr<const InterestSpace> interests,
                      const RecommendParams& params) {
  params.validate();
  if (!interests) interests = std::make_shared<InterestSpace>();
  return Method{std::string(to_string(kind)),
                [kind, interests, params](const CaseContext& ctx) {
                  RecommendParams p = params;
                  p.rng_seed = derive_seed(params.rng_seed, ctx.fold_index);
                  return recommend(kind, ctx.user, ctx.training, *interests, ctx.eligible, p);
                }};
}

FoldResult run_fold(const SocialGraph& g, const UserSet& eligible, std::span<const Edge> fold,
                    std::span<const Method> methods, const SkipRule& skip,
                    std::size_t fold_index, const CaseObserver& observer) {
  skip.validate();
  const SocialGraph training = g.without_edges(fold);
  const std::size_t n = g.num_users();

  std::vector<std::vector<UserId>> partners(n);
  for (const Edge& e : fold) {
    const auto a = g.index_of(e.a);
    const auto b = g.index_of(e.b);
    partners[a].push_back(e.b);
    partners[b].push_back(e.a);
  }
  for (auto& p : partners) {
    std::sort(p.begin(), p.end());
    p.erase(std::unique(p.begin(), p.end()), p.end());
  }

  FoldResult result;
  result.fold = fold_index;
  result.fold_edges = fold.size();
  result.methods.resize(methods.size());
  for (std::size_t m = 0; m < methods.size(); ++m) {
    result.methods[m].run = fold_index;
    result.methods[m].method = methods[m].name;
  }

  std::vector<std::uint8_t> evaluated(n, 0);
  std::vector<std::uint8_t> marks(n, 0);
  std::vector<std::uint8_t> ring(n, 0);  // 1 self or friend, 2 fof
  std::vector<SocialGraph::Index> fof;
  std::vector<ScoredCandidate> kept;
  std::vector<std::vector<Edge>> reproduced(methods.size());

  for (UserId u : eligible) {
    const auto ui = g.index_of(u);
    ++result.cases;
    const auto& deleted = partners[ui];
    if (!skip.evaluates(deleted.size())) continue;
    evaluated[ui] = 1;
    ++result.evaluated_cases;
    result.deleted_pairs += deleted.size();

    fof.clear();
    training.fof_at(ui, fof, marks);
    ring[ui] = 1;
    for (auto f : training.neighbors_at(ui)) ring[f] = 1;
    for (auto w : fof) ring[w] = 2;

    const CaseContext ctx{training, eligible, u, deleted, fold_index};
    for (std::size_t m = 0; m < methods.size(); ++m) {
      std::vector<ScoredCandidate> recs = methods[m].recommend(ctx);
      kept.clear();
      for (const auto& c : recs) {
        if (training.contains(c.candidate) && ring[training.index_of(c.candidate)] == 1) continue;
        kept.push_back(c);
      }
      if (observer) observer(ctx, methods[m].name, kept);
      MethodRun& stats = result.methods[m];
      stats.recommendations += kept.size();
      for (const auto& c : kept) {
        if (std::binary_search(deleted.begin(), deleted.end(), c.candidate)) {
          ++stats.true_positives;
          reproduced[m].push_back(Edge{u, c.candidate}.canonical());
        }
        if (!training.contains(c.candidate) || ring[training.index_of(c.candidate)] != 2) {
          ++stats.beyond_fof;
        }
      }
    }

    ring[ui] = 0;
    for (auto f : training.neighbors_at(ui)) ring[f] = 0;
    for (auto w : fof) ring[w] = 0;
  }

  for (const Edge& e : fold) {
    if (evaluated[g.index_of(e.a)] || evaluated[g.index_of(e.b)]) ++result.deleted_edges;
  }
  for (std::size_t m = 0; m < methods.size(); ++m) {
    auto& hits = reproduced[m];
    std::sort(hits.begin(), hits.end());
    result.methods[m].reproduced_edges =
        static_cast<std::uint64_t>(std::unique(hits.begin(), hits.end()) - hits.begin());
  }
  for (auto& stats : result.methods) {
    stats.evaluated_cases = result.evaluated_cases;
    stats.deleted_pairs = result.deleted_pairs;
    stats.deleted_edges = result.deleted_edges;
    stats.false_positives = stats.recommendations - stats.true_positives;
    stats.false_negatives = stats.deleted_pairs - stats.true_positives;
    stats.rates = compute_rates(stats.true_positives, stats.recommendations, stats.deleted_pairs);
  }
  return result;
}

namespace {

std::vector<FoldResult> run_all_folds(const SocialGraph& g, const UserSet& group,
                                      const FoldPlan& plan, std::span<const Method> methods,
                                      const EvalOptions& options, const CaseObserver& observer) {
  std::vector<FoldResult> results(plan.folds.size());
  const unsigned workers =
      std::max(1u, std::min<unsigned>(options.threads, static_cast<unsigned>(plan.folds.size())));
  if (workers == 1) {
    for (std::size_t f = 0; f < plan.folds.size(); ++f) {
      results[f] = run_fold(g, group, plan.folds[f], methods, options.skip, f, observer);
    }
    return results;
  }

  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(workers);
  {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        try {
          for (std::size_t f = next++; f < plan.folds.size(); f = next++) {
            results[f] = run_fold(g, group, plan.folds[f], methods, options.skip, f, observer);
          }
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return results;
}

template <typename T>
std::string str(T value) {
  if constexpr (std::is_same_v<T, double>) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", value);
    return buf;
  } else {
    return std::to_string(value);
  }
}

}  // namespace

EvalReport cross_validate(const SocialGraph& g, const ProfileMap& profiles,
                          std::span<const Method> methods, const EvalOptions& options,
                          const CaseObserver& observer) {
  options.skip.validate();
  options.params.validate();
  const UserSet group = select_test_group(g, profiles, options.eligibility);
  const SocialGraph eval_graph = g.induced(group);
  const std::vector<Edge> edges = eval_graph.edges();
  const std::uint64_t fold_seed = derive_seed(options.seed, "folds");
  const FoldPlan plan = make_folds(edges, options.k, fold_seed);
  const std::vector<FoldResult> folds =
      run_all_folds(eval_graph, group, plan, methods, options, observer);

  EvalReport report;
  auto meta = [&report](std::string key, std::string value) {
    report.metadata.emplace_back(std::move(key), std::move(value));
  };
  std::uint64_t cases = 0, evaluated = 0, deleted_pairs = 0, deleted_edges = 0;
  for (const auto& f : folds) {
    cases += f.cases;
    evaluated += f.evaluated_cases;
    deleted_pairs += f.deleted_pairs;
    deleted_edges += f.deleted_edges;
  }
  meta("seed", str(options.seed));
  meta("fold_seed", str(fold_seed));
  meta("k", str(options.k));
  meta("n", str(options.params.n));
  meta("score_threshold", str(options.params.score_threshold));
  meta("plus_link_min", str(options.params.plus_link_min));
  meta("plus_link_factor", str(options.params.plus_link_factor));
  meta("random_seed", str(options.params.rng_seed));
  meta("min_friends", str(options.eligibility.min_friends));
  meta("min_fof", str(options.eligibility.min_fof));
  meta("min_activities", str(options.eligibility.min_activities));
  meta("skip_min_deleted", str(options.skip.min_deleted));
  meta("skip_max_deleted", str(options.skip.max_deleted));
  meta("similarity_basis", "normalized");
  meta("recall_base", "deleted_pairs");
  meta("recall_edge_base", "deleted_edges");
  meta("averaging", "micro (pooled totals); macro (mean of per-run rates)");
  meta("input_users", str(g.num_users()));
  meta("input_edges", str(g.num_edges()));
  meta("test_group_users", str(group.size()));
  meta("test_group_edges", str(eval_graph.num_edges()));
  meta("test_group_friendship_records", str(2 * eval_graph.num_edges()));
  meta("cases", str(cases));
  meta("evaluated_cases", str(evaluated));
  meta("deleted_pairs", str(deleted_pairs));
  meta("deleted_edges", str(deleted_edges));
  std::string names;
  for (const auto& m : methods) names += (names.empty() ? "" : ",") + m.name;
  meta("methods", names);

  for (const auto& f : folds) {
    for (const auto& run : f.methods) report.runs.push_back(run);
  }
  for (std::size_t m = 0; m < methods.size(); ++m) {
    MethodSummary s;
    s.method = methods[m].name;
    Rates sum;
    for (const auto& f : folds) {
      const MethodRun& r = f.methods[m];
      s.recommendations += r.recommendations;
      s.true_positives += r.true_positives;
      s.false_positives += r.false_positives;
      s.false_negatives += r.false_negatives;
      s.deleted_pairs += r.deleted_pairs;
      s.deleted_edges += r.deleted_edges;
      s.reproduced_edges += r.reproduced_edges;
      s.beyond_fof += r.beyond_fof;
      sum.precision += r.rates.precision;
      sum.recall += r.rates.recall;
      sum.f_measure += r.rates.f_measure;
    }
    s.micro = compute_rates(s.true_positives, s.recommendations, s.deleted_pairs);
    const double runs = static_cast<double>(folds.size());
    s.macro = {sum.precision / runs, sum.recall / runs, sum.f_measure / runs};
    s.recall_edge_base = s.deleted_edges == 0
                             ? 0.0
                             : static_cast<double>(s.reproduced_edges) /
                                   static_cast<double>(s.deleted_edges);
    s.novelty = s.recommendations == 0 ? 0.0
                                       : static_cast<double>(s.beyond_fof) /
                                             static_cast<double>(s.recommendations);
    report.summary.push_back(std::move(s));
  }
  return report;
}

EvalReport cross_validate(const SocialGraph& g, const ProfileMap& profiles,
                          std::span<const RecommenderKind> kinds, const EvalOptions& options,
                          const CaseObserver& observer) {
  auto interests = std::make_shared<const InterestSpace>(profiles);
  EvalOptions opts = options;
  opts.params.rng_seed = derive_seed(options.seed, "random-recommender");
  std::vector<Method> methods;
  for (RecommenderKind kind : kinds) methods.push_back(builtin_method(kind, interests, opts.params));
  return cross_validate(g, profiles, methods, opts, observer);
}

}  // namespace personrec
