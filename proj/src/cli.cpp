#include "personrec/cli.hpp"

#include <cstdio>
#include <filesystem>
#include <memory>
#include <ostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "personrec/config.hpp"
#include "personrec/dataset_io.hpp"
#include "personrec/evaluation.hpp"
#include "personrec/generator.hpp"
#include "personrec/report.hpp"

namespace personrec {

namespace {

struct CommonFlags {
  std::string config;
  std::string edges;
  std::string activities;
  bool lenient = false;
  bool header = false;
};

void add_common(CLI::App* cmd, CommonFlags& flags) {
  cmd->add_option("--config", flags.config, "key = value configuration file");
  cmd->add_option("--edges", flags.edges, "friendship edge list (user_a,user_b)");
  cmd->add_option("--activities", flags.activities,
                  "activity log (user,category,action_kind,multiplicity)");
  cmd->add_flag("--lenient", flags.lenient, "skip malformed input lines instead of failing");
  cmd->add_flag("--header", flags.header, "activity log starts with a header line");
}

KeyValueConfig base_config(const CommonFlags& flags) {
  KeyValueConfig cfg;
  if (!flags.config.empty()) cfg = KeyValueConfig::load(flags.config);
  cfg.apply_environment();
  if (!flags.edges.empty()) cfg.set("data.edges", flags.edges);
  if (!flags.activities.empty()) cfg.set("data.activities", flags.activities);
  if (flags.lenient) cfg.set("data.lenient", "true");
  if (flags.header) cfg.set("data.activities_header", "true");
  return cfg;
}

struct LoadedData {
  Dataset dataset;
  ProfileMap profiles;
};

LoadedData load(const RunConfig& rc, std::ostream& err) {
  if (rc.edges.empty()) throw ConfigError("data.edges", "no edge list given (use --edges)");
  if (!std::filesystem::exists(rc.edges)) {
    throw ConfigError("data.edges", "file does not exist: " + rc.edges.string());
  }
  if (!rc.activities.empty() && !std::filesystem::exists(rc.activities)) {
    throw ConfigError("data.activities", "file does not exist: " + rc.activities.string());
  }
  LoadedData data;
  data.dataset = load_dataset({rc.edges, rc.activities},
                              ReadOptions{rc.lenient, rc.activities_header});
  for (const auto& issue : data.dataset.issues) err << "warning: skipped " << issue.to_string() << '\n';
  const auto& stats = data.dataset.graph.build_stats();
  if (stats.self_loops > 0) err << "warning: dropped " << stats.self_loops << " self-loop(s)\n";
  if (stats.duplicates > 0) {
    err << "note: merged " << stats.duplicates << " duplicate friendship record(s)\n";
  }

  auto built = build_profiles(data.dataset.events, rc.scheme, rc.weights,
                              rc.eval.eligibility.min_activities);
  if (!built.rejected.empty()) {
    if (!rc.lenient) {
      throw std::runtime_error("invalid activity record: " + built.rejected.front() + " (" +
                               std::to_string(built.rejected.size()) + " total)");
    }
    for (const auto& r : built.rejected) err << "warning: rejected " << r << '\n';
  }
  data.profiles = std::move(built.profiles);
  return data;
}

void print_group(std::ostream& out, const char* label, const GroupStats& s) {
  char buf[512];
  std::snprintf(buf, sizeof buf,
                "%s\n"
                "  users                          %zu\n"
                "  friendship edges (undirected)  %zu\n"
                "  friendship records (directed)  %zu\n"
                "  mean friends                   %.2f\n"
                "  mean FoF                       %.2f\n"
                "  mean categorized activities    %.2f\n"
                "  share with 3-4 friends         %.3f\n"
                "  share with 3-4 activities      %.3f\n",
                label, s.users, s.edges, s.friendship_records, s.mean_friends, s.mean_fof,
                s.mean_activities, s.share_three_or_four_friends,
                s.share_three_or_four_activities);
  out << buf;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Interest-based and social person recommenders with edge-holdout evaluation",
               "personrec"};
  app.require_subcommand(1);

  // gen
  auto* gen = app.add_subcommand("gen", "generate a synthetic social network and activity log");
  std::string gen_config, gen_out_dir;
  std::optional<std::uint64_t> gen_seed, gen_users, gen_communities, gen_categories;
  std::optional<double> gen_alpha, gen_degree;
  gen->add_option("--config", gen_config, "configuration file (gen.* keys)");
  gen->add_option("--out-dir", gen_out_dir, "directory for edges.csv and activities.csv")
      ->required();
  gen->add_option("--seed", gen_seed, "random seed");
  gen->add_option("--users", gen_users, "number of users");
  gen->add_option("--communities", gen_communities, "number of interest communities");
  gen->add_option("--categories", gen_categories, "number of activity categories");
  gen->add_option("--alpha", gen_alpha, "homophily weight; triadic closure gets 1 - alpha");
  gen->add_option("--mean-degree", gen_degree, "target mean number of friends");

  // eval
  auto* eval = app.add_subcommand("eval", "k-fold friendship holdout evaluation");
  CommonFlags eval_flags;
  add_common(eval, eval_flags);
  std::optional<std::uint64_t> eval_seed, eval_k, eval_n, eval_threads;
  std::vector<std::string> eval_methods;
  std::string eval_out;
  eval->add_option("--seed", eval_seed, "evaluation seed (folds and random recommender)");
  eval->add_option("--k", eval_k, "number of folds");
  eval->add_option("--n", eval_n, "recommendations per user");
  eval->add_option("--method", eval_methods, "recommender to run (repeatable; default all)");
  eval->add_option("--out", eval_out, "report file (JSON lines)");
  eval->add_option("--threads", eval_threads, "worker threads for folds");

  // recommend
  auto* rec = app.add_subcommand("recommend", "ranked recommendations for one user");
  CommonFlags rec_flags;
  add_common(rec, rec_flags);
  std::uint64_t rec_user = 0;
  std::string rec_method = "fof";
  std::optional<std::uint64_t> rec_n;
  rec->add_option("--user", rec_user, "target user id")->required();
  rec->add_option("--method", rec_method, "recommender")->capture_default_str();
  rec->add_option("--n", rec_n, "number of recommendations");

  // stats
  auto* stats = app.add_subcommand("stats", "dataset and test-group summary");
  CommonFlags stats_flags;
  add_common(stats, stats_flags);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }

  try {
    if (gen->parsed()) {
      KeyValueConfig cfg;
      if (!gen_config.empty()) cfg = KeyValueConfig::load(gen_config);
      cfg.apply_environment();
      if (gen_seed) cfg.set("gen.seed", std::to_string(*gen_seed));
      if (gen_users) cfg.set("gen.users", std::to_string(*gen_users));
      if (gen_communities) cfg.set("gen.communities", std::to_string(*gen_communities));
      if (gen_categories) cfg.set("gen.categories", std::to_string(*gen_categories));
      if (gen_alpha) cfg.set("gen.alpha", std::to_string(*gen_alpha));
      if (gen_degree) cfg.set("gen.mean_degree", std::to_string(*gen_degree));
      const GeneratorConfig gc = generator_config_from(cfg);
      const GeneratedDataset ds = generate(gc);
      std::filesystem::create_directories(gen_out_dir);
      const DatasetPaths paths{std::filesystem::path(gen_out_dir) / "edges.csv",
                               std::filesystem::path(gen_out_dir) / "activities.csv"};
      write_dataset(paths, ds.graph, ds.events);
      out << "wrote " << ds.graph.num_users() << " users, " << ds.graph.num_edges()
          << " friendships to " << paths.edges.string() << "\n"
          << "wrote " << ds.events.size() << " activity records to "
          << paths.activities.string() << "\n";
      return 0;
    }

    if (eval->parsed()) {
      KeyValueConfig cfg = base_config(eval_flags);
      if (eval_seed) cfg.set("eval.seed", std::to_string(*eval_seed));
      if (eval_k) cfg.set("eval.k", std::to_string(*eval_k));
      if (eval_n) cfg.set("recommend.n", std::to_string(*eval_n));
      if (eval_threads) cfg.set("eval.threads", std::to_string(*eval_threads));
      if (!eval_out.empty()) cfg.set("eval.out", eval_out);
      if (!eval_methods.empty()) {
        std::string joined;
        for (const auto& m : eval_methods) joined += (joined.empty() ? "" : ",") + m;
        cfg.set("eval.methods", joined);
      }
      RunConfig rc = RunConfig::from(cfg);
      if (rc.methods.empty()) rc.methods.assign(std::begin(kAllRecommenders), std::end(kAllRecommenders));
      const LoadedData data = load(rc, err);
      const EvalReport report = cross_validate(data.dataset.graph, data.profiles, rc.methods, rc.eval);
      if (!rc.out.empty()) write_report(report, rc.out);
      out << format_summary_table(report);
      return 0;
    }

    if (rec->parsed()) {
      KeyValueConfig cfg = base_config(rec_flags);
      if (rec_n) cfg.set("recommend.n", std::to_string(*rec_n));
      const RunConfig rc = RunConfig::from(cfg);
      const auto kind = parse_recommender(rec_method);
      if (!kind) throw ConfigError("--method", "unknown recommender '" + rec_method + "'");
      const LoadedData data = load(rc, err);
      const SocialGraph& g = data.dataset.graph;
      if (!g.contains(rec_user)) throw UnknownUserError(rec_user);
      const InterestSpace interests(data.profiles);
      const UserSet everyone(g.users());
      RecommendParams params = rc.eval.params;
      params.rng_seed = rc.eval.seed;
      const auto list = recommend(*kind, rec_user, g, interests, everyone, params);
      out << "rank,user,score,common_friend,boosted\n";
      char buf[128];
      for (std::size_t i = 0; i < list.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%zu,%llu,%.6f,%d,%d\n", i + 1,
                      static_cast<unsigned long long>(list[i].candidate), list[i].score,
                      list[i].had_common_friend ? 1 : 0, list[i].boosted ? 1 : 0);
        out << buf;
      }
      return 0;
    }

    if (stats->parsed()) {
      const RunConfig rc = RunConfig::from(base_config(stats_flags));
      const LoadedData data = load(rc, err);
      const SocialGraph& g = data.dataset.graph;
      // Activity counts for the description include users under the threshold.
      const ProfileMap everyone =
          build_profiles(data.dataset.events, rc.scheme, rc.weights, 0).profiles;
      print_group(out, "dataset", describe_group(g, everyone));
      const UserSet group = select_test_group(g, data.profiles, rc.eval.eligibility);
      print_group(out, "test group", describe_group(g.induced(group), everyone));
      return 0;
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

}  // namespace personrec
