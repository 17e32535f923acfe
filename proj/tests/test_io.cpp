#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "personrec/config.hpp"
#include "personrec/dataset_io.hpp"
#include "personrec/evaluation.hpp"
#include "personrec/generator.hpp"
#include "personrec/report.hpp"

using namespace personrec;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "personrec_tests";
  fs::create_directories(dir);
  return dir / name;
}

void write_file(const fs::path& p, const std::string& text) {
  std::ofstream(p) << text;
}

}  // namespace

TEST_CASE("edge list parsing") {
  std::istringstream in("# friends\n1,2\n\n 2 , 3 \n3,abc\n4\n");
  std::vector<ParseIssue> issues;
  const auto edges = read_edges(in, "edges.csv", issues);
  CHECK(edges == std::vector<Edge>{{1, 2}, {2, 3}});
  REQUIRE(issues.size() == 2);
  CHECK(issues[0].line == 5);
  CHECK(issues[0].to_string().rfind("edges.csv:5:", 0) == 0);
  CHECK(issues[1].line == 6);
}

TEST_CASE("activity log parsing") {
  std::vector<ParseIssue> issues;
  std::istringstream with_header("user,category,action_kind,multiplicity\n1,0,comment,3\n2,4,create_post\n");
  const auto events = read_activities(with_header, "a.csv", true, issues);
  CHECK(issues.empty());
  REQUIRE(events.size() == 2);
  CHECK(events[0] == ActivityEvent{1, 0, "comment", 3});
  CHECK(events[1] == ActivityEvent{2, 4, "create_post", 1});

  std::istringstream no_flag("user,category,action_kind,multiplicity\n1,0,comment,3\n");
  read_activities(no_flag, "a.csv", false, issues);
  REQUIRE(issues.size() == 1);
  CHECK(issues[0].line == 1);

  issues.clear();
  std::istringstream bad("1,0,comment,0\n1,x,comment\n1,0,,2\n");
  CHECK(read_activities(bad, "a.csv", false, issues).empty());
  CHECK(issues.size() == 3);
}

TEST_CASE("load_dataset strict and lenient") {
  const auto edges = scratch("bad_edges.csv");
  const auto acts = scratch("acts.csv");
  write_file(edges, "1,2\n3,abc\n2,3\n");
  write_file(acts, "1,0,comment,2\n9,1,comment,1\n");
  try {
    (void)load_dataset({edges, acts});
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    REQUIRE(e.issues().size() == 1);
    CHECK(e.issues()[0].line == 2);
    CHECK(std::string(e.what()).find(":2:") != std::string::npos);
  }
  const Dataset ds = load_dataset({edges, acts}, ReadOptions{true, false});
  CHECK(ds.issues.size() == 1);
  CHECK(ds.graph.num_edges() == 2);
  CHECK(ds.graph.contains(9));  // activity-only user
  CHECK_THROWS_AS(load_dataset({scratch("missing.csv"), acts}), std::runtime_error);
}

TEST_CASE("generated dataset survives a write/load round trip") {
  GeneratorConfig cfg;
  cfg.n_users = 100;
  cfg.seed = 5;
  const auto gen = generate(cfg);
  const DatasetPaths paths{scratch("rt_edges.csv"), scratch("rt_acts.csv")};
  write_dataset(paths, gen.graph, gen.events);
  const Dataset back = load_dataset(paths);
  CHECK(back.graph == gen.graph);
  CHECK(back.events == gen.events);
}

TEST_CASE("report round trip and layout") {
  GeneratorConfig gc;
  gc.n_users = 120;
  gc.seed = 2;
  const auto gen = generate(gc);
  const auto profiles = build_profiles(gen.events, CategoryScheme{}, ActionWeights{}, 3).profiles;
  const std::vector<RecommenderKind> kinds{RecommenderKind::FoF, RecommenderKind::InterestCosine};
  const EvalReport report = cross_validate(gen.graph, profiles, kinds, EvalOptions{});

  std::stringstream buf;
  write_report(report, buf);
  const std::string text = buf.str();
  const EvalReport back = read_report(buf);
  CHECK(back == report);

  // one meta line, k * methods run lines, one summary line per method
  CHECK(std::count(text.begin(), text.end(), '\n') == 1 + 10 * 2 + 2);
  const auto summary_at = text.find("{\"type\":\"summary\",\"method\":\"fof\",");
  REQUIRE(summary_at != std::string::npos);
  const std::string row = text.substr(summary_at, text.find('\n', summary_at) - summary_at);
  const auto pos = [&](const char* key) { return row.find(key); };
  CHECK(pos("total_recommendations") < pos("true_positives"));
  CHECK(pos("true_positives") < pos("\"precision\""));
  CHECK(pos("\"precision\"") < pos("\"recall\""));
  CHECK(pos("\"recall\"") < pos("\"f_measure\""));

  const std::string table = format_summary_table(report);
  CHECK(table.find("total #recs") != std::string::npos);
  CHECK(table.find("f-measure") != std::string::npos);

  const EvalReport empty = cross_validate(gen.graph, profiles, std::span<const Method>{}, EvalOptions{});
  std::stringstream ebuf;
  write_report(empty, ebuf);
  CHECK(read_report(ebuf) == empty);

  std::istringstream broken("{\"type\":\"meta\",\"fields\":{}}\n{\"type\":\"bogus\"}\n");
  CHECK_THROWS_WITH_AS(read_report(broken), doctest::Contains("line 2"), std::runtime_error);
}

TEST_CASE("key-value configuration") {
  std::istringstream in(
      "# run\n[eval]\nk = 5\nmethods = fof, interest-cosine\n[recommend]\nn=7\n"
      "[weights]\ncreate_post = 3\n[eligibility]\nmin_fof = 4\n");
  KeyValueConfig cfg = KeyValueConfig::parse(in, "run.cfg");
  cfg.apply_environment({{"PERSONREC_EVAL_SEED", "99"}, {"PERSONREC_RECOMMEND_N", "12"},
                         {"OTHER_THING", "1"}});
  const RunConfig rc = RunConfig::from(cfg);
  CHECK(rc.eval.k == 5);
  CHECK(rc.eval.seed == 99);
  CHECK(rc.eval.params.n == 12);
  CHECK(rc.eval.eligibility.min_fof == 4);
  CHECK(rc.weights.weight("create_post") == 3.0);
  CHECK(rc.methods == std::vector<RecommenderKind>{RecommenderKind::FoF, RecommenderKind::InterestCosine});

  KeyValueConfig typo;
  typo.set("eval.kk", "3");
  CHECK_THROWS_WITH_AS(RunConfig::from(typo), doctest::Contains("eval.kk"), ConfigError);
  KeyValueConfig bad;
  bad.set("recommend.n", "ten");
  CHECK_THROWS_WITH_AS(RunConfig::from(bad), doctest::Contains("recommend.n"), ConfigError);
  KeyValueConfig small_k;
  small_k.set("eval.k", "1");
  CHECK_THROWS_WITH_AS(RunConfig::from(small_k), doctest::Contains("eval.k"), ConfigError);
  KeyValueConfig method;
  method.set("eval.methods", "fof,magic");
  CHECK_THROWS_WITH_AS(RunConfig::from(method), doctest::Contains("magic"), ConfigError);

  KeyValueConfig gen;
  gen.set("gen.users", "42");
  gen.set("gen.alpha", "0.25");
  const GeneratorConfig gc = generator_config_from(gen);
  CHECK(gc.n_users == 42);
  CHECK(gc.homophily_weight == 0.25);
}

TEST_CASE("shipped default configuration yields a usable test group") {
  const KeyValueConfig cfg = KeyValueConfig::load(PERSONREC_SOURCE_DIR "/configs/default.conf");
  const RunConfig rc = RunConfig::from(cfg);
  const GeneratorConfig gc = generator_config_from(cfg);
  CHECK(gc.n_users >= 300);
  const auto ds = generate(gc);
  const auto profiles =
      build_profiles(ds.events, rc.scheme, rc.weights, rc.eval.eligibility.min_activities).profiles;
  const UserSet group = select_test_group(ds.graph, profiles, rc.eval.eligibility);
  CHECK(group.size() > gc.n_users / 2);
}
