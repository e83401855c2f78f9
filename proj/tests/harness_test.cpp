#include <filesystem>
#include <fstream>
#include <iterator>
#include <sstream>

#include <gtest/gtest.h>
#include <json.hpp>

#include "ibd/harness/commands.hpp"
#include "ibd/harness/experiment.hpp"
#include "ibd/harness/suites.hpp"

using namespace ibd;
using namespace ibd::harness;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("ibd_harness_test_" + name);
  fs::remove_all(p);
  return p;
}

}  // namespace

TEST(GraphSpec, Families) {
  EXPECT_EQ(parse_graph_spec("single").vertex_count(), 1u);
  EXPECT_EQ(parse_graph_spec("path:4"), build_path(4));
  EXPECT_EQ(parse_graph_spec("cycle:5"), build_cycle(5));
  EXPECT_EQ(parse_graph_spec("star:3"), build_star(3));
  EXPECT_EQ(parse_graph_spec("complete:4"), build_complete(4));
  EXPECT_EQ(parse_graph_spec("torus:2:2"), build_lattice_torus(2, 2));
  EXPECT_EQ(parse_graph_spec("lattice:1:1"), build_lattice_torus(1, 1));
  EXPECT_EQ(parse_graph_spec("edges:" + std::string(IBD_DATA_DIR) + "/kite.edges").edge_count(), 4u);
}

TEST(GraphSpec, Errors) {
  EXPECT_THROW(parse_graph_spec("wheel:5"), DomainError);
  EXPECT_THROW(parse_graph_spec("path"), DomainError);
  EXPECT_THROW(parse_graph_spec("path:x"), DomainError);
  EXPECT_THROW(parse_graph_spec("torus:2"), DomainError);
  EXPECT_THROW(parse_graph_spec("single:2"), DomainError);
  EXPECT_THROW(parse_graph_spec("edges:/nonexistent/file.edges"), IoError);
}

TEST(Configuration, Parse) {
  EXPECT_EQ(parse_configuration("1, 2,3", 3), (Configuration{1, 2, 3}));
  EXPECT_EQ(parse_configuration("", 2), Configuration(2));
  EXPECT_THROW(parse_configuration("1,2", 3), DomainError);
  EXPECT_THROW(parse_configuration("1,-2", 2), DomainError);
  EXPECT_THROW(parse_configuration("1,a", 2), DomainError);
  EXPECT_EQ(parse_chain("CTMC"), Chain::Ctmc);
  EXPECT_THROW(parse_chain("sde"), DomainError);
}

TEST(Config, ParseAndApply) {
  std::istringstream in("# sample\ngraph = star:4\nalpha=-1  # inline\nbeta = 1\nsteps = 100\nexplosion_proxy = yes\n\n");
  ExperimentSpec spec;
  apply_config(parse_config(in), spec);
  EXPECT_EQ(spec.graph, "star:4");
  EXPECT_EQ(spec.alpha, -1.0);
  EXPECT_EQ(spec.beta, 1.0);
  EXPECT_EQ(spec.steps, 100u);
  EXPECT_TRUE(spec.explosion_proxy);
  EXPECT_TRUE(spec.stop_rule().explosion_proxy);
}

TEST(Config, Errors) {
  std::istringstream missing_eq("graph star:4\n");
  EXPECT_THROW(parse_config(missing_eq), DomainError);
  std::istringstream unknown("colour = red\n");
  ExperimentSpec spec;
  EXPECT_THROW(apply_config(parse_config(unknown), spec), DomainError);
  std::istringstream bad_number("alpha = fast\n");
  EXPECT_THROW(apply_config(parse_config(bad_number), spec), DomainError);
  EXPECT_THROW(load_config("/nonexistent/ibd.conf"), IoError);
  spec.alpha = std::nan("");
  EXPECT_THROW(spec.params(), DomainError);
}

TEST(Config, SampleFilesLoad) {
  for (const char* name : {"star4_explosive.conf", "cycle4_pair.conf"}) {
    ExperimentSpec spec;
    apply_config(load_config(std::string(IBD_DATA_DIR) + "/" + name), spec);
    EXPECT_FALSE(spec.graph.empty()) << name;
    EXPECT_NO_THROW(parse_graph_spec(spec.graph));
  }
}

TEST(Commands, ClassifyJson) {
  ExperimentSpec spec;
  spec.graph = "star:3";
  spec.alpha = -1.0;
  spec.beta = 1.0;
  std::ostringstream out, err;
  ASSERT_EQ(cmd_classify(spec, out, err), kOk);
  const auto j = nlohmann::json::parse(out.str());
  EXPECT_EQ(j["regime"], "Explosive");
  EXPECT_EQ(j["theorem"], "T4.3");
  EXPECT_EQ(j["fine_structure"], "SimultaneousExplosion");
  EXPECT_EQ(j["rates"]["values"].size(), 4u);
  EXPECT_TRUE(j.contains("warnings"));

  spec.alpha = 0.0;
  spec.beta = 0.0;
  std::ostringstream out2, err2;
  EXPECT_EQ(cmd_classify(spec, out2, err2), kUsage);
  EXPECT_NE(err2.str().find("error"), std::string::npos);
}

TEST(Commands, SimulateIsByteReproducible) {
  ExperimentSpec spec;
  spec.graph = "cycle:4";
  spec.alpha = 0.5;
  spec.beta = 1.0;
  spec.steps = 3000;
  spec.seed = 42;
  std::string first_csv, first_json;
  for (int round = 0; round < 2; ++round) {
    const fs::path dir = scratch("sim" + std::to_string(round));
    spec.out = dir.string();
    std::ostringstream out, err;
    ASSERT_EQ(cmd_simulate(spec, out, err), kOk) << err.str();
    const std::string csv = slurp(dir / "trajectory.csv");
    const std::string js = slurp(dir / "summary.json");
    if (round == 0) {
      first_csv = csv;
      first_json = js;
    } else {
      EXPECT_EQ(csv, first_csv);
      EXPECT_EQ(js, first_json);
    }
    fs::remove_all(dir);
  }
  const auto j = nlohmann::json::parse(first_json);
  EXPECT_EQ(j["replicas"][0]["summary"]["step_count"], 3000);
  EXPECT_EQ(j["replicas"][0]["seed"], replica_seed(42, 0));
}

TEST(Commands, SimulateZeroSteps) {
  ExperimentSpec spec;
  spec.graph = "path:3";
  spec.alpha = -1.0;
  spec.beta = 0.5;
  spec.steps = 0;
  spec.initial = "2,0,1";
  const fs::path dir = scratch("zero");
  spec.out = dir.string();
  std::ostringstream out, err;
  ASSERT_EQ(cmd_simulate(spec, out, err), kOk) << err.str();
  EXPECT_EQ(slurp(dir / "trajectory.csv"), "step,time,vertex,direction,total_spin\n");
  const auto j = nlohmann::json::parse(slurp(dir / "summary.json"));
  EXPECT_EQ(j["replicas"][0]["summary"]["final_configuration"], nlohmann::json::parse("[2,0,1]"));
  fs::remove_all(dir);
}

TEST(Commands, SimulateReplicasAndErrors) {
  ExperimentSpec spec;
  spec.graph = "complete:3";
  spec.alpha = -1.0;
  spec.beta = 0.25;
  spec.steps = 100;
  spec.replicas = 3;
  const fs::path dir = scratch("replicas");
  spec.out = dir.string();
  std::ostringstream out, err;
  ASSERT_EQ(cmd_simulate(spec, out, err), kOk);
  for (int i = 0; i < 3; ++i) EXPECT_TRUE(fs::exists(dir / ("trajectory_" + std::to_string(i) + ".csv")));
  fs::remove_all(dir);

  ExperimentSpec bad = spec;
  bad.out.clear();
  bad.steps.reset();
  std::ostringstream o2, e2;
  EXPECT_EQ(cmd_simulate(bad, o2, e2), kUsage);
  bad.steps = 10;
  bad.initial = "1,2";
  EXPECT_EQ(cmd_simulate(bad, o2, e2), kUsage);
  bad.initial.clear();
  bad.graph = "edges:/nonexistent.edges";
  EXPECT_EQ(cmd_simulate(bad, o2, e2), kIo);
}

TEST(Commands, StationaryCheckSkipsOutsideErgodicRegime) {
  ExperimentSpec spec;
  spec.graph = "path:2";
  spec.alpha = 0.5;
  spec.beta = 0.0;
  std::ostringstream out, err;
  EXPECT_EQ(cmd_stationary_check(spec, out, err), kOk);
  EXPECT_NE(err.str().find("skip"), std::string::npos) << err.str();
}

TEST(Commands, DriftCheckKinds) {
  ExperimentSpec spec;
  spec.graph = "complete:3";
  spec.alpha = -1.0;
  spec.beta = 0.25;
  std::ostringstream out, err;
  EXPECT_EQ(cmd_drift_check(spec, "gq", 40, 60, out, err), kOk) << err.str();
  EXPECT_EQ(cmd_drift_check(spec, "warp", 40, 60, out, err), kUsage);
}

TEST(Commands, SuiteUnknownName) {
  std::ostringstream out, err;
  EXPECT_EQ(cmd_suite("everything", false, "", out, err), kUsage);
}

TEST(Suites, IdentitiesReportIsDeterministic) {
  const auto a = to_json(run_suite("identities", true), false).dump();
  const auto b = to_json(run_suite("identities", true), false).dump();
  EXPECT_EQ(a, b);
  const auto j = nlohmann::json::parse(a);
  EXPECT_FALSE(j.contains("timing_seconds"));
  EXPECT_EQ(j["suite"], "identities");
  for (const auto& r : j["records"]) EXPECT_TRUE(r["pass"].get<bool>()) << r.dump();
}

TEST(Suites, NamesAreRunnable) {
  const auto& names = suite_names();
  EXPECT_EQ(names.size(), 4u);
  EXPECT_THROW(run_suite("nope", true), DomainError);
}
