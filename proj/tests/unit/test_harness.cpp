#include "aspinn/cli.hpp"
#include "aspinn/config.hpp"
#include "aspinn/errors.hpp"
#include "aspinn/harness.hpp"
#include "aspinn/stats.hpp"

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

namespace {

using namespace aspinn;
namespace fs = std::filesystem;

ExperimentConfig small_config(const std::string& problem = "cos") {
  ExperimentConfig cfg;
  cfg.problem = problem;
  cfg.methods = {MethodKind::Aspinn, MethodKind::Random};
  cfg.iterations = 3;
  cfg.repetitions = 2;
  cfg.epochs = 40;
  cfg.hidden = {8, 8};
  cfg.gp_steps = 20;
  cfg.seed = 7;
  return cfg;
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("aspinn_test_" + name);
  fs::remove_all(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

int run_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "aspinn");
  std::vector<char*> argv;
  for (auto& a : args) argv.push_back(a.data());
  return cli_main(static_cast<int>(argv.size()), argv.data());
}

class Harness : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    cfg_ = new ExperimentConfig(small_config());
    result_ = new ExperimentResult(run_experiment(*cfg_));
  }
  static void TearDownTestSuite() {
    delete cfg_;
    delete result_;
  }
  static ExperimentConfig* cfg_;
  static ExperimentResult* result_;
};
ExperimentConfig* Harness::cfg_ = nullptr;
ExperimentResult* Harness::result_ = nullptr;

TEST_F(Harness, ShapeAndBookkeeping) {
  ASSERT_TRUE(result_->failures.empty());
  ASSERT_EQ(result_->records.size(), 4u);
  const ProblemSpec cos = make_problem("cos");
  for (const auto& run : result_->records) {
    ASSERT_EQ(run.iterations.size(), 3u);
    EXPECT_EQ(run.curve.pi_delta.size(), 3u);
    EXPECT_NEAR(run.curve.auuc, run.curve.pi_delta[0] + run.curve.pi_delta[1] + run.curve.pi_delta[2], 1e-12);
    std::size_t size = run.initial_size;
    for (const auto& it : run.iterations) {
      EXPECT_EQ(it.dataset_size, size + it.batch.size());
      EXPECT_EQ(it.batch.size(), 1u);
      size = it.dataset_size;
      for (const auto& x : it.picked) EXPECT_TRUE(cos.grid_index(x).has_value());
    }
    EXPECT_EQ(run.seed, cfg_->seed + static_cast<std::uint64_t>(run.repetition));
    EXPECT_EQ(run.config_hash, config_hash(*cfg_));
  }
}

TEST_F(Harness, MethodsShareTheInitialDataset) {
  for (const auto& a : result_->records)
    for (const auto& b : result_->records)
      if (a.repetition == b.repetition) EXPECT_EQ(a.initial_fingerprint, b.initial_fingerprint);
  EXPECT_NE(result_->records[0].initial_fingerprint, result_->records[2].initial_fingerprint);
}

TEST_F(Harness, EvaluationDependsOnlyOnTheDataset) {
  // Replaying the random run's picks reproduces its PI_delta exactly.
  const auto& run = result_->records[1];
  ASSERT_EQ(run.method, MethodKind::Random);
  const ProblemSpec problem = make_problem("cos");
  const HarnessSettings settings = harness_settings(*cfg_, problem);
  Dataset data = initial_dataset(problem, derive_seed(run.seed, {stream::kInitialData}));
  for (const auto& it : run.iterations) {
    for (std::size_t k = 0; k < it.picked.size(); ++k) data.add(it.picked[k], it.observed[k]);
    EXPECT_EQ(evaluate_pi_delta(problem, data, problem.x_test, settings, run.seed), it.pi_delta);
  }
}

TEST_F(Harness, ExportIsCompleteAndIdempotent) {
  const fs::path dir = scratch("export");
  export_results(*cfg_, *result_, dir);
  for (auto f : {"summary.json", "runs.json", "config.txt", "timing.csv", "aggregate_aspinn.csv",
                 "aggregate_random.csv", "curves/aspinn_rep0.csv", "curves/random_rep1.csv"})
    EXPECT_TRUE(fs::exists(dir / f)) << f;

  const auto summary = nlohmann::json::parse(slurp(dir / "summary.json"));
  ASSERT_EQ(summary["pairwise"].size(), 1u);
  EXPECT_EQ(summary["pairwise"][0]["n"], 2);
  EXPECT_EQ(summary["std_kind"], "sample (n-1)");
  std::vector<double> aspinn_auuc;
  for (const auto& r : result_->records)
    if (r.method == MethodKind::Aspinn) aspinn_auuc.push_back(r.curve.auuc);
  EXPECT_NEAR(summary["methods"]["aspinn"]["auuc_mean"].get<double>(), mean(aspinn_auuc), 1e-12);

  // Aggregate rows against a recomputation from the per-run curves.
  std::ifstream agg(dir / "aggregate_aspinn.csv");
  std::string line;
  std::getline(agg, line);
  EXPECT_EQ(line, "iteration,mean_pi_delta,std_pi_delta");
  for (int t = 0; t < 3; ++t) {
    ASSERT_TRUE(std::getline(agg, line));
    std::vector<double> column;
    for (const auto& r : result_->records)
      if (r.method == MethodKind::Aspinn) column.push_back(r.curve.pi_delta[t]);
    const auto c1 = line.find(','), c2 = line.rfind(',');
    EXPECT_EQ(std::stoi(line.substr(0, c1)), t + 1);
    EXPECT_NEAR(std::stod(line.substr(c1 + 1, c2 - c1 - 1)), mean(column), 1e-12);
    EXPECT_NEAR(std::stod(line.substr(c2 + 1)), sample_std(column), 1e-12);
  }

  std::map<std::string, std::string> first;
  for (const auto& e : fs::recursive_directory_iterator(dir))
    if (e.is_regular_file()) first[e.path().string()] = slurp(e.path());
  export_results(*cfg_, *result_, dir);
  for (const auto& [path, text] : first) EXPECT_EQ(slurp(path), text) << path;
  fs::remove_all(dir);
}

TEST(HarnessDeterminism, IdenticalConfigsGiveIdenticalFiles) {
  ExperimentConfig cfg = small_config();
  cfg.iterations = 2;
  cfg.repetitions = 1;
  cfg.methods = {MethodKind::Aspinn, MethodKind::Gp};
  cfg.batch = 2;
  const fs::path a = scratch("det_a"), b = scratch("det_b");
  export_results(cfg, run_experiment(cfg), a);
  export_results(cfg, run_experiment(cfg), b);
  for (const auto& e : fs::recursive_directory_iterator(a)) {
    if (!e.is_regular_file() || e.path().filename() == "timing.csv") continue;
    EXPECT_EQ(slurp(e.path()), slurp(b / fs::relative(e.path(), a))) << e.path();
  }
  fs::remove_all(a);
  fs::remove_all(b);
}

TEST(HarnessField, SeasonsAndCandidatesAreShared) {
  ExperimentConfig cfg = small_config("field");
  cfg.batch = 4;  // ignored: the field problem samples one rate per season
  const auto result = run_experiment(cfg);
  ASSERT_TRUE(result.failures.empty());
  const ProblemSpec field = make_problem("field");
  for (const auto& run : result.records) {
    EXPECT_EQ(run.initial_size, 50u);
    for (const auto& it : run.iterations) {
      ASSERT_TRUE(it.season.has_value());
      ASSERT_EQ(it.picked.size(), 1u);
      EXPECT_TRUE(field.admissible(it.picked[0]));
      EXPECT_EQ(it.picked[0][0], it.season->precip);
      const FieldContext expected = season_for(run.seed, it.iteration - 1);
      EXPECT_EQ(it.season->precip, expected.precip);
      EXPECT_EQ(it.season->aspect, expected.aspect);
    }
  }
}

TEST(HarnessField, OnlyTheFieldProblemForcesSingleton) {
  ExperimentConfig cfg = small_config();
  cfg.batch = 5;
  EXPECT_EQ(harness_settings(cfg, make_problem("cos")).batch, 5);
  EXPECT_EQ(harness_settings(cfg, make_problem("field")).batch, 1);
  EXPECT_EQ(policy_params(cfg, make_problem("field")).aspinn.space, DistanceSpace::Standardized);
  EXPECT_EQ(policy_params(cfg, make_problem("cos")).aspinn.space, DistanceSpace::Raw);
}

TEST(HarnessObserve, KeyedNoiseIsSharedAcrossCallers) {
  const ProblemSpec cos = make_problem("cos");
  const Location& x = cos.x_test[10];
  EXPECT_EQ(observe(cos, x, 3, 4, 10, 0), observe(cos, x, 3, 4, 10, 0));
  EXPECT_NE(observe(cos, x, 3, 4, 10, 0), observe(cos, x, 3, 4, 10, 1));
  EXPECT_NE(observe(cos, x, 3, 4, 10, 0), observe(cos, x, 3, 5, 10, 0));
}

TEST(Config, DefaultsMatchTheReferenceSetup) {
  const ExperimentConfig cfg;
  EXPECT_EQ(cfg.iterations, 50);
  EXPECT_EQ(cfg.repetitions, 10);
  EXPECT_EQ(cfg.theta, 0.25);
  EXPECT_EQ(cfg.r, 0.15);
  EXPECT_EQ(cfg.eta, 0.1);
  EXPECT_EQ(cfg.batch, 1);
  EXPECT_EQ(default_architecture("cos"), (std::vector<int>{100, 100}));
  EXPECT_EQ(default_architecture("cosqr"), (std::vector<int>{500, 100, 50}));
  ExperimentConfig quick;
  apply_quick_preset(quick);
  EXPECT_EQ(quick.iterations, 25);
  EXPECT_EQ(quick.repetitions, 5);
  EXPECT_EQ(quick.epochs, 1000);
}

TEST(Config, ParsesKeyValueText) {
  const auto entries = parse_config_text("# comment\nproblem = hetero\n\n  theta=0.5   # trailing\n--reps = 3\n");
  ASSERT_EQ(entries.size(), 3u);
  ExperimentConfig cfg;
  apply_settings(cfg, entries);
  EXPECT_EQ(cfg.problem, "hetero");
  EXPECT_EQ(cfg.theta, 0.5);
  EXPECT_EQ(cfg.repetitions, 3);

  apply_setting(cfg, "method", "aspinn,gp");
  EXPECT_EQ(cfg.methods, (std::vector<MethodKind>{MethodKind::Aspinn, MethodKind::Gp}));
  apply_setting(cfg, "hidden", "20,10");
  EXPECT_EQ(cfg.hidden, (std::vector<int>{20, 10}));
  EXPECT_THROW(apply_setting(cfg, "bogus", "1"), ConfigError);
  EXPECT_THROW(apply_setting(cfg, "theta", "abc"), ConfigError);
  EXPECT_THROW(apply_setting(cfg, "method", "aspinn,aspinn"), ConfigError);
  EXPECT_THROW(apply_setting(cfg, "field-noise-denominator", "200"), ConfigError);
  EXPECT_THROW(parse_config_text("no equals sign\n"), ConfigError);
  EXPECT_THROW(read_config_file("/nonexistent/aspinn.cfg"), IoError);
}

TEST(Config, ValidationRejectsBadValues) {
  ExperimentConfig cfg;
  cfg.theta = -1.0;
  EXPECT_THROW(validate(cfg), ConfigError);
  cfg = {};
  cfg.r = 0.0;
  EXPECT_THROW(validate(cfg), ConfigError);
  cfg = {};
  cfg.problem = "nope";
  EXPECT_THROW(validate(cfg), ConfigError);
  cfg = {};
  cfg.methods.clear();
  EXPECT_THROW(validate(cfg), ConfigError);
  EXPECT_NO_THROW(validate(ExperimentConfig{}));
  ExperimentConfig a, b;
  b.theta = 0.3;
  EXPECT_NE(config_hash(a), config_hash(b));
  EXPECT_EQ(config_hash(a), config_hash(ExperimentConfig{}));
}

TEST(Cli, ExitCodes) {
  EXPECT_EQ(run_cli({"run", "--theta", "-1", "--out", scratch("cli_bad").string()}), 2);
  EXPECT_EQ(run_cli({"run", "--bogus", "1"}), 2);
  EXPECT_EQ(run_cli({"run", "--problem", "nope"}), 2);
  EXPECT_EQ(run_cli({}), 2);
  EXPECT_EQ(run_cli({"eval", "/nonexistent/curves.csv"}), 1);
}

TEST(Cli, RunEvalAndSampleOnce) {
  const fs::path out = scratch("cli_run");
  const fs::path cfg_file = fs::temp_directory_path() / "aspinn_test_cli.cfg";
  {
    std::ofstream c(cfg_file);
    c << "epochs = 30\nhidden = 6,6\n";
  }
  ASSERT_EQ(run_cli({"run", "--problem", "cos", "--method", "aspinn,random", "--reps", "2", "--iterations", "2",
                     "--seed", "7", "--epochs", "500", "--out", out.string(), "--config", cfg_file.string(),
                     "--quiet"}),
            0);
  EXPECT_TRUE(fs::exists(out / "summary.json"));
  // The config file overrides the --epochs flag.
  EXPECT_NE(slurp(out / "config.txt").find("epochs=30\n"), std::string::npos);
  EXPECT_EQ(run_cli({"eval", (out / "curves").string()}), 0);

  const fs::path data = fs::temp_directory_path() / "aspinn_test_data.csv";
  ASSERT_EQ(run_cli({"initial-data", "--problem", "cos", "--seed", "3", "--out", data.string()}), 0);
  EXPECT_EQ(read_dataset_csv(data).size(), 200u);
  EXPECT_EQ(run_cli({"sample-once", "--data", data.string(), "--method", "random", "--batch", "3"}), 0);
  EXPECT_EQ(run_cli({"sample-once", "--data", data.string(), "--problem", "field"}), 2);
  fs::remove_all(out);
  fs::remove(cfg_file);
  fs::remove(data);
}

}  // namespace
