#include "aspinn/cli.hpp"

#include "aspinn/config.hpp"
#include "aspinn/errors.hpp"
#include "aspinn/harness.hpp"
#include "aspinn/selftest.hpp"
#include "aspinn/stats.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <iostream>
#include <map>
#include <optional>

namespace aspinn {

namespace {

constexpr int kUsageExit = 2;
constexpr int kRuntimeExit = 1;

void add_flag(CLI::App& app, std::map<std::string, std::string>& store, const std::string& name,
              const std::string& help) {
  app.add_option_function<std::string>(
      "--" + name, [&store, name](const std::string& v) { store[name] = v; }, help);
}

// Order: defaults, preset, explicit flags, config file.
ExperimentConfig resolve_config(const std::string& preset, const std::map<std::string, std::string>& flags,
                                const std::string& config_file) {
  ExperimentConfig cfg;
  if (!preset.empty()) apply_setting(cfg, "preset", preset);
  for (const auto& [key, value] : flags) apply_setting(cfg, key, value);
  if (!config_file.empty()) apply_settings(cfg, read_config_file(config_file));
  validate(cfg);
  return cfg;
}

void add_experiment_flags(CLI::App& app, std::map<std::string, std::string>& flags) {
  add_flag(app, flags, "problem", "cos | hetero | cosqr | field");
  add_flag(app, flags, "method", "aspinn | random | gp | mcdropout (comma-separated for comparisons)");
  add_flag(app, flags, "batch", "picks per iteration (1-D problems)");
  add_flag(app, flags, "theta", "neighborhood radius");
  add_flag(app, flags, "r", "surrogate correlation length");
  add_flag(app, flags, "eta", "coverage-penalty adaptation rate");
  add_flag(app, flags, "seed", "base seed");
  add_flag(app, flags, "epochs", "training epochs per network");
  add_flag(app, flags, "lr", "Adam learning rate");
  add_flag(app, flags, "hidden", "hidden widths, e.g. 100,100");
  add_flag(app, flags, "gp-steps", "GP hyperparameter optimization steps");
  add_flag(app, flags, "dropout-rate", "MC-dropout rate");
  add_flag(app, flags, "dropout-passes", "MC-dropout forward passes");
  add_flag(app, flags, "field-noise-denominator", "150 or 1500");
}

int cmd_run(const std::string& preset, const std::map<std::string, std::string>& flags,
            const std::string& config_file, bool quiet) {
  const ExperimentConfig cfg = resolve_config(preset, flags, config_file);
  ProgressFn progress;
  if (!quiet) progress = [](const std::string& msg) { std::cerr << msg << '\n'; };
  const ExperimentResult result = run_experiment(cfg, progress);
  export_results(cfg, result, cfg.output_dir);

  for (MethodKind m : cfg.methods) {
    std::vector<double> values;
    for (const auto& run : result.records)
      if (run.method == m) values.push_back(run.curve.auuc);
    std::cout << method_name(m) << ": runs " << values.size() << ", mean AUUC " << mean(values) << ", std "
              << sample_std(values) << '\n';
  }
  std::cout << "results written to " << cfg.output_dir.string() << '\n';
  for (const auto& f : result.failures) {
    std::cerr << "run failed: method " << method_name(f.method) << ", repetition " << f.repetition << ": "
              << f.message << '\n';
  }
  return result.failures.empty() ? 0 : kRuntimeExit;
}

int cmd_sample_once(const std::string& preset, const std::map<std::string, std::string>& flags,
                    const std::string& config_file, const std::string& data_path, std::optional<double> precip,
                    std::optional<double> aspect, int season) {
  const ExperimentConfig cfg = resolve_config(preset, flags, config_file);
  if (cfg.methods.size() != 1) throw ConfigError("sample-once takes exactly one method");
  const ProblemSpec problem = make_problem(cfg.problem, cfg.field_noise_denominator);
  const Dataset data = read_dataset_csv(data_path);
  if (data.dims() != problem.dims) {
    throw ConfigError("dataset has " + std::to_string(data.dims()) + " input columns, problem '" + problem.name +
                      "' needs " + std::to_string(problem.dims));
  }

  std::vector<Location> candidates;
  if (problem.kind == ProblemKind::Field) {
    FieldContext ctx = season_for(cfg.seed, season);
    if (precip || aspect) {
      if (!precip || !aspect) throw ConfigError("--precip and --aspect must be given together");
      ctx.precip = *precip;
      ctx.aspect = *aspect;
      ctx.vh = ctx.precip / 150.0 * ctx.aspect;
    }
    candidates = field_candidates(ctx);
  } else {
    candidates = problem.x_test;
  }

  const HarnessSettings settings = harness_settings(cfg, problem);
  auto policy = make_policy(cfg.methods.front(), policy_params(cfg, problem));
  Rng rng = make_rng(cfg.seed, {stream::kPolicy, 0});
  const Batch batch = policy->select(data, candidates, settings.batch, rng);

  std::cout << "rank,index";
  for (std::size_t d = 0; d < problem.dims; ++d) std::cout << ",x" << d + 1;
  std::cout << '\n';
  std::cout.precision(17);
  for (std::size_t k = 0; k < batch.locations.size(); ++k) {
    std::cout << k << ',' << batch.locations[k];
    for (double v : candidates[batch.locations[k]]) std::cout << ',' << v;
    std::cout << '\n';
  }
  if (batch.short_batch) std::cerr << "warning: fewer picks than requested were possible\n";
  return 0;
}

int cmd_eval(const std::vector<std::string>& paths) {
  // Curves are grouped by the file-name stem before "_rep".
  std::map<std::string, std::vector<std::pair<std::string, LearningCurve>>> groups;
  auto add_file = [&](const std::filesystem::path& p) {
    const std::string stem = p.stem().string();
    const auto cut = stem.rfind("_rep");
    const std::string key = cut == std::string::npos ? stem : stem.substr(0, cut);
    const std::string rep = cut == std::string::npos ? "" : stem.substr(cut + 4);
    groups[key].emplace_back(rep, read_curve_csv(p));
  };
  for (const auto& s : paths) {
    const std::filesystem::path p(s);
    if (std::filesystem::is_directory(p)) {
      std::vector<std::filesystem::path> files;
      for (const auto& entry : std::filesystem::directory_iterator(p))
        if (entry.path().extension() == ".csv") files.push_back(entry.path());
      std::sort(files.begin(), files.end());
      for (const auto& f : files) add_file(f);
    } else {
      add_file(p);
    }
  }
  if (groups.empty()) throw ConfigError("no curve files found");

  std::cout.precision(10);
  std::cout << "curve,iterations,final_pi_delta,auuc\n";
  for (const auto& [key, curves] : groups)
    for (const auto& [rep, c] : curves)
      std::cout << key << (rep.empty() ? "" : "_rep" + rep) << ',' << c.pi_delta.size() << ','
                << (c.pi_delta.empty() ? 0.0 : c.pi_delta.back()) << ',' << c.auuc << '\n';

  std::cout << "\nmethod,runs,auuc_mean,auuc_std\n";
  for (const auto& [key, curves] : groups) {
    std::vector<double> v;
    for (const auto& entry : curves) v.push_back(entry.second.auuc);
    std::cout << key << ',' << v.size() << ',' << mean(v) << ',' << sample_std(v) << '\n';
  }

  if (groups.size() > 1) {
    std::cout << "\na,b,n,t,p\n";
    for (auto a = groups.begin(); a != groups.end(); ++a) {
      for (auto b = std::next(a); b != groups.end(); ++b) {
        std::vector<double> xa, xb;
        for (const auto& [ra, ca] : a->second)
          for (const auto& [rb, cb] : b->second)
            if (ra == rb) {
              xa.push_back(ca.auuc);
              xb.push_back(cb.auuc);
            }
        std::cout << a->first << ',' << b->first << ',' << xa.size() << ',';
        if (xa.size() >= 2) {
          const auto r = paired_t_test(xa, xb);
          std::cout << r.t << ',' << r.p << '\n';
        } else {
          std::cout << ",\n";
        }
      }
    }
  }
  return 0;
}

int cmd_initial_data(const std::string& problem_name, double denominator, std::uint64_t seed,
                     const std::string& out) {
  const ProblemSpec problem = make_problem(problem_name, denominator);
  const Dataset data = initial_dataset(problem, derive_seed(seed, {stream::kInitialData}));
  write_dataset_csv(data, out);
  std::cout << data.size() << " rows written to " << out << '\n';
  return 0;
}

}  // namespace

int cli_main(int argc, char** argv) {
  CLI::App app{"Adaptive sampling with prediction-interval networks"};
  app.require_subcommand(1);

  std::string preset, config_file, data_path, out_path;
  std::map<std::string, std::string> flags;
  bool quiet = false;

  auto* run = app.add_subcommand("run", "run a full adaptive-sampling experiment");
  add_experiment_flags(*run, flags);
  add_flag(*run, flags, "iterations", "iterations per run");
  add_flag(*run, flags, "reps", "repetitions");
  add_flag(*run, flags, "out", "output directory");
  run->add_option("--config", config_file, "key = value file; its entries override flags");
  run->add_option("--preset", preset, "quick: 25 iterations, 5 repetitions, half the epochs")
      ->check(CLI::IsMember({"quick"}));
  run->add_flag("--quiet", quiet, "no per-iteration progress on stderr");

  std::optional<double> precip, aspect;
  int season = 0;
  auto* once = app.add_subcommand("sample-once", "one acquisition step on a dataset CSV; prints the batch");
  add_experiment_flags(*once, flags);
  once->add_option("--data", data_path, "dataset CSV with header x1,...,xd,y")->required();
  once->add_option("--config", config_file, "key = value file; its entries override flags");
  once->add_option("--preset", preset, "quick: half the epochs")->check(CLI::IsMember({"quick"}));
  once->add_option("--precip", precip, "field: season precipitation");
  once->add_option("--aspect", aspect, "field: season aspect");
  once->add_option("--season", season, "field: season index drawn from --seed")->check(CLI::NonNegativeNumber);

  std::vector<std::string> curve_paths;
  auto* eval = app.add_subcommand("eval", "PI_delta and AUUC summaries from stored curve CSVs");
  eval->add_option("curves", curve_paths, "curve CSV files or directories")->required();

  auto* selftest = app.add_subcommand("selftest", "run the built-in oracle checks");

  std::string init_problem = "cos";
  double init_denominator = 1500.0;
  std::uint64_t init_seed = 0;
  auto* init = app.add_subcommand("initial-data", "write a problem's seeded initial dataset as CSV");
  init->add_option("--problem", init_problem, "problem name");
  init->add_option("--seed", init_seed, "repetition seed");
  init->add_option("--field-noise-denominator", init_denominator, "150 or 1500")
      ->check(CLI::IsMember({150.0, 1500.0}));
  init->add_option("--out", out_path, "output CSV")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsageExit;
  }

  try {
    if (*run) return cmd_run(preset, flags, config_file, quiet);
    if (*once) return cmd_sample_once(preset, flags, config_file, data_path, precip, aspect, season);
    if (*eval) return cmd_eval(curve_paths);
    if (*selftest) return run_selftest(std::cout) == 0 ? 0 : kRuntimeExit;
    if (*init) return cmd_initial_data(init_problem, init_denominator, init_seed, out_path);
  } catch (const ConfigError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kUsageExit;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kRuntimeExit;
  }
  return kUsageExit;
}

}  // namespace aspinn
