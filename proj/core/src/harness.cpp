#include "aspinn/harness.hpp"

#include "aspinn/errors.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <map>
#include <sstream>

namespace aspinn {

std::vector<int> default_architecture(std::string_view problem) {
  if (problem == "cosqr") return {500, 100, 50};
  return {100, 100};
}

void apply_quick_preset(ExperimentConfig& cfg) {
  cfg.iterations = 25;
  cfg.repetitions = 5;
  cfg.epochs = std::max(1, cfg.epochs / 2);
}

void validate(const ExperimentConfig& cfg) {
  (void)make_problem(cfg.problem, cfg.field_noise_denominator);
  if (cfg.methods.empty()) throw ConfigError("at least one method is required");
  if (cfg.iterations < 1) throw ConfigError("iterations must be >= 1");
  if (cfg.repetitions < 1) throw ConfigError("reps must be >= 1");
  if (cfg.batch < 1) throw ConfigError("batch must be >= 1");
  if (!(cfg.theta >= 0.0) || !std::isfinite(cfg.theta)) throw ConfigError("theta must be a finite value >= 0");
  if (!(cfg.r > 0.0) || !std::isfinite(cfg.r)) throw ConfigError("r must be > 0");
  if (!(cfg.eta > 0.0) || !std::isfinite(cfg.eta)) throw ConfigError("eta must be > 0");
  if (cfg.epochs < 1) throw ConfigError("epochs must be >= 1");
  if (!(cfg.learning_rate > 0.0)) throw ConfigError("learning rate must be > 0");
  if (cfg.gp_steps < 0) throw ConfigError("gp steps must be >= 0");
  if (!(cfg.dropout_rate > 0.0 && cfg.dropout_rate < 1.0)) throw ConfigError("dropout rate must be in (0, 1)");
  if (cfg.dropout_passes < 2) throw ConfigError("dropout passes must be >= 2");
  for (int w : cfg.hidden)
    if (w < 1) throw ConfigError("hidden widths must be >= 1");
}

std::string canonical_config(const ExperimentConfig& cfg) {
  std::ostringstream out;
  out.precision(17);
  out << "problem=" << cfg.problem << '\n' << "method=";
  for (std::size_t i = 0; i < cfg.methods.size(); ++i) out << (i ? "," : "") << method_name(cfg.methods[i]);
  out << '\n'
      << "iterations=" << cfg.iterations << '\n'
      << "reps=" << cfg.repetitions << '\n'
      << "batch=" << cfg.batch << '\n'
      << "theta=" << cfg.theta << '\n'
      << "r=" << cfg.r << '\n'
      << "eta=" << cfg.eta << '\n'
      << "hidden=";
  const auto hidden = cfg.hidden.empty() ? default_architecture(cfg.problem) : cfg.hidden;
  for (std::size_t i = 0; i < hidden.size(); ++i) out << (i ? "," : "") << hidden[i];
  out << '\n'
      << "epochs=" << cfg.epochs << '\n'
      << "lr=" << cfg.learning_rate << '\n'
      << "gp-steps=" << cfg.gp_steps << '\n'
      << "dropout-rate=" << cfg.dropout_rate << '\n'
      << "dropout-passes=" << cfg.dropout_passes << '\n'
      << "seed=" << cfg.seed << '\n'
      << "field-noise-denominator=" << cfg.field_noise_denominator << '\n';
  return out.str();
}

std::uint64_t config_hash(const ExperimentConfig& cfg) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : canonical_config(cfg)) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

HarnessSettings harness_settings(const ExperimentConfig& cfg, const ProblemSpec& problem) {
  HarnessSettings s;
  s.batch = problem.kind == ProblemKind::Field ? 1 : cfg.batch;
  s.hidden = cfg.hidden.empty() ? default_architecture(problem.name) : cfg.hidden;
  s.eval_train.epochs = cfg.epochs;
  s.eval_train.learning_rate = cfg.learning_rate;
  s.eval_train.eta = cfg.eta;
  return s;
}

PolicyParams policy_params(const ExperimentConfig& cfg, const ProblemSpec& problem) {
  const auto hidden = cfg.hidden.empty() ? default_architecture(problem.name) : cfg.hidden;
  PolicyParams p;
  p.aspinn.hidden = hidden;
  p.aspinn.train.epochs = cfg.epochs;
  p.aspinn.train.learning_rate = cfg.learning_rate;
  p.aspinn.train.eta = cfg.eta;
  p.aspinn.theta = cfg.theta;
  p.aspinn.r = cfg.r;
  p.aspinn.space = problem.kind == ProblemKind::Field ? DistanceSpace::Standardized : DistanceSpace::Raw;
  p.gp.max_steps = cfg.gp_steps;
  p.mcdropout.hidden = hidden;
  p.mcdropout.train.epochs = cfg.epochs;
  p.mcdropout.train.learning_rate = cfg.learning_rate;
  p.mcdropout.dropout_rate = cfg.dropout_rate;
  p.mcdropout.passes = cfg.dropout_passes;
  return p;
}

FieldContext season_for(std::uint64_t seed, int t) {
  Rng rng = make_rng(seed, {stream::kSeasons, static_cast<std::uint64_t>(t)});
  return advance_season(rng, t);
}

std::vector<Location> candidates_for(const ProblemSpec& problem, std::uint64_t seed, int t) {
  if (problem.kind == ProblemKind::Field) return field_candidates(season_for(seed, t));
  return problem.x_test;
}

double observe(const ProblemSpec& problem, const Location& x, std::uint64_t seed, int t, std::size_t index,
               int occurrence) {
  Rng rng = make_rng(seed, {stream::kNoise, static_cast<std::uint64_t>(t), static_cast<std::uint64_t>(index),
                            static_cast<std::uint64_t>(occurrence)});
  return sample_observation(problem, x, rng);
}

double evaluate_pi_delta(const ProblemSpec& problem, const Dataset& data, std::span<const Location> grid,
                         const HarnessSettings& settings, std::uint64_t seed) {
  const int dims = static_cast<int>(data.dims());
  TrainConfig reg_cfg = settings.eval_train;
  reg_cfg.seed = derive_seed(seed, {stream::kEvaluation, 1});
  TrainConfig pi_cfg = settings.eval_train;
  pi_cfg.seed = derive_seed(seed, {stream::kEvaluation, 2});
  const RegModel reg = train_regression(init_reg_model(dims, settings.hidden, reg_cfg.seed), data, reg_cfg);
  const PiModel pi = train_pi_network(init_pi_model(dims, settings.hidden, pi_cfg.seed), data, reg, pi_cfg);
  const auto bounds = predict_interval(pi, grid);
  return pi_delta(bounds, ideal_bounds(problem, grid));
}

IterationRecord run_iteration(RunState& state, const HarnessSettings& settings) {
  if (state.problem == nullptr || state.policy == nullptr) throw UsageError("run state is missing problem or policy");
  const ProblemSpec& problem = *state.problem;
  const int t = state.iteration;
  const auto started = std::chrono::steady_clock::now();

  IterationRecord rec;
  rec.iteration = t + 1;
  if (problem.kind == ProblemKind::Field) rec.season = season_for(state.seed, t);
  const auto candidates = candidates_for(problem, state.seed, t);

  try {
    Rng policy_rng = make_rng(state.seed, {stream::kPolicy, static_cast<std::uint64_t>(t)});
    const Batch batch = state.policy->select(state.data, candidates, settings.batch, policy_rng);
    const std::size_t before = state.data.size();

    std::map<std::size_t, int> seen;
    for (std::size_t idx : batch.locations) {
      if (idx >= candidates.size()) throw DomainError("policy returned candidate index out of range");
      const int occurrence = seen[idx]++;
      const Location& x = candidates[idx];
      const double y = observe(problem, x, state.seed, t, idx, occurrence);
      state.data.add(x, y);
      rec.batch.push_back(idx);
      rec.picked.push_back(x);
      rec.observed.push_back(y);
    }
    rec.dataset_size = state.data.size();
    if (rec.dataset_size != before + batch.locations.size()) throw UsageError("dataset bookkeeping mismatch");

    // The evaluation grid for the field problem is the current season's candidates.
    rec.pi_delta = evaluate_pi_delta(problem, state.data, candidates, settings, state.seed);
  } catch (const TrainingDivergence& e) {
    throw TrainingDivergence("iteration " + std::to_string(t + 1) + ": " + e.detail(), e.epoch());
  } catch (const DegeneratePivot& e) {
    throw DegeneratePivot("iteration " + std::to_string(t + 1) + ": " + e.what());
  }

  rec.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  state.iteration = t + 1;
  return rec;
}

ExperimentResult run_experiment(const ExperimentConfig& cfg, const ProgressFn& progress) {
  validate(cfg);
  const ProblemSpec problem = make_problem(cfg.problem, cfg.field_noise_denominator);
  const HarnessSettings settings = harness_settings(cfg, problem);
  const PolicyParams params = policy_params(cfg, problem);
  const std::uint64_t hash = config_hash(cfg);

  ExperimentResult result;
  for (int rep = 0; rep < cfg.repetitions; ++rep) {
    const std::uint64_t seed = cfg.seed + static_cast<std::uint64_t>(rep);
    const Dataset initial = initial_dataset(problem, derive_seed(seed, {stream::kInitialData}));
    for (MethodKind method : cfg.methods) {
      RunRecord record;
      record.method = method;
      record.repetition = rep;
      record.seed = seed;
      record.config_hash = hash;
      record.initial_fingerprint = initial.fingerprint();
      record.initial_size = initial.size();
      try {
        auto policy = make_policy(method, params);
        RunState state{&problem, policy.get(), initial, seed, 0};
        std::vector<double> curve;
        for (int t = 0; t < cfg.iterations; ++t) {
          record.iterations.push_back(run_iteration(state, settings));
          curve.push_back(record.iterations.back().pi_delta);
          if (progress) {
            std::ostringstream msg;
            msg << method_name(method) << " rep " << rep << " iter " << t + 1 << "/" << cfg.iterations
                << " pi_delta " << curve.back();
            progress(msg.str());
          }
        }
        record.curve = make_learning_curve(std::move(curve));
        result.records.push_back(std::move(record));
      } catch (const std::exception& e) {
        result.failures.push_back({method, rep, e.what()});
        if (progress) progress(std::string(method_name(method)) + " rep " + std::to_string(rep) + " failed: " + e.what());
      }
    }
  }
  return result;
}

std::vector<AggregateRow> aggregate_curves(const std::vector<const RunRecord*>& runs) {
  std::vector<AggregateRow> rows;
  if (runs.empty()) return rows;
  std::size_t length = runs.front()->curve.pi_delta.size();
  for (const auto* run : runs) length = std::min(length, run->curve.pi_delta.size());
  for (std::size_t t = 0; t < length; ++t) {
    std::vector<double> column;
    column.reserve(runs.size());
    for (const auto* run : runs) column.push_back(run->curve.pi_delta[t]);
    AggregateRow row;
    row.iteration = static_cast<int>(t + 1);
    double sum = 0.0;
    for (double v : column) sum += v;
    row.mean = sum / static_cast<double>(column.size());
    double ss = 0.0;
    for (double v : column) ss += (v - row.mean) * (v - row.mean);
    row.std = column.size() > 1 ? std::sqrt(ss / static_cast<double>(column.size() - 1)) : 0.0;
    rows.push_back(row);
  }
  return rows;
}

}  // namespace aspinn
