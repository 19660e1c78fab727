#pragma once

// Adaptive-sampling experiment driver.
//
// One repetition runs every requested method from the same initial dataset.
// Randomness is keyed by (seed, purpose, iteration, ...) so that methods share
// season sequences, observation noise at equal picks and the evaluation
// network initialization.

#include "aspinn/baselines.hpp"
#include "aspinn/dataset.hpp"
#include "aspinn/problems.hpp"
#include "aspinn/uncertainty.hpp"

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace aspinn {

struct ExperimentConfig {
  std::string problem = "cos";
  std::vector<MethodKind> methods{MethodKind::Aspinn};
  int iterations = 50;
  int repetitions = 10;
  /// Picks per iteration. The field problem always uses 1.
  int batch = 1;
  double theta = 0.25;
  double r = 0.15;
  double eta = 0.1;
  /// Hidden widths; empty selects the per-problem default.
  std::vector<int> hidden;
  int epochs = 2000;
  double learning_rate = 3e-3;
  int gp_steps = 3000;
  double dropout_rate = 0.2;
  int dropout_passes = 50;
  std::uint64_t seed = 0;
  double field_noise_denominator = 1500.0;
  std::filesystem::path output_dir = "results";
};

/// Hidden widths used when ExperimentConfig::hidden is empty.
std::vector<int> default_architecture(std::string_view problem);

/// T=25, R=5 and half the training epochs.
void apply_quick_preset(ExperimentConfig& cfg);

/// Throws ConfigError on out-of-range settings.
void validate(const ExperimentConfig& cfg);

/// FNV-1a of the canonical `key=value` listing of the configuration.
std::uint64_t config_hash(const ExperimentConfig& cfg);
std::string canonical_config(const ExperimentConfig& cfg);

struct IterationRecord {
  int iteration = 0;  // 1-based
  std::vector<std::size_t> batch;
  std::vector<Location> picked;
  std::vector<double> observed;
  std::size_t dataset_size = 0;  // after the observations were added
  double pi_delta = 0.0;
  double wall_seconds = 0.0;
  std::optional<FieldContext> season;
};

struct RunRecord {
  MethodKind method = MethodKind::Aspinn;
  int repetition = 0;
  std::uint64_t seed = 0;
  std::uint64_t config_hash = 0;
  std::uint64_t initial_fingerprint = 0;
  std::size_t initial_size = 0;
  std::vector<IterationRecord> iterations;
  LearningCurve curve;
};

struct RunFailure {
  MethodKind method = MethodKind::Aspinn;
  int repetition = 0;
  std::string message;
};

struct ExperimentResult {
  std::vector<RunRecord> records;
  std::vector<RunFailure> failures;
};

/// Mutable state of one (method, repetition) run.
struct RunState {
  const ProblemSpec* problem = nullptr;
  SamplerPolicy* policy = nullptr;
  Dataset data;
  std::uint64_t seed = 0;  // repetition seed
  int iteration = 0;       // iterations completed so far
};

/// Everything the harness needs besides the policy.
struct HarnessSettings {
  int batch = 1;
  std::vector<int> hidden{100, 100};
  TrainConfig eval_train;
};

HarnessSettings harness_settings(const ExperimentConfig& cfg, const ProblemSpec& problem);
PolicyParams policy_params(const ExperimentConfig& cfg, const ProblemSpec& problem);

/// Season of iteration `t` (0-based) in the repetition with seed `seed`.
FieldContext season_for(std::uint64_t seed, int t);

/// Candidate grid for iteration `t`.
std::vector<Location> candidates_for(const ProblemSpec& problem, std::uint64_t seed, int t);

/// Observation at candidate `index` of iteration `t`; `occurrence` counts
/// repeated picks of the same candidate within a batch.
double observe(const ProblemSpec& problem, const Location& x, std::uint64_t seed, int t, std::size_t index,
               int occurrence);

/// PI_delta of a freshly initialized evaluation interval network trained on `data`.
double evaluate_pi_delta(const ProblemSpec& problem, const Dataset& data, std::span<const Location> grid,
                         const HarnessSettings& settings, std::uint64_t seed);

/// train/acquire, observe, grow the dataset, evaluate.
IterationRecord run_iteration(RunState& state, const HarnessSettings& settings);

using ProgressFn = std::function<void(const std::string&)>;

ExperimentResult run_experiment(const ExperimentConfig& cfg, const ProgressFn& progress = {});

/// Writes curves/<method>_rep<k>.csv, aggregate_<method>.csv, summary.json,
/// runs.json and timing.csv (the only file with wall-clock data).
void export_results(const ExperimentConfig& cfg, const ExperimentResult& result, const std::filesystem::path& dir);

struct AggregateRow {
  int iteration = 0;
  double mean = 0.0;
  double std = 0.0;  // sample std
};

/// Per-iteration mean and sample std across runs of one method.
std::vector<AggregateRow> aggregate_curves(const std::vector<const RunRecord*>& runs);

}  // namespace aspinn
