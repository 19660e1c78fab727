#pragma once

// Comparison samplers and the policy interface shared with ASPINN.
//
// A policy sees the observed dataset, the candidate grid, the batch size and a
// random stream. It never sees the ground-truth problem.

#include "aspinn/dataset.hpp"
#include "aspinn/nn.hpp"
#include "aspinn/rng.hpp"
#include "aspinn/sampler.hpp"
#include "aspinn/uncertainty.hpp"

#include <Eigen/Dense>

#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace aspinn {

/// B uniform draws from the grid, with replacement.
Batch random_select(std::size_t grid_size, int batch_size, Rng& rng);

struct GpHyperparameters {
  double signal_variance = 1.0;
  double length_scale = 1.0;  // in standardized input units
  double noise_variance = 0.1;
};

struct GpConfig {
  int max_steps = 3000;
  double learning_rate = 0.05;
  /// Stop when the log marginal likelihood improves by less than this
  /// (relative) over `patience` consecutive steps.
  double tolerance = 1e-7;
  int patience = 20;
};

/// Exact GP regression with an RBF kernel on standardized inputs and targets.
/// Hyperparameters are fit by Adam ascent on the log marginal likelihood.
class ExactGp {
 public:
  static ExactGp fit(const Dataset& data, const GpConfig& cfg);
  static ExactGp with_hyperparameters(const Dataset& data, const GpHyperparameters& hyper);

  /// Posterior covariance of the latent function over `xs`, in target units squared.
  Eigen::MatrixXd posterior_covariance(std::span<const Location> xs) const;
  Eigen::VectorXd posterior_mean(std::span<const Location> xs) const;

  const GpHyperparameters& hyperparameters() const noexcept { return hyper_; }
  /// Observation noise variance in target units squared.
  double noise_variance() const;
  double log_marginal_likelihood() const noexcept { return lml_; }
  int steps() const noexcept { return steps_; }
  double jitter() const noexcept { return jitter_; }

 private:
  void factorize();
  Eigen::MatrixXd cross_kernel(const Eigen::MatrixXd& xs) const;

  Standardizer x_norm_;
  Standardizer y_norm_;
  Eigen::MatrixXd x_;  // standardized, column per sample
  Eigen::VectorXd y_;  // standardized
  GpHyperparameters hyper_;
  Eigen::LLT<Eigen::MatrixXd> llt_;
  Eigen::VectorXd alpha_;
  double lml_ = 0.0;
  double jitter_ = 0.0;
  int steps_ = 0;
};

/// Squared-exponential kernel with signal variance `sf2` and length `ell`.
Eigen::MatrixXd rbf_kernel(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b, double sf2, double ell);

/// Greedy maximum posterior variance with fantasy (noisy) conditioning between picks.
Batch gp_select(const Dataset& data, std::span<const Location> x_test, int batch_size, const GpConfig& cfg);

struct McDropoutConfig {
  std::vector<int> hidden{100, 100};
  TrainConfig train;
  double dropout_rate = 0.2;
  int passes = 50;
};

/// Per-candidate sample variance (n - 1) over stochastic forward passes.
std::vector<double> mcdropout_variance(const RegModel& model, std::span<const Location> x_test, int passes, Rng& rng);

/// Greedy argmax of MC-dropout variance; a candidate is picked at most once per batch.
Batch mcdropout_select(const Dataset& data, std::span<const Location> x_test, int batch_size,
                       const McDropoutConfig& cfg, Rng& rng);

enum class MethodKind { Aspinn, Random, Gp, McDropout };

MethodKind parse_method(std::string_view name);
std::string_view method_name(MethodKind kind);

struct AspinnConfig {
  std::vector<int> hidden{100, 100};
  TrainConfig train;
  double theta = 0.25;
  double r = 0.15;
  double coverage_target = 0.95;
  DistanceSpace space = DistanceSpace::Raw;
};

/// Result of one ASPINN acquisition step, kept for inspection.
struct AspinnStep {
  RegModel reg;
  PiModel pi;
  UncertaintyField field;
  Batch batch;
};

/// Trains f and g on `data`, computes Q over `x_test` and selects a batch.
/// Network seeds are drawn from `rng`.
AspinnStep aspinn_select(const Dataset& data, std::span<const Location> x_test, int batch_size,
                         const AspinnConfig& cfg, Rng& rng);

struct PolicyParams {
  AspinnConfig aspinn;
  GpConfig gp;
  McDropoutConfig mcdropout;
};

class SamplerPolicy {
 public:
  virtual ~SamplerPolicy() = default;
  virtual MethodKind kind() const noexcept = 0;
  virtual Batch select(const Dataset& data, std::span<const Location> x_test, int batch_size, Rng& rng) = 0;
};

std::unique_ptr<SamplerPolicy> make_policy(MethodKind kind, const PolicyParams& params);

}  // namespace aspinn
