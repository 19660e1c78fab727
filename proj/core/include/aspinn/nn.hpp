#pragma once

// Small fully-connected networks trained full-batch with Adam.
//
// Samples are stored column-wise: an input batch is a (input_dim x n) matrix
// and the network output is (n_outputs x n). Hidden layers use tanh; the
// output layer is affine.

#include "aspinn/dataset.hpp"
#include "aspinn/rng.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <span>
#include <vector>

namespace aspinn {

enum class Activation { Tanh, Relu };

struct Mlp {
  std::vector<int> layer_sizes;  // input, hidden..., output
  Activation activation = Activation::Tanh;
  std::vector<Eigen::MatrixXd> weights;  // weights[l] is (layer_sizes[l+1] x layer_sizes[l])
  std::vector<Eigen::VectorXd> biases;

  int input_dim() const { return layer_sizes.front(); }
  int output_dim() const { return layer_sizes.back(); }
  std::size_t num_layers() const { return weights.size(); }
  std::size_t num_parameters() const;

  Eigen::MatrixXd forward(const Eigen::MatrixXd& inputs) const;
  Eigen::VectorXd forward(const Eigen::VectorXd& input) const;
};

/// Per-hidden-layer multiplicative masks for dropout (already scaled by 1/(1-p)).
using DropoutMasks = std::vector<Eigen::MatrixXd>;

DropoutMasks sample_dropout_masks(const Mlp& net, Eigen::Index batch, double rate, Rng& rng);

/// Builds a network with `hidden` layer widths between `input_dim` and `n_outputs`.
/// Weights are Glorot-uniform from `seed`. With `wide_bias` (two outputs only)
/// the output weights start at zero and the output biases at (-3, +3), so the
/// initial interval covers +-3 standardized target units everywhere.
Mlp init_network(int input_dim, std::span<const int> hidden, int n_outputs, std::uint64_t seed,
                 bool wide_bias = false, Activation activation = Activation::Tanh);

struct Gradients {
  std::vector<Eigen::MatrixXd> weights;
  std::vector<Eigen::VectorXd> biases;

  static Gradients zeros_like(const Mlp& net);
};

/// Loss over the whole output batch. Writes dLoss/dOutput into `grad`
/// (same shape as `outputs`) and returns the loss value.
using OutputLoss = std::function<double(const Eigen::MatrixXd& outputs, Eigen::MatrixXd& grad)>;

/// Forward + backprop. `masks`, when given, are applied to hidden activations.
double loss_and_gradient(const Mlp& net, const Eigen::MatrixXd& inputs, const OutputLoss& loss, Gradients& grads,
                         const DropoutMasks* masks = nullptr);

/// Mean squared error against a row of targets.
OutputLoss mse_loss(Eigen::RowVectorXd targets);

struct PiLossParams {
  double coverage_target = 0.95;
  double lambda = 1.0;
  double steepness = 150.0;
};

/// Quality-driven interval loss on two output rows read per column as an
/// unordered pair (lower = min, upper = max):
///   mean width over captured points + lambda * max(0, target - soft_coverage)^2
/// Captured membership is the hard indicator lower <= y <= upper; the soft
/// coverage uses sigmoid(s*(u-y)) * sigmoid(s*(y-l)).
OutputLoss pi_loss(Eigen::RowVectorXd targets, PiLossParams params);

/// Fraction of columns with min(outputs) <= y <= max(outputs).
double hard_coverage(const Eigen::MatrixXd& outputs, const Eigen::RowVectorXd& targets);

class Adam {
 public:
  explicit Adam(const Mlp& net, double learning_rate, double beta1 = 0.9, double beta2 = 0.999, double eps = 1e-8);
  void step(Mlp& net, const Gradients& grads);
  void set_learning_rate(double lr) noexcept { lr_ = lr; }
  double learning_rate() const noexcept { return lr_; }

 private:
  double lr_, beta1_, beta2_, eps_;
  long t_ = 0;
  Gradients m_, v_;
};

struct TrainConfig {
  int epochs = 2000;
  double learning_rate = 3e-3;
  double eta = 0.1;  // lambda adaptation step for the interval loss
  std::uint64_t seed = 0;
  bool normalize = true;
  double initial_lambda = 10.0;
  double steepness = 150.0;
  /// Interval training only: the learning rate follows a half cosine from
  /// learning_rate down to this fraction of it; 1 keeps it constant.
  double final_lr_fraction = 0.03;
  /// Interval training: start both bounds from the regression output layer.
  bool center_on_regression = true;
  /// Optional per-epoch observer: (epoch, loss, hard coverage or NaN, lambda or NaN).
  std::function<void(int, double, double, double)> on_epoch;
};

struct RegModel {
  Mlp net;
  Standardizer x_norm;
  Standardizer y_norm;
  bool trained = false;
  double initial_loss = 0.0;
  double final_loss = 0.0;
  double dropout_rate = 0.0;  // nonzero only for MC-dropout networks
};

struct PiModel {
  Mlp net;
  Standardizer x_norm;
  Standardizer y_norm;
  double coverage_target = 0.95;
  double lambda = 10.0;
  bool trained = false;
  bool coverage_warning = false;  // target coverage not reached; best checkpoint returned
  double train_coverage = 0.0;
};

struct Interval {
  double lower = 0.0;
  double upper = 0.0;
  double width() const { return upper - lower; }
};

RegModel init_reg_model(int input_dim, std::span<const int> hidden, std::uint64_t seed);
PiModel init_pi_model(int input_dim, std::span<const int> hidden, std::uint64_t seed, bool wide_bias = true,
                      double coverage_target = 0.95);

/// Full-batch Adam on MSE. A NaN loss restarts once at half the learning rate;
/// a second NaN throws TrainingDivergence.
RegModel train_regression(RegModel model, const Dataset& data, const TrainConfig& cfg);

/// Same as train_regression with inverted dropout on hidden layers.
RegModel train_dropout_regression(RegModel model, const Dataset& data, const TrainConfig& cfg, double dropout_rate);

/// Coverage within this distance of the target counts as reached.
inline constexpr double kCoverageTolerance = 0.04;
/// Checkpoints with coverage this close to the target compete on width.
inline constexpr double kCoverageBand = 0.01;

/// Trains the interval network. The hidden layers start from `reg`'s hidden
/// layers when the architectures agree. With center_on_regression both output
/// rows copy the regression output row and the regression bias is added to the
/// wide +/-3 biases, so training starts from a wide band around the mean
/// prediction. lambda follows lambda *= 1 + eta * (target - coverage) after
/// every epoch, clipped to [1e-3, 1e4]. The final network is returned when its
/// training coverage is within kCoverageTolerance of the target; otherwise the
/// checkpoint with the narrowest captured width among epochs within
/// kCoverageBand of the target (1.5/n for small datasets), or failing that the
/// closest-coverage checkpoint, flagged with coverage_warning.
PiModel train_pi_network(PiModel model, const Dataset& data, const RegModel& reg, const TrainConfig& cfg);

std::vector<double> predict(const RegModel& model, std::span<const Location> xs);
double predict(const RegModel& model, const Location& x);

/// `passes` stochastic forward passes with fresh dropout masks; returns (passes x n).
Eigen::MatrixXd mc_dropout_predict(const RegModel& model, std::span<const Location> xs, int passes, Rng& rng);

/// De-normalized, ordered bounds: lower = min(o1, o2), upper = max(o1, o2).
std::vector<Interval> predict_interval(const PiModel& model, std::span<const Location> xs);
Interval predict_interval(const PiModel& model, const Location& x);

/// Same ordering rule applied to raw network outputs, without the trained check.
std::vector<Interval> raw_intervals(const PiModel& model, std::span<const Location> xs);

double empirical_coverage(const PiModel& model, const Dataset& data);

// Checkpoints (JSON: layer sizes, row-major float64 parameters, normalization, coverage target).
void save_checkpoint(const RegModel& model, const std::filesystem::path& path);
void save_checkpoint(const PiModel& model, const std::filesystem::path& path);
RegModel load_reg_checkpoint(const std::filesystem::path& path);
PiModel load_pi_checkpoint(const std::filesystem::path& path);

}  // namespace aspinn
