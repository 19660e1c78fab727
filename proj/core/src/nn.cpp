#include "aspinn/nn.hpp"

#include "aspinn/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace aspinn {

namespace {

void activate(Eigen::MatrixXd& z, Activation act) {
  switch (act) {
    case Activation::Tanh:
      // Eigen's double tanh is scalar; this form uses the vectorized exp.
      // Absolute error stays at the 1e-16 level; |z| > 20 saturates exactly.
      z.array() = 1.0 - 2.0 / ((2.0 * z.array().min(20.0).max(-20.0)).exp() + 1.0);
      break;
    case Activation::Relu:
      z = z.array().max(0.0);
      break;
  }
}

// Derivative expressed through the activation value a = act(z).
Eigen::ArrayXXd activation_slope(const Eigen::MatrixXd& a, Activation act) {
  switch (act) {
    case Activation::Tanh:
      return 1.0 - a.array().square();
    case Activation::Relu:
      return (a.array() > 0.0).cast<double>();
  }
  return Eigen::ArrayXXd::Ones(a.rows(), a.cols());
}

bool finite(double v) { return std::isfinite(v); }

double sigmoid(double v) {
  if (v >= 0) {
    const double e = std::exp(-v);
    return 1.0 / (1.0 + e);
  }
  const double e = std::exp(v);
  return e / (1.0 + e);
}

}  // namespace

std::size_t Mlp::num_parameters() const {
  std::size_t n = 0;
  for (std::size_t l = 0; l < weights.size(); ++l) n += weights[l].size() + biases[l].size();
  return n;
}

Eigen::MatrixXd Mlp::forward(const Eigen::MatrixXd& inputs) const {
  if (inputs.rows() != input_dim()) {
    throw ShapeError("forward: expected input dimension " + std::to_string(input_dim()) + ", got " +
                     std::to_string(inputs.rows()));
  }
  Eigen::MatrixXd a = inputs;
  for (std::size_t l = 0; l < weights.size(); ++l) {
    Eigen::MatrixXd z = weights[l] * a;
    z.colwise() += biases[l];
    if (l + 1 < weights.size()) activate(z, activation);
    a = std::move(z);
  }
  return a;
}

Eigen::VectorXd Mlp::forward(const Eigen::VectorXd& input) const {
  return forward(Eigen::MatrixXd(input)).col(0);
}

DropoutMasks sample_dropout_masks(const Mlp& net, Eigen::Index batch, double rate, Rng& rng) {
  DropoutMasks masks;
  if (net.weights.size() < 2) return masks;
  std::bernoulli_distribution keep(1.0 - rate);
  const double scale = rate < 1.0 ? 1.0 / (1.0 - rate) : 0.0;
  for (std::size_t l = 0; l + 1 < net.weights.size(); ++l) {
    Eigen::MatrixXd m(net.layer_sizes[l + 1], batch);
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      for (Eigen::Index i = 0; i < m.rows(); ++i) m(i, j) = keep(rng) ? scale : 0.0;
    masks.push_back(std::move(m));
  }
  return masks;
}

Mlp init_network(int input_dim, std::span<const int> hidden, int n_outputs, std::uint64_t seed, bool wide_bias,
                 Activation activation) {
  if (hidden.empty()) throw ConfigError("init_network: hidden layer list is empty");
  if (input_dim <= 0) throw ConfigError("init_network: input dimension must be positive");
  if (n_outputs != 1 && n_outputs != 2) throw ConfigError("init_network: n_outputs must be 1 or 2");
  for (int h : hidden) {
    if (h <= 0) throw ConfigError("init_network: layer sizes must be positive");
  }

  Mlp net;
  net.activation = activation;
  net.layer_sizes.push_back(input_dim);
  net.layer_sizes.insert(net.layer_sizes.end(), hidden.begin(), hidden.end());
  net.layer_sizes.push_back(n_outputs);

  Rng rng(seed);
  for (std::size_t l = 0; l + 1 < net.layer_sizes.size(); ++l) {
    const int fan_in = net.layer_sizes[l];
    const int fan_out = net.layer_sizes[l + 1];
    const double limit = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
    std::uniform_real_distribution<double> dist(-limit, limit);
    Eigen::MatrixXd w(fan_out, fan_in);
    for (Eigen::Index j = 0; j < w.cols(); ++j)
      for (Eigen::Index i = 0; i < w.rows(); ++i) w(i, j) = dist(rng);
    net.weights.push_back(std::move(w));
    net.biases.push_back(Eigen::VectorXd::Zero(fan_out));
  }

  if (wide_bias && n_outputs == 2) {
    net.weights.back().setZero();
    net.biases.back() << -3.0, 3.0;
  }
  return net;
}

Gradients Gradients::zeros_like(const Mlp& net) {
  Gradients g;
  for (std::size_t l = 0; l < net.weights.size(); ++l) {
    g.weights.push_back(Eigen::MatrixXd::Zero(net.weights[l].rows(), net.weights[l].cols()));
    g.biases.push_back(Eigen::VectorXd::Zero(net.biases[l].size()));
  }
  return g;
}

double loss_and_gradient(const Mlp& net, const Eigen::MatrixXd& inputs, const OutputLoss& loss, Gradients& grads,
                         const DropoutMasks* masks) {
  if (inputs.rows() != net.input_dim()) throw ShapeError("loss_and_gradient: input dimension mismatch");
  const std::size_t L = net.weights.size();
  // Buffers are reused across calls; training calls this once per epoch with
  // identical shapes.
  thread_local std::vector<Eigen::MatrixXd> acts;
  thread_local Eigen::MatrixXd delta;
  thread_local Eigen::MatrixXd back;
  acts.resize(L);
  auto layer_input = [&](std::size_t l) -> const Eigen::MatrixXd& { return l == 0 ? inputs : acts[l - 1]; };

  for (std::size_t l = 0; l < L; ++l) {
    Eigen::MatrixXd& z = acts[l];
    z.noalias() = net.weights[l] * layer_input(l);
    z.colwise() += net.biases[l];
    if (l + 1 < L) {
      activate(z, net.activation);
      if (masks != nullptr) z.array() *= (*masks)[l].array();
    }
  }

  delta.resize(acts.back().rows(), acts.back().cols());
  const double value = loss(acts.back(), delta);

  if (grads.weights.size() != L) grads = Gradients::zeros_like(net);
  for (std::size_t l = L; l-- > 0;) {
    grads.weights[l].noalias() = delta * layer_input(l).transpose();
    grads.biases[l] = delta.rowwise().sum();
    if (l > 0) {
      back.noalias() = net.weights[l].transpose() * delta;
      const Eigen::MatrixXd& a = acts[l - 1];
      delta.resize(back.rows(), back.cols());
      if (masks != nullptr) {
        // With inverted dropout the stored activation already includes the mask;
        // recover the slope from the unmasked value.
        const Eigen::ArrayXXd& m = (*masks)[l - 1].array();
        const Eigen::ArrayXXd safe = (m > 0.0).select(m, 1.0);
        const Eigen::MatrixXd unmasked = (a.array() / safe).matrix();
        delta.array() = back.array() * activation_slope(unmasked, net.activation) * m;
      } else if (net.activation == Activation::Tanh) {
        delta.array() = back.array() * (1.0 - a.array().square());
      } else {
        delta.array() = back.array() * activation_slope(a, net.activation);
      }
    }
  }
  return value;
}

OutputLoss mse_loss(Eigen::RowVectorXd targets) {
  return [targets = std::move(targets)](const Eigen::MatrixXd& out, Eigen::MatrixXd& grad) {
    if (out.rows() != 1 || out.cols() != targets.size()) throw ShapeError("mse_loss: output shape mismatch");
    const double n = static_cast<double>(targets.size());
    const Eigen::RowVectorXd r = out.row(0) - targets;
    grad.resize(1, out.cols());
    grad.row(0) = (2.0 / n) * r;
    return r.squaredNorm() / n;
  };
}

OutputLoss pi_loss(Eigen::RowVectorXd targets, PiLossParams p) {
  return [targets = std::move(targets), p](const Eigen::MatrixXd& out, Eigen::MatrixXd& grad) {
    if (out.rows() != 2 || out.cols() != targets.size()) throw ShapeError("pi_loss: output shape mismatch");
    const Eigen::Index n = out.cols();
    const double nd = static_cast<double>(n);
    grad.setZero(2, n);

    // Outputs form an unordered pair; the smaller one is the lower bound.
    auto lo = [&](Eigen::Index i) -> Eigen::Index { return out(0, i) <= out(1, i) ? 0 : 1; };

    Eigen::Index captured = 0;
    double width_sum = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      const double l = out(lo(i), i), u = out(1 - lo(i), i);
      if (l <= targets(i) && targets(i) <= u) {
        ++captured;
        width_sum += u - l;
      }
    }
    double loss = 0.0;
    if (captured > 0) {
      const double c = static_cast<double>(captured);
      loss += width_sum / c;
      for (Eigen::Index i = 0; i < n; ++i) {
        const Eigen::Index a = lo(i);
        if (out(a, i) <= targets(i) && targets(i) <= out(1 - a, i)) {
          grad(a, i) -= 1.0 / c;
          grad(1 - a, i) += 1.0 / c;
        }
      }
    }

    Eigen::ArrayXd su(n), sl(n);
    double soft = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      su(i) = sigmoid(p.steepness * (out(1 - lo(i), i) - targets(i)));
      sl(i) = sigmoid(p.steepness * (targets(i) - out(lo(i), i)));
      soft += su(i) * sl(i);
    }
    soft /= nd;
    const double shortfall = p.coverage_target - soft;
    if (shortfall > 0.0) {
      loss += p.lambda * shortfall * shortfall;
      const double k = -2.0 * p.lambda * shortfall / nd;  // dLoss/dsoft_i
      for (Eigen::Index i = 0; i < n; ++i) {
        const Eigen::Index a = lo(i);
        grad(1 - a, i) += k * p.steepness * su(i) * (1.0 - su(i)) * sl(i);
        grad(a, i) -= k * p.steepness * sl(i) * (1.0 - sl(i)) * su(i);
      }
    }
    // Saturated sigmoid tails produce subnormal terms that slow every
    // downstream matrix product without changing the result.
    grad = (grad.array().abs() < 1e-200).select(0.0, grad);
    return loss;
  };
}

double hard_coverage(const Eigen::MatrixXd& outputs, const Eigen::RowVectorXd& targets) {
  if (outputs.cols() == 0) return 0.0;
  Eigen::Index inside = 0;
  for (Eigen::Index i = 0; i < outputs.cols(); ++i) {
    const double l = std::min(outputs(0, i), outputs(1, i)), u = std::max(outputs(0, i), outputs(1, i));
    if (l <= targets(i) && targets(i) <= u) ++inside;
  }
  return static_cast<double>(inside) / static_cast<double>(outputs.cols());
}

Adam::Adam(const Mlp& net, double learning_rate, double beta1, double beta2, double eps)
    : lr_(learning_rate),
      beta1_(beta1),
      beta2_(beta2),
      eps_(eps),
      m_(Gradients::zeros_like(net)),
      v_(Gradients::zeros_like(net)) {}

void Adam::step(Mlp& net, const Gradients& g) {
  ++t_;
  const double c1 = 1.0 - std::pow(beta1_, static_cast<double>(t_));
  const double c2 = 1.0 - std::pow(beta2_, static_cast<double>(t_));
  const double step = lr_ * std::sqrt(c2) / c1;
  for (std::size_t l = 0; l < net.weights.size(); ++l) {
    m_.weights[l] = beta1_ * m_.weights[l] + (1.0 - beta1_) * g.weights[l];
    v_.weights[l] = beta2_ * v_.weights[l] + (1.0 - beta2_) * g.weights[l].cwiseAbs2();
    net.weights[l].array() -= step * m_.weights[l].array() / (v_.weights[l].array().sqrt() + eps_);
    m_.biases[l] = beta1_ * m_.biases[l] + (1.0 - beta1_) * g.biases[l];
    v_.biases[l] = beta2_ * v_.biases[l] + (1.0 - beta2_) * g.biases[l].cwiseAbs2();
    net.biases[l].array() -= step * m_.biases[l].array() / (v_.biases[l].array().sqrt() + eps_);
  }
}

RegModel init_reg_model(int input_dim, std::span<const int> hidden, std::uint64_t seed) {
  RegModel m;
  m.net = init_network(input_dim, hidden, 1, seed);
  m.x_norm = Standardizer::identity(static_cast<std::size_t>(input_dim));
  m.y_norm = Standardizer::identity(1);
  return m;
}

PiModel init_pi_model(int input_dim, std::span<const int> hidden, std::uint64_t seed, bool wide_bias,
                      double coverage_target) {
  if (!(coverage_target > 0.0 && coverage_target < 1.0)) throw ConfigError("coverage target must be in (0, 1)");
  PiModel m;
  m.net = init_network(input_dim, hidden, 2, seed, wide_bias);
  m.x_norm = Standardizer::identity(static_cast<std::size_t>(input_dim));
  m.y_norm = Standardizer::identity(1);
  m.coverage_target = coverage_target;
  return m;
}

namespace {

struct Normalized {
  Eigen::MatrixXd x;
  Eigen::RowVectorXd y;
  Standardizer x_norm;
  Standardizer y_norm;
};

Normalized normalize(const Dataset& data, bool enabled) {
  Normalized n;
  const Eigen::MatrixXd x = data.input_matrix();
  const Eigen::MatrixXd y = data.target_row();
  n.x_norm = enabled ? Standardizer::fit(x) : Standardizer::identity(data.dims());
  n.y_norm = enabled ? Standardizer::fit(y) : Standardizer::identity(1);
  n.x = n.x_norm.apply(x);
  n.y = n.y_norm.apply(y).row(0);
  return n;
}

double scheduled_rate(const TrainConfig& cfg, double base, int epoch) {
  const double f = static_cast<double>(epoch) / static_cast<double>(cfg.epochs);
  const double floor = std::clamp(cfg.final_lr_fraction, 0.0, 1.0);
  return base * (floor + (1.0 - floor) * 0.5 * (1.0 + std::cos(std::numbers::pi * f)));
}

void check_trainable(const Mlp& net, const Dataset& data, std::size_t min_size) {
  if (data.size() < min_size) {
    throw ConfigError("training needs at least " + std::to_string(min_size) + " observations");
  }
  if (static_cast<int>(data.dims()) != net.input_dim()) throw ShapeError("training data dimension mismatch");
}

RegModel fit_regression(RegModel model, const Dataset& data, const TrainConfig& cfg, double dropout_rate) {
  check_trainable(model.net, data, 2);
  if (cfg.epochs <= 0 || !(cfg.learning_rate > 0.0)) throw ConfigError("epochs and learning rate must be positive");
  const Normalized n = normalize(data, cfg.normalize);
  const OutputLoss loss = mse_loss(n.y);
  const Mlp initial = model.net;

  for (int attempt = 0; attempt < 2; ++attempt) {
    Mlp net = initial;
    Adam adam(net, cfg.learning_rate * (attempt == 0 ? 1.0 : 0.5));
    Gradients g = Gradients::zeros_like(net);
    Rng mask_rng(derive_seed(cfg.seed, {0xd50, static_cast<std::uint64_t>(attempt)}));
    double first = std::numeric_limits<double>::quiet_NaN();
    bool diverged = false;
    int failed_epoch = 0;
    for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
      double value = 0.0;
      if (dropout_rate > 0.0) {
        const DropoutMasks masks = sample_dropout_masks(net, n.x.cols(), dropout_rate, mask_rng);
        value = loss_and_gradient(net, n.x, loss, g, &masks);
      } else {
        value = loss_and_gradient(net, n.x, loss, g);
      }
      if (!finite(value)) {
        diverged = true;
        failed_epoch = epoch;
        break;
      }
      if (epoch == 0) first = value;
      if (cfg.on_epoch) cfg.on_epoch(epoch, value, std::numeric_limits<double>::quiet_NaN(),
                                     std::numeric_limits<double>::quiet_NaN());
      adam.step(net, g);
    }
    if (diverged) {
      if (attempt == 1) throw TrainingDivergence("regression loss became NaN", failed_epoch);
      continue;
    }
    Eigen::MatrixXd grad;
    const double last = loss(net.forward(n.x), grad);
    if (!finite(last)) {
      if (attempt == 1) throw TrainingDivergence("regression loss became NaN", cfg.epochs);
      continue;
    }
    model.net = std::move(net);
    model.x_norm = n.x_norm;
    model.y_norm = n.y_norm;
    model.initial_loss = first;
    model.final_loss = last;
    model.dropout_rate = dropout_rate;
    model.trained = true;
    return model;
  }
  throw TrainingDivergence("regression loss became NaN", 0);
}

}  // namespace

RegModel train_regression(RegModel model, const Dataset& data, const TrainConfig& cfg) {
  return fit_regression(std::move(model), data, cfg, 0.0);
}

RegModel train_dropout_regression(RegModel model, const Dataset& data, const TrainConfig& cfg, double dropout_rate) {
  if (!(dropout_rate >= 0.0 && dropout_rate < 1.0)) throw ConfigError("dropout rate must be in [0, 1)");
  return fit_regression(std::move(model), data, cfg, dropout_rate);
}

PiModel train_pi_network(PiModel model, const Dataset& data, const RegModel& reg, const TrainConfig& cfg) {
  check_trainable(model.net, data, 2);
  if (!reg.trained) throw UsageError("train_pi_network: regression model must be trained first");
  if (reg.net.input_dim() != model.net.input_dim()) throw ShapeError("train_pi_network: model input dimensions differ");
  if (cfg.epochs <= 0 || !(cfg.learning_rate > 0.0)) throw ConfigError("epochs and learning rate must be positive");

  const Normalized n = normalize(data, cfg.normalize);

  Mlp initial = model.net;
  if (reg.net.layer_sizes.size() == initial.layer_sizes.size() &&
      std::equal(reg.net.layer_sizes.begin(), reg.net.layer_sizes.end() - 1, initial.layer_sizes.begin())) {
    for (std::size_t l = 0; l + 1 < initial.weights.size(); ++l) {
      initial.weights[l] = reg.net.weights[l];
      initial.biases[l] = reg.net.biases[l];
    }
    if (cfg.center_on_regression) {
      // Both bounds start on the point estimate, keeping the wide-bias offsets.
      const Eigen::Index last = static_cast<Eigen::Index>(initial.weights.size()) - 1;
      for (Eigen::Index k = 0; k < 2; ++k) {
        initial.weights[static_cast<std::size_t>(last)].row(k) = reg.net.weights.back().row(0);
        initial.biases.back()(k) += reg.net.biases.back()(0);
      }
    }
  }

  const double target = model.coverage_target;
  // Coverage band inside which checkpoints compete on captured width.
  const double band = std::max(kCoverageBand, 1.5 / static_cast<double>(data.size()));
  auto captured_width = [&](const Eigen::MatrixXd& out) {
    double sum = 0.0;
    Eigen::Index c = 0;
    for (Eigen::Index i = 0; i < out.cols(); ++i) {
      const double l = std::min(out(0, i), out(1, i)), u = std::max(out(0, i), out(1, i));
      if (l <= n.y(i) && n.y(i) <= u) {
        sum += u - l;
        ++c;
      }
    }
    return c > 0 ? sum / static_cast<double>(c) : 0.0;
  };

  for (int attempt = 0; attempt < 2; ++attempt) {
    Mlp net = initial;
    const double base_rate = cfg.learning_rate * (attempt == 0 ? 1.0 : 0.5);
    Adam adam(net, base_rate);
    Gradients g = Gradients::zeros_like(net);
    double lambda = cfg.initial_lambda;

    struct Checkpoint {
      Mlp net;
      double coverage = 0.0;
      double lambda = 0.0;
      double score = std::numeric_limits<double>::infinity();
      double width = std::numeric_limits<double>::infinity();
    };
    Checkpoint narrowest;  // smallest captured width with coverage in the band
    Checkpoint closest;    // smallest coverage gap, then smallest captured width
    bool diverged = false;
    int failed_epoch = 0;

    auto consider = [&](const Mlp& candidate, const Eigen::MatrixXd& out, double lam) {
      const double cov = hard_coverage(out, n.y);
      const double gap = std::abs(cov - target);
      const double width = captured_width(out);
      if (gap <= band && width < narrowest.score) narrowest = {candidate, cov, lam, width, width};
      if (gap < closest.score || (gap == closest.score && width <= closest.width))
        closest = {candidate, cov, lam, gap, width};
      return cov;
    };

    for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
      Eigen::MatrixXd out_seen;
      const OutputLoss base = pi_loss(n.y, {target, lambda, cfg.steepness});
      const OutputLoss tap = [&](const Eigen::MatrixXd& out, Eigen::MatrixXd& grad) {
        out_seen = out;
        return base(out, grad);
      };
      const double value = loss_and_gradient(net, n.x, tap, g);
      if (!finite(value)) {
        diverged = true;
        failed_epoch = epoch;
        break;
      }
      const double cov = consider(net, out_seen, lambda);
      if (cfg.on_epoch) cfg.on_epoch(epoch, value, cov, lambda);
      adam.set_learning_rate(scheduled_rate(cfg, base_rate, epoch));
      adam.step(net, g);
      lambda = std::clamp(lambda * (1.0 + cfg.eta * (target - cov)), 1e-3, 1e4);
    }
    if (diverged) {
      if (attempt == 1) throw TrainingDivergence("interval loss became NaN", failed_epoch);
      continue;
    }

    const Eigen::MatrixXd out = net.forward(n.x);
    if (!out.allFinite()) {
      if (attempt == 1) throw TrainingDivergence("interval outputs became NaN", cfg.epochs);
      continue;
    }
    const double final_cov = consider(net, out, lambda);

    model.x_norm = n.x_norm;
    model.y_norm = n.y_norm;
    model.trained = true;
    Checkpoint last{std::move(net), final_cov, lambda, 0.0};
    Checkpoint& chosen = std::abs(final_cov - target) <= kCoverageTolerance ? last
                         : std::isfinite(narrowest.score)                   ? narrowest
                                                                            : closest;
    model.net = std::move(chosen.net);
    model.lambda = chosen.lambda;
    model.train_coverage = chosen.coverage;
    model.coverage_warning = std::abs(chosen.coverage - target) > kCoverageTolerance;
    return model;
  }
  throw TrainingDivergence("interval loss became NaN", 0);
}

std::vector<double> predict(const RegModel& model, std::span<const Location> xs) {
  if (!model.trained) throw UsageError("predict: model is not trained");
  if (xs.empty()) return {};
  const Eigen::MatrixXd out = model.y_norm.invert(model.net.forward(model.x_norm.apply(to_matrix(xs))));
  return {out.data(), out.data() + out.size()};
}

double predict(const RegModel& model, const Location& x) { return predict(model, std::span<const Location>(&x, 1))[0]; }

Eigen::MatrixXd mc_dropout_predict(const RegModel& model, std::span<const Location> xs, int passes, Rng& rng) {
  if (!model.trained) throw UsageError("mc_dropout_predict: model is not trained");
  if (passes <= 0) throw ConfigError("mc_dropout_predict: passes must be positive");
  const Eigen::MatrixXd x = model.x_norm.apply(to_matrix(xs));
  const Mlp& net = model.net;
  Eigen::MatrixXd result(passes, x.cols());
  for (int t = 0; t < passes; ++t) {
    const DropoutMasks masks = sample_dropout_masks(net, x.cols(), model.dropout_rate, rng);
    Eigen::MatrixXd a = x;
    for (std::size_t l = 0; l < net.weights.size(); ++l) {
      Eigen::MatrixXd z = net.weights[l] * a;
      z.colwise() += net.biases[l];
      if (l + 1 < net.weights.size()) {
        activate(z, net.activation);
        z.array() *= masks[l].array();
      }
      a = std::move(z);
    }
    result.row(t) = model.y_norm.invert(a).row(0);
  }
  return result;
}

std::vector<Interval> raw_intervals(const PiModel& model, std::span<const Location> xs) {
  if (xs.empty()) return {};
  const Eigen::MatrixXd z = model.net.forward(model.x_norm.apply(to_matrix(xs)));
  const double mu = model.y_norm.mean(0);
  const double sd = model.y_norm.scale(0);
  std::vector<Interval> out(xs.size());
  for (std::size_t j = 0; j < xs.size(); ++j) {
    const auto c = static_cast<Eigen::Index>(j);
    const double a = z(0, c) * sd + mu;
    const double b = z(1, c) * sd + mu;
    out[j] = {std::min(a, b), std::max(a, b)};
  }
  return out;
}

std::vector<Interval> predict_interval(const PiModel& model, std::span<const Location> xs) {
  if (!model.trained) throw UsageError("predict_interval: model is not trained");
  return raw_intervals(model, xs);
}

Interval predict_interval(const PiModel& model, const Location& x) {
  return predict_interval(model, std::span<const Location>(&x, 1))[0];
}

double empirical_coverage(const PiModel& model, const Dataset& data) {
  if (data.empty()) return 0.0;
  const auto bounds = predict_interval(model, data.x());
  std::size_t inside = 0;
  for (std::size_t i = 0; i < data.size(); ++i) {
    if (bounds[i].lower <= data.y(i) && data.y(i) <= bounds[i].upper) ++inside;
  }
  return static_cast<double>(inside) / static_cast<double>(data.size());
}

}  // namespace aspinn
