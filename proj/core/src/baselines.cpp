#include "aspinn/baselines.hpp"

#include "aspinn/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

namespace aspinn {

Batch random_select(std::size_t grid_size, int batch_size, Rng& rng) {
  if (batch_size < 1) throw ConfigError("random_select: batch size must be at least 1");
  if (grid_size == 0) throw ShapeError("random_select: empty candidate set");
  std::uniform_int_distribution<std::size_t> pick(0, grid_size - 1);
  Batch b;
  for (int k = 0; k < batch_size; ++k) {
    b.locations.push_back(pick(rng));
    b.delta_j.push_back(0.0);
  }
  return b;
}

Eigen::MatrixXd rbf_kernel(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b, double sf2, double ell) {
  const Eigen::VectorXd na = a.colwise().squaredNorm().transpose();
  const Eigen::RowVectorXd nb = b.colwise().squaredNorm();
  Eigen::MatrixXd d2 = (-2.0 * a.transpose() * b).colwise() + na;
  d2.rowwise() += nb;
  return sf2 * (-d2.array().max(0.0) / (2.0 * ell * ell)).exp().matrix();
}

namespace {

constexpr double kLog2Pi = 1.8378770664093453;  // log(2 pi)

struct LogParams {
  double sf2, ell, sn2;  // logs
};

Eigen::MatrixXd pairwise_sq(const Eigen::MatrixXd& x) {
  const Eigen::VectorXd n = x.colwise().squaredNorm().transpose();
  Eigen::MatrixXd d2 = (-2.0 * x.transpose() * x).colwise() + n;
  d2.rowwise() += n.transpose();
  return d2.array().max(0.0).matrix();
}

// Cholesky with escalating jitter; returns the jitter used.
double robust_llt(const Eigen::MatrixXd& k, Eigen::LLT<Eigen::MatrixXd>& llt) {
  llt.compute(k);
  if (llt.info() == Eigen::Success) return 0.0;
  const auto n = k.rows();
  for (double jitter = 1e-8; jitter <= 1e-4 * 1.0001; jitter *= 10.0) {
    llt.compute(k + jitter * Eigen::MatrixXd::Identity(n, n));
    if (llt.info() == Eigen::Success) return jitter;
  }
  throw std::runtime_error("GP: Cholesky factorization failed after jitter escalation to 1e-4");
}

}  // namespace

ExactGp ExactGp::with_hyperparameters(const Dataset& data, const GpHyperparameters& hyper) {
  if (data.size() < 2) throw ConfigError("GP needs at least 2 observations");
  ExactGp gp;
  const Eigen::MatrixXd x = data.input_matrix();
  const Eigen::MatrixXd y = data.target_row();
  gp.x_norm_ = Standardizer::fit(x);
  gp.y_norm_ = Standardizer::fit(y);
  gp.x_ = gp.x_norm_.apply(x);
  gp.y_ = gp.y_norm_.apply(y).row(0).transpose();
  gp.hyper_ = hyper;
  gp.factorize();
  return gp;
}

void ExactGp::factorize() {
  const auto n = x_.cols();
  Eigen::MatrixXd k = rbf_kernel(x_, x_, hyper_.signal_variance, hyper_.length_scale);
  k.diagonal().array() += hyper_.noise_variance;
  jitter_ = robust_llt(k, llt_);
  alpha_ = llt_.solve(y_);
  const Eigen::MatrixXd l = llt_.matrixL();
  lml_ = -0.5 * y_.dot(alpha_) - l.diagonal().array().log().sum() - 0.5 * static_cast<double>(n) * kLog2Pi;
}

ExactGp ExactGp::fit(const Dataset& data, const GpConfig& cfg) {
  ExactGp gp = with_hyperparameters(data, GpHyperparameters{});
  const auto n = gp.x_.cols();
  const Eigen::MatrixXd d2 = pairwise_sq(gp.x_);
  const Eigen::MatrixXd eye = Eigen::MatrixXd::Identity(n, n);

  LogParams p{std::log(gp.hyper_.signal_variance), std::log(gp.hyper_.length_scale),
              std::log(gp.hyper_.noise_variance)};
  std::array<double, 3> m{0, 0, 0}, v{0, 0, 0};
  const double b1 = 0.9, b2 = 0.999, eps = 1e-8;

  LogParams best = p;
  double best_lml = -std::numeric_limits<double>::infinity();
  double prev = -std::numeric_limits<double>::infinity();
  int stall = 0;
  int step = 0;
  Eigen::LLT<Eigen::MatrixXd> llt;
  for (; step < cfg.max_steps; ++step) {
    const double sf2 = std::exp(p.sf2), ell = std::exp(p.ell), sn2 = std::exp(p.sn2);
    const Eigen::MatrixXd kf = sf2 * (-d2.array() / (2.0 * ell * ell)).exp().matrix();
    Eigen::MatrixXd k = kf;
    k.diagonal().array() += sn2;
    try {
      robust_llt(k, llt);
    } catch (const std::runtime_error&) {
      break;
    }
    const Eigen::VectorXd alpha = llt.solve(gp.y_);
    const Eigen::MatrixXd l = llt.matrixL();
    const double lml =
        -0.5 * gp.y_.dot(alpha) - l.diagonal().array().log().sum() - 0.5 * static_cast<double>(n) * kLog2Pi;
    if (!std::isfinite(lml)) break;
    if (lml > best_lml) {
      best_lml = lml;
      best = p;
    }
    if (lml - prev < cfg.tolerance * (1.0 + std::abs(lml))) {
      if (++stall >= cfg.patience) break;
    } else {
      stall = 0;
    }
    prev = lml;

    const Eigen::MatrixXd w = alpha * alpha.transpose() - llt.solve(eye);
    const std::array<double, 3> grad{
        0.5 * (w.array() * kf.array()).sum(),
        0.5 * (w.array() * kf.array() * d2.array()).sum() / (ell * ell),
        0.5 * w.trace() * sn2,
    };
    const double c1 = 1.0 - std::pow(b1, step + 1), c2 = 1.0 - std::pow(b2, step + 1);
    double* params[3] = {&p.sf2, &p.ell, &p.sn2};
    for (int i = 0; i < 3; ++i) {
      m[i] = b1 * m[i] + (1 - b1) * grad[i];
      v[i] = b2 * v[i] + (1 - b2) * grad[i] * grad[i];
      *params[i] += cfg.learning_rate * (m[i] / c1) / (std::sqrt(v[i] / c2) + eps);  // ascent
    }
    p.sf2 = std::clamp(p.sf2, -10.0, 10.0);
    p.ell = std::clamp(p.ell, std::log(1e-3), std::log(1e3));
    p.sn2 = std::clamp(p.sn2, std::log(1e-6), std::log(10.0));
  }

  gp.hyper_ = {std::exp(best.sf2), std::exp(best.ell), std::exp(best.sn2)};
  gp.steps_ = step;
  gp.factorize();
  return gp;
}

Eigen::MatrixXd ExactGp::cross_kernel(const Eigen::MatrixXd& xs) const {
  return rbf_kernel(x_, xs, hyper_.signal_variance, hyper_.length_scale);
}

Eigen::MatrixXd ExactGp::posterior_covariance(std::span<const Location> xs) const {
  const Eigen::MatrixXd z = x_norm_.apply(to_matrix(xs));
  const Eigen::MatrixXd ks = cross_kernel(z);
  const Eigen::MatrixXd vv = llt_.matrixL().solve(ks);
  Eigen::MatrixXd cov = rbf_kernel(z, z, hyper_.signal_variance, hyper_.length_scale) - vv.transpose() * vv;
  const double s2 = y_norm_.scale(0) * y_norm_.scale(0);
  cov *= s2;
  for (Eigen::Index i = 0; i < cov.rows(); ++i) cov(i, i) = std::max(0.0, cov(i, i));
  return cov;
}

Eigen::VectorXd ExactGp::posterior_mean(std::span<const Location> xs) const {
  const Eigen::MatrixXd z = x_norm_.apply(to_matrix(xs));
  const Eigen::VectorXd mu = cross_kernel(z).transpose() * alpha_;
  return (mu.array() * y_norm_.scale(0) + y_norm_.mean(0)).matrix();
}

double ExactGp::noise_variance() const { return (hyper_.noise_variance + jitter_) * y_norm_.scale(0) * y_norm_.scale(0); }

Batch gp_select(const Dataset& data, std::span<const Location> x_test, int batch_size, const GpConfig& cfg) {
  if (batch_size < 1) throw ConfigError("gp_select: batch size must be at least 1");
  if (x_test.empty()) throw ShapeError("gp_select: empty candidate set");
  const ExactGp gp = ExactGp::fit(data, cfg);
  Eigen::MatrixXd cov = gp.posterior_covariance(x_test);
  const double noise = gp.noise_variance();
  Batch b;
  for (int k = 0; k < batch_size; ++k) {
    Eigen::Index best = 0;
    for (Eigen::Index i = 1; i < cov.rows(); ++i) {
      if (cov(i, i) > cov(best, best)) best = i;
    }
    b.locations.push_back(static_cast<std::size_t>(best));
    b.delta_j.push_back(cov(best, best));
    const Eigen::VectorXd col = cov.col(best);
    cov.noalias() -= col * (col.transpose() / (col(best) + noise));
    for (Eigen::Index i = 0; i < cov.rows(); ++i) cov(i, i) = std::max(0.0, cov(i, i));
  }
  return b;
}

std::vector<double> mcdropout_variance(const RegModel& model, std::span<const Location> x_test, int passes, Rng& rng) {
  if (passes < 2) throw ConfigError("mcdropout_variance: need at least 2 passes");
  const Eigen::MatrixXd draws = mc_dropout_predict(model, x_test, passes, rng);
  // Shift by the first pass so identical draws give exactly zero.
  const Eigen::MatrixXd shifted = draws.rowwise() - draws.row(0);
  const Eigen::RowVectorXd mean = shifted.colwise().mean();
  const Eigen::RowVectorXd var = (shifted.rowwise() - mean).colwise().squaredNorm() / static_cast<double>(passes - 1);
  return {var.data(), var.data() + var.size()};
}

Batch mcdropout_select(const Dataset& data, std::span<const Location> x_test, int batch_size,
                       const McDropoutConfig& cfg, Rng& rng) {
  if (batch_size < 1) throw ConfigError("mcdropout_select: batch size must be at least 1");
  if (x_test.empty()) throw ShapeError("mcdropout_select: empty candidate set");
  TrainConfig train = cfg.train;
  train.seed = rng();
  RegModel model = init_reg_model(static_cast<int>(data.dims()), cfg.hidden, train.seed);
  model = train_dropout_regression(std::move(model), data, train, cfg.dropout_rate);
  const auto var = mcdropout_variance(model, x_test, cfg.passes, rng);

  std::vector<std::size_t> order(var.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return var[a] > var[b]; });
  Batch b;
  for (int k = 0; k < batch_size; ++k) {
    if (static_cast<std::size_t>(k) >= order.size()) {
      b.short_batch = true;
      break;
    }
    b.locations.push_back(order[static_cast<std::size_t>(k)]);
    b.delta_j.push_back(var[order[static_cast<std::size_t>(k)]]);
  }
  return b;
}

MethodKind parse_method(std::string_view name) {
  if (name == "aspinn") return MethodKind::Aspinn;
  if (name == "random") return MethodKind::Random;
  if (name == "gp") return MethodKind::Gp;
  if (name == "mcdropout") return MethodKind::McDropout;
  throw ConfigError("unknown method '" + std::string(name) + "'");
}

std::string_view method_name(MethodKind kind) {
  switch (kind) {
    case MethodKind::Aspinn:
      return "aspinn";
    case MethodKind::Random:
      return "random";
    case MethodKind::Gp:
      return "gp";
    case MethodKind::McDropout:
      return "mcdropout";
  }
  return "unknown";
}

AspinnStep aspinn_select(const Dataset& data, std::span<const Location> x_test, int batch_size,
                         const AspinnConfig& cfg, Rng& rng) {
  const int dims = static_cast<int>(data.dims());
  AspinnStep step;
  TrainConfig reg_cfg = cfg.train;
  reg_cfg.seed = rng();
  TrainConfig pi_cfg = cfg.train;
  pi_cfg.seed = rng();
  step.reg = train_regression(init_reg_model(dims, cfg.hidden, reg_cfg.seed), data, reg_cfg);
  step.pi = train_pi_network(init_pi_model(dims, cfg.hidden, pi_cfg.seed, true, cfg.coverage_target), data, step.reg,
                             pi_cfg);
  step.field = potential_map(x_test, data, step.pi, cfg.theta, cfg.space);
  step.batch = select_batch(step.field, batch_size, cfg.r);
  return step;
}

namespace {

class AspinnPolicy final : public SamplerPolicy {
 public:
  explicit AspinnPolicy(AspinnConfig cfg) : cfg_(std::move(cfg)) {}
  MethodKind kind() const noexcept override { return MethodKind::Aspinn; }
  Batch select(const Dataset& data, std::span<const Location> x_test, int b, Rng& rng) override {
    return aspinn_select(data, x_test, b, cfg_, rng).batch;
  }

 private:
  AspinnConfig cfg_;
};

class RandomPolicy final : public SamplerPolicy {
 public:
  MethodKind kind() const noexcept override { return MethodKind::Random; }
  Batch select(const Dataset&, std::span<const Location> x_test, int b, Rng& rng) override {
    return random_select(x_test.size(), b, rng);
  }
};

class GpPolicy final : public SamplerPolicy {
 public:
  explicit GpPolicy(GpConfig cfg) : cfg_(cfg) {}
  MethodKind kind() const noexcept override { return MethodKind::Gp; }
  Batch select(const Dataset& data, std::span<const Location> x_test, int b, Rng&) override {
    return gp_select(data, x_test, b, cfg_);
  }

 private:
  GpConfig cfg_;
};

class McDropoutPolicy final : public SamplerPolicy {
 public:
  explicit McDropoutPolicy(McDropoutConfig cfg) : cfg_(std::move(cfg)) {}
  MethodKind kind() const noexcept override { return MethodKind::McDropout; }
  Batch select(const Dataset& data, std::span<const Location> x_test, int b, Rng& rng) override {
    return mcdropout_select(data, x_test, b, cfg_, rng);
  }

 private:
  McDropoutConfig cfg_;
};

}  // namespace

std::unique_ptr<SamplerPolicy> make_policy(MethodKind kind, const PolicyParams& params) {
  switch (kind) {
    case MethodKind::Aspinn:
      return std::make_unique<AspinnPolicy>(params.aspinn);
    case MethodKind::Random:
      return std::make_unique<RandomPolicy>();
    case MethodKind::Gp:
      return std::make_unique<GpPolicy>(params.gp);
    case MethodKind::McDropout:
      return std::make_unique<McDropoutPolicy>(params.mcdropout);
  }
  throw ConfigError("unknown method");
}

}  // namespace aspinn
