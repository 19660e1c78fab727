#include "aspinn/selftest.hpp"

#include "aspinn/nn.hpp"
#include "aspinn/sampler.hpp"
#include "aspinn/stats.hpp"
#include "aspinn/uncertainty.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <random>

namespace aspinn {

namespace {

// Direct transcription of the potential-uncertainty definition.
double literal_q(double xp, const Interval& at_p, const std::vector<double>& xs, const std::vector<double>& ys,
                 const std::vector<Interval>& b, double theta) {
  double du = std::numeric_limits<double>::infinity();
  double dl = std::numeric_limits<double>::infinity();
  bool any = false;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (std::abs(xs[i] - xp) > theta) continue;
    if (!(b[i].lower <= ys[i] && ys[i] <= b[i].upper)) continue;
    any = true;
    du = std::min(du, b[i].upper - ys[i]);
    dl = std::min(dl, ys[i] - b[i].lower);
  }
  return any ? du + dl : at_p.upper - at_p.lower;
}

bool check_potential(Rng& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 1 + static_cast<int>(rng() % 40);
    std::vector<double> xs, ys;
    std::vector<Interval> obs;
    Dataset data(1);
    for (int i = 0; i < n; ++i) {
      xs.push_back(u(rng));
      ys.push_back(u(rng));
      const double a = u(rng), b = u(rng);
      obs.push_back({std::min(a, b), std::max(a, b)});
      data.add({xs.back()}, ys.back());
    }
    std::vector<Location> grid;
    std::vector<Interval> at;
    for (int k = 0; k < 20; ++k) {
      grid.push_back({u(rng)});
      const double a = u(rng), b = u(rng);
      at.push_back({std::min(a, b), std::max(a, b)});
    }
    const double theta = 0.3 * (u(rng) + 1.0);
    const auto field = potential_map(grid, at, data, obs, theta);
    for (std::size_t k = 0; k < grid.size(); ++k) {
      if (std::abs(field.q[k] - literal_q(grid[k][0], at[k], xs, ys, obs, theta)) > 1e-12) return false;
    }
  }
  return true;
}

UncertaintyField random_field(Rng& rng, int n) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  UncertaintyField f;
  for (int i = 0; i < n; ++i) {
    f.x_test.push_back({u(rng)});
    f.q.push_back(u(rng) + 1e-3);
  }
  f.coords = f.x_test;
  return f;
}

bool check_condition(Rng& rng) {
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 2 + static_cast<int>(rng() % 20);
    const auto cov = build_covariance(random_field(rng, n), 0.2);
    const std::size_t p = rng() % static_cast<std::size_t>(n);
    const auto next = condition(cov, p);
    const Eigen::MatrixXd expected = cov.k - cov.k.col(p) * cov.k.row(p) / cov.k(p, p);
    if ((next.k - expected).cwiseAbs().maxCoeff() > 1e-10) return false;
    if (next.k.trace() > cov.k.trace() + 1e-12) return false;
  }
  return true;
}

bool check_greedy(Rng& rng) {
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 2 + static_cast<int>(rng() % 15);
    const auto cov = build_covariance(random_field(rng, n), 0.2);
    const auto batch = select_batch(cov, 3);
    SurrogateCov ref = cov;
    for (std::size_t step = 0; step < batch.locations.size(); ++step) {
      std::size_t best = 0;
      double best_val = -1.0;
      for (std::size_t p = 0; p < static_cast<std::size_t>(n); ++p) {
        if (ref.degenerate(p)) continue;
        double v = 0.0;
        for (std::size_t i = 0; i < static_cast<std::size_t>(n); ++i) v += ref.k(i, p) * ref.k(i, p);
        v /= ref.k(p, p);
        if (v > best_val) {
          best_val = v;
          best = p;
        }
      }
      if (batch.locations[step] != best) return false;
      ref = condition(ref, best);
    }
  }
  return true;
}

bool check_gradients(Rng& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  const std::vector<int> hidden{4, 3};
  for (int trial = 0; trial < 10; ++trial) {
    Mlp net = init_network(2, hidden, 2, rng());
    Eigen::MatrixXd x(2, 6);
    Eigen::RowVectorXd y(6);
    for (Eigen::Index i = 0; i < x.size(); ++i) x(i) = g(rng);
    for (Eigen::Index i = 0; i < y.size(); ++i) y(i) = g(rng);
    const auto loss = pi_loss(y, {0.95, 5.0, 3.0});
    Gradients grads = Gradients::zeros_like(net);
    loss_and_gradient(net, x, loss, grads);
    Gradients scratch = Gradients::zeros_like(net);
    const double h = 1e-6;
    for (std::size_t l = 0; l < net.weights.size(); ++l) {
      for (Eigen::Index k = 0; k < net.weights[l].size(); ++k) {
        double& w = net.weights[l](k);
        const double saved = w;
        w = saved + h;
        const double up = loss_and_gradient(net, x, loss, scratch);
        w = saved - h;
        const double down = loss_and_gradient(net, x, loss, scratch);
        w = saved;
        const double fd = (up - down) / (2 * h);
        const double an = grads.weights[l](k);
        if (std::abs(fd - an) > 1e-4 * std::max(1.0, std::abs(fd) + std::abs(an))) return false;
      }
    }
  }
  return true;
}

bool check_ttest() {
  const std::vector<double> a{2.0, 4.0, 6.0};
  const std::vector<double> b{0.0, 0.0, 0.0};
  const auto r = paired_t_test(a, b);
  return std::abs(r.t - 4.0 / (2.0 / std::sqrt(3.0))) < 1e-6 && std::abs(r.p - 0.0742) < 1e-3 && r.dof == 2;
}

}  // namespace

int run_selftest(std::ostream& out) {
  Rng rng(20240611);
  const std::vector<std::pair<const char*, std::function<bool()>>> checks{
      {"potential uncertainty vs literal definition", [&] { return check_potential(rng); }},
      {"surrogate conditioning vs Schur complement", [&] { return check_condition(rng); }},
      {"greedy batch vs reference loop", [&] { return check_greedy(rng); }},
      {"interval loss gradient vs finite differences", [&] { return check_gradients(rng); }},
      {"paired t-test worked example", [] { return check_ttest(); }},
  };
  int failures = 0;
  for (const auto& [name, fn] : checks) {
    bool ok = false;
    try {
      ok = fn();
    } catch (const std::exception& e) {
      out << "  error: " << e.what() << '\n';
    }
    out << (ok ? "PASS " : "FAIL ") << name << '\n';
    if (!ok) ++failures;
  }
  return failures;
}

}  // namespace aspinn
