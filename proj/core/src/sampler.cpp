#include "aspinn/sampler.hpp"

#include "aspinn/errors.hpp"

#include <cmath>
#include <limits>

namespace aspinn {

double SurrogateCov::pivot_floor() const {
  const double max_diag = k.size() == 0 ? 0.0 : k.diagonal().maxCoeff();
  return kPivotFloor * (max_diag + 1e-12);
}

bool SurrogateCov::degenerate(std::size_t p) const {
  const auto i = static_cast<Eigen::Index>(p);
  return k(i, i) < pivot_floor();
}

double rbf_correlation(const Location& a, const Location& b, double r) {
  if (!(r > 0.0)) throw ConfigError("RBF kernel length must be positive");
  return std::exp(-squared_distance(a, b) / (2.0 * r * r));
}

SurrogateCov build_covariance(const UncertaintyField& field, double r) {
  if (!(r > 0.0)) throw ConfigError("RBF kernel length must be positive");
  const auto& coords = field.coords.empty() ? field.x_test : field.coords;
  if (coords.size() != field.q.size()) throw ShapeError("build_covariance: field sizes disagree");
  const auto n = static_cast<Eigen::Index>(field.q.size());
  SurrogateCov cov;
  cov.coords = coords;
  cov.r = r;
  cov.k.resize(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double qi = field.q[static_cast<std::size_t>(i)];
    if (qi < 0.0) throw ConfigError("build_covariance: negative uncertainty value");
    cov.k(i, i) = qi;
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const double qj = field.q[static_cast<std::size_t>(j)];
      const double v = rbf_correlation(coords[static_cast<std::size_t>(i)], coords[static_cast<std::size_t>(j)], r) *
                       std::sqrt(qi * qj);
      cov.k(i, j) = v;
      cov.k(j, i) = v;
    }
  }
  return cov;
}

SurrogateCov condition(const SurrogateCov& cov, std::size_t p) {
  if (p >= static_cast<std::size_t>(cov.k.rows())) throw ShapeError("condition: pivot index out of range");
  if (cov.degenerate(p)) throw DegeneratePivot("condition: pivot variance below floor");
  const auto i = static_cast<Eigen::Index>(p);
  SurrogateCov out = cov;
  const Eigen::VectorXd col = cov.k.col(i);
  out.k.noalias() -= col * (col.transpose() / cov.k(i, i));
  for (Eigen::Index d = 0; d < out.k.rows(); ++d) {
    if (out.k(d, d) < 0.0 && out.k(d, d) >= -1e-12) out.k(d, d) = 0.0;
  }
  out.k(i, i) = 0.0;
  out.k.row(i).setZero();
  out.k.col(i).setZero();
  return out;
}

double acquisition_delta(const SurrogateCov& cov, std::size_t p) {
  if (p >= static_cast<std::size_t>(cov.k.rows())) throw ShapeError("acquisition_delta: index out of range");
  if (cov.degenerate(p)) return 0.0;
  const auto i = static_cast<Eigen::Index>(p);
  return cov.k.col(i).squaredNorm() / cov.k(i, i);
}

Batch select_batch(SurrogateCov cov, int batch_size) {
  if (batch_size < 1) throw ConfigError("select_batch: batch size must be at least 1");
  const auto n = static_cast<std::size_t>(cov.k.rows());
  if (n == 0) throw ShapeError("select_batch: empty candidate set");
  Batch batch;
  for (int k = 0; k < batch_size; ++k) {
    double best = -std::numeric_limits<double>::infinity();
    std::size_t best_idx = n;
    for (std::size_t p = 0; p < n; ++p) {
      if (cov.degenerate(p)) continue;
      const double dj = acquisition_delta(cov, p);
      if (dj > best) {
        best = dj;
        best_idx = p;
      }
    }
    if (best_idx == n) {
      batch.short_batch = true;
      break;
    }
    batch.locations.push_back(best_idx);
    batch.delta_j.push_back(best);
    cov = condition(cov, best_idx);
  }
  return batch;
}

Batch select_batch(const UncertaintyField& field, int batch_size, double r) {
  if (batch_size < 1) throw ConfigError("select_batch: batch size must be at least 1");
  if (field.q.empty()) throw ShapeError("select_batch: empty candidate set");
  return select_batch(build_covariance(field, r), batch_size);
}

}  // namespace aspinn
