#pragma once

// Batch acquisition through a GP surrogate whose covariance is scaled by the
// potential epistemic uncertainty field:
//
//   K(i, i) = q_i,   K(i, j) = rho(x_i, x_j) * sqrt(q_i q_j)
//
// Observing candidate p collapses its variance by the Schur complement
//   K' = K - K(:, p) K(p, p)^{-1} K(p, :)
// and the acquisition value is the drop in trace, sum_i K(i, p)^2 / K(p, p).

#include "aspinn/uncertainty.hpp"

#include <Eigen/Dense>

#include <cstddef>
#include <vector>

namespace aspinn {

/// Relative floor below which a pivot variance counts as zero.
inline constexpr double kPivotFloor = 1e-9;

struct SurrogateCov {
  Eigen::MatrixXd k;
  std::vector<Location> coords;
  double r = 0.15;

  double pivot_floor() const;
  bool degenerate(std::size_t p) const;
};

struct Batch {
  std::vector<std::size_t> locations;  // indices into the candidate grid, in pick order
  std::vector<double> delta_j;         // acquisition value of each pick when it was made
  bool short_batch = false;            // fewer than B picks were possible
};

/// exp(-||x - x'||^2 / (2 r^2)). Throws ConfigError for r <= 0.
double rbf_correlation(const Location& a, const Location& b, double r);

SurrogateCov build_covariance(const UncertaintyField& field, double r);

/// Conditions on a fantasy observation at `p`. Throws DegeneratePivot when
/// K(p, p) is below the floor. Diagonal entries within -1e-12 of zero are clamped to 0.
SurrogateCov condition(const SurrogateCov& cov, std::size_t p);

/// Trace reduction from observing `p`; 0 for a degenerate pivot.
double acquisition_delta(const SurrogateCov& cov, std::size_t p);

/// Greedy batch: B times, pick argmax acquisition_delta (lowest index on ties)
/// and commit the conditioned covariance of that pick.
Batch select_batch(const UncertaintyField& field, int batch_size, double r);
Batch select_batch(SurrogateCov cov, int batch_size);

}  // namespace aspinn
