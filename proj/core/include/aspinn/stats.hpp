#pragma once

#include <span>

namespace aspinn {

struct TTestResult {
  double t = 0.0;
  double p = 1.0;  // two-sided
  int dof = 0;
  bool degenerate = false;  // differences have zero variance; t is 0 (all zero) or +-inf
};

/// Paired t-test on a - b with n - 1 degrees of freedom.
/// Throws ShapeError for unequal lengths or n < 2.
TTestResult paired_t_test(std::span<const double> a, std::span<const double> b);

double mean(std::span<const double> v);
/// Sample standard deviation (n - 1); 0 for fewer than two values.
double sample_std(std::span<const double> v);

}  // namespace aspinn
