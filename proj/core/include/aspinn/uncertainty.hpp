#pragma once

// Potential epistemic uncertainty Q_t and the PI_delta / AUUC evaluation metrics.
//
// The core routines take precomputed bounds so they can be checked against
// arbitrary interval fields; the PiModel overloads evaluate the network first.

#include "aspinn/dataset.hpp"
#include "aspinn/nn.hpp"
#include "aspinn/problems.hpp"

#include <cstddef>
#include <filesystem>
#include <span>
#include <vector>

namespace aspinn {

/// Space in which theta-neighborhoods are measured.
enum class DistanceSpace {
  Raw,           // input units as observed (1-D problems)
  Standardized,  // per-dimension z-scores from the current dataset (field problem)
};

struct UncertaintyField {
  std::vector<Location> x_test;
  /// Coordinates used for distances (equal to x_test in raw space).
  std::vector<Location> coords;
  std::vector<double> q;
  double theta = 0.25;
};

struct IdealBounds {
  std::vector<double> lower;
  std::vector<double> upper;
};

struct CapturedPair {
  std::size_t index = 0;  // into the dataset
  double y = 0.0;
  double lower = 0.0;
  double upper = 0.0;
};

struct LearningCurve {
  std::vector<double> pi_delta;
  double auuc = 0.0;
};

/// Indices i with ||x_obs[i] - x_p||_2 <= theta.
std::vector<std::size_t> neighborhood(const Location& x_p, std::span<const Location> x_obs, double theta);

/// Neighbors whose response lies in their own interval: lower(x_i) <= y_i <= upper(x_i).
std::vector<CapturedPair> captured_pairs(std::span<const std::size_t> neigh, const Dataset& data,
                                         std::span<const Interval> obs_bounds);
std::vector<CapturedPair> captured_pairs(std::span<const std::size_t> neigh, const Dataset& data, const PiModel& pi);

/// Q_t(x_p): PI width at x_p when the neighborhood (or its captured subset) is
/// empty, otherwise min(upper - y) + min(y - lower) over captured neighbors.
/// `coords` are the dataset locations in the distance space of `x_p`.
double potential_epistemic(const Location& x_p, const Interval& at_p, std::span<const Location> coords,
                           const Dataset& data, std::span<const Interval> obs_bounds, double theta);
double potential_epistemic(const Location& x_p, const Dataset& data, const PiModel& pi, double theta);

UncertaintyField potential_map(std::span<const Location> x_test, std::span<const Interval> test_bounds,
                               const Dataset& data, std::span<const Interval> obs_bounds, double theta,
                               DistanceSpace space = DistanceSpace::Raw);
UncertaintyField potential_map(std::span<const Location> x_test, const Dataset& data, const PiModel& pi, double theta,
                               DistanceSpace space = DistanceSpace::Raw);

/// f(x) -+ 1.96 sigma_a(x).
IdealBounds ideal_bounds(const ProblemSpec& problem, std::span<const Location> x_test);

/// Mean over the grid of |y_u - yhat_u| + |y_l - yhat_l|.
double pi_delta(std::span<const Interval> estimated, const IdealBounds& ideal);

/// Unit-spaced rectangle rule: the sum of the curve.
double auuc(std::span<const double> curve);

LearningCurve make_learning_curve(std::vector<double> pi_delta_values);

/// CSV with header `iteration,pi_delta`, iterations numbered from 1.
void write_curve_csv(const LearningCurve& curve, const std::filesystem::path& path);
LearningCurve read_curve_csv(const std::filesystem::path& path);

}  // namespace aspinn
