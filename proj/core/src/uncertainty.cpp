#include "aspinn/uncertainty.hpp"

#include "aspinn/errors.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <optional>
#include <string>

namespace aspinn {

namespace {

std::vector<Location> to_space(std::span<const Location> xs, const Standardizer* s) {
  std::vector<Location> out(xs.begin(), xs.end());
  if (s != nullptr) {
    for (auto& x : out) x = s->apply(x);
  }
  return out;
}

}  // namespace

std::vector<std::size_t> neighborhood(const Location& x_p, std::span<const Location> x_obs, double theta) {
  if (theta < 0.0) throw ConfigError("neighborhood radius must be nonnegative");
  const double r2 = theta * theta;
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < x_obs.size(); ++i) {
    if (squared_distance(x_obs[i], x_p) <= r2) out.push_back(i);
  }
  return out;
}

std::vector<CapturedPair> captured_pairs(std::span<const std::size_t> neigh, const Dataset& data,
                                         std::span<const Interval> obs_bounds) {
  if (obs_bounds.size() != data.size()) throw ShapeError("captured_pairs: one interval per observation required");
  std::vector<CapturedPair> out;
  for (std::size_t i : neigh) {
    if (i >= data.size()) throw ShapeError("captured_pairs: neighbor index out of range");
    const Interval& b = obs_bounds[i];
    const double y = data.y(i);
    if (b.lower <= y && y <= b.upper) out.push_back({i, y, b.lower, b.upper});
  }
  return out;
}

std::vector<CapturedPair> captured_pairs(std::span<const std::size_t> neigh, const Dataset& data, const PiModel& pi) {
  return captured_pairs(neigh, data, predict_interval(pi, data.x()));
}

double potential_epistemic(const Location& x_p, const Interval& at_p, std::span<const Location> coords,
                           const Dataset& data, std::span<const Interval> obs_bounds, double theta) {
  if (coords.size() != data.size()) throw ShapeError("potential_epistemic: coords must match the dataset");
  const auto neigh = neighborhood(x_p, coords, theta);
  if (neigh.empty()) return std::max(0.0, at_p.width());
  const auto captured = captured_pairs(neigh, data, obs_bounds);
  // Neighbors exist but none lies inside its interval: same fallback as the
  // empty-neighborhood branch.
  if (captured.empty()) return std::max(0.0, at_p.width());
  double to_upper = std::numeric_limits<double>::infinity();
  double to_lower = std::numeric_limits<double>::infinity();
  for (const auto& c : captured) {
    to_upper = std::min(to_upper, c.upper - c.y);
    to_lower = std::min(to_lower, c.y - c.lower);
  }
  return to_upper + to_lower;
}

double potential_epistemic(const Location& x_p, const Dataset& data, const PiModel& pi, double theta) {
  const auto obs = predict_interval(pi, data.x());
  return potential_epistemic(x_p, predict_interval(pi, x_p), data.x(), data, obs, theta);
}

UncertaintyField potential_map(std::span<const Location> x_test, std::span<const Interval> test_bounds,
                               const Dataset& data, std::span<const Interval> obs_bounds, double theta,
                               DistanceSpace space) {
  if (x_test.empty()) throw ShapeError("potential_map: empty candidate set");
  if (test_bounds.size() != x_test.size()) throw ShapeError("potential_map: one interval per candidate required");
  if (theta < 0.0) throw ConfigError("potential_map: theta must be nonnegative");

  std::optional<Standardizer> metric;
  if (space == DistanceSpace::Standardized && data.size() > 0) metric = Standardizer::fit(data.input_matrix());
  const Standardizer* s = metric ? &*metric : nullptr;

  UncertaintyField field;
  field.theta = theta;
  field.x_test.assign(x_test.begin(), x_test.end());
  field.coords = to_space(x_test, s);
  const auto obs_coords = to_space(data.x(), s);
  field.q.resize(x_test.size());
  for (std::size_t i = 0; i < x_test.size(); ++i) {
    field.q[i] = potential_epistemic(field.coords[i], test_bounds[i], obs_coords, data, obs_bounds, theta);
  }
  return field;
}

UncertaintyField potential_map(std::span<const Location> x_test, const Dataset& data, const PiModel& pi, double theta,
                               DistanceSpace space) {
  const auto test_bounds = predict_interval(pi, x_test);
  const auto obs_bounds = data.empty() ? std::vector<Interval>{} : predict_interval(pi, data.x());
  return potential_map(x_test, test_bounds, data, obs_bounds, theta, space);
}

IdealBounds ideal_bounds(const ProblemSpec& problem, std::span<const Location> x_test) {
  IdealBounds b;
  b.lower.reserve(x_test.size());
  b.upper.reserve(x_test.size());
  for (const auto& x : x_test) {
    const double f = problem.f(x);
    const double s = problem.sigma_a(x);
    b.lower.push_back(f - 1.96 * s);
    b.upper.push_back(f + 1.96 * s);
  }
  return b;
}

double pi_delta(std::span<const Interval> est, const IdealBounds& ideal) {
  if (est.size() != ideal.lower.size() || est.size() != ideal.upper.size()) {
    throw ShapeError("pi_delta: estimated and ideal bounds cover different grids");
  }
  if (est.empty()) throw ShapeError("pi_delta: empty grid");
  double total = 0.0;
  for (std::size_t i = 0; i < est.size(); ++i) {
    total += std::abs(ideal.upper[i] - est[i].upper) + std::abs(ideal.lower[i] - est[i].lower);
  }
  return total / static_cast<double>(est.size());
}

double auuc(std::span<const double> curve) {
  if (curve.empty()) throw ShapeError("auuc: empty curve");
  return std::accumulate(curve.begin(), curve.end(), 0.0);
}

LearningCurve make_learning_curve(std::vector<double> values) {
  LearningCurve c;
  c.auuc = auuc(values);
  c.pi_delta = std::move(values);
  return c;
}

void write_curve_csv(const LearningCurve& curve, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << "iteration,pi_delta\n";
  char buf[64];
  for (std::size_t t = 0; t < curve.pi_delta.size(); ++t) {
    auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), curve.pi_delta[t]);
    out << (t + 1) << ',' << std::string_view(buf, static_cast<std::size_t>(end - buf)) << '\n';
  }
  if (!out) throw IoError("write failed: " + path.string());
}

LearningCurve read_curve_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line) || line.rfind("iteration,pi_delta", 0) != 0) {
    throw IoError(path.string() + ": expected header 'iteration,pi_delta'");
  }
  std::vector<double> values;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) throw IoError(path.string() + ":" + std::to_string(lineno) + ": missing comma");
    double v = 0.0;
    const char* first = line.data() + comma + 1;
    const char* last = line.data() + line.size();
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc{} || ptr != last) {
      throw IoError(path.string() + ":" + std::to_string(lineno) + ": bad pi_delta value");
    }
    values.push_back(v);
  }
  if (values.empty()) throw IoError(path.string() + ": no curve rows");
  return make_learning_curve(std::move(values));
}

}  // namespace aspinn
