#include "aspinn/problems.hpp"

#include "aspinn/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace aspinn {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kGridTol = 1e-9;

std::vector<Location> uniform_grid(double lo, double hi, std::size_t n) {
  std::vector<Location> grid;
  grid.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    grid.push_back({lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1)});
  }
  return grid;
}

bool is_admissible_rate(double n) {
  return std::any_of(kFieldNRates.begin(), kFieldNRates.end(), [n](double r) { return std::abs(r - n) <= kGridTol; });
}

void check_field_location(const Location& x) {
  if (x.size() != 4) throw DomainError("field location must have 4 coordinates");
  const double p = x[0], a = x[1], vh = x[2], n = x[3];
  if (p < 75.0 - kGridTol || p > 150.0 + kGridTol) throw DomainError("field: precipitation outside [75, 150]");
  if (a < kPi / 4 - kGridTol || a > kPi / 2 + kGridTol) throw DomainError("field: aspect outside [pi/4, pi/2]");
  if (std::abs(vh - p / 150.0 * a) > 1e-9) throw DomainError("field: VH inconsistent with precipitation and aspect");
  if (!is_admissible_rate(n)) throw DomainError("field: inadmissible N rate " + std::to_string(n));
}

FieldContext context_of(const Location& x) { return {x[0], x[1], x[2], 0}; }

}  // namespace

double ProblemSpec::f(const Location& x) const {
  switch (kind) {
    case ProblemKind::Cos:
      return 10.0 + 5.0 * std::cos(x[0] + 2.0);
    case ProblemKind::Hetero:
      return 7.0 * std::sin(x[0]);
    case ProblemKind::Cosqr:
      return 10.0 + 5.0 * std::cos(x[0] * x[0] / 5.0);
    case ProblemKind::Field:
      return field_yield(context_of(x), x[3], field_noise_denominator).mean;
  }
  return 0.0;
}

double ProblemSpec::sigma_a(const Location& x) const {
  double s = 0.0;
  switch (kind) {
    case ProblemKind::Cos:
      s = 2.0 + 2.0 * std::cos(1.2 * x[0]);
      break;
    case ProblemKind::Hetero:
      s = 3.0 * std::cos(x[0] / 2.0);
      break;
    case ProblemKind::Cosqr:
      s = 0.5 * (1.0 - x[0] * x[0] / 100.0);
      break;
    case ProblemKind::Field:
      s = field_yield(context_of(x), x[3], field_noise_denominator).sigma;
      break;
  }
  return std::max(0.0, s);
}

std::optional<std::size_t> ProblemSpec::grid_index(const Location& x) const {
  if (kind == ProblemKind::Field || x.size() != 1 || x_test.empty()) return std::nullopt;
  const double lo = x_test.front()[0];
  const double hi = x_test.back()[0];
  const double pos = (x[0] - lo) / (hi - lo) * static_cast<double>(x_test.size() - 1);
  const long idx = std::lround(pos);
  if (idx < 0 || idx >= static_cast<long>(x_test.size())) return std::nullopt;
  if (std::abs(x_test[static_cast<std::size_t>(idx)][0] - x[0]) > kGridTol) return std::nullopt;
  return static_cast<std::size_t>(idx);
}

bool ProblemSpec::admissible(const Location& x) const {
  if (kind == ProblemKind::Field) {
    try {
      check_field_location(x);
      return true;
    } catch (const DomainError&) {
      return false;
    }
  }
  return grid_index(x).has_value();
}

ProblemSpec make_problem(std::string_view name, double field_noise_denominator) {
  ProblemSpec p;
  p.name = std::string(name);
  p.field_noise_denominator = field_noise_denominator;
  if (name == "cos") {
    p.kind = ProblemKind::Cos;
    p.x_test = uniform_grid(-5.0, 5.0, 100);
  } else if (name == "hetero") {
    p.kind = ProblemKind::Hetero;
    p.x_test = uniform_grid(-4.5, 4.5, 300);
  } else if (name == "cosqr") {
    p.kind = ProblemKind::Cosqr;
    p.x_test = uniform_grid(-10.0, 10.0, 500);
  } else if (name == "field") {
    p.kind = ProblemKind::Field;
    p.dims = 4;
    if (field_noise_denominator != 150.0 && field_noise_denominator != 1500.0) {
      throw ConfigError("field noise denominator must be 150 or 1500");
    }
  } else {
    throw ConfigError("unknown problem '" + std::string(name) + "'");
  }
  return p;
}

double sample_observation(const ProblemSpec& problem, const Location& x, Rng& rng) {
  if (problem.kind == ProblemKind::Field) {
    check_field_location(x);
  } else if (!problem.grid_index(x)) {
    throw DomainError("location is not on the " + problem.name + " grid");
  }
  std::normal_distribution<double> z(0.0, 1.0);
  const double sigma = problem.sigma_a(x);
  const double draw = z(rng);
  return problem.f(x) + draw * sigma;
}

YieldMoments field_yield(const FieldContext& c, double n_rate, double noise_denominator) {
  if (!is_admissible_rate(n_rate)) throw DomainError("field: inadmissible N rate " + std::to_string(n_rate));
  YieldMoments m;
  m.mean = c.precip / 15.0 + (c.aspect / kPi + 1.0) * std::tanh(0.1 * n_rate / (3.0 * c.vh + 2.0));
  m.sigma = std::max(0.0, (c.precip + n_rate) / noise_denominator);
  return m;
}

FieldContext advance_season(Rng& rng, int season) {
  std::uniform_real_distribution<double> precip(75.0, 150.0);
  std::uniform_real_distribution<double> aspect(kPi / 4.0, kPi / 2.0);
  FieldContext c;
  c.precip = precip(rng);
  c.aspect = aspect(rng);
  c.vh = c.precip / 150.0 * c.aspect;
  c.season = season;
  return c;
}

Location field_location(const FieldContext& c, double n_rate) { return {c.precip, c.aspect, c.vh, n_rate}; }

std::vector<Location> field_candidates(const FieldContext& c) {
  std::vector<Location> out;
  out.reserve(kFieldNRates.size());
  for (double n : kFieldNRates) out.push_back(field_location(c, n));
  return out;
}

Dataset initial_dataset(const ProblemSpec& problem, std::uint64_t seed) {
  Rng rng(seed);
  Dataset data(problem.dims);
  auto observe = [&](const Location& x) { data.add(x, sample_observation(problem, x, rng)); };

  switch (problem.kind) {
    case ProblemKind::Cos: {
      std::uniform_int_distribution<std::size_t> pick(0, problem.x_test.size() - 1);
      std::vector<std::size_t> idx(200);
      for (auto& i : idx) i = pick(rng);
      for (std::size_t i : idx) observe(problem.x_test[i]);
      break;
    }
    case ProblemKind::Hetero: {
      const std::array<double, 3> mu{-4.0, 0.0, 4.0};
      const std::array<double, 3> sd{0.4, 0.9, 0.4};
      std::uniform_int_distribution<int> component(0, 2);
      std::vector<std::size_t> idx;
      const double lo = problem.x_test.front()[0];
      const double hi = problem.x_test.back()[0];
      while (idx.size() < 200) {
        const int k = component(rng);
        std::normal_distribution<double> g(mu[k], sd[k]);
        const double v = g(rng);
        if (v < lo || v > hi) continue;
        const double pos = (v - lo) / (hi - lo) * static_cast<double>(problem.x_test.size() - 1);
        idx.push_back(static_cast<std::size_t>(std::lround(pos)));
      }
      for (std::size_t i : idx) observe(problem.x_test[i]);
      break;
    }
    case ProblemKind::Cosqr: {
      std::uniform_int_distribution<std::size_t> pick(0, problem.x_test.size() - 1);
      std::vector<std::size_t> draws(2000);
      for (auto& i : draws) i = pick(rng);
      int sparse_a = 1, sparse_b = 10, sparse_c = 3;  // [-8,-5), [-2,3), [6,7)
      std::vector<std::size_t> idx;
      for (std::size_t i : draws) {
        const double v = problem.x_test[i][0];
        const bool dense = (v >= -10.0 && v < -8.0) || (v >= -5.0 && v < -2.0) || (v >= 3.0 && v < 6.0) ||
                           (v >= 7.0 && v <= 10.0);
        if (dense) {
          idx.push_back(i);
        } else if (v >= -8.0 && v < -5.0 && sparse_a > 0) {
          --sparse_a;
          idx.push_back(i);
        } else if (v >= -2.0 && v < 3.0 && sparse_b > 0) {
          --sparse_b;
          idx.push_back(i);
        } else if (v >= 6.0 && v < 7.0 && sparse_c > 0) {
          --sparse_c;
          idx.push_back(i);
        }
      }
      for (std::size_t i : idx) observe(problem.x_test[i]);
      break;
    }
    case ProblemKind::Field: {
      std::uniform_int_distribution<std::size_t> rate(0, kFieldNRates.size() - 1);
      for (int s = 0; s < 50; ++s) {
        const FieldContext c = advance_season(rng, s - 50);
        observe(field_location(c, kFieldNRates[rate(rng)]));
      }
      break;
    }
  }
  return data;
}

}  // namespace aspinn
