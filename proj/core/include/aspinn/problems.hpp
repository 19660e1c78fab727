#pragma once

// Ground-truth benchmark problems. Only the harness (observation sampling and
// evaluation) touches f and sigma_a; samplers and networks see Datasets and
// candidate locations only.

#include "aspinn/dataset.hpp"
#include "aspinn/rng.hpp"

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace aspinn {

enum class ProblemKind { Cos, Hetero, Cosqr, Field };

/// Season covariates of the simulated field site.
struct FieldContext {
  double precip = 112.5;  // mm, [75, 150]
  double aspect = 1.0;    // radians, [pi/4, pi/2]
  double vh = 0.75;       // (precip / 150) * aspect
  int season = 0;
};

inline constexpr std::array<double, 6> kFieldNRates{0.0, 30.0, 60.0, 90.0, 120.0, 150.0};

struct ProblemSpec {
  std::string name;
  ProblemKind kind = ProblemKind::Cos;
  std::size_t dims = 1;
  /// Fixed candidate grid for 1-D problems; empty for the field problem,
  /// whose candidates depend on the season (see field_candidates).
  std::vector<Location> x_test;
  double field_noise_denominator = 1500.0;

  double f(const Location& x) const;
  /// Aleatoric standard deviation, clamped at zero.
  double sigma_a(const Location& x) const;

  /// Index of `x` in the 1-D grid (tolerance 1e-9), if any.
  std::optional<std::size_t> grid_index(const Location& x) const;
  bool admissible(const Location& x) const;
};

ProblemSpec make_problem(std::string_view name, double field_noise_denominator = 1500.0);

/// f(x) + z * sigma_a(x) with z ~ N(0, 1) from `rng`. Off-grid x throws DomainError.
double sample_observation(const ProblemSpec& problem, const Location& x, Rng& rng);

/// Initial dataset recipe of each problem, seeded.
Dataset initial_dataset(const ProblemSpec& problem, std::uint64_t seed);

struct YieldMoments {
  double mean = 0.0;
  double sigma = 0.0;
};

YieldMoments field_yield(const FieldContext& context, double n_rate, double noise_denominator = 1500.0);

FieldContext advance_season(Rng& rng, int season = 0);

/// Six 4-D candidates [P, A, VH, N] sharing the season covariates, N ascending.
std::vector<Location> field_candidates(const FieldContext& context);

Location field_location(const FieldContext& context, double n_rate);

}  // namespace aspinn
