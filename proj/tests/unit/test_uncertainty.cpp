#include "aspinn/errors.hpp"
#include "aspinn/uncertainty.hpp"

#include "oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <numbers>
#include <random>

namespace {

using namespace aspinn;

std::vector<Location> line(std::initializer_list<double> xs) {
  std::vector<Location> out;
  for (double x : xs) out.push_back({x});
  return out;
}

TEST(Neighborhood, ClosedBallInRawUnits) {
  const auto obs = line({0.1, 0.3});
  EXPECT_EQ(neighborhood({0.0}, obs, 0.25), (std::vector<std::size_t>{0}));
  EXPECT_TRUE(neighborhood({0.0}, obs, 0.0).empty());
  EXPECT_EQ(neighborhood({0.1}, obs, 0.0), (std::vector<std::size_t>{0}));
  // Boundary distance is included.
  EXPECT_EQ(neighborhood({0.0}, line({0.25}), 0.25), (std::vector<std::size_t>{0}));
}

TEST(Neighborhood, MatchesBruteForceScan) {
  Rng rng(3);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<Location> obs;
    for (int i = 0; i < 50; ++i) obs.push_back({u(rng), u(rng)});
    const Location xp{u(rng), u(rng)};
    const double theta = std::abs(u(rng));
    std::vector<std::size_t> expected;
    for (std::size_t i = 0; i < obs.size(); ++i)
      if (std::hypot(obs[i][0] - xp[0], obs[i][1] - xp[1]) <= theta) expected.push_back(i);
    EXPECT_EQ(neighborhood(xp, obs, theta), expected);
  }
}

TEST(CapturedPairs, ClosedIntervalAtTheNeighborsOwnBounds) {
  const Dataset data(line({0.0, 0.1, 0.2}), {5.0, 1.0, 3.0});
  const std::vector<Interval> bounds{{4.0, 5.0}, {2.0, 3.0}, {3.0, 3.0}};
  const std::vector<std::size_t> neigh{0, 1, 2};
  const auto kept = captured_pairs(neigh, data, bounds);
  ASSERT_EQ(kept.size(), 2u);
  EXPECT_EQ(kept[0].index, 0u);  // y on the upper bound
  EXPECT_EQ(kept[1].index, 2u);  // zero-width interval containing y
}

TEST(CapturedPairs, AllOutsideGivesEmpty) {
  const Dataset data(line({0.0, 0.1}), {10.0, -10.0});
  const std::vector<Interval> bounds{{0.0, 1.0}, {0.0, 1.0}};
  const std::vector<std::size_t> neigh{0, 1};
  EXPECT_TRUE(captured_pairs(neigh, data, bounds).empty());
}

TEST(CapturedPairs, MatchesBruteForceMembership) {
  Rng rng(9);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<Location> xs;
  std::vector<double> ys;
  std::vector<Interval> bounds;
  for (int i = 0; i < 10; ++i) {
    xs.push_back({0.01 * i});
    ys.push_back(u(rng));
    const double a = u(rng), b = u(rng);
    bounds.push_back({std::min(a, b), std::max(a, b)});
  }
  const Dataset data(xs, ys);
  std::vector<std::size_t> neigh(10);
  for (std::size_t i = 0; i < 10; ++i) neigh[i] = i;
  std::vector<std::size_t> expected;
  for (std::size_t i = 0; i < 10; ++i)
    if (bounds[i].lower <= ys[i] && ys[i] <= bounds[i].upper) expected.push_back(i);
  std::vector<std::size_t> got;
  for (const auto& c : captured_pairs(neigh, data, bounds)) got.push_back(c.index);
  EXPECT_EQ(got, expected);
}

TEST(PotentialEpistemic, EmptyNeighborhoodIsTheWidthAtTheCandidate) {
  const Dataset data(line({3.0}), {0.0});
  const std::vector<Interval> obs{{-1.0, 1.0}};
  EXPECT_DOUBLE_EQ(potential_epistemic({0.0}, {2.0, 7.0}, data.x(), data, obs, 0.25), 5.0);
}

TEST(PotentialEpistemic, SingleMidpointNeighborGivesItsWidth) {
  const Dataset data(line({0.1}), {4.0});
  const std::vector<Interval> obs{{1.0, 7.0}};
  EXPECT_DOUBLE_EQ(potential_epistemic({0.0}, {0.0, 100.0}, data.x(), data, obs, 0.25), 6.0);
}

TEST(PotentialEpistemic, MinimaMayComeFromDifferentNeighbors) {
  // (u - y) in {1.0, 0.4}, (y - l) in {2.0, 0.1}: 0.4 + 0.1.
  const Dataset data(line({0.05, 0.1}), {0.0, 0.0});
  const std::vector<Interval> obs{{-2.0, 0.4}, {-0.1, 1.0}};
  EXPECT_NEAR(potential_epistemic({0.0}, {0.0, 100.0}, data.x(), data, obs, 0.25), 0.5, 1e-15);
}

TEST(PotentialEpistemic, NeighborsButNoneCapturedFallsBackToWidth) {
  const Dataset data(line({0.1}), {50.0});
  const std::vector<Interval> obs{{0.0, 1.0}};
  EXPECT_DOUBLE_EQ(potential_epistemic({0.0}, {1.0, 4.5}, data.x(), data, obs, 0.25), 3.5);
}

TEST(PotentialEpistemic, AddingACapturedNeighborNeverIncreasesQ) {
  Rng rng(17);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    Dataset data(1);
    std::vector<Interval> obs;
    for (int i = 0; i < 5; ++i) {
      const double y = u(rng);
      data.add({0.2 * u(rng)}, y);
      obs.push_back({y - std::abs(u(rng)), y + std::abs(u(rng))});
    }
    const Interval at_p{-3.0, 3.0};
    const double before = potential_epistemic({0.0}, at_p, data.x(), data, obs, 0.25);
    const double y = u(rng);
    data.add({0.2 * u(rng)}, y);
    obs.push_back({y - std::abs(u(rng)), y + std::abs(u(rng))});
    const double after = potential_epistemic({0.0}, at_p, data.x(), data, obs, 0.25);
    EXPECT_GE(before, 0.0);
    EXPECT_LE(after, before);
  }
}

TEST(PotentialMap, EmptyDatasetGivesWidthsEverywhere) {
  const auto grid = line({-1.0, 0.0, 1.0});
  const std::vector<Interval> bounds{{0.0, 1.0}, {0.0, 2.0}, {-1.0, 2.0}};
  const auto field = potential_map(grid, bounds, Dataset(1), {}, 0.25);
  EXPECT_EQ(field.q, (std::vector<double>{1.0, 2.0, 3.0}));
}

TEST(PotentialMap, DenseDataWithTightIntervalsGivesSmallQ) {
  std::vector<Location> grid;
  std::vector<Interval> test_bounds;
  Dataset data(1);
  std::vector<Interval> obs;
  for (int i = 0; i < 100; ++i) {
    const double x = -1.0 + 0.02 * i;
    grid.push_back({x});
    test_bounds.push_back({-0.05, 0.05});
    for (int k = 0; k < 5; ++k) {
      const double y = -0.05 + 0.025 * k;
      data.add({x}, y);
      obs.push_back({-0.05, 0.05});
    }
  }
  const auto field = potential_map(grid, test_bounds, data, obs, 0.25);
  for (double q : field.q) EXPECT_NEAR(q, 0.0, 1e-12);
}

TEST(PotentialMap, MatchesLiteralDefinitionOnRandomInstances) {
  Rng rng(101);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::uniform_int_distribution<int> count(0, 100);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<Location> grid;
    std::vector<Interval> test_bounds;
    for (int i = 0; i < 20; ++i) {
      grid.push_back({u(rng)});
      const double a = u(rng), b = u(rng);
      test_bounds.push_back({std::min(a, b), std::max(a, b)});
    }
    Dataset data(1);
    std::vector<Interval> obs;
    const int n = count(rng);
    for (int i = 0; i < n; ++i) {
      data.add({u(rng)}, u(rng));
      const double a = u(rng), b = u(rng);
      obs.push_back({std::min(a, b), std::max(a, b)});
    }
    const auto field = potential_map(grid, test_bounds, data, obs, 0.25);
    ASSERT_EQ(field.q.size(), grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
      EXPECT_NEAR(field.q[i], oracle::literal_q(grid[i], test_bounds[i], data, obs, 0.25), 1e-12);
      EXPECT_EQ(field.q[i], potential_epistemic(grid[i], test_bounds[i], data.x(), data, obs, 0.25));
    }
  }
}

TEST(IdealBounds, CosAtMinusTwo) {
  const ProblemSpec cos = make_problem("cos");
  const std::vector<Location> x{{-2.0}};
  const auto b = ideal_bounds(cos, x);
  const double sigma = 2.0 + 2.0 * std::cos(-2.4);
  EXPECT_NEAR(b.upper[0], 15.0 + 1.96 * sigma, 1e-12);
  EXPECT_NEAR(b.lower[0], 15.0 - 1.96 * sigma, 1e-12);
}

TEST(IdealBounds, WidthIsFixedMultipleOfSigma) {
  const ProblemSpec p = make_problem("hetero");
  const auto b = ideal_bounds(p, p.x_test);
  for (std::size_t i = 0; i < p.x_test.size(); ++i)
    EXPECT_NEAR(b.upper[i] - b.lower[i], 3.92 * p.sigma_a(p.x_test[i]), 1e-12);
  // cosqr noise vanishes at the ends of its grid.
  const ProblemSpec q = make_problem("cosqr");
  const auto e = ideal_bounds(q, std::vector<Location>{{10.0}});
  EXPECT_EQ(e.lower[0], e.upper[0]);
}

TEST(PiDelta, ZeroOnExactMatchAndTwiceTheShift) {
  const IdealBounds ideal{{0.0, 1.0}, {2.0, 4.0}};
  const std::vector<Interval> same{{0.0, 2.0}, {1.0, 4.0}};
  EXPECT_EQ(pi_delta(same, ideal), 0.0);
  const std::vector<Interval> shifted{{0.5, 2.5}, {1.5, 4.5}};
  EXPECT_NEAR(pi_delta(shifted, ideal), 1.0, 1e-15);
}

TEST(PiDelta, MatchesDirectSummationAndIsSymmetric) {
  Rng rng(5);
  std::uniform_real_distribution<double> u(-5.0, 5.0);
  std::vector<Interval> est(20);
  IdealBounds ideal;
  double total = 0.0;
  for (auto& e : est) {
    e = {u(rng), u(rng)};
    ideal.lower.push_back(u(rng));
    ideal.upper.push_back(u(rng));
    total += std::abs(ideal.upper.back() - e.upper) + std::abs(ideal.lower.back() - e.lower);
  }
  EXPECT_NEAR(pi_delta(est, ideal), total / 20.0, 1e-12);

  std::vector<Interval> swapped_est;
  IdealBounds swapped_ideal;
  for (std::size_t i = 0; i < est.size(); ++i) {
    swapped_est.push_back({ideal.lower[i], ideal.upper[i]});
    swapped_ideal.lower.push_back(est[i].lower);
    swapped_ideal.upper.push_back(est[i].upper);
  }
  EXPECT_NEAR(pi_delta(swapped_est, swapped_ideal), pi_delta(est, ideal), 1e-12);
}

TEST(PiDelta, GridMismatchIsAShapeError) {
  const IdealBounds ideal{{0.0}, {1.0}};
  const std::vector<Interval> est{{0.0, 1.0}, {0.0, 1.0}};
  EXPECT_THROW(pi_delta(est, ideal), ShapeError);
}

TEST(Auuc, PlainSum) {
  EXPECT_EQ(auuc(std::vector<double>{1.0, 1.0, 1.0}), 3.0);
  EXPECT_NEAR(auuc(std::vector<double>(50, 1.7)), 85.0, 1e-12);
  const auto curve = make_learning_curve({0.5, 0.25, 2.0});
  EXPECT_EQ(curve.auuc, 2.75);
}

TEST(CurveCsv, RoundTripsExactly) {
  const auto path = std::filesystem::temp_directory_path() / "aspinn_curve_roundtrip.csv";
  const auto curve = make_learning_curve({0.1, 1.0 / 3.0, std::numbers::pi});
  write_curve_csv(curve, path);
  const auto back = read_curve_csv(path);
  EXPECT_EQ(back.pi_delta, curve.pi_delta);
  EXPECT_EQ(back.auuc, curve.auuc);
  std::filesystem::remove(path);
}

}  // namespace
