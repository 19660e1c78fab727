#include "aspinn/errors.hpp"
#include "aspinn/problems.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

namespace {

using namespace aspinn;

TEST(Problems, GridsAndFormulas) {
  const ProblemSpec cos = make_problem("cos");
  ASSERT_EQ(cos.x_test.size(), 100u);
  EXPECT_EQ(cos.x_test.front()[0], -5.0);
  EXPECT_NEAR(cos.x_test.back()[0], 5.0, 1e-12);
  EXPECT_NEAR(cos.x_test[1][0] - cos.x_test[0][0], 10.0 / 99.0, 1e-12);
  EXPECT_NEAR(cos.f({-2.0}), 15.0, 1e-12);

  const ProblemSpec hetero = make_problem("hetero");
  EXPECT_EQ(hetero.x_test.size(), 300u);
  EXPECT_EQ(hetero.f({0.0}), 0.0);
  EXPECT_EQ(hetero.sigma_a({0.0}), 3.0);

  const ProblemSpec cosqr = make_problem("cosqr");
  EXPECT_EQ(cosqr.x_test.size(), 500u);
  EXPECT_EQ(cosqr.sigma_a({10.0}), 0.0);
  EXPECT_EQ(cosqr.sigma_a({-10.0}), 0.0);
  for (const auto& x : cosqr.x_test) EXPECT_GE(cosqr.sigma_a(x), 0.0);

  EXPECT_EQ(make_problem("field").dims, 4u);
  EXPECT_THROW(make_problem("nope"), ConfigError);
  EXPECT_THROW(make_problem("field", 100.0), ConfigError);
}

TEST(Observations, NoiseFreeAndOffGrid) {
  const ProblemSpec cosqr = make_problem("cosqr");
  Rng rng(1);
  EXPECT_EQ(sample_observation(cosqr, {10.0}, rng), cosqr.f({10.0}));
  const ProblemSpec cos = make_problem("cos");
  EXPECT_THROW(sample_observation(cos, {0.001234}, rng), DomainError);
  EXPECT_THROW(sample_observation(cos, {0.0, 1.0}, rng), std::exception);
}

TEST(Observations, SeededAndLawOfLargeNumbers) {
  const ProblemSpec cos = make_problem("cos");
  const Location x = cos.x_test[30];
  Rng a(5), b(5);
  for (int i = 0; i < 10; ++i) EXPECT_EQ(sample_observation(cos, x, a), sample_observation(cos, x, b));

  Rng rng(77);
  const int n = 10000;
  double sum = 0.0, sq = 0.0;
  for (int i = 0; i < n; ++i) {
    const double y = sample_observation(cos, x, rng);
    sum += y;
    sq += y * y;
  }
  const double m = sum / n;
  const double sd = std::sqrt((sq - n * m * m) / (n - 1));
  const double sigma = cos.sigma_a(x);
  EXPECT_NEAR(m, cos.f(x), 4.0 * sigma / 100.0);
  EXPECT_NEAR(sd, sigma, 0.05 * sigma);
}

TEST(InitialData, CosHeteroCosqrRecipes) {
  const ProblemSpec cos = make_problem("cos");
  const Dataset c = initial_dataset(cos, 1);
  EXPECT_EQ(c.size(), 200u);
  for (const auto& x : c.x()) EXPECT_TRUE(cos.grid_index(x).has_value());
  EXPECT_EQ(initial_dataset(cos, 1).fingerprint(), c.fingerprint());
  EXPECT_NE(initial_dataset(cos, 2).fingerprint(), c.fingerprint());

  const ProblemSpec hetero = make_problem("hetero");
  int left = 0, middle = 0, right = 0, total = 0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const Dataset h = initial_dataset(hetero, seed);
    EXPECT_EQ(h.size(), 200u);
    for (const auto& x : h.x()) {
      EXPECT_TRUE(hetero.grid_index(x).has_value());
      EXPECT_GE(x[0], -4.5);
      EXPECT_LE(x[0], 4.5);
      (x[0] < -2.0 ? left : x[0] > 2.0 ? right : middle)++;
      ++total;
    }
  }
  for (int count : {left, middle, right}) EXPECT_NEAR(count / static_cast<double>(total), 1.0 / 3.0, 0.03);

  const ProblemSpec cosqr = make_problem("cosqr");
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const Dataset q = initial_dataset(cosqr, seed);
    EXPECT_GT(q.size(), 1000u);
    EXPECT_LT(q.size(), 1250u);
    int a = 0, b = 0, d = 0;
    for (const auto& x : q.x()) {
      const double v = x[0];
      a += v >= -8.0 && v < -5.0;
      b += v >= -2.0 && v < 3.0;
      d += v >= 6.0 && v < 7.0;
    }
    EXPECT_EQ(a, 1);
    EXPECT_EQ(b, 10);
    EXPECT_EQ(d, 3);
  }
}

TEST(InitialData, FieldHasFiftyAdmissibleSeasons) {
  const ProblemSpec field = make_problem("field");
  const Dataset d = initial_dataset(field, 4);
  EXPECT_EQ(d.size(), 50u);
  for (const auto& x : d.x()) EXPECT_TRUE(field.admissible(x));
}

TEST(FieldYield, Substitutions) {
  FieldContext ctx{75.0, std::numbers::pi / 4.0, 0.5 * std::numbers::pi / 4.0, 0};
  EXPECT_EQ(field_yield(ctx, 0.0).mean, 75.0 / 15.0);
  EXPECT_NEAR(field_yield(ctx, 0.0).sigma, 0.05, 1e-15);
  EXPECT_NEAR(field_yield(ctx, 0.0, 150.0).sigma, 0.5, 1e-15);

  const FieldContext top{150.0, std::numbers::pi / 2.0, std::numbers::pi / 2.0, 0};
  const double expected = 10.0 + 1.5 * std::tanh(15.0 / (1.5 * std::numbers::pi + 2.0));
  EXPECT_NEAR(field_yield(top, 150.0).mean, expected, 1e-12);
  EXPECT_NEAR(std::tanh(15.0 / (1.5 * std::numbers::pi + 2.0)), std::tanh(2.243), 1e-3);
  EXPECT_THROW(field_yield(top, 45.0), DomainError);
}

TEST(Seasons, RangesAndUniformMean) {
  Rng rng(123);
  double sum = 0.0;
  const int n = 10000;
  for (int i = 0; i < n; ++i) {
    const FieldContext c = advance_season(rng, i);
    EXPECT_GE(c.precip, 75.0);
    EXPECT_LE(c.precip, 150.0);
    EXPECT_GE(c.aspect, std::numbers::pi / 4.0);
    EXPECT_LE(c.aspect, std::numbers::pi / 2.0);
    EXPECT_NEAR(c.vh, c.precip / 150.0 * c.aspect, 1e-12);
    EXPECT_GE(c.vh, std::numbers::pi / 8.0 - 1e-12);
    EXPECT_LE(c.vh, std::numbers::pi / 2.0 + 1e-12);
    sum += c.precip;
  }
  EXPECT_NEAR(sum / n, 112.5, 1.0);

  Rng a(9), b(9);
  for (int i = 0; i < 5; ++i) EXPECT_EQ(advance_season(a, i).precip, advance_season(b, i).precip);
}

TEST(Seasons, SixCandidatesDifferingOnlyInRate) {
  Rng rng(2);
  const FieldContext c = advance_season(rng);
  const auto cands = field_candidates(c);
  ASSERT_EQ(cands.size(), 6u);
  for (std::size_t i = 0; i < cands.size(); ++i) {
    EXPECT_EQ(cands[i][0], c.precip);
    EXPECT_EQ(cands[i][1], c.aspect);
    EXPECT_EQ(cands[i][2], c.vh);
    EXPECT_EQ(cands[i][3], 30.0 * static_cast<double>(i));
  }
}

}  // namespace
