#include "aspinn/nn.hpp"
#include "aspinn/problems.hpp"
#include "aspinn/sampler.hpp"
#include "aspinn/uncertainty.hpp"

#include <benchmark/benchmark.h>

#include <random>

namespace {

using namespace aspinn;

UncertaintyField synthetic_field(int n) {
  Rng rng(11);
  std::uniform_real_distribution<double> q(0.1, 2.0);
  UncertaintyField f;
  for (int i = 0; i < n; ++i) {
    f.x_test.push_back({-5.0 + 10.0 * i / (n - 1)});
    f.q.push_back(q(rng));
  }
  f.coords = f.x_test;
  return f;
}

void BM_SelectBatch(benchmark::State& state) {
  const auto field = synthetic_field(static_cast<int>(state.range(0)));
  const int b = static_cast<int>(state.range(1));
  for (auto _ : state) benchmark::DoNotOptimize(select_batch(field, b, 0.15));
}
BENCHMARK(BM_SelectBatch)->Args({100, 1})->Args({100, 5})->Args({300, 5})->Args({500, 10});

void BM_PotentialMap(benchmark::State& state) {
  const ProblemSpec problem = make_problem("cos");
  const Dataset data = initial_dataset(problem, 3);
  const std::size_t n = problem.x_test.size();
  Rng rng(5);
  std::uniform_real_distribution<double> w(0.5, 3.0);
  std::vector<Interval> test_bounds(n), obs_bounds(data.size());
  for (std::size_t i = 0; i < n; ++i) {
    const double c = problem.f(problem.x_test[i]);
    test_bounds[i] = {c - w(rng), c + w(rng)};
  }
  for (std::size_t i = 0; i < data.size(); ++i) {
    const double c = problem.f(data.x(i));
    obs_bounds[i] = {c - w(rng), c + w(rng)};
  }
  for (auto _ : state)
    benchmark::DoNotOptimize(potential_map(problem.x_test, test_bounds, data, obs_bounds, 0.25));
}
BENCHMARK(BM_PotentialMap);

// One full-batch training epoch (forward, backward, Adam) of the interval network.
void BM_IntervalEpoch(benchmark::State& state) {
  const ProblemSpec problem = make_problem("cos");
  const Dataset data = initial_dataset(problem, 3);
  const std::vector<int> hidden{static_cast<int>(state.range(0)), static_cast<int>(state.range(0))};
  Mlp net = init_network(1, hidden, 2, 7, true);
  const Eigen::MatrixXd x = data.input_matrix();
  const auto loss = pi_loss(data.target_row(), {});
  Gradients grads = Gradients::zeros_like(net);
  Adam adam(net, 1e-3);
  for (auto _ : state) {
    benchmark::DoNotOptimize(loss_and_gradient(net, x, loss, grads));
    adam.step(net, grads);
  }
  state.SetItemsProcessed(state.iterations() * static_cast<long>(data.size()));
}
BENCHMARK(BM_IntervalEpoch)->Arg(100)->Unit(benchmark::kMicrosecond);

void BM_RegressionEpoch(benchmark::State& state) {
  const ProblemSpec problem = make_problem("cos");
  const Dataset data = initial_dataset(problem, 3);
  const std::vector<int> hidden{100, 100};
  Mlp net = init_network(1, hidden, 1, 7);
  const Eigen::MatrixXd x = data.input_matrix();
  const auto loss = mse_loss(data.target_row());
  Gradients grads = Gradients::zeros_like(net);
  Adam adam(net, 1e-3);
  for (auto _ : state) {
    benchmark::DoNotOptimize(loss_and_gradient(net, x, loss, grads));
    adam.step(net, grads);
  }
}
BENCHMARK(BM_RegressionEpoch)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
