#include <benchmark/benchmark.h>

#include <random>

#include "gwnet/gwnet.hpp"

using namespace gwnet;

namespace {

Matrix random_matrix(Eigen::Index m, Eigen::Index n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-10.0, 10.0);
  Matrix out(m, n);
  for (Eigen::Index i = 0; i < m; ++i)
    for (Eigen::Index j = 0; j < n; ++j) out(i, j) = u(rng);
  return out;
}

Vector uniform(Eigen::Index n) { return Vector::Constant(n, 1.0 / static_cast<double>(n)); }

MeasureNetwork random_network(Eigen::Index n, std::uint64_t seed) {
  return MeasureNetwork::with_uniform_measure(random_matrix(n, n, seed));
}

void BM_ExactOt(benchmark::State& state) {
  const auto n = state.range(0);
  const Matrix cost = random_matrix(n, n, 1).cwiseAbs();
  for (auto _ : state) benchmark::DoNotOptimize(exact_ot(cost, uniform(n), uniform(n)).objective);
  state.SetComplexityN(n);
}
BENCHMARK(BM_ExactOt)->RangeMultiplier(2)->Range(8, 256)->Complexity();

void BM_Wasserstein1d(benchmark::State& state) {
  const auto n = state.range(0);
  const Matrix w = random_matrix(2, n, 2);
  std::vector<double> masses(static_cast<std::size_t>(n), 1.0 / static_cast<double>(n));
  const DiscreteDistribution a({w.row(0).begin(), w.row(0).end()}, masses);
  const DiscreteDistribution b({w.row(1).begin(), w.row(1).end()}, masses);
  for (auto _ : state) benchmark::DoNotOptimize(wasserstein_1d(a, b, 2.0));
  state.SetComplexityN(n);
}
BENCHMARK(BM_Wasserstein1d)->RangeMultiplier(4)->Range(16, 4096)->Complexity();

void BM_TlbCost(benchmark::State& state) {
  const auto n = state.range(0);
  const auto X = random_network(n, 3), Y = random_network(n, 4);
  for (auto _ : state) benchmark::DoNotOptimize(tlb_cost(X, Y, 2.0, Direction::kOut).cost.sum());
}
BENCHMARK(BM_TlbCost)->RangeMultiplier(2)->Range(16, 128)->Unit(benchmark::kMillisecond);

void BM_RtlbMax(benchmark::State& state) {
  const auto n = state.range(0);
  const auto X = random_network(n, 5), Y = random_network(n, 6);
  for (auto _ : state) benchmark::DoNotOptimize(rtlb_max(X, Y, 2.0).rtlb_max);
}
BENCHMARK(BM_RtlbMax)->RangeMultiplier(2)->Range(16, 128)->Unit(benchmark::kMillisecond);

void BM_Sinkhorn(benchmark::State& state) {
  const auto n = state.range(0);
  const Matrix cost = random_matrix(n, n, 7).cwiseAbs() / 10.0;
  SinkhornConfig cfg;
  cfg.lambda = 10.0;
  for (auto _ : state) benchmark::DoNotOptimize(sinkhorn(cost, cfg, uniform(n), uniform(n)).plan(0, 0));
}
BENCHMARK(BM_Sinkhorn)->RangeMultiplier(2)->Range(16, 256)->Unit(benchmark::kMicrosecond);

void BM_SinkhornLog(benchmark::State& state) {
  const auto n = state.range(0);
  const Matrix cost = random_matrix(n, n, 8).cwiseAbs() * 10.0;
  SinkhornConfig cfg;
  cfg.lambda = 5.0;
  for (auto _ : state) {
    const auto init = log_initialize(cost, cfg.lambda);
    benchmark::DoNotOptimize(sinkhorn_log(cost, cfg, uniform(n), uniform(n), init).plan(0, 0));
  }
}
BENCHMARK(BM_SinkhornLog)->RangeMultiplier(2)->Range(16, 128)->Unit(benchmark::kMicrosecond);

void BM_EntropicGw(benchmark::State& state) {
  const auto n = state.range(0);
  const auto X = normalize_max_abs(random_network(n, 9)), Y = normalize_max_abs(random_network(n, 10));
  GwOptions opt;
  opt.sinkhorn.lambda = 20.0;
  for (auto _ : state) {
    try {
      benchmark::DoNotOptimize(entropic_gw(X, Y, opt).value);
    } catch (const GwNotConverged& e) {
      benchmark::DoNotOptimize(e.last().value);
    }
  }
}
BENCHMARK(BM_EntropicGw)->Arg(16)->Arg(32)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
