#include <benchmark/benchmark.h>

#include <random>

#include "sidkit/sidkit.hpp"

using namespace sidkit;

namespace {

EmbeddingCloud gaussian_cloud(int rows, int cols, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> z;
  RowMatrix m(rows, cols);
  for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = z(rng);
  return EmbeddingCloud("bench", std::move(m));
}

void BM_KernelSum(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto mode = state.range(1) == 0 ? SumMode::Direct : SumMode::LogDomain;
  const auto centers = gaussian_cloud(1000, n, 1);
  const auto kernel = KernelSpec::from_exponent(1 - n, n);
  const Eigen::VectorXd q = Eigen::VectorXd::Constant(n, 0.1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(kernel_sum(kernel, q, centers, mode));
  }
  state.SetItemsProcessed(state.iterations() * centers.count());
}
BENCHMARK(BM_KernelSum)->ArgsProduct({{2, 64, 2048}, {0, 1}});

void BM_SignedDistance(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto a = gaussian_cloud(500, n, 2);
  const auto b = gaussian_cloud(500, n, 3);
  const auto kernel = KernelSpec::from_exponent(-1, n);
  const HypercubeSpec cube(Eigen::VectorXd::Zero(n), 2.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(signed_distance(a, b, kernel, cube, 128, 7));
  }
}
BENCHMARK(BM_SignedDistance)->Arg(2)->Arg(64);

void BM_SweepDefaultGrid(benchmark::State& state) {
  const auto sc = scenario("fig5_mid", 0);
  const auto kernel = KernelSpec::from_exponent(-1, 2);
  for (auto _ : state) {
    benchmark::DoNotOptimize(sid_sweep(sc.source, sc.target, kernel, SweepConfig{}));
  }
}
BENCHMARK(BM_SweepDefaultGrid)->Unit(benchmark::kMillisecond);

void BM_Fid(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto a = gaussian_cloud(2 * n, n, 4);
  const auto b = gaussian_cloud(2 * n, n, 5);
  for (auto _ : state) benchmark::DoNotOptimize(fid(a, b));
}
BENCHMARK(BM_Fid)->Arg(64)->Arg(256)->Unit(benchmark::kMillisecond);

void BM_Kid(benchmark::State& state) {
  const int rows = static_cast<int>(state.range(0));
  const auto a = gaussian_cloud(rows, 64, 6);
  const auto b = gaussian_cloud(rows, 64, 7);
  for (auto _ : state) benchmark::DoNotOptimize(kid(a, b));
}
BENCHMARK(BM_Kid)->Arg(500)->Arg(2000)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
