// Serial reference kernels against their OpenMP counterparts.
//
//   ./xicor_bench --benchmark_filter=NnGraph
//
// The thread count of the parallel kernels follows OMP_NUM_THREADS.

#include <benchmark/benchmark.h>

#include <vector>

#include "xicor/dep_tests.hpp"
#include "xicor/manifold_gen.hpp"
#include "xicor/nn_graph.hpp"
#include "xicor/null_constants.hpp"
#include "xicor/reference.hpp"

namespace {

using namespace xicor;

void BM_NnGraphSerialBrute(benchmark::State& state) {
  const PointCloud cloud = sample_uniform_manifold(static_cast<int>(state.range(1)),
                                                   static_cast<std::size_t>(state.range(0)), 1);
  for (auto _ : state) benchmark::DoNotOptimize(reference::nn_graph_brute(cloud));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_NnGraphParallelBrute(benchmark::State& state) {
  const PointCloud cloud = sample_uniform_manifold(static_cast<int>(state.range(1)),
                                                   static_cast<std::size_t>(state.range(0)), 1);
  for (auto _ : state) benchmark::DoNotOptimize(build_nn_graph(cloud, {NnMethod::brute}));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_NnGraphParallelTree(benchmark::State& state) {
  const PointCloud cloud = sample_uniform_manifold(static_cast<int>(state.range(1)),
                                                   static_cast<std::size_t>(state.range(0)), 1);
  for (auto _ : state) benchmark::DoNotOptimize(build_nn_graph(cloud, {NnMethod::tree}));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void nn_args(benchmark::internal::Benchmark* b) {
  for (int d : {1, 3, 10})
    for (int n : {1000, 10000}) b->Args({n, d});
}

BENCHMARK(BM_NnGraphSerialBrute)->Apply(nn_args)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_NnGraphParallelBrute)->Apply(nn_args)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_NnGraphParallelTree)->Apply(nn_args)->Unit(benchmark::kMillisecond);

void BM_OmSerial(benchmark::State& state) {
  for (auto _ : state)
    benchmark::DoNotOptimize(reference::o_m_monte_carlo(static_cast<int>(state.range(0)), 200'000, 1));
  state.SetItemsProcessed(state.iterations() * 200'000);
}

void BM_OmParallel(benchmark::State& state) {
  for (auto _ : state)
    benchmark::DoNotOptimize(o_m_monte_carlo(static_cast<int>(state.range(0)), 200'000, 1));
  state.SetItemsProcessed(state.iterations() * 200'000);
}

BENCHMARK(BM_OmSerial)->Arg(1)->Arg(5)->Arg(10)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_OmParallel)->Arg(1)->Arg(5)->Arg(10)->Unit(benchmark::kMillisecond);

void BM_XiPermutationTest(benchmark::State& state) {
  const PointCloud x = sample_uniform_manifold(2, static_cast<std::size_t>(state.range(0)), 3);
  std::vector<double> y(x.size());
  for (std::size_t i = 0; i < y.size(); ++i) y[i] = x.point(i)[0];
  for (auto _ : state) benchmark::DoNotOptimize(xi_test_permutation(x, y, 0.05, 199, 1));
}

void BM_DcorPermutationTest(benchmark::State& state) {
  const PointCloud x = sample_uniform_manifold(2, static_cast<std::size_t>(state.range(0)), 3);
  std::vector<double> y(x.size());
  for (std::size_t i = 0; i < y.size(); ++i) y[i] = x.point(i)[0];
  for (auto _ : state) benchmark::DoNotOptimize(dcor_test_permutation(x, y, 0.05, 199, 1));
}

BENCHMARK(BM_XiPermutationTest)->Arg(100)->Arg(1000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_DcorPermutationTest)->Arg(100)->Arg(1000)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
