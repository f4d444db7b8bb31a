// Serial reference vs OpenMP for each kernel.

#include <benchmark/benchmark.h>

#include <random>

#include "pipdim/corpus.hpp"
#include "pipdim/kernels.hpp"
#include "pipdim/linalg.hpp"

using namespace pipdim;

namespace {

CooccurrenceCounts make_counts(std::size_t n) {
  std::mt19937_64 rng(1);
  std::geometric_distribution<std::size_t> zipfish(0.002);
  TokenStream stream;
  for (int i = 0; i < 200000; ++i) stream.ids.push_back(TokenId(std::min(zipfish(rng), n - 1)));
  return count_cooccurrences(stream, n, 5);
}

template <auto Kernel>
void BM_fill_signal(benchmark::State& state) {
  const auto counts = make_counts(std::size_t(state.range(0)));
  const SignalSpec spec{SignalKind::ppmi, 1.0, true};
  Matrix out;
  for (auto _ : state) {
    Kernel(counts, spec, out);
    benchmark::DoNotOptimize(out.data());
  }
}

template <auto Kernel>
void BM_gap_sums(benchmark::State& state) {
  const auto d = std::size_t(state.range(0));
  std::vector<double> lambda(d);
  for (std::size_t i = 0; i < d; ++i) lambda[i] = 1000.0 / double(i + 1);
  for (auto _ : state) benchmark::DoNotOptimize(Kernel(lambda, 2 * d, d));
}

template <auto Kernel>
void BM_monte_carlo(benchmark::State& state) {
  const auto n = std::size_t(state.range(0));
  kernels::TrialSetup setup{{}, 0.5, 0.5, n, 3};
  for (std::size_t i = 0; i < n / 4; ++i) setup.lambda.push_back(100.0 / double(i + 1));
  for (auto _ : state) benchmark::DoNotOptimize(Kernel(setup, 4));
}

template <auto Kernel>
void BM_analogy(benchmark::State& state) {
  std::mt19937_64 rng(2);
  Matrix unit = linalg::gaussian_matrix(state.range(0), 100, rng);
  unit.rowwise().normalize();
  std::vector<kernels::AnalogyQuery> queries;
  for (int q = 0; q < 500; ++q) {
    queries.push_back({Eigen::Index(rng() % unit.rows()), Eigen::Index(rng() % unit.rows()),
                       Eigen::Index(rng() % unit.rows())});
  }
  for (auto _ : state) benchmark::DoNotOptimize(Kernel(unit, queries, kernels::AnalogyRule::cos_add));
}

}  // namespace

BENCHMARK(BM_fill_signal<kernels::serial::fill_signal>)->Name("fill_signal/serial")->Arg(2000);
BENCHMARK(BM_fill_signal<kernels::omp::fill_signal>)->Name("fill_signal/omp")->Arg(2000);
BENCHMARK(BM_gap_sums<kernels::serial::gap_inverse_square_sums>)->Name("gap_sums/serial")->Arg(500);
BENCHMARK(BM_gap_sums<kernels::omp::gap_inverse_square_sums>)->Name("gap_sums/omp")->Arg(500);
BENCHMARK(BM_monte_carlo<kernels::serial::monte_carlo_trials>)->Name("monte_carlo/serial")->Arg(200)
    ->Unit(benchmark::kMillisecond);
BENCHMARK(BM_monte_carlo<kernels::omp::monte_carlo_trials>)->Name("monte_carlo/omp")->Arg(200)
    ->Unit(benchmark::kMillisecond);
BENCHMARK(BM_analogy<kernels::serial::analogy_predictions>)->Name("analogy/serial")->Arg(10000);
BENCHMARK(BM_analogy<kernels::omp::analogy_predictions>)->Name("analogy/omp")->Arg(10000);

BENCHMARK_MAIN();
