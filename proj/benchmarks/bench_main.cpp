#include <benchmark/benchmark.h>

#include "mixint/integrator.hpp"
#include "mixint/lattice.hpp"

namespace {

mixint::ReducedModel coin_model() {
  mixint::ModelSpec spec{{4}, {1}};
  return mixint::reduce_matrix(mixint::build_matrix(spec));
}

void BM_PhiRecurrenceCoin(benchmark::State& state) {
  auto red = coin_model();
  mixint::DataVector U{{51, 18, 73, 25, 75}};
  for (auto _ : state) {
    auto table = mixint::phi_recurrence(red.matrix, U);
    benchmark::DoNotOptimize(table.entries.size());
  }
}
BENCHMARK(BM_PhiRecurrenceCoin);

void BM_MixtureCoin(benchmark::State& state) {
  auto red = coin_model();
  mixint::DataVector U{{51, 18, 73, 25, 75}};
  mixint::MixtureOptions opts;
  opts.compute_bounds = false;
  opts.threads = static_cast<int>(state.range(0));
  for (auto _ : state) {
    auto res = mixint::mixture_marginal(red.matrix, U, {}, opts);
    benchmark::DoNotOptimize(res.integral);
  }
}
BENCHMARK(BM_MixtureCoin)->Arg(1)->Arg(2)->Arg(4);

void BM_RowHnf(benchmark::State& state) {
  mixint::ModelSpec spec{{1, 1}, {3, 3}};
  auto A = mixint::build_matrix(spec);
  auto M = mixint::to_imat(A);
  for (auto _ : state) {
    auto h = mixint::row_hnf(M);
    benchmark::DoNotOptimize(h.H);
  }
}
BENCHMARK(BM_RowHnf);

void BM_SubsetEnumerationSwiss(benchmark::State& state) {
  mixint::ModelSpec spec{{1, 1}, {3, 3}};
  auto A = mixint::build_matrix(spec);
  mixint::DataVector U{{4, 2, 2, 2, 2, 4, 2, 2, 2, 2, 4, 2, 2, 2, 2, 4}};
  for (auto _ : state) {
    auto bounds = mixint::monomial_bounds(A, U);
    benchmark::DoNotOptimize(bounds.lattice_count);
  }
}
BENCHMARK(BM_SubsetEnumerationSwiss);

}  // namespace

BENCHMARK_MAIN();
