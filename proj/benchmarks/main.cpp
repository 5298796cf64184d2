#include <benchmark/benchmark.h>

#include "miscal/benefit.hpp"
#include "miscal/cost_context.hpp"
#include "miscal/data.hpp"
#include "miscal/oracle.hpp"
#include "miscal/rng.hpp"
#include "miscal/threshold.hpp"

namespace {

using namespace miscal;

BinnedPair dense_pair(int m, std::uint64_t seed) {
  Rng rng(seed);
  BinnedPair pair{Grid(m)};
  double total = 0.0;
  std::vector<double> w(static_cast<size_t>(m) + 1);
  for (auto& x : w) {
    x = rng.uniform() + 1e-3;
    total += x;
  }
  for (int i = 0; i <= m; ++i) {
    pair.mu[static_cast<size_t>(i)] = w[static_cast<size_t>(i)] / total;
    pair.ytilde[static_cast<size_t>(i)] = rng.uniform();
  }
  return pair;
}

void BM_net_benefit(benchmark::State& state) {
  const int m = static_cast<int>(state.range(0));
  const Grid grid(m);
  const auto pair = dense_pair(m, 1);
  const auto ctx = make_context_from_jstar(0.37 * m, grid);
  for (auto _ : state) {
    benchmark::DoNotOptimize(benefit::net_benefit(pair, m / 3, ctx));
  }
}
BENCHMARK(BM_net_benefit)->Arg(100)->Arg(1000);

void BM_regret(benchmark::State& state) {
  const int m = static_cast<int>(state.range(0));
  const Grid grid(m);
  const auto pair = dense_pair(m, 2);
  const auto ctx = make_context_from_jstar(0.62 * m, grid);
  for (auto _ : state) {
    benchmark::DoNotOptimize(benefit::regret(pair, m / 2, ctx).value);
  }
}
BENCHMARK(BM_regret)->Arg(100)->Arg(1000);

void BM_decision_curve(benchmark::State& state) {
  const int m = static_cast<int>(state.range(0));
  const Grid grid(m);
  const auto pair = dense_pair(m, 3);
  const auto ctx = make_context_from_jstar(0.2 * m, grid);
  for (auto _ : state) {
    benchmark::DoNotOptimize(benefit::decision_curve(pair, ctx).points.size());
  }
}
BENCHMARK(BM_decision_curve)->Arg(100);

void BM_conservative_threshold(benchmark::State& state) {
  const Grid grid(100);
  double jstar = 1.0;
  for (auto _ : state) {
    jstar = jstar >= 99.0 ? 1.0 : jstar + 1.0;
    benchmark::DoNotOptimize(
        threshold::conservative_threshold_ece(0.1, jstar, grid).j_hat);
  }
}
BENCHMARK(BM_conservative_threshold);

void BM_sweep(benchmark::State& state) {
  const Grid grid(100);
  for (auto _ : state) {
    benchmark::DoNotOptimize(threshold::sweep(0.1, grid, Relation::mce, 199,
                                              threshold::EceLeftBranch::theorem, 1)
                                 .size());
  }
}
BENCHMARK(BM_sweep);

void BM_oracle_cost_mce(benchmark::State& state) {
  const Grid grid(10);
  oracle::OracleConfig cfg;
  cfg.resolution = static_cast<int>(state.range(0));
  cfg.jobs = 1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        oracle::oracle_cost_mce(3.0, 5.0, 0.2, grid, cfg).approx_cost);
  }
}
BENCHMARK(BM_oracle_cost_mce)->Arg(50)->Arg(100);

void BM_oracle_cost_ece(benchmark::State& state) {
  const Grid grid(10);
  oracle::OracleConfig cfg;
  cfg.resolution = static_cast<int>(state.range(0));
  cfg.jobs = 1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        oracle::oracle_cost_ece(3.0, 5.0, 0.2, grid, cfg).approx_cost);
  }
}
BENCHMARK(BM_oracle_cost_ece)->Arg(20)->Arg(40);

void BM_bin_dataset(benchmark::State& state) {
  data::SyntheticSpec spec;
  spec.n = 100000;
  spec.law = data::RiskLaw::logit_normal;
  spec.seed = 4;
  const Grid grid(100);
  const auto ds = data::generate(spec, grid);
  for (auto _ : state) {
    benchmark::DoNotOptimize(data::bin_dataset(ds, grid).mu.size());
  }
}
BENCHMARK(BM_bin_dataset);

}  // namespace

BENCHMARK_MAIN();
