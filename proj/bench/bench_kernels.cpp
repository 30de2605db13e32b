// Serial reference vs OpenMP for each kernel. Arguments are work sizes;
// items/s makes the two backends directly comparable.

#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "cpmm/kernels.hpp"

namespace {

using cpmm::kernels::Backend;

const cpmm::MarketParams kParams(0.05, 0.2582, cpmm::seconds_to_years(2.0), 0.0005);

void fee_stream(benchmark::State& state, Backend backend) {
  const auto paths = static_cast<std::size_t>(state.range(0));
  constexpr std::size_t kHorizon = 2048;
  for (auto _ : state) {
    benchmark::DoNotOptimize(cpmm::kernels::fee_stream_paths(1.0, kParams, paths, kHorizon, 1, backend));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(paths * kHorizon));
}

void hedge_drift(benchmark::State& state, Backend backend) {
  const auto paths = static_cast<std::size_t>(state.range(0));
  constexpr std::size_t kBlocks = 20000;
  for (auto _ : state) {
    benchmark::DoNotOptimize(cpmm::kernels::hedge_drift_paths(
        1.0, kBlocks, kParams, cpmm::PricingMode::market, paths, 1, backend));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(paths * kBlocks));
}

void scaled_fees(benchmark::State& state, Backend backend) {
  const auto n = static_cast<std::size_t>(state.range(0));
  std::mt19937_64 gen(7);
  std::lognormal_distribution<double> price(7.5, 0.3);
  std::exponential_distribution<double> fee(1e3);
  std::vector<cpmm::FeeObservation> obs(n);
  for (auto& o : obs) o = {price(gen), fee(gen)};
  for (auto _ : state) benchmark::DoNotOptimize(cpmm::kernels::scaled_fee_sum(obs, backend));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n));
}

}  // namespace

BENCHMARK_CAPTURE(fee_stream, serial, Backend::serial)->Arg(256)->Arg(2048)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(fee_stream, openmp, Backend::openmp)->Arg(256)->Arg(2048)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(hedge_drift, serial, Backend::serial)->Arg(8)->Arg(32)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(hedge_drift, openmp, Backend::openmp)->Arg(8)->Arg(32)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(scaled_fees, serial, Backend::serial)->Arg(1 << 16)->Arg(1 << 20);
BENCHMARK_CAPTURE(scaled_fees, openmp, Backend::openmp)->Arg(1 << 16)->Arg(1 << 20);

BENCHMARK_MAIN();
