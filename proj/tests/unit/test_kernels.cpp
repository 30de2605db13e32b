#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <vector>

#include <omp.h>

#include "cpmm/error.hpp"
#include "cpmm/kernels.hpp"
#include "cpmm/pricing.hpp"
#include "cpmm/rng.hpp"
#include "cpmm/simulation.hpp"

using namespace cpmm;
using kernels::Backend;

namespace {

const MarketParams kParams(0.05, 0.2582, seconds_to_years(2.0), fee_from_bps(5.0));

std::vector<FeeObservation> random_observations(std::size_t n) {
  std::mt19937_64 gen(n);
  std::lognormal_distribution<double> price(7.5, 0.3);
  std::exponential_distribution<double> fee(1e3);
  std::vector<FeeObservation> out(n);
  for (FeeObservation& o : out) o = {price(gen), fee(gen)};
  return out;
}

// Runs `f` under several OpenMP team sizes; results must not depend on it.
template <class F>
void for_thread_counts(F&& f) {
  const int saved = omp_get_max_threads();
  for (int t : {1, 2, 3, 7}) {
    omp_set_num_threads(t);
    f(t);
  }
  omp_set_num_threads(saved);
}

}  // namespace

TEST(Kernels, FeeStreamBackendsAreBitIdentical) {
  const std::vector<double> ref = kernels::fee_stream_paths(1.0, kParams, 37, 300, 4, Backend::serial);
  ASSERT_EQ(ref.size(), 37u);
  for_thread_counts([&](int t) {
    EXPECT_EQ(kernels::fee_stream_paths(1.0, kParams, 37, 300, 4, Backend::openmp), ref) << t;
  });
}

TEST(Kernels, FeeStreamMatchesPathSimulation) {
  // √P evolution and the price-level simulation agree up to rounding.
  const std::vector<double> sums = kernels::fee_stream_paths(2.0, kParams, 3, 500, 9, Backend::serial);
  for (std::size_t k = 0; k < sums.size(); ++k) {
    const SimulatedPath path = simulate_path(2.0, 500, kParams, split_seed(9, k));
    double want = 0.0;
    for (std::size_t i = 1; i < path.fees.size(); ++i) {
      want += std::exp(-kParams.r() * static_cast<double>(i) * kParams.dt()) * path.fees[i];
    }
    EXPECT_NEAR(sums[k], want, 1e-9 * want);
  }
}

TEST(Kernels, HedgeDriftBackendsAreBitIdentical) {
  const std::vector<DriftEstimate> ref =
      kernels::hedge_drift_paths(1.0, 3000, kParams, PricingMode::market, 11, 6, Backend::serial);
  ASSERT_EQ(ref.size(), 11u);
  for_thread_counts([&](int t) {
    const std::vector<DriftEstimate> got =
        kernels::hedge_drift_paths(1.0, 3000, kParams, PricingMode::market, 11, 6, Backend::openmp);
    ASSERT_EQ(got.size(), ref.size());
    for (std::size_t i = 0; i < ref.size(); ++i) {
      EXPECT_EQ(got[i].slope, ref[i].slope) << t;
      EXPECT_EQ(got[i].t_stat, ref[i].t_stat) << t;
      EXPECT_EQ(got[i].n, ref[i].n) << t;
    }
  });
}

TEST(Kernels, HedgeDriftPathIsSeededBySplitting) {
  const std::vector<DriftEstimate> d =
      kernels::hedge_drift_paths(1.0, 500, kParams, PricingMode::risk_neutral, 2, 42, Backend::serial);
  const SimulatedPath path = simulate_path(1.0, 500, kParams, split_seed(42, 1));
  const DriftEstimate want =
      drift_statistic(backtest_hedge(path.prices, path.fees, kParams, PricingMode::risk_neutral));
  EXPECT_EQ(d[1].slope, want.slope);
}

TEST(Kernels, HedgeDriftErrorsPropagateFromEveryBackend) {
  const MarketParams stop = kParams.with_sigma(0.01);
  for (Backend b : {Backend::serial, Backend::openmp}) {
    EXPECT_THROW(kernels::hedge_drift_paths(1.0, 100, stop, PricingMode::risk_neutral, 4, 1, b),
                 UnsupportedRegime);
  }
}

TEST(Kernels, ScaledFeeSumBackendsAreBitIdentical) {
  for (std::size_t n : {std::size_t{0}, std::size_t{1}, kernels::kChunk - 1, kernels::kChunk,
                        kernels::kChunk + 1, 5 * kernels::kChunk + 123}) {
    const std::vector<FeeObservation> obs = random_observations(n);
    const double ref = kernels::scaled_fee_sum(obs, Backend::serial);
    for_thread_counts([&](int t) {
      EXPECT_EQ(kernels::scaled_fee_sum(obs, Backend::openmp), ref) << n << ' ' << t;
    });
  }
}

TEST(Kernels, ScaledFeeSumIsAccurate) {
  // One huge term then many unit terms: naive summation drops every unit.
  std::vector<FeeObservation> obs{{1.0, 1e16}};
  obs.resize(3 * kernels::kChunk + 1, FeeObservation{1.0, 1.0});
  const double want = 1e16 + 3.0 * static_cast<double>(kernels::kChunk);
  EXPECT_EQ(kernels::scaled_fee_sum(obs, Backend::serial), want);
  EXPECT_EQ(kernels::scaled_fee_sum(obs, Backend::openmp), want);
}
