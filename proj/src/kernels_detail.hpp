#pragma once

// Per-work-item bodies shared by the serial and OpenMP kernels. Both
// backends call exactly these functions on the same indices, which is what
// makes their results bit-identical.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

#include "cpmm/calibration.hpp"
#include "cpmm/kernels.hpp"
#include "cpmm/rng.hpp"
#include "cpmm/simulation.hpp"

namespace cpmm::kernels::detail {

/// Discounted fee sum of one path, before the γ̂ factor. Evolves √P exactly
/// under GBM so each block costs one exp.
inline double path_fee_sum(double p0, const MarketParams& params, std::size_t horizon,
                           std::uint64_t seed) {
  NormalStream normals(seed);
  const double dt = params.dt();
  const double s = params.sigma();
  const double half_drift = 0.5 * (params.r() - 0.5 * s * s) * dt;
  const double half_vol = 0.5 * s * std::sqrt(dt);
  const double step_discount = std::exp(-params.r() * dt);
  double root = std::sqrt(p0);
  double discount = step_discount;
  double sum = 0.0;
  for (std::size_t i = 0; i < horizon; ++i) {
    const double next = root * std::exp(half_drift + half_vol * normals.next());
    const double fee = next > root ? next - root : next * (root - next) / root;
    sum += discount * fee;
    discount *= step_discount;
    root = next;
  }
  return sum;
}

inline DriftEstimate path_drift(double p0, std::size_t n_blocks, const MarketParams& params,
                                PricingMode mode, std::uint64_t seed) {
  const SimulatedPath path = simulate_path(p0, n_blocks, params, seed);
  return drift_statistic(backtest_hedge(path.prices, path.fees, params, mode));
}

/// Neumaier-compensated Σ fee/√price over one chunk.
inline double chunk_scaled_fee_sum(std::span<const FeeObservation> chunk) {
  double sum = 0.0;
  double carry = 0.0;
  for (const FeeObservation& o : chunk) {
    const double x = o.fee_paid / std::sqrt(o.prev_price);
    const double t = sum + x;
    carry += std::abs(sum) >= std::abs(x) ? (sum - t) + x : (x - t) + sum;
    sum = t;
  }
  return sum + carry;
}

inline double neumaier_total(std::span<const double> parts) {
  double sum = 0.0;
  double carry = 0.0;
  for (double x : parts) {
    const double t = sum + x;
    carry += std::abs(sum) >= std::abs(x) ? (sum - t) + x : (x - t) + sum;
    sum = t;
  }
  return sum + carry;
}

inline std::size_t chunk_count(std::size_t n) { return (n + kChunk - 1) / kChunk; }

inline std::span<const FeeObservation> chunk_at(std::span<const FeeObservation> all,
                                                std::size_t k) {
  const std::size_t begin = k * kChunk;
  const std::size_t len = std::min(kChunk, all.size() - begin);
  return all.subspan(begin, len);
}

}  // namespace cpmm::kernels::detail

namespace cpmm::kernels::serial {

std::vector<double> fee_stream_paths(double p0, const MarketParams& params, std::size_t n_paths,
                                     std::size_t horizon, std::uint64_t seed);
std::vector<DriftEstimate> hedge_drift_paths(double p0, std::size_t n_blocks,
                                             const MarketParams& params, PricingMode mode,
                                             std::size_t n_paths, std::uint64_t seed);
double scaled_fee_sum(std::span<const FeeObservation> observations);

}  // namespace cpmm::kernels::serial
