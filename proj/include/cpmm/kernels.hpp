#pragma once

// Data-parallel inner loops behind the public simulation and calibration
// entry points. Each kernel has a serial reference and an OpenMP version.
// Work is split per path (or per fixed-size chunk) and combined in index
// order, so both backends return bit-identical results for any thread count.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "cpmm/calibration.hpp"
#include "cpmm/simulation.hpp"

namespace cpmm::kernels {

enum class Backend { serial, openmp };

/// Element count of one reduction chunk in scaled_fee_sum.
inline constexpr std::size_t kChunk = 4096;

/// Per-path discounted fee sums γ̂·Σ_{i<horizon} e^{−r(i+1)Δt}F(Pᵢ, Pᵢ₊₁).
std::vector<double> fee_stream_paths(double p0, const MarketParams& params, std::size_t n_paths,
                                     std::size_t horizon, std::uint64_t seed, Backend backend);

/// Per-path drift of simulated hedge backtests.
std::vector<DriftEstimate> hedge_drift_paths(double p0, std::size_t n_blocks,
                                             const MarketParams& params, PricingMode mode,
                                             std::size_t n_paths, std::uint64_t seed,
                                             Backend backend);

/// Σ fee_paid/√prev_price.
double scaled_fee_sum(std::span<const FeeObservation> observations, Backend backend);

}  // namespace cpmm::kernels
