#include <cstdint>
#include <vector>

#include "cpmm/kernels.hpp"
#include "cpmm/rng.hpp"
#include "kernels_detail.hpp"

namespace cpmm::kernels {

namespace {

std::vector<double> fee_stream_paths_omp(double p0, const MarketParams& params,
                                         std::size_t n_paths, std::size_t horizon,
                                         std::uint64_t seed) {
  std::vector<double> out(n_paths);
  const auto n = static_cast<std::int64_t>(n_paths);
#pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < n; ++i) {
    const auto idx = static_cast<std::size_t>(i);
    out[idx] = params.gamma_hat() * detail::path_fee_sum(p0, params, horizon, split_seed(seed, idx));
  }
  return out;
}

std::vector<DriftEstimate> hedge_drift_paths_omp(double p0, std::size_t n_blocks,
                                                 const MarketParams& params, PricingMode mode,
                                                 std::size_t n_paths, std::uint64_t seed) {
  std::vector<DriftEstimate> out(n_paths);
  const auto n = static_cast<std::int64_t>(n_paths);
  // Exceptions cannot cross the parallel region; inputs are validated by the
  // first path on the calling thread.
  if (n > 0) out[0] = detail::path_drift(p0, n_blocks, params, mode, split_seed(seed, 0));
#pragma omp parallel for schedule(dynamic, 1)
  for (std::int64_t i = 1; i < n; ++i) {
    const auto idx = static_cast<std::size_t>(i);
    out[idx] = detail::path_drift(p0, n_blocks, params, mode, split_seed(seed, idx));
  }
  return out;
}

double scaled_fee_sum_omp(std::span<const FeeObservation> observations) {
  std::vector<double> parts(detail::chunk_count(observations.size()));
  const auto n = static_cast<std::int64_t>(parts.size());
#pragma omp parallel for schedule(static)
  for (std::int64_t k = 0; k < n; ++k) {
    const auto idx = static_cast<std::size_t>(k);
    parts[idx] = detail::chunk_scaled_fee_sum(detail::chunk_at(observations, idx));
  }
  return detail::neumaier_total(parts);
}

}  // namespace

std::vector<double> fee_stream_paths(double p0, const MarketParams& params, std::size_t n_paths,
                                     std::size_t horizon, std::uint64_t seed, Backend backend) {
  if (backend == Backend::serial) return serial::fee_stream_paths(p0, params, n_paths, horizon, seed);
  return fee_stream_paths_omp(p0, params, n_paths, horizon, seed);
}

std::vector<DriftEstimate> hedge_drift_paths(double p0, std::size_t n_blocks,
                                             const MarketParams& params, PricingMode mode,
                                             std::size_t n_paths, std::uint64_t seed,
                                             Backend backend) {
  if (backend == Backend::serial) {
    return serial::hedge_drift_paths(p0, n_blocks, params, mode, n_paths, seed);
  }
  return hedge_drift_paths_omp(p0, n_blocks, params, mode, n_paths, seed);
}

double scaled_fee_sum(std::span<const FeeObservation> observations, Backend backend) {
  if (backend == Backend::serial) return serial::scaled_fee_sum(observations);
  return scaled_fee_sum_omp(observations);
}

}  // namespace cpmm::kernels
