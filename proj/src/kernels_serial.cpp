#include <vector>

#include "cpmm/kernels.hpp"
#include "cpmm/rng.hpp"
#include "kernels_detail.hpp"

namespace cpmm::kernels {

namespace serial {

std::vector<double> fee_stream_paths(double p0, const MarketParams& params, std::size_t n_paths,
                                     std::size_t horizon, std::uint64_t seed) {
  std::vector<double> out(n_paths);
  for (std::size_t i = 0; i < n_paths; ++i) {
    out[i] = params.gamma_hat() * detail::path_fee_sum(p0, params, horizon, split_seed(seed, i));
  }
  return out;
}

std::vector<DriftEstimate> hedge_drift_paths(double p0, std::size_t n_blocks,
                                             const MarketParams& params, PricingMode mode,
                                             std::size_t n_paths, std::uint64_t seed) {
  std::vector<DriftEstimate> out;
  out.reserve(n_paths);
  for (std::size_t i = 0; i < n_paths; ++i) {
    out.push_back(detail::path_drift(p0, n_blocks, params, mode, split_seed(seed, i)));
  }
  return out;
}

double scaled_fee_sum(std::span<const FeeObservation> observations) {
  std::vector<double> parts(detail::chunk_count(observations.size()));
  for (std::size_t k = 0; k < parts.size(); ++k) {
    parts[k] = detail::chunk_scaled_fee_sum(detail::chunk_at(observations, k));
  }
  return detail::neumaier_total(parts);
}

}  // namespace serial

}  // namespace cpmm::kernels
