#pragma once

#include <cstdint>
#include <random>

namespace cpmm {

/// SplitMix64 finalizer applied to (seed, stream): the seed of stream `stream`
/// derived from a master seed. Path i of a batch always uses stream i, so
/// results do not depend on how paths are scheduled across threads.
std::uint64_t split_seed(std::uint64_t seed, std::uint64_t stream) noexcept;

/// Standard normal draws from mt19937_64 through the basic Box–Muller
/// transform (both outputs used). Uniforms are the top 53 bits mapped to
/// (0, 1]. Only the engine and the transform above are used so that a seed
/// replays the same sequence on any conforming platform.
class NormalStream {
 public:
  explicit NormalStream(std::uint64_t seed) : engine_(seed) {}

  double next();

 private:
  double uniform();

  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace cpmm
