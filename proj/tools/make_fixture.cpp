// Regenerates data/swap_fixture.csv, the synthetic swap extract used by the
// calibration example.
//
// The price follows block-level GBM at σ = 0.2582 (r = 5%, Δt = 2 s). Block
// shocks are stratified: the normal quantiles Φ⁻¹((i + ½)/N) in a random
// order, so the fee statistic sits at its expectation instead of wandering
// by sampling noise. Some blocks carry no swap (the price is carried
// forward) and some carry two swaps with an intermediate price. Output is a
// pure function of the constants below.

#include <boost/math/distributions/normal.hpp>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <random>
#include <string>
#include <vector>

#include "cpmm/market_model.hpp"
#include "cpmm/report.hpp"

namespace {

constexpr std::size_t kSwapBlocks = 20000;
constexpr double kSigma = 0.2582;
constexpr double kRate = 0.05;
constexpr double kBlockSeconds = 2.0;
constexpr double kFeeBps = 5.0;
constexpr double kStartPrice = 1842.31;
constexpr std::uint64_t kFirstBlock = 43'500'000;
constexpr std::int64_t kFirstTimestamp = 1'685'577'600;
constexpr std::uint64_t kSeed = 20230601;
constexpr double kGapProbability = 0.15;
constexpr double kDoubleSwapProbability = 0.10;

// (0, 1], 53 bits; spelled out so the file does not depend on the library's
// distribution implementations.
double uniform(std::mt19937_64& g) { return static_cast<double>((g() >> 11) + 1) * 0x1.0p-53; }

}  // namespace

int main(int argc, char** argv) {
  const cpmm::MarketParams params(kRate, kSigma, cpmm::seconds_to_years(kBlockSeconds),
                                  cpmm::fee_from_bps(kFeeBps));
  std::mt19937_64 gen(kSeed);

  const boost::math::normal_distribution<double> normal;
  std::vector<double> shocks(kSwapBlocks);
  for (std::size_t i = 0; i < kSwapBlocks; ++i) {
    shocks[i] = boost::math::quantile(normal, (static_cast<double>(i) + 0.5) / kSwapBlocks);
  }
  for (std::size_t i = kSwapBlocks - 1; i > 0; --i) {
    const auto j = static_cast<std::size_t>(uniform(gen) * static_cast<double>(i + 1)) % (i + 1);
    std::swap(shocks[i], shocks[j]);
  }

  std::ofstream file;
  if (argc > 1) {
    file.open(argv[1], std::ios::binary);
    if (!file) {
      std::cerr << "cannot open " << argv[1] << '\n';
      return 4;
    }
  }
  std::ostream& out = argc > 1 ? file : std::cout;

  auto row = [&](std::uint64_t block, double price) {
    out << block << ',' << kFirstTimestamp + static_cast<std::int64_t>(block - kFirstBlock) * 2
        << ',' << cpmm::format_number(price) << '\n';
  };

  out << "block,timestamp,price\n";
  std::uint64_t block = kFirstBlock;
  double price = kStartPrice;
  row(block, price);  // anchor: opening price of the window
  for (std::size_t i = 0; i < kSwapBlocks; ++i) {
    while (uniform(gen) < kGapProbability) ++block;  // blocks without a swap
    ++block;
    const double next = cpmm::gbm_step(price, params, shocks[i]);
    if (uniform(gen) < kDoubleSwapProbability) {
      // an intra-block swap that a later swap in the same block overrides
      row(block, price + (next - price) * (2.0 * uniform(gen) - 0.5));
    }
    row(block, next);
    price = next;
  }
  return out ? 0 : 4;
}
