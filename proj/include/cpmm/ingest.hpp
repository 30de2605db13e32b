#pragma once

// File-based swap ingestion.
//
// Swap files: CSV with header `block,timestamp,price[,fee]` (UTF-8, LF,
// decimal point), or JSON lines with the same keys. Prices are plain
// decimals in numéraire per risky unit; `fee` is an observed LP receipt in
// numéraire.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

#include "cpmm/calibration.hpp"
#include "cpmm/market_model.hpp"

namespace cpmm {

struct SwapRecord {
  std::uint64_t block_index;
  std::int64_t timestamp;
  double price;
  std::optional<double> fee_quote;

  friend bool operator==(const SwapRecord&, const SwapRecord&) = default;
};

enum class SwapFormat { csv, jsonl };

/// Records in file order. Throws ParseError naming the line for a missing
/// column, a malformed number, a nonpositive price, a negative fee or a
/// decreasing block index. Blank lines are skipped.
std::vector<SwapRecord> parse_swaps(std::istream& in, SwapFormat format);

enum class FeeSource {
  none,    // no swap in the block
  model,   // γ̂·F(open, close)
  quoted,  // sum of the block's fee quotes
};

/// One entry per block of an inclusive range. Block k opens at the close of
/// block k−1; `open_price` is the open of the first block when known.
struct BlockSeries {
  std::uint64_t first_block = 0;
  std::optional<double> open_price;
  std::vector<double> prices;  // close price, carried forward over gaps
  std::vector<bool> swap;
  std::vector<double> fees;
  std::vector<FeeSource> fee_sources;
  double dt = 0.0;     // echo of the parameters used for model fees
  double gamma = 0.0;

  std::size_t size() const noexcept { return prices.size(); }

  friend bool operator==(const BlockSeries&, const BlockSeries&) = default;
};

struct BlockRange {
  std::uint64_t first;
  std::uint64_t last;  // inclusive
};

/// Aligns swaps to blocks. Several swaps in one block collapse to the last
/// price; the model fee then runs from the block open to that close.
/// Quoted fees in one block are summed; mixing quoted and unquoted swaps in
/// one block is an InputError. Without `seed_price` the first block only
/// anchors the price: it needs a swap, and it yields no observation.
BlockSeries to_block_series(const std::vector<SwapRecord>& records, BlockRange range,
                            const MarketParams& params,
                            std::optional<double> seed_price = std::nullopt);

/// Range spanning the first to the last record. Throws InsufficientData on
/// an empty list.
BlockRange record_range(const std::vector<SwapRecord>& records);

/// One observation per swap block with a known open price.
std::vector<FeeObservation> observed_fees(const BlockSeries& series);

/// Lossless CSV form: a `#dt=…,gamma=…,open=…` line, then
/// `block,price,swap,fee,fee_source` rows. Numbers use the shortest
/// representation that reads back to the same double.
void write_block_series(std::ostream& out, const BlockSeries& series);
BlockSeries read_block_series(std::istream& in);

}  // namespace cpmm
