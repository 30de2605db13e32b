#pragma once

// Plot-ready exports. CSV and JSON lines carry the same columns; numbers use
// the shortest text that reads back to the same double.
//
//   path:   block,price,fee
//   ledger: block,price,fee,value,hedge,cash,discounted_pnl   (pnl = Hᵢ − H₀)

#include <iosfwd>
#include <string>
#include <vector>

#include "cpmm/simulation.hpp"

namespace cpmm {

enum class OutputFormat { csv, json };

std::string format_number(double x);

void write_path(std::ostream& out, const SimulatedPath& path, OutputFormat format);
void write_ledger(std::ostream& out, const HedgeLedger& ledger, OutputFormat format);

struct PriceFeeSeries {
  std::vector<double> prices;
  std::vector<double> fees;
};

/// Reads the path CSV (`block,price,fee`). Throws ParseError on malformed
/// rows.
PriceFeeSeries read_price_fee_csv(std::istream& in);

}  // namespace cpmm
