#include "cpmm/report.hpp"

#include <cmath>
#include <istream>
#include <ostream>

#include <json.hpp>

#include "cpmm/error.hpp"
#include "text.hpp"

namespace cpmm {

namespace {

// Raw numbers are spliced in so JSON keeps the same shortest form as CSV.
void write_row(std::ostream& out, OutputFormat format, const std::vector<const char*>& keys,
               const std::vector<std::string>& values) {
  if (format == OutputFormat::csv) {
    for (std::size_t i = 0; i < values.size(); ++i) out << (i ? "," : "") << values[i];
    out << '\n';
    return;
  }
  out << '{';
  for (std::size_t i = 0; i < values.size(); ++i) {
    out << (i ? "," : "") << nlohmann::json(keys[i]).dump() << ':' << values[i];
  }
  out << "}\n";
}

void write_header(std::ostream& out, OutputFormat format, const std::vector<const char*>& keys) {
  if (format != OutputFormat::csv) return;
  for (std::size_t i = 0; i < keys.size(); ++i) out << (i ? "," : "") << keys[i];
  out << '\n';
}

}  // namespace

std::string format_number(double x) {
  if (!std::isfinite(x)) return std::isnan(x) ? "nan" : (x > 0 ? "inf" : "-inf");
  return text::format(x);
}

void write_path(std::ostream& out, const SimulatedPath& path, OutputFormat format) {
  const std::vector<const char*> keys{"block", "price", "fee"};
  write_header(out, format, keys);
  for (std::size_t i = 0; i < path.prices.size(); ++i) {
    write_row(out, format, keys,
              {std::to_string(i), format_number(path.prices[i]), format_number(path.fees[i])});
  }
}

void write_ledger(std::ostream& out, const HedgeLedger& ledger, OutputFormat format) {
  const std::vector<const char*> keys{"block", "price", "fee",           "value",
                                      "hedge", "cash",  "discounted_pnl"};
  write_header(out, format, keys);
  const double h0 = ledger.records.empty() ? 0.0 : ledger.records.front().discounted_value;
  for (std::size_t i = 0; i < ledger.records.size(); ++i) {
    const HedgeRecord& r = ledger.records[i];
    write_row(out, format, keys,
              {std::to_string(i), format_number(r.price), format_number(r.fee),
               format_number(r.value), format_number(r.hedge), format_number(r.cash),
               format_number(r.discounted_value - h0)});
  }
}

PriceFeeSeries read_price_fee_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || text::strip_cr(line) != "block,price,fee") {
    throw ParseError(1, "header must be block,price,fee");
  }
  PriceFeeSeries s;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view row = text::strip_cr(line);
    if (row.empty()) continue;
    const auto f = text::split(row);
    if (f.size() != 3) throw ParseError(line_no, "expected 3 columns");
    const auto block = text::parse<std::uint64_t>(f[0]);
    const auto price = text::parse<double>(f[1]);
    const auto fee = text::parse<double>(f[2]);
    if (!block || !price || !fee) throw ParseError(line_no, "malformed row");
    if (!(*price > 0.0 && std::isfinite(*price))) throw ParseError(line_no, "price must be positive");
    if (!(*fee >= 0.0 && std::isfinite(*fee))) throw ParseError(line_no, "fee must be nonnegative");
    s.prices.push_back(*price);
    s.fees.push_back(*fee);
  }
  return s;
}

}  // namespace cpmm
