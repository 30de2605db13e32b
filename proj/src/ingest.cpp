#include "cpmm/ingest.hpp"

#include <cmath>
#include <istream>
#include <ostream>
#include <string>

#include <json.hpp>

#include "cpmm/error.hpp"
#include "cpmm/pricing.hpp"
#include "text.hpp"

namespace cpmm {

namespace {

void check_record(const SwapRecord& rec, const std::vector<SwapRecord>& so_far,
                  std::size_t line) {
  if (!(std::isfinite(rec.price) && rec.price > 0.0)) {
    throw ParseError(line, "price must be positive");
  }
  if (rec.fee_quote && !(std::isfinite(*rec.fee_quote) && *rec.fee_quote >= 0.0)) {
    throw ParseError(line, "fee must be nonnegative");
  }
  if (!so_far.empty() && rec.block_index < so_far.back().block_index) {
    throw ParseError(line, "block index decreases");
  }
}

std::vector<SwapRecord> parse_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw ParseError(1, "missing header");
  const std::string_view header = text::strip_cr(line);
  bool has_fee;
  if (header == "block,timestamp,price") {
    has_fee = false;
  } else if (header == "block,timestamp,price,fee") {
    has_fee = true;
  } else {
    throw ParseError(1, "header must be block,timestamp,price[,fee]");
  }

  std::vector<SwapRecord> out;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view row = text::strip_cr(line);
    if (row.empty()) continue;
    const auto fields = text::split(row);
    const std::size_t want = has_fee ? 4 : 3;
    if (fields.size() < want) throw ParseError(line_no, "missing column");
    if (fields.size() > want) throw ParseError(line_no, "too many columns");
    const auto block = text::parse<std::uint64_t>(fields[0]);
    if (!block) throw ParseError(line_no, "bad block index");
    const auto ts = text::parse<std::int64_t>(fields[1]);
    if (!ts) throw ParseError(line_no, "bad timestamp");
    const auto price = text::parse<double>(fields[2]);
    if (!price) throw ParseError(line_no, "bad price");
    SwapRecord rec{*block, *ts, *price, std::nullopt};
    if (has_fee && !fields[3].empty()) {
      const auto fee = text::parse<double>(fields[3]);
      if (!fee) throw ParseError(line_no, "bad fee");
      rec.fee_quote = *fee;
    }
    check_record(rec, out, line_no);
    out.push_back(rec);
  }
  return out;
}

std::vector<SwapRecord> parse_jsonl(std::istream& in) {
  std::vector<SwapRecord> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view row = text::strip_cr(line);
    if (row.find_first_not_of(" \t") == std::string_view::npos) continue;
    nlohmann::json obj;
    try {
      obj = nlohmann::json::parse(row);
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(line_no, std::string("invalid JSON: ") + e.what());
    }
    if (!obj.is_object()) throw ParseError(line_no, "expected an object");
    for (const char* key : {"block", "timestamp", "price"}) {
      if (!obj.contains(key)) throw ParseError(line_no, std::string("missing column ") + key);
    }
    SwapRecord rec{};
    try {
      if (!obj["block"].is_number_unsigned()) throw ParseError(line_no, "bad block index");
      if (!obj["timestamp"].is_number_integer()) throw ParseError(line_no, "bad timestamp");
      if (!obj["price"].is_number()) throw ParseError(line_no, "bad price");
      rec.block_index = obj["block"].get<std::uint64_t>();
      rec.timestamp = obj["timestamp"].get<std::int64_t>();
      rec.price = obj["price"].get<double>();
      if (obj.contains("fee") && !obj["fee"].is_null()) {
        if (!obj["fee"].is_number()) throw ParseError(line_no, "bad fee");
        rec.fee_quote = obj["fee"].get<double>();
      }
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(line_no, e.what());
    }
    check_record(rec, out, line_no);
    out.push_back(rec);
  }
  return out;
}

std::string_view source_name(FeeSource s) {
  switch (s) {
    case FeeSource::none:
      return "none";
    case FeeSource::model:
      return "model";
    case FeeSource::quoted:
      return "quoted";
  }
  return "?";
}

}  // namespace

std::vector<SwapRecord> parse_swaps(std::istream& in, SwapFormat format) {
  return format == SwapFormat::csv ? parse_csv(in) : parse_jsonl(in);
}

BlockRange record_range(const std::vector<SwapRecord>& records) {
  if (records.empty()) throw InsufficientData("no swap records");
  return {records.front().block_index, records.back().block_index};
}

BlockSeries to_block_series(const std::vector<SwapRecord>& records, BlockRange range,
                            const MarketParams& params, std::optional<double> seed_price) {
  if (range.last < range.first) throw InputError("block range is empty");
  if (seed_price && !(std::isfinite(*seed_price) && *seed_price > 0.0)) {
    throw DomainError("seed price must be positive");
  }
  for (std::size_t i = 0; i < records.size(); ++i) {
    const std::uint64_t b = records[i].block_index;
    if (b < range.first || b > range.last) {
      throw InputError("record at block " + std::to_string(b) + " lies outside the range");
    }
    if (i > 0 && b < records[i - 1].block_index) throw InputError("records are not sorted");
  }
  if (!seed_price && (records.empty() || records.front().block_index != range.first)) {
    throw InputError("first block needs a swap or a seed price");
  }

  BlockSeries s;
  s.first_block = range.first;
  s.open_price = seed_price;
  s.dt = params.dt();
  s.gamma = params.gamma();
  const std::size_t n = static_cast<std::size_t>(range.last - range.first) + 1;
  s.prices.reserve(n);
  s.swap.reserve(n);
  s.fees.reserve(n);
  s.fee_sources.reserve(n);

  std::size_t next = 0;
  for (std::size_t k = 0; k < n; ++k) {
    const std::uint64_t block = range.first + k;
    const std::optional<double> open = k == 0 ? seed_price : std::optional(s.prices.back());
    const std::size_t begin = next;
    while (next < records.size() && records[next].block_index == block) ++next;

    if (begin == next) {
      s.prices.push_back(*open);
      s.swap.push_back(false);
      s.fees.push_back(0.0);
      s.fee_sources.push_back(FeeSource::none);
      continue;
    }
    const double close = records[next - 1].price;
    std::size_t quoted = 0;
    double quote_sum = 0.0;
    for (std::size_t i = begin; i < next; ++i) {
      if (records[i].fee_quote) {
        ++quoted;
        quote_sum += *records[i].fee_quote;
      }
    }
    if (quoted != 0 && quoted != next - begin) {
      throw InputError("block " + std::to_string(block) + " mixes quoted and unquoted fees");
    }
    s.prices.push_back(close);
    if (!open) {
      // anchor block: its open price is unknown
      s.swap.push_back(false);
      s.fees.push_back(0.0);
      s.fee_sources.push_back(FeeSource::none);
      continue;
    }
    s.swap.push_back(true);
    if (quoted != 0) {
      s.fees.push_back(quote_sum);
      s.fee_sources.push_back(FeeSource::quoted);
    } else {
      s.fees.push_back(params.gamma_hat() * block_fee(*open, close));
      s.fee_sources.push_back(FeeSource::model);
    }
  }
  return s;
}

std::vector<FeeObservation> observed_fees(const BlockSeries& series) {
  std::vector<FeeObservation> out;
  for (std::size_t k = 0; k < series.size(); ++k) {
    if (!series.swap[k]) continue;
    const double open = k == 0 ? *series.open_price : series.prices[k - 1];
    out.push_back({open, series.fees[k]});
  }
  return out;
}

void write_block_series(std::ostream& out, const BlockSeries& series) {
  out << "#dt=" << text::format(series.dt) << ",gamma=" << text::format(series.gamma)
      << ",open=" << (series.open_price ? text::format(*series.open_price) : std::string())
      << '\n';
  out << "block,price,swap,fee,fee_source\n";
  for (std::size_t k = 0; k < series.size(); ++k) {
    out << series.first_block + k << ',' << text::format(series.prices[k]) << ','
        << (series.swap[k] ? 1 : 0) << ',' << text::format(series.fees[k]) << ','
        << source_name(series.fee_sources[k]) << '\n';
  }
}

BlockSeries read_block_series(std::istream& in) {
  BlockSeries s;
  std::string line;
  if (!std::getline(in, line)) throw ParseError(1, "missing metadata line");
  {
    std::string_view meta = text::strip_cr(line);
    if (meta.substr(0, 1) != "#") throw ParseError(1, "missing metadata line");
    meta.remove_prefix(1);
    const auto parts = text::split(meta);
    if (parts.size() != 3 || parts[0].substr(0, 3) != "dt=" || parts[1].substr(0, 6) != "gamma=" ||
        parts[2].substr(0, 5) != "open=") {
      throw ParseError(1, "metadata must be #dt=...,gamma=...,open=...");
    }
    const auto dt = text::parse<double>(parts[0].substr(3));
    const auto gamma = text::parse<double>(parts[1].substr(6));
    if (!dt || !gamma) throw ParseError(1, "bad metadata number");
    s.dt = *dt;
    s.gamma = *gamma;
    const std::string_view open = parts[2].substr(5);
    if (!open.empty()) {
      const auto o = text::parse<double>(open);
      if (!o) throw ParseError(1, "bad open price");
      s.open_price = *o;
    }
  }
  if (!std::getline(in, line) || text::strip_cr(line) != "block,price,swap,fee,fee_source") {
    throw ParseError(2, "header must be block,price,swap,fee,fee_source");
  }
  std::size_t line_no = 2;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view row = text::strip_cr(line);
    if (row.empty()) continue;
    const auto f = text::split(row);
    if (f.size() != 5) throw ParseError(line_no, "expected 5 columns");
    const auto block = text::parse<std::uint64_t>(f[0]);
    const auto price = text::parse<double>(f[1]);
    const auto fee = text::parse<double>(f[3]);
    if (!block || !price || !fee || (f[2] != "0" && f[2] != "1")) {
      throw ParseError(line_no, "malformed row");
    }
    if (s.prices.empty()) {
      s.first_block = *block;
    } else if (*block != s.first_block + s.prices.size()) {
      throw ParseError(line_no, "blocks must be consecutive");
    }
    FeeSource src;
    if (f[4] == "none") {
      src = FeeSource::none;
    } else if (f[4] == "model") {
      src = FeeSource::model;
    } else if (f[4] == "quoted") {
      src = FeeSource::quoted;
    } else {
      throw ParseError(line_no, "unknown fee source");
    }
    s.prices.push_back(*price);
    s.swap.push_back(f[2] == "1");
    s.fees.push_back(*fee);
    s.fee_sources.push_back(src);
  }
  return s;
}

}  // namespace cpmm
