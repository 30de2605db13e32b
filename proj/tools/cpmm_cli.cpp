// cpmm: command-line front end. Every printed number comes from a library
// call; this file only parses flags, reads files and formats results.

#include <CLI11.hpp>
#include <fstream>
#include <functional>
#include <iostream>
#include <json.hpp>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cpmm/amm_designs.hpp"
#include "cpmm/calibration.hpp"
#include "cpmm/error.hpp"
#include "cpmm/implied_vol.hpp"
#include "cpmm/ingest.hpp"
#include "cpmm/market_model.hpp"
#include "cpmm/pricing.hpp"
#include "cpmm/report.hpp"
#include "cpmm/simulation.hpp"

namespace {

enum Exit : int {
  kOk = 0,
  kUsage = 2,
  kDomain = 3,
  kIo = 4,
  kBadInput = 5,
  kRegime = 6,
};

constexpr const char* kExitHelp =
    "Exit codes: 0 ok, 2 usage, 3 parameter out of range, 4 file I/O, "
    "5 malformed input data, 6 unsupported regime or insufficient data.";

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Ordered field/value pairs. CSV: `field,value` rows; JSON: one object with
/// the same fields.
class Table {
 public:
  void add(std::string key, double v) { rows_.emplace_back(std::move(key), cpmm::format_number(v), true); }
  void add(std::string key, std::string v) { rows_.emplace_back(std::move(key), std::move(v), false); }
  void add(std::string key, const char* v) { add(std::move(key), std::string(v)); }
  void add(std::string key, std::string_view v) { add(std::move(key), std::string(v)); }
  void add(std::string key, bool v) { rows_.emplace_back(std::move(key), v ? "true" : "false", true); }
  void add(std::string key, std::size_t v) { rows_.emplace_back(std::move(key), std::to_string(v), true); }
  void add(std::string key, const std::optional<double>& v) {
    if (v) add(std::move(key), *v);
  }

  void print(std::ostream& out, cpmm::OutputFormat format) const {
    if (format == cpmm::OutputFormat::csv) {
      out << "field,value\n";
      for (const auto& [k, v, raw] : rows_) out << k << ',' << v << '\n';
      return;
    }
    out << '{';
    bool first = true;
    for (const auto& [k, v, raw] : rows_) {
      out << (first ? "" : ",") << nlohmann::json(k).dump() << ':';
      const bool literal = raw && v != "nan" && v != "inf" && v != "-inf";
      out << (literal ? v : nlohmann::json(v).dump());
      first = false;
    }
    out << "}\n";
  }

 private:
  std::vector<std::tuple<std::string, std::string, bool>> rows_;
};

struct MarketFlags {
  double r = 0.0;
  double sigma = 0.0;
  double dt_seconds = 2.0;
  double gamma_bps = 5.0;

  void attach(CLI::App* app, bool with_sigma, bool sigma_required = true) {
    app->add_option("--r", r, "risk-free rate, annualized decimal (0.05 = 5%)")->required();
    app->add_option("--dt-seconds", dt_seconds, "block time in seconds (365-day year)")
        ->required();
    app->add_option("--gamma-bps", gamma_bps, "swap fee in basis points")->required();
    if (with_sigma) {
      auto* opt = app->add_option("--sigma", sigma, "volatility, annualized decimal");
      if (sigma_required) opt->required();
    }
  }

  cpmm::MarketParams params(double vol) const {
    return {r, vol, cpmm::seconds_to_years(dt_seconds), cpmm::fee_from_bps(gamma_bps)};
  }
  cpmm::MarketParams params() const { return params(sigma); }
  // σ is not read by the implied-volatility and calibration routines; 1 is a
  // placeholder that satisfies the parameter invariants.
  cpmm::MarketParams rate_params() const { return params(1.0); }
};

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  return in;
}

void add_implied(Table& t, const cpmm::ImpliedVolOutcome& iv, const std::string& prefix) {
  t.add(prefix + "case", cpmm::to_string(iv.kind));
  for (std::size_t i = 0; i < iv.roots.size(); ++i) {
    t.add(prefix + "root_" + std::to_string(i + 1), iv.roots[i]);
  }
  t.add(prefix + "preferred_root", iv.preferred_root());
  for (std::size_t i = 0; i < iv.arbitrage_intervals.size(); ++i) {
    const std::string k = prefix + "arbitrage_interval_" + std::to_string(i + 1);
    t.add(k + "_lo", iv.arbitrage_intervals[i].first);
    t.add(k + "_hi", iv.arbitrage_intervals[i].second);
  }
  t.add(prefix + "sigma_bar", iv.sigma_bar);
  t.add(prefix + "gamma_star_at_sigma_bar", iv.gamma_star_at_sigma_bar);
  t.add(prefix + "dt_bar_years", iv.dt_bar);
  if (iv.dt_bar) t.add(prefix + "dt_bar_hours", cpmm::years_to_hours(*iv.dt_bar));
}

int run(int argc, char** argv) {
  CLI::App app{"Risk-neutral pricing, hedging and calibration of CPMM liquidity tokens.\n" +
               std::string(kExitHelp)};
  app.require_subcommand(1);
  app.footer(kExitHelp);

  std::string format_name = "csv";
  app.add_option("--format", format_name, "output format")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();

  MarketFlags mf;
  double price = 1.0;
  std::function<void(std::ostream&, cpmm::OutputFormat)> action;

  auto* price_cmd = app.add_subcommand("price", "token value at a block time");
  mf.attach(price_cmd, true);
  price_cmd->add_option("--p", price, "pool price, numeraire per risky unit")->capture_default_str();
  price_cmd->callback([&] {
    action = [&](std::ostream& out, cpmm::OutputFormat f) {
      const cpmm::MarketParams p = mf.params();
      const cpmm::TokenValuation v = cpmm::token_value(price, p);
      Table t;
      t.add("value", v.value);
      t.add("deposit_optimal", v.deposit_optimal);
      t.add("gamma_star", v.gamma_star);
      t.add("gamma_hat", p.gamma_hat());
      t.add("repricing_ratio", v.repricing_ratio);
      t.add("mint_price", cpmm::PoolState(price, 1.0).value());
      t.print(out, f);
    };
  });

  auto* greeks_cmd = app.add_subcommand("greeks", "analytic Greeks with a finite-difference check");
  mf.attach(greeks_cmd, true);
  greeks_cmd->add_option("--p", price, "pool price")->capture_default_str();
  greeks_cmd->callback([&] {
    action = [&](std::ostream& out, cpmm::OutputFormat f) {
      const cpmm::MarketParams p = mf.params();
      const cpmm::Greeks g = cpmm::greeks(price, p);
      const cpmm::Greeks fd = cpmm::finite_difference_greeks(price, p);
      Table t;
      t.add("delta", g.delta);
      t.add("gamma", g.gamma);
      t.add("vega", g.vega);
      t.add("fd_delta", fd.delta);
      t.add("fd_gamma", fd.gamma);
      t.add("fd_vega", fd.vega);
      t.add("market_delta", cpmm::market_delta(price));
      t.print(out, f);
    };
  });

  auto* iv_cmd = app.add_subcommand("implied-vol", "volatilities at which the token is worth 2*sqrt(P)");
  mf.attach(iv_cmd, false);
  iv_cmd->callback([&] {
    action = [&](std::ostream& out, cpmm::OutputFormat f) {
      const cpmm::MarketParams p = mf.rate_params();
      Table t;
      t.add("gamma_hat", p.gamma_hat());
      add_implied(t, cpmm::implied_vols(p), "");
      if (p.r() > 0.0) {
        const double crit = cpmm::critical_fee_ratio(p.r(), p.dt());
        t.add("critical_fee_ratio", crit);
        t.add("critical_fee_bps", cpmm::fee_to_bps(cpmm::fee_from_ratio(crit)));
      }
      t.print(out, f);
    };
  });

  std::string input;
  std::string input_format = "csv";
  auto* cal_cmd = app.add_subcommand("calibrate", "calibrate sigma from observed fees in a swap file");
  mf.attach(cal_cmd, false);
  cal_cmd->add_option("--input", input, "swap file (block,timestamp,price[,fee])")->required();
  cal_cmd->add_option("--input-format", input_format, "swap file format")
      ->check(CLI::IsMember({"csv", "jsonl"}))
      ->capture_default_str();
  cal_cmd->callback([&] {
    action = [&](std::ostream& out, cpmm::OutputFormat f) {
      const cpmm::MarketParams p = mf.rate_params();
      std::ifstream in = open_input(input);
      const auto records = cpmm::parse_swaps(
          in, input_format == "csv" ? cpmm::SwapFormat::csv : cpmm::SwapFormat::jsonl);
      const cpmm::BlockSeries series =
          cpmm::to_block_series(records, cpmm::record_range(records), p);
      const auto obs = cpmm::observed_fees(series);
      const double c = cpmm::c_statistic(obs, p);
      const cpmm::CalibrationOutcome o = cpmm::calibrate_sigma(c, p);
      Table t;
      t.add("blocks", series.size());
      t.add("observations", obs.size());
      t.add("c_statistic", c);
      t.add("branch", cpmm::to_string(o.branch));
      t.add("case", cpmm::to_string(o.kind));
      for (std::size_t i = 0; i < o.roots.size(); ++i) {
        const std::string n = std::to_string(i + 1);
        t.add("sigma_m_" + n, o.roots[i]);
        t.add("bracket_" + n + "_lo", o.brackets[i].first);
        t.add("bracket_" + n + "_hi", o.brackets[i].second);
        t.add("repricing_factor_" + n, o.repricing_ratios[i]);
      }
      t.add("sigma_bar_star", o.sigma_bar_star);
      t.add("sigma_bar_star_formula", o.sigma_bar_star_formula);
      t.add("gamma_bar_star", o.gamma_bar_star);
      t.add("sigma_hat", o.sigma_hat);
      t.add("gamma_bar_star_zero", o.gamma_bar_star_zero);
      add_implied(t, o.implied, "implied_");
      for (std::size_t i = 0; i < o.implied.roots.size(); ++i) {
        t.add("g_c_at_implied_root_" + std::to_string(i + 1), cpmm::g_c(o.implied.roots[i], c, p));
      }
      t.print(out, f);
    };
  });

  std::size_t blocks = 1000;
  std::uint64_t seed = 1;
  std::string output;
  auto* sim_cmd = app.add_subcommand("simulate", "write a simulated block path (block,price,fee)");
  mf.attach(sim_cmd, true);
  sim_cmd->add_option("--p0", price, "initial price")->capture_default_str();
  sim_cmd->add_option("--blocks", blocks, "number of blocks")->capture_default_str();
  sim_cmd->add_option("--seed", seed, "RNG seed")->capture_default_str();
  sim_cmd->add_option("--output", output, "output file (default stdout)");
  sim_cmd->callback([&] {
    action = [&](std::ostream& out, cpmm::OutputFormat f) {
      cpmm::write_path(out, cpmm::simulate_path(price, blocks, mf.params(), seed), f);
    };
  });

  std::string mode_name = "risk_neutral";
  std::string ledger_output;
  auto* bt_cmd = app.add_subcommand(
      "backtest",
      "delta-hedge backtest; prints the drift for both pricing modes. Without --sigma the "
      "volatility is calibrated from the input fees.");
  mf.attach(bt_cmd, true, false);
  bt_cmd->add_option("--input", input, "path file (block,price,fee); simulated when absent");
  bt_cmd->add_option("--p0", price, "initial price when simulating")->capture_default_str();
  bt_cmd->add_option("--blocks", blocks, "blocks when simulating")->capture_default_str();
  bt_cmd->add_option("--seed", seed, "RNG seed when simulating")->capture_default_str();
  bt_cmd->add_option("--mode", mode_name, "pricing mode of the written ledger")
      ->check(CLI::IsMember({"market", "risk_neutral"}))
      ->capture_default_str();
  bt_cmd->add_option("--ledger-output", ledger_output, "write the ledger to this file");
  bt_cmd->callback([&] {
    action = [&](std::ostream& out, cpmm::OutputFormat f) {
      std::vector<double> prices;
      std::vector<double> fees;
      std::optional<double> vol;
      std::string vol_source = "given";
      if (bt_cmd->count("--sigma") > 0) vol = mf.sigma;
      if (!input.empty()) {
        std::ifstream in = open_input(input);
        cpmm::PriceFeeSeries s = cpmm::read_price_fee_csv(in);
        prices = std::move(s.prices);
        fees = std::move(s.fees);
        if (!vol) {
          std::vector<cpmm::FeeObservation> obs;
          for (std::size_t i = 1; i < prices.size(); ++i) obs.push_back({prices[i - 1], fees[i]});
          const cpmm::MarketParams p = mf.rate_params();
          const cpmm::CalibrationOutcome o = cpmm::calibrate_sigma(cpmm::c_statistic(obs, p), p);
          if (o.roots.empty()) throw cpmm::UnsupportedRegime("no calibrated volatility for input");
          vol = o.roots.back();
          vol_source = "calibrated";
        }
      } else {
        if (!vol) throw CLI::ValidationError("--sigma", "required when simulating");
        const cpmm::SimulatedPath path = cpmm::simulate_path(price, blocks, mf.params(*vol), seed);
        prices = path.prices;
        fees = path.fees;
      }
      const cpmm::MarketParams p = mf.params(*vol);
      const cpmm::HedgeLedger market =
          cpmm::backtest_hedge(prices, fees, p, cpmm::PricingMode::market);
      const cpmm::HedgeLedger neutral =
          cpmm::backtest_hedge(prices, fees, p, cpmm::PricingMode::risk_neutral);
      const cpmm::DriftEstimate dm = cpmm::drift_statistic(market);
      const cpmm::DriftEstimate dn = cpmm::drift_statistic(neutral);
      if (!ledger_output.empty()) {
        std::ofstream lf(ledger_output, std::ios::binary);
        if (!lf) throw IoError("cannot open " + ledger_output);
        cpmm::write_ledger(lf, mode_name == "market" ? market : neutral, f);
        if (!lf) throw IoError("failed writing " + ledger_output);
      }
      Table t;
      t.add("blocks", prices.size());
      t.add("sigma", p.sigma());
      t.add("sigma_source", vol_source);
      t.add("repricing_ratio", neutral.repricing_ratio);
      t.add("market_slope", dm.slope);
      t.add("market_t", dm.t_stat);
      t.add("risk_neutral_slope", dn.slope);
      t.add("risk_neutral_t", dn.t_stat);
      t.print(out, f);
    };
  });

  cpmm::McConfig mc;
  auto* mc_cmd = app.add_subcommand("mc-check", "Monte Carlo token value against the closed form");
  mf.attach(mc_cmd, true);
  mc_cmd->add_option("--p", price, "pool price")->capture_default_str();
  mc_cmd->add_option("--paths", mc.n_paths, "Monte Carlo paths")->capture_default_str();
  mc_cmd->add_option("--seed", mc.seed, "RNG seed")->capture_default_str();
  mc_cmd->add_option("--tail-epsilon", mc.tail_epsilon, "geometric tail bound q^H")
      ->capture_default_str();
  mc_cmd->add_option("--max-horizon", mc.max_horizon, "cap on simulated blocks per path")
      ->capture_default_str();
  mc_cmd->callback([&] {
    action = [&](std::ostream& out, cpmm::OutputFormat f) {
      const cpmm::McCheck c = cpmm::mc_check(price, mf.params(), mc);
      Table t;
      t.add("estimate", c.mc.estimate);
      t.add("standard_error", c.mc.standard_error);
      t.add("tail", c.mc.tail);
      t.add("horizon", c.mc.horizon);
      t.add("paths", c.mc.n_paths);
      t.add("closed_form", c.closed_form);
      t.add("z_score", c.z_score);
      t.print(out, f);
    };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  const cpmm::OutputFormat format =
      format_name == "json" ? cpmm::OutputFormat::json : cpmm::OutputFormat::csv;
  try {
    if (!output.empty()) {
      std::ofstream file(output, std::ios::binary);
      if (!file) throw IoError("cannot open " + output);
      action(file, format);
      if (!file) throw IoError("failed writing " + output);
    } else {
      action(std::cout, format);
    }
  } catch (const CLI::ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kIo;
  } catch (const cpmm::ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kBadInput;
  } catch (const cpmm::InputError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kBadInput;
  } catch (const cpmm::DomainError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kDomain;
  } catch (const cpmm::UnsupportedRegime& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kRegime;
  } catch (const cpmm::InsufficientData& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kRegime;
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
