#pragma once

// Block-resolution GBM paths, the Monte Carlo valuation oracle and the
// self-financing delta-hedge backtester.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "cpmm/market_model.hpp"

namespace cpmm {

/// prices[0] = p0 and prices[i] = gbm_step(prices[i−1], zᵢ); fees[0] = 0 and
/// fees[i] = γ̂·F(prices[i−1], prices[i]). Both have n_blocks + 1 entries.
struct SimulatedPath {
  std::vector<double> prices;
  std::vector<double> fees;
  std::uint64_t seed = 0;
  MarketParams params;
};

SimulatedPath simulate_path(double p0, std::size_t n_blocks, const MarketParams& params,
                            std::uint64_t seed);

struct McConfig {
  std::size_t n_paths = 100000;
  double tail_epsilon = 1e-6;
  std::size_t max_horizon = 2048;
  std::uint64_t seed = 1;
};

struct McEstimate {
  double estimate;        // simulated head + analytic tail
  double standard_error;  // of the simulated head
  double tail;            // γ̂·F̄₀·qᴴ/(1 − q), q = e^{−½(r+σ²/4)Δt}
  std::size_t horizon;    // H, simulated blocks per path
  std::size_t n_paths;
};

/// Monte Carlo value of the perpetual fee stream: γ̂·Σ_{i<H} e^{−r(i+1)Δt}F(Pᵢ, Pᵢ₊₁)
/// per path plus the geometric tail beyond H. H is the smallest horizon with
/// qᴴ ≤ tail_epsilon, capped at max_horizon. Requires γ̂ ≥ γ̂*.
McEstimate mc_token_value(double p0, const MarketParams& params, const McConfig& config);

struct McCheck {
  McEstimate mc;
  double closed_form;
  double z_score;
};

McCheck mc_check(double p0, const MarketParams& params, const McConfig& config);

enum class PricingMode {
  market,        // V = 2√P, Δ = 1/√P
  risk_neutral,  // V = 2(γ̂/γ̂*)√P, Δ = γ̂/(γ̂*√P)
};

std::string_view to_string(PricingMode m);

/// One rebalancing date. The wealth change from block i−1 to i decomposes
/// exactly into token_pnl + fee + hedge_pnl + interest.
struct HedgeRecord {
  double price;
  double fee;
  double value;  // token value V(Pᵢ)
  double hedge;  // Δ(Pᵢ), held over the next block (short)
  double cash;   // money-market balance after rebalancing
  double discounted_value;  // Hᵢ = e^{−riΔt}·wealth
  double token_pnl;         // V(Pᵢ) − V(Pᵢ₋₁)
  double hedge_pnl;         // −Δᵢ₋₁(Pᵢ − Pᵢ₋₁)
  double interest;          // (e^{rΔt} − 1)·cashᵢ₋₁
};

struct HedgeLedger {
  PricingMode mode = PricingMode::market;
  double repricing_ratio = 1.0;  // 1 in market mode
  double dt = 0.0;
  double r = 0.0;
  std::vector<HedgeRecord> records;
};

/// Long one token, short Δ units of the risky asset, rebalanced every block;
/// the remainder sits in the money market. Starts with wealth H₀ = V(P₀).
/// `fees[i]` is the LP receipt paid at block i (fees[0] is ignored).
HedgeLedger backtest_hedge(std::span<const double> prices, std::span<const double> fees,
                           const MarketParams& params, PricingMode mode);

struct DriftEstimate {
  double slope;                 // per block
  std::optional<double> t_stat; // empty for a constant series
  std::size_t n;
};

/// OLS slope of a series against its index, with the naive (iid residual)
/// t-statistic.
DriftEstimate drift_statistic(std::span<const double> series);
DriftEstimate drift_statistic(const HedgeLedger& ledger);

struct PooledDrift {
  double mean_slope;
  double t_stat;  // mean / (sd / √n) across paths
  std::size_t n_paths;
};

PooledDrift pooled_drift(std::span<const DriftEstimate> per_path);

/// Simulates `n_paths` independent paths (path i seeded with split_seed(seed, i)),
/// backtests each in `mode`, and pools the per-path drift.
PooledDrift hedge_drift_experiment(double p0, std::size_t n_blocks, const MarketParams& params,
                                   PricingMode mode, std::size_t n_paths, std::uint64_t seed);

}  // namespace cpmm
