#pragma once

// Closed-form risk-neutral valuation of a CPMM liquidity token.
//
// Under GBM with one price-aligning trade per block, holding the token forever
// is optimal whenever depositing is, and the fee stream sums to a geometric
// series. Everything reduces to two scalars of (r, σ, Δt):
//
//   decay  = 1 − exp(−½(r + σ²/4)Δt)
//   spread = Φ(d₊) − e^{−rΔt}Φ(d₋),   d± = (r ± σ²/2)√Δt / σ
//
// with γ̂* = 2·decay / (spread − decay) and V₀ = 2γ̂√P/γ̂* when γ̂ ≥ γ̂*.

#include "cpmm/market_model.hpp"

namespace cpmm {

struct FeeTerms {
  double decay;
  double spread;
};

FeeTerms fee_terms(double sigma, double r, double dt);
inline FeeTerms fee_terms(const MarketParams& p) { return fee_terms(p.sigma(), p.r(), p.dt()); }

/// Threshold fee ratio γ̂*(σ); depositing is optimal iff γ̂ ≥ γ̂*.
/// Returns +inf if the expected fee underflows to zero.
double gamma_star(double sigma, double r, double dt);
inline double gamma_star(const MarketParams& p) { return gamma_star(p.sigma(), p.r(), p.dt()); }

struct TokenValuation {
  double value;
  bool deposit_optimal;  // γ̂ ≥ γ̂*, ties included
  double gamma_star;
  double repricing_ratio;  // γ̂/γ̂*
};

/// V₀(P) = 2√P·max(1, γ̂/γ̂*) per liquidity token.
TokenValuation token_value(double price, const MarketParams& params);

/// F(P₀, P₁) = P₁(1/√P₁ − 1/√P₀)⁺ + (√P₁ − √P₀)⁺; the LP receives γ̂·F.
double block_fee(double prev_price, double next_price);

/// F̄₀ = e^{−rΔt}·E[F(P₀, P_Δt)] = 2·decay·√P₀/γ̂*.
double expected_block_fee(double price, const MarketParams& params);

/// Value at an inter-block time with `tau` ∈ (0, Δt] left until the next
/// block, given the price at the last block. Requires γ̂ ≥ γ̂*.
double interblock_value(double current_price, double block_open_price, double tau,
                        const MarketParams& params);

struct Greeks {
  double delta;
  double gamma;
  double vega;
};

/// Analytic block-time Greeks; requires γ̂ ≥ γ̂*.
Greeks greeks(double price, const MarketParams& params);

/// Central differences of token_value (relative steps 1e-6 in P and σ for
/// delta and vega, 1e-4 in P for gamma). Used for the CLI check column.
Greeks finite_difference_greeks(double price, const MarketParams& params);

/// Hedge ratio of the market price 2√P: d(2√P)/dP = 1/√P.
double market_delta(double price);

}  // namespace cpmm
