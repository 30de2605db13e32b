#pragma once

// Volatility calibration from observed LP fees.
//
// The statistic C = e^{−rΔt}/(Nγ̂)·Σ f̄ₙ/√Pₙ₋₁ matches the model's expected
// per-block fee at the calibrated σ^M, i.e. G_C(σ^M) = 0 with
//
//   G_C(σ) = C + decay(σ) − spread(σ)
//
// restricted to volatilities where depositing is optimal (γ̂ ≥ γ̂*(σ^M)).

#include <optional>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "cpmm/implied_vol.hpp"
#include "cpmm/market_model.hpp"

namespace cpmm {

struct FeeObservation {
  double prev_price;  // block-open price
  double fee_paid;    // LP receipt γ̂·F over the block, in numéraire
};

/// Which branch of the case partition produced a CalibrationOutcome.
enum class CalibrationBranch {
  zero_rate_low_fee,        // r = 0, γ ≤ γ̄*⁰
  zero_rate_high_fee,       // r = 0, γ > γ̄*⁰
  block_time_too_long,      // r > 0, Δt > Δt̄
  fee_below_tangency,       // r > 0, γ̂ < γ̂*(σ̄)
  fee_at_tangency,          // r > 0, γ̂ = γ̂*(σ̄)
  monotone_between_roots,   // r > 0, γ̂ > γ̂*(σ̄), γ ≤ γ̄*
  minimum_between_roots,    // r > 0, γ̂ > γ̂*(σ̄), γ > γ̄*
  fee_above_low_vol_limit,  // r > 0, γ̂ > γ̂*(0⁺): depositing optimal down to σ → 0
};

std::string_view to_string(CalibrationBranch b);

struct CalibrationOutcome {
  double c_statistic = 0.0;
  CalibrationBranch branch = CalibrationBranch::fee_below_tangency;
  RootCase kind = RootCase::no_root;
  std::vector<double> roots;                          // ascending
  std::vector<std::pair<double, double>> brackets;    // interval assigned to each root
  std::vector<double> repricing_ratios;               // γ̂/γ̂*(σ^M) per root
  ImpliedVolOutcome implied;                          // implied volatilities used as brackets
  // r > 0 thresholds
  std::optional<double> sigma_bar_star;
  std::optional<double> sigma_bar_star_formula;  // W₀ closed form, before root refinement
  std::optional<double> gamma_bar_star;
  // r = 0 thresholds
  std::optional<double> sigma_hat;
  std::optional<double> gamma_bar_star_zero;
};

/// C over the observations. Summed in fixed 4096-element chunks with
/// compensated addition, so the result is identical for every thread count.
/// Throws InsufficientData on an empty list.
double c_statistic(std::span<const FeeObservation> observations, const MarketParams& params);

double g_c(double sigma, double c, const MarketParams& params);

/// dG_C/dσ = e^{−½(r+σ²/4)Δt}[σΔt/4 − √(Δt/2π)e^{−r²Δt/(2σ²)}]; independent of C.
double g_c_prime(double sigma, const MarketParams& params);

struct CriticalVol {
  double formula;  // W₀ closed form (r > 0) or √(8/(πΔt)) (r = 0)
  double refined;  // root of g_c_prime bracketed around `formula`; authoritative
};

/// Minimizer of G_C: σ̄* for r > 0, σ̂ for r = 0.
CriticalVol sigma_bar_star(const MarketParams& params);

/// γ̄* = 2·decay/(decay + spread) at σ̄*: the raw fee whose γ̂ equals γ̂*(σ̄*).
double gamma_bar_star(const MarketParams& params);

/// γ̄*⁰ = 2(1 − e^{−1/π}) / (2Φ(√(2/π)) − e^{−1/π}), the r = 0 limit of γ̄*.
double gamma_bar_star_zero();

/// Solves the repricing equation following the full case partition.
/// Requires c ≥ 0.
CalibrationOutcome calibrate_sigma(double c, const MarketParams& params);

/// γ̂/γ̂*(σ^M), the factor by which 2√P under-prices the token. Throws
/// UnsupportedRegime when the ratio is below 1 by more than 1e-9.
double repricing_factor(double sigma_m, const MarketParams& params);

}  // namespace cpmm
