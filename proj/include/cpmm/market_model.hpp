#pragma once

// Parameter types, holdings algebra, special functions and the single-block
// GBM transition shared by every other module.

#include <cmath>

namespace cpmm {

/// Seconds in the 365-day year used to annualize block times.
inline constexpr double kSecondsPerYear = 365.0 * 24.0 * 60.0 * 60.0;

inline constexpr double seconds_to_years(double seconds) { return seconds / kSecondsPerYear; }
inline constexpr double years_to_hours(double years) { return years * 365.0 * 24.0; }
inline constexpr double fee_from_bps(double bps) { return bps * 1e-4; }
inline constexpr double fee_to_bps(double gamma) { return gamma * 1e4; }
/// Inverse of fee_ratio: γ = γ̂/(1+γ̂).
inline constexpr double fee_from_ratio(double gamma_hat) { return gamma_hat / (1.0 + gamma_hat); }

/// γ̂ = γ/(1−γ): the share of each block's reserve change paid to LPs.
double fee_ratio(double gamma);

/// The model tuple (r, σ, Δt, γ) with the derived fee ratio γ̂.
///
/// All quantities are annualized; `dt` is in years. Construction validates
/// r ≥ 0, σ > 0, Δt > 0 and 0 < γ < 1 and throws DomainError otherwise.
class MarketParams {
 public:
  MarketParams(double r, double sigma, double dt, double gamma);

  /// Builds the parameters from a fee ratio γ̂ > 0 instead of the raw fee.
  static MarketParams from_fee_ratio(double r, double sigma, double dt, double gamma_hat);

  double r() const noexcept { return r_; }
  double sigma() const noexcept { return sigma_; }
  double dt() const noexcept { return dt_; }
  double gamma() const noexcept { return gamma_; }
  double gamma_hat() const noexcept { return gamma_hat_; }

  MarketParams with_sigma(double sigma) const { return {r_, sigma, dt_, gamma_}; }
  MarketParams with_gamma(double gamma) const { return {r_, sigma_, dt_, gamma}; }
  MarketParams with_fee_ratio(double gamma_hat) const {
    return from_fee_ratio(r_, sigma_, dt_, gamma_hat);
  }
  MarketParams with_r(double r) const { return {r, sigma_, dt_, gamma_}; }

  friend bool operator==(const MarketParams&, const MarketParams&) = default;

 private:
  double r_;
  double sigma_;
  double dt_;
  double gamma_;
  double gamma_hat_;
};

struct Holdings {
  double risky;      // x
  double numeraire;  // y
};

/// Pool price and outstanding liquidity tokens; x = L/√P, y = L√P.
class PoolState {
 public:
  PoolState(double price, double liquidity);

  static PoolState from_holdings(const Holdings& h);

  double price() const noexcept { return price_; }
  double liquidity() const noexcept { return liquidity_; }
  Holdings holdings() const noexcept;
  /// P·x + y = 2L√P.
  double value() const noexcept { return 2.0 * liquidity_ * std::sqrt(price_); }

 private:
  double price_;
  double liquidity_;
};

Holdings holdings_from_price(double price, double liquidity);

/// Standard normal CDF Φ.
double norm_cdf(double x);

/// Standard normal density.
double norm_pdf(double x);

/// Φ(a) − Φ(b) without the cancellation of subtracting two CDF values.
double norm_cdf_diff(double a, double b);

enum class LambertBranch { principal, minus_one };

/// Solves w·e^w = x on the requested real branch by Halley iteration.
/// Domain: x ≥ −1/e (principal), −1/e ≤ x < 0 (minus_one).
double lambert_w(LambertBranch branch, double x);

/// One block of risk-neutral GBM: P·exp((r−σ²/2)Δt + σ√Δt·z).
double gbm_step(double price, const MarketParams& params, double z);

}  // namespace cpmm
