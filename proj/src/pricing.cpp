#include "cpmm/pricing.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "cpmm/error.hpp"

namespace cpmm {

namespace {

void require_price(double p) {
  if (!(std::isfinite(p) && p > 0.0)) throw DomainError("price must be positive");
}

void require_regime(const MarketParams& params, double gs, const char* op) {
  if (!(params.gamma_hat() >= gs)) {
    throw UnsupportedRegime(std::string(op) + ": requires fee ratio >= gamma_star");
  }
}

}  // namespace

FeeTerms fee_terms(double sigma, double r, double dt) {
  if (!(sigma > 0.0) || !std::isfinite(sigma)) throw DomainError("volatility must be positive");
  const double decay = -std::expm1(-0.5 * (r + 0.25 * sigma * sigma) * dt);
  const double root_dt = std::sqrt(dt);
  const double d_plus = (r + 0.5 * sigma * sigma) * root_dt / sigma;
  const double d_minus = (r - 0.5 * sigma * sigma) * root_dt / sigma;
  // Φ(d₊) − e^{−rΔt}Φ(d₋) = [Φ(d₊) − Φ(d₋)] − expm1(−rΔt)·Φ(d₋)
  const double spread = norm_cdf_diff(d_plus, d_minus) - std::expm1(-r * dt) * norm_cdf(d_minus);
  return {decay, spread};
}

double gamma_star(double sigma, double r, double dt) {
  const FeeTerms t = fee_terms(sigma, r, dt);
  const double gap = t.spread - t.decay;
  if (!(gap > 0.0)) return std::numeric_limits<double>::infinity();
  return 2.0 * t.decay / gap;
}

TokenValuation token_value(double price, const MarketParams& params) {
  require_price(price);
  const double gs = gamma_star(params);
  const double ratio = params.gamma_hat() / gs;
  const bool deposit = params.gamma_hat() >= gs;
  const double base = 2.0 * std::sqrt(price);
  return {deposit ? base * ratio : base, deposit, gs, ratio};
}

double block_fee(double prev_price, double next_price) {
  require_price(prev_price);
  require_price(next_price);
  const double s0 = std::sqrt(prev_price);
  const double s1 = std::sqrt(next_price);
  if (s1 > s0) return s1 - s0;
  // P₁(1/√P₁ − 1/√P₀) = √P₁(√P₀ − √P₁)/√P₀
  return s1 * (s0 - s1) / s0;
}

double expected_block_fee(double price, const MarketParams& params) {
  require_price(price);
  const FeeTerms t = fee_terms(params);
  return std::sqrt(price) * (t.spread - t.decay);
}

double interblock_value(double current_price, double block_open_price, double tau,
                        const MarketParams& params) {
  require_price(current_price);
  require_price(block_open_price);
  if (!(tau > 0.0 && tau <= params.dt())) throw DomainError("tau must lie in (0, dt]");
  const double gs = gamma_star(params);
  require_regime(params, gs, "interblock_value");

  const double gh = params.gamma_hat();
  const double r = params.r();
  const double s = params.sigma();
  const double vol = s * std::sqrt(tau);
  const double log_m = std::log(current_price / block_open_price);
  const double d1 = (log_m + (r + 0.5 * s * s) * tau) / vol;
  const double d2 = (log_m + (r - 0.5 * s * s) * tau) / vol;
  const double root_open = std::sqrt(block_open_price);

  const double continuation =
      (2.0 / gs + 1.0) * gh * std::exp(-0.5 * (r + 0.25 * s * s) * tau) * std::sqrt(current_price);
  const double down_fee = gh * current_price / root_open * norm_cdf(-d1);
  const double up_fee = gh * std::exp(-r * tau) * root_open * norm_cdf(d2);
  return continuation - down_fee - up_fee;
}

Greeks greeks(double price, const MarketParams& params) {
  require_price(price);
  const double gs = gamma_star(params);
  require_regime(params, gs, "greeks");

  const double gh = params.gamma_hat();
  const double root_p = std::sqrt(price);
  const double delta = gh / (gs * root_p);
  const double gamma = -gh / (2.0 * gs * price * root_p);

  const double s = params.sigma();
  const double dt = params.dt();
  const double r = params.r();
  const FeeTerms t = fee_terms(params);
  const double survive = std::exp(-0.5 * (r + 0.25 * s * s) * dt);
  const double density = std::sqrt(dt / (2.0 * std::numbers::pi)) * std::exp(-r * r * dt / (2.0 * s * s));
  const double vega =
      gh * root_p * survive / t.decay * (density - 0.25 * s * dt * t.spread / t.decay);
  return {delta, gamma, vega};
}

Greeks finite_difference_greeks(double price, const MarketParams& params) {
  require_price(price);
  auto value_at = [&](double p, double s) { return token_value(p, params.with_sigma(s)).value; };
  const double s = params.sigma();
  const double hp = 1e-6 * price;
  const double hg = 1e-4 * price;
  const double hs = 1e-6 * s;
  const double v0 = value_at(price, s);
  return {
      (value_at(price + hp, s) - value_at(price - hp, s)) / (2.0 * hp),
      (value_at(price + hg, s) - 2.0 * v0 + value_at(price - hg, s)) / (hg * hg),
      (value_at(price, s + hs) - value_at(price, s - hs)) / (2.0 * hs),
  };
}

double market_delta(double price) {
  require_price(price);
  return 1.0 / std::sqrt(price);
}

}  // namespace cpmm
