#include "cpmm/implied_vol.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "cpmm/error.hpp"
#include "cpmm/pricing.hpp"
#include "cpmm/solve.hpp"

namespace cpmm {

namespace {

constexpr double kRootRelTol = 1e-12;
constexpr double kTangencyRelTol = 1e-12;

double g_at(double sigma, double r, double dt, double gh) {
  const FeeTerms t = fee_terms(sigma, r, dt);
  return (2.0 + gh) * t.decay - gh * t.spread;
}

double dt_bar_raw(double r, double gh) {
  return std::sqrt(8.0 / std::numbers::pi) * gh / ((2.0 + gh) * r) * std::exp(-0.5);
}

// Argument of the Lambert equation for the stationary points of G; clamped
// at the branch point when Δt sits on Δt̄ up to rounding.
double stationary_arg(double r, double dt, double gh) {
  const double scaled = (2.0 + gh) * r * dt / (2.0 * gh);
  return std::max(-0.5 * std::numbers::pi * scaled * scaled, -std::exp(-1.0));
}

// Minimizer of G (W₀ branch).
double sigma_bar_raw(double r, double dt, double gh) {
  if (r == 0.0) return gh / (2.0 + gh) * std::sqrt(8.0 / (std::numbers::pi * dt));
  return r * std::sqrt(dt / -lambert_w(LambertBranch::principal, stationary_arg(r, dt, gh)));
}

// Local maximizer of G below σ̄ (W₋₁ branch); r > 0 only.
double sigma_a_raw(double r, double dt, double gh) {
  return r * std::sqrt(dt / -lambert_w(LambertBranch::minus_one, stationary_arg(r, dt, gh)));
}

// G(0⁺) = (2+γ̂)(1 − e^{−rΔt/2}) − γ̂(1 − e^{−rΔt}).
double g_at_zero(double r, double dt, double gh) {
  return -(2.0 + gh) * std::expm1(-0.5 * r * dt) + gh * std::expm1(-r * dt);
}

// Open intervals where G < 0, from G(0⁺)'s sign and the ascending roots;
// double roots (tangencies) do not flip the sign.
std::vector<std::pair<double, double>> negative_intervals(bool negative_at_zero,
                                                          const std::vector<double>& roots,
                                                          const std::vector<bool>& double_root) {
  std::vector<std::pair<double, double>> out;
  bool negative = negative_at_zero;
  double start = 0.0;
  for (std::size_t k = 0; k < roots.size(); ++k) {
    if (double_root[k]) continue;
    if (negative) {
      out.emplace_back(start, roots[k]);
    } else {
      start = roots[k];
    }
    negative = !negative;
  }
  return out;
}

}  // namespace

std::string_view to_string(RootCase c) {
  switch (c) {
    case RootCase::no_root:
      return "NoRoot";
    case RootCase::unique:
      return "Unique";
    case RootCase::two_roots:
      return "TwoRoots";
    case RootCase::three_roots:
      return "ThreeRoots";
  }
  return "?";
}

std::optional<double> ImpliedVolOutcome::preferred_root() const {
  if (roots.empty()) return std::nullopt;
  return roots.back();
}

double g_function(double sigma, const MarketParams& params) {
  return g_at(sigma, params.r(), params.dt(), params.gamma_hat());
}

double g_prime(double sigma, const MarketParams& params) {
  if (!(sigma > 0.0)) throw DomainError("volatility must be positive");
  const double r = params.r();
  const double dt = params.dt();
  const double gh = params.gamma_hat();
  const double survive = std::exp(-0.5 * (r + 0.25 * sigma * sigma) * dt);
  const double density =
      std::sqrt(dt / (2.0 * std::numbers::pi)) * std::exp(-r * r * dt / (2.0 * sigma * sigma));
  return survive * ((2.0 + gh) * 0.25 * sigma * dt - gh * density);
}

double dt_bar(const MarketParams& params) {
  if (params.r() == 0.0) throw DomainError("dt_bar is only defined for r > 0");
  return dt_bar_raw(params.r(), params.gamma_hat());
}

double sigma_bar(const MarketParams& params) {
  if (params.r() > 0.0 && params.dt() > dt_bar(params)) {
    throw DomainError("no critical volatility: dt exceeds dt_bar");
  }
  return sigma_bar_raw(params.r(), params.dt(), params.gamma_hat());
}

ImpliedVolOutcome implied_vols(const MarketParams& params) {
  const double r = params.r();
  const double dt = params.dt();
  const double gh = params.gamma_hat();
  auto g = [&](double s) { return g_at(s, r, dt, gh); };
  auto negative = [&](double s) { return g(s) < 0.0; };
  auto positive = [&](double s) { return g(s) > 0.0; };

  ImpliedVolOutcome out;
  if (r == 0.0) {
    // G(0⁺) = 0 with G < 0 just above 0; one crossing above σ̄.
    const double sb = sigma_bar_raw(r, dt, gh);
    out.sigma_bar = sb;
    out.gamma_star_at_sigma_bar = gamma_star(sb, r, dt);
    const double root = find_root(g, sb, expand_up(positive, 2.0 * sb), kRootRelTol).root;
    out.kind = RootCase::unique;
    out.roots.push_back(root);
    out.arbitrage_intervals.emplace_back(0.0, root);
    return out;
  }

  const double g0 = g_at_zero(r, dt, gh);
  out.dt_bar = dt_bar_raw(r, gh);
  if (dt > *out.dt_bar) {
    // No stationary point: G increases from G(0⁺) to 2.
    if (g0 < 0.0) {
      const double lo = shrink_down(negative, 1.0);
      const double root = find_root(g, lo, expand_up(positive, lo), kRootRelTol).root;
      out.kind = RootCase::unique;
      out.roots.push_back(root);
      out.arbitrage_intervals.emplace_back(0.0, root);
    }
    return out;
  }

  const double sb = sigma_bar_raw(r, dt, gh);
  const double sa = sigma_a_raw(r, dt, gh);
  out.sigma_bar = sb;
  out.gamma_star_at_sigma_bar = gamma_star(sb, r, dt);

  // Sign of the minimum G(σ̄), with near-tangency snapped to zero.
  const double excess = gh - *out.gamma_star_at_sigma_bar;
  int min_sign = excess > 0.0 ? -1 : 1;
  if (std::abs(excess) <= kTangencyRelTol * gh || (excess > 0.0 && !(g(sb) < 0.0))) min_sign = 0;
  const double g_max = g(sa);

  std::vector<double> roots;
  std::vector<bool> double_root;
  // (0, σₐ]: increasing
  if (g0 < 0.0 && g_max >= 0.0) {
    roots.push_back(g_max == 0.0 ? sa
                                 : find_root(g, shrink_down(negative, 0.5 * sa), sa, kRootRelTol).root);
    double_root.push_back(g_max == 0.0);
  }
  // [σₐ, σ̄]: decreasing
  if (min_sign == 0) {
    roots.push_back(sb);
    double_root.push_back(true);
  } else if (min_sign < 0 && g_max > 0.0) {
    roots.push_back(find_root(g, sa, sb, kRootRelTol).root);
    double_root.push_back(false);
  }
  // [σ̄, ∞): increasing
  if (min_sign < 0) {
    roots.push_back(find_root(g, sb, expand_up(positive, 2.0 * sb), kRootRelTol).root);
    double_root.push_back(false);
  }

  out.kind = static_cast<RootCase>(roots.size());
  out.arbitrage_intervals = negative_intervals(g0 < 0.0, roots, double_root);
  out.roots = std::move(roots);
  return out;
}

bool arbitrage_region(double sigma, const MarketParams& params) {
  if (!(sigma > 0.0)) throw DomainError("volatility must be positive");
  const ImpliedVolOutcome iv = implied_vols(params);
  for (const auto& [lo, hi] : iv.arbitrage_intervals) {
    if (sigma > lo && sigma < hi) return true;
  }
  return false;
}

double gamma_star_low_vol_limit(double r, double dt) {
  if (!(r >= 0.0)) throw DomainError("rate must be nonnegative");
  if (!(dt > 0.0)) throw DomainError("block time must be positive");
  if (r == 0.0) return 0.0;
  const double decay = -std::expm1(-0.5 * r * dt);
  const double spread = -std::expm1(-r * dt);
  return 2.0 * decay / (spread - decay);
}

double critical_fee_ratio(double r, double dt) {
  if (!(r > 0.0)) throw DomainError("critical fee is only defined for r > 0");
  if (!(dt > 0.0)) throw DomainError("block time must be positive");
  // smallest γ̂ with Δt ≤ Δt̄(γ̂): γ̂/(2+γ̂) = rΔt / (√(8/π)e^{−1/2})
  const double c = r * dt / (std::sqrt(8.0 / std::numbers::pi) * std::exp(-0.5));
  if (c >= 1.0) throw DomainError("no fee admits an implied volatility at this block time");
  const double gh_min = 2.0 * c / (1.0 - c) * (1.0 + 1e-12);

  auto excess = [&](double gh) { return gh - gamma_star(sigma_bar_raw(r, dt, gh), r, dt); };
  const double hi = expand_up([&](double gh) { return excess(gh) > 0.0; }, 2.0 * gh_min);
  if (excess(gh_min) >= 0.0) return gh_min;
  return find_root(excess, gh_min, hi, 1e-15).root;
}

}  // namespace cpmm
