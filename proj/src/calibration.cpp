#include "cpmm/calibration.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "cpmm/error.hpp"
#include "cpmm/kernels.hpp"
#include "cpmm/pricing.hpp"
#include "cpmm/solve.hpp"

namespace cpmm {

namespace {

constexpr double kRootRelTol = 1e-13;
constexpr double kRegimeSlack = 1e-9;

struct Solver {
  double c;
  const MarketParams& params;
  CalibrationOutcome& out;

  double gc(double s) const { return g_c(s, c, params); }

  // Root of G_C on [lo, hi] assuming a sign change (or a zero endpoint).
  // `assigned` is the interval the case partition names for this root.
  void solve(double lo, double hi, std::pair<double, double> assigned) {
    const double glo = gc(lo);
    const double ghi = gc(hi);
    double root;
    if (glo == 0.0) {
      root = lo;
    } else if (ghi == 0.0) {
      root = hi;
    } else {
      root = find_root([this](double s) { return gc(s); }, lo, hi, kRootRelTol).root;
    }
    if (!out.roots.empty() && out.roots.back() == root) return;
    out.roots.push_back(root);
    out.brackets.push_back(assigned);
  }

  // Lower end for a root on (0, hi) given G_C(0⁺) = C > 0; empty when G_C
  // stays nonpositive down to the underflow limit (C = 0).
  std::optional<double> positive_below(double hi) const {
    try {
      return shrink_down([this](double s) { return gc(s) > 0.0; }, 0.5 * hi);
    } catch (const DomainError&) {
      return std::nullopt;
    }
  }

  // All roots on the closure of [lo, hi] (lo = 0 meaning σ → 0⁺), split into
  // pieces on which G_C is monotone.
  void solve_interval(double lo, double hi, const std::vector<double>& stationary) {
    std::vector<double> cuts{lo};
    for (double s : stationary) {
      if (s > lo && s < hi) cuts.push_back(s);
    }
    cuts.push_back(hi);
    for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
      const double a = cuts[k];
      const double b = cuts[k + 1];
      const double gb = gc(b);
      if (a > 0.0) {
        if (gc(a) * gb <= 0.0) solve(a, b, {a, b});
        continue;
      }
      // G_C(0⁺) = C − (spread − decay) at σ = 0
      const double r = params.r();
      const double dt = params.dt();
      const double g0 = c + std::expm1(-r * dt) - std::expm1(-0.5 * r * dt);
      if (gb == 0.0) {
        solve(b, b, {0.0, b});
      } else if (g0 != 0.0 && (g0 < 0.0) != (gb < 0.0)) {
        const bool below = g0 < 0.0;
        try {
          const double x = shrink_down([&](double s) { return (gc(s) < 0.0) == below; }, 0.5 * b);
          solve(x, b, {0.0, b});
        } catch (const DomainError&) {
          // the sign change sits below the underflow limit
        }
      }
    }
  }
};

// Stationary points of G_C for r > 0: local maximum (W₋₁) and minimum (W₀).
// Empty when Δt is too long for G_C to turn.
std::vector<double> g_c_stationary(const MarketParams& params, double refined_min) {
  const double r = params.r();
  const double dt = params.dt();
  const double arg = -0.125 * std::numbers::pi * (r * dt) * (r * dt);
  if (arg < -std::exp(-1.0)) return {};
  return {r * std::sqrt(dt / -lambert_w(LambertBranch::minus_one, arg)), refined_min};
}

void finish(CalibrationOutcome& out, const MarketParams& params) {
  std::vector<double> roots;
  std::vector<std::pair<double, double>> brackets;
  for (std::size_t i = 0; i < out.roots.size(); ++i) {
    const double gs = gamma_star(out.roots[i], params.r(), params.dt());
    if (!(params.gamma_hat() >= gs * (1.0 - kRegimeSlack))) continue;
    roots.push_back(out.roots[i]);
    brackets.push_back(out.brackets[i]);
    out.repricing_ratios.push_back(params.gamma_hat() / gs);
  }
  out.roots = std::move(roots);
  out.brackets = std::move(brackets);
  if (out.roots.size() > 3) throw Error("calibration: more roots than G_C can have");
  out.kind = static_cast<RootCase>(out.roots.size());
}

double sigma_bar_star_formula(double r, double dt) {
  if (r == 0.0) return std::sqrt(8.0 / (std::numbers::pi * dt));
  const double arg = -0.125 * std::numbers::pi * (r * dt) * (r * dt);
  return r * std::sqrt(dt / -lambert_w(LambertBranch::principal, arg));
}

}  // namespace

std::string_view to_string(CalibrationBranch b) {
  switch (b) {
    case CalibrationBranch::zero_rate_low_fee:
      return "zero_rate_low_fee";
    case CalibrationBranch::zero_rate_high_fee:
      return "zero_rate_high_fee";
    case CalibrationBranch::block_time_too_long:
      return "block_time_too_long";
    case CalibrationBranch::fee_below_tangency:
      return "fee_below_tangency";
    case CalibrationBranch::fee_at_tangency:
      return "fee_at_tangency";
    case CalibrationBranch::monotone_between_roots:
      return "monotone_between_roots";
    case CalibrationBranch::minimum_between_roots:
      return "minimum_between_roots";
    case CalibrationBranch::fee_above_low_vol_limit:
      return "fee_above_low_vol_limit";
  }
  return "?";
}

double c_statistic(std::span<const FeeObservation> observations, const MarketParams& params) {
  if (observations.empty()) throw InsufficientData("no fee observations");
  for (const FeeObservation& o : observations) {
    if (!(std::isfinite(o.prev_price) && o.prev_price > 0.0)) {
      throw DomainError("observation price must be positive");
    }
    if (!(std::isfinite(o.fee_paid) && o.fee_paid >= 0.0)) {
      throw DomainError("observation fee must be nonnegative");
    }
  }
  const double total = kernels::scaled_fee_sum(observations, kernels::Backend::openmp);
  const double n = static_cast<double>(observations.size());
  return std::exp(-params.r() * params.dt()) / (n * params.gamma_hat()) * total;
}

double g_c(double sigma, double c, const MarketParams& params) {
  const FeeTerms t = fee_terms(sigma, params.r(), params.dt());
  return c + t.decay - t.spread;
}

double g_c_prime(double sigma, const MarketParams& params) {
  if (!(sigma > 0.0)) throw DomainError("volatility must be positive");
  const double r = params.r();
  const double dt = params.dt();
  const double survive = std::exp(-0.5 * (r + 0.25 * sigma * sigma) * dt);
  const double density =
      std::sqrt(dt / (2.0 * std::numbers::pi)) * std::exp(-r * r * dt / (2.0 * sigma * sigma));
  return survive * (0.25 * sigma * dt - density);
}

CriticalVol sigma_bar_star(const MarketParams& params) {
  const double formula = sigma_bar_star_formula(params.r(), params.dt());
  auto d = [&](double s) { return g_c_prime(s, params); };
  // G_C′ < 0 below the minimizer and > 0 above it; the r > 0 local maximum
  // near σ ~ rΔt-scale sits far below formula/2.
  const double lo = shrink_down([&](double s) { return d(s) < 0.0; }, 0.5 * formula, 64);
  const double hi = expand_up([&](double s) { return d(s) > 0.0; }, 2.0 * formula, 64);
  return {formula, find_root(d, lo, hi, 1e-15).root};
}

double gamma_bar_star(const MarketParams& params) {
  const double s = sigma_bar_star(params).refined;
  const FeeTerms t = fee_terms(s, params.r(), params.dt());
  return 2.0 * t.decay / (t.decay + t.spread);
}

double gamma_bar_star_zero() {
  const double e = std::exp(-1.0 / std::numbers::pi);
  return 2.0 * (1.0 - e) / (2.0 * norm_cdf(std::sqrt(2.0 / std::numbers::pi)) - e);
}

CalibrationOutcome calibrate_sigma(double c, const MarketParams& params) {
  if (!(std::isfinite(c) && c >= 0.0)) throw DomainError("C must be nonnegative");
  CalibrationOutcome out;
  out.c_statistic = c;
  out.implied = implied_vols(params);
  Solver solver{c, params, out};
  const double gamma = params.gamma();

  if (params.r() == 0.0) {
    const double star = out.implied.roots.front();
    out.gamma_bar_star_zero = gamma_bar_star_zero();
    if (gamma <= *out.gamma_bar_star_zero) {
      out.branch = CalibrationBranch::zero_rate_low_fee;
      if (solver.gc(star) <= 0.0) {
        if (const auto lo = solver.positive_below(star)) solver.solve(*lo, star, {0.0, star});
      }
    } else {
      out.branch = CalibrationBranch::zero_rate_high_fee;
      const double hat = sigma_bar_star(params).refined;
      out.sigma_hat = hat;
      const double g_hat = solver.gc(hat);
      if (g_hat == 0.0) {
        solver.solve(hat, hat, {hat, hat});
      } else if (g_hat < 0.0) {
        if (const auto lo = solver.positive_below(hat)) solver.solve(*lo, hat, {0.0, hat});
        if (solver.gc(star) >= 0.0) solver.solve(hat, star, {hat, star});
      }
    }
    finish(out, params);
    return out;
  }

  // Depositing optimal down to σ → 0: the two-root partition does not apply.
  const bool from_zero = !out.implied.arbitrage_intervals.empty() &&
                         out.implied.arbitrage_intervals.front().first == 0.0;
  if (!out.implied.sigma_bar) {
    out.branch = CalibrationBranch::block_time_too_long;
    if (from_zero) {
      std::vector<double> stationary;
      try {
        const CriticalVol crit = sigma_bar_star(params);
        stationary = g_c_stationary(params, crit.refined);
      } catch (const DomainError&) {
        // G_C increasing: no cut points
      }
      for (const auto& [lo, hi] : out.implied.arbitrage_intervals) {
        solver.solve_interval(lo, hi, stationary);
      }
    }
    finish(out, params);
    return out;
  }
  const CriticalVol crit = sigma_bar_star(params);
  out.sigma_bar_star = crit.refined;
  out.sigma_bar_star_formula = crit.formula;
  out.gamma_bar_star = gamma_bar_star(params);

  if (from_zero) {
    out.branch = CalibrationBranch::fee_above_low_vol_limit;
    const std::vector<double> stationary = g_c_stationary(params, crit.refined);
    for (const auto& [lo, hi] : out.implied.arbitrage_intervals) {
      solver.solve_interval(lo, hi, stationary);
    }
    finish(out, params);
    return out;
  }

  switch (out.implied.kind) {
    case RootCase::no_root:
      out.branch = CalibrationBranch::fee_below_tangency;
      break;
    case RootCase::unique: {
      out.branch = CalibrationBranch::fee_at_tangency;
      const double sb = *out.implied.sigma_bar;
      if (solver.gc(sb) == 0.0) solver.solve(sb, sb, {sb, sb});
      break;
    }
    case RootCase::two_roots: {
      const double s1 = out.implied.roots[0];
      const double s2 = out.implied.roots[1];
      const double g1 = solver.gc(s1);
      const double g2 = solver.gc(s2);
      if (gamma <= *out.gamma_bar_star) {
        out.branch = CalibrationBranch::monotone_between_roots;
        if (g1 * g2 <= 0.0) solver.solve(s1, s2, {s1, s2});
      } else {
        out.branch = CalibrationBranch::minimum_between_roots;
        const double sm = crit.refined;
        const double gm = solver.gc(sm);
        if (gm <= 0.0) {
          if (g1 * gm <= 0.0) solver.solve(s1, sm, {s1, sm});
          if (g2 * gm <= 0.0) solver.solve(sm, s2, {sm, s2});
        }
      }
      break;
    }
    case RootCase::three_roots:
      throw Error("calibration: three implied volatilities without the low-volatility regime");
  }
  finish(out, params);
  return out;
}

double repricing_factor(double sigma_m, const MarketParams& params) {
  const double ratio = params.gamma_hat() / gamma_star(sigma_m, params.r(), params.dt());
  if (!(ratio >= 1.0 - kRegimeSlack)) {
    throw UnsupportedRegime("repricing_factor: fee ratio below gamma_star at this volatility");
  }
  return ratio;
}

}  // namespace cpmm
