#pragma once

#include <optional>
#include <string_view>
#include <utility>
#include <vector>

#include "cpmm/market_model.hpp"

namespace cpmm {

// three_roots only occurs for r > 0 in a fee band of relative width ~1e-10
// just above γ̂*(0⁺) = 2e^{rΔt/2}, where γ̂*(σ) overshoots its σ → 0 limit.
enum class RootCase { no_root, unique, two_roots, three_roots };

std::string_view to_string(RootCase c);

/// Volatilities at which the risk-neutral token value equals the mint price
/// 2√P. The set is price- and liquidity-independent. `params.sigma()` is not
/// read by any function in this header except where a σ argument is absent.
struct ImpliedVolOutcome {
  RootCase kind = RootCase::no_root;
  std::vector<double> roots;  // ascending
  std::optional<double> sigma_bar;
  std::optional<double> dt_bar;
  std::optional<double> gamma_star_at_sigma_bar;
  /// Open intervals where V₀ > 2√P, ascending; a lower end of 0 means the
  /// interval reaches down to σ → 0.
  std::vector<std::pair<double, double>> arbitrage_intervals;

  /// The upper root when two exist (it is the one continuous in r → 0), the
  /// only root otherwise.
  std::optional<double> preferred_root() const;
};

/// G(σ) = (2+γ̂)·decay − γ̂·spread = (spread − decay)(γ̂*(σ) − γ̂), so
/// G ≤ 0 exactly when depositing is optimal.
double g_function(double sigma, const MarketParams& params);

/// dG/dσ in closed form.
double g_prime(double sigma, const MarketParams& params);

/// Δt̄ = √(8/π)·γ̂/((2+γ̂)r)·e^{−1/2}; implied volatilities need Δt ≤ Δt̄.
/// Throws DomainError when r = 0.
double dt_bar(const MarketParams& params);

/// The minimizer of G: W₀-based closed form for r > 0, (γ̂/(2+γ̂))√(8/(πΔt))
/// for r = 0. Throws DomainError when r > 0 and Δt > Δt̄.
double sigma_bar(const MarketParams& params);

/// Classifies and solves γ̂*(σ) = γ̂. For r > 0, G rises from
/// G(0⁺) = (2+γ̂)d₀ − γ̂s₀ to a local maximum at σₐ ≤ σ̄ (W₋₁ branch), falls
/// to its minimum at σ̄ and increases to 2; roots are bracketed on those
/// monotone pieces and refined to a width of 1e-12·σ. When γ̂ < γ̂*(0⁺) this
/// is the familiar (0, σ̄] / [σ̄, ∞) split. A fee within 1e-12·γ̂ of γ̂*(σ̄) is
/// treated as tangent (σ̄ is then a double root).
ImpliedVolOutcome implied_vols(const MarketParams& params);

/// True iff V₀(P) > 2√P at volatility `sigma`: `sigma` lies in one of the
/// outcome's arbitrage intervals.
bool arbitrage_region(double sigma, const MarketParams& params);

/// lim_{σ→0} γ̂*(σ): 2(1 − e^{−rΔt/2})/(e^{−rΔt/2} − e^{−rΔt}) = 2e^{rΔt/2}
/// for r > 0, and 0 for r = 0.
double gamma_star_low_vol_limit(double r, double dt);

/// The fee ratio at which γ̂ = γ̂*(σ̄(γ̂)), i.e. the smallest fee for which an
/// implied volatility exists at (r, Δt). Throws DomainError when r = 0 (an
/// implied volatility then exists for every fee).
double critical_fee_ratio(double r, double dt);

}  // namespace cpmm
