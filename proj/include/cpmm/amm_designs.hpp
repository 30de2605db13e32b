#pragma once

// Liquidity-dependent designs: mint/burn pricing from a generalized
// invariant xy = ℓ(L), and fee schedules γ(L). Both are valued at a frozen L.

#include "cpmm/implied_vol.hpp"
#include "cpmm/market_model.hpp"

namespace cpmm {

/// ℓ(L) = L^{2α}. The invariant needs 2ℓℓ″ > ℓ′², which for this family
/// is α > 1; the constructor throws DomainError otherwise.
class PowerInvariant {
 public:
  explicit PowerInvariant(double alpha);

  double alpha() const noexcept { return alpha_; }
  double ell(double L) const;
  double ell_prime(double L) const;
  double ell_second(double L) const;
  /// v(L) = ℓ′(L)/(2√ℓ(L)) = αL^{α−1}.
  double unit_price(double L) const;

  /// 2ℓℓ″ > ℓ′² at L for ℓ = L^{2α}, any α > 0.
  static bool convexity_holds(double alpha, double L);

 private:
  double alpha_;
};

/// Marginal token price 2·v(L)·√P.
double mint_price(double price, double liquidity, const PowerInvariant& inv);

enum class FeeDecay { exponential, hyperbolic };

/// γ(L) = γ₀e^{−αL} or γ₀/(1 + αL); γ₀ ∈ (0, 1), α > 0.
struct FeeSchedule {
  FeeDecay kind;
  double gamma0;
  double alpha;

  double fee(double liquidity) const;
};

/// 2γ̂(L)√P/γ̂* with γ̂(L) = fee_ratio(γ(L)). `params.gamma()` is not read.
/// Throws UnsupportedRegime when γ̂(L) < γ̂*.
double variable_fee_value(double price, double liquidity, const FeeSchedule& schedule,
                          const MarketParams& params);

/// Volatilities with V₀(P; σ) = 2v(L)√P, i.e. γ̂*(σ) = γ̂/v(L).
ImpliedVolOutcome liquidity_implied_vol(double price, double liquidity, const PowerInvariant& inv,
                                        const MarketParams& params);

/// Volatilities with γ̂*(σ) = γ̂(L). `params.gamma()` is not read.
ImpliedVolOutcome liquidity_implied_vol(double price, double liquidity,
                                        const FeeSchedule& schedule, const MarketParams& params);

}  // namespace cpmm
