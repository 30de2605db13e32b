#include "cpmm/amm_designs.hpp"

#include <cmath>

#include "cpmm/error.hpp"
#include "cpmm/pricing.hpp"

namespace cpmm {

namespace {

void require_positive(double x, const char* what) {
  if (!(std::isfinite(x) && x > 0.0)) throw DomainError(std::string(what) + " must be positive");
}

}  // namespace

PowerInvariant::PowerInvariant(double alpha) : alpha_(alpha) {
  if (!(std::isfinite(alpha) && alpha > 1.0)) {
    throw DomainError("power invariant needs alpha > 1 (2*l*l'' > l'^2)");
  }
}

double PowerInvariant::ell(double L) const {
  require_positive(L, "liquidity");
  return std::pow(L, 2.0 * alpha_);
}

double PowerInvariant::ell_prime(double L) const {
  require_positive(L, "liquidity");
  return 2.0 * alpha_ * std::pow(L, 2.0 * alpha_ - 1.0);
}

double PowerInvariant::ell_second(double L) const {
  require_positive(L, "liquidity");
  return 2.0 * alpha_ * (2.0 * alpha_ - 1.0) * std::pow(L, 2.0 * alpha_ - 2.0);
}

double PowerInvariant::unit_price(double L) const {
  return ell_prime(L) / (2.0 * std::sqrt(ell(L)));
}

bool PowerInvariant::convexity_holds(double alpha, double L) {
  require_positive(alpha, "alpha");
  require_positive(L, "liquidity");
  // 2ℓℓ″ − ℓ′² = 4α(α − 1)L^{4α−2}
  const double l = std::pow(L, 2.0 * alpha);
  const double lp = 2.0 * alpha * std::pow(L, 2.0 * alpha - 1.0);
  const double lpp = 2.0 * alpha * (2.0 * alpha - 1.0) * std::pow(L, 2.0 * alpha - 2.0);
  return 2.0 * l * lpp > lp * lp;
}

double mint_price(double price, double liquidity, const PowerInvariant& inv) {
  require_positive(price, "price");
  return 2.0 * inv.unit_price(liquidity) * std::sqrt(price);
}

double FeeSchedule::fee(double liquidity) const {
  if (!(gamma0 > 0.0 && gamma0 < 1.0)) throw DomainError("gamma0 must lie in (0, 1)");
  require_positive(alpha, "fee decay rate");
  if (!(std::isfinite(liquidity) && liquidity >= 0.0)) {
    throw DomainError("liquidity must be nonnegative");
  }
  return kind == FeeDecay::exponential ? gamma0 * std::exp(-alpha * liquidity)
                                       : gamma0 / (1.0 + alpha * liquidity);
}

double variable_fee_value(double price, double liquidity, const FeeSchedule& schedule,
                          const MarketParams& params) {
  require_positive(price, "price");
  require_positive(liquidity, "liquidity");
  const double gh = fee_ratio(schedule.fee(liquidity));
  const double gs = gamma_star(params);
  if (!(gh >= gs)) throw UnsupportedRegime("variable_fee_value: fee ratio below gamma_star");
  return 2.0 * gh * std::sqrt(price) / gs;
}

ImpliedVolOutcome liquidity_implied_vol(double price, double liquidity, const PowerInvariant& inv,
                                        const MarketParams& params) {
  require_positive(price, "price");
  const double v = inv.unit_price(liquidity);
  if (v == 1.0) return implied_vols(params);
  return implied_vols(params.with_fee_ratio(params.gamma_hat() / v));
}

ImpliedVolOutcome liquidity_implied_vol(double price, double liquidity,
                                        const FeeSchedule& schedule, const MarketParams& params) {
  require_positive(price, "price");
  require_positive(liquidity, "liquidity");
  return implied_vols(params.with_gamma(schedule.fee(liquidity)));
}

}  // namespace cpmm
