#include "cpmm/market_model.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "cpmm/error.hpp"

namespace cpmm {

namespace {

void require(bool ok, const char* what) {
  if (!ok) throw DomainError(what);
}

// 10-point Gauss–Legendre on [-1, 1], positive half.
constexpr std::array<double, 5> kGlNodes = {0.1488743389816312108848260, 0.4333953941292471907992659,
                                            0.6794095682990244062343274, 0.8650633666889845107320967,
                                            0.9739065285171717200779640};
constexpr std::array<double, 5> kGlWeights = {0.2955242247147528701738930, 0.2692667193099963550912269,
                                              0.2190863625159820439955349, 0.1494513491505805931457763,
                                              0.0666713443086881375935688};

constexpr double kInvE = 0.36787944117144232159552377016146;

}  // namespace

double fee_ratio(double gamma) {
  require(gamma > 0.0 && gamma < 1.0, "fee must lie in (0, 1)");
  return gamma / (1.0 - gamma);
}

MarketParams::MarketParams(double r, double sigma, double dt, double gamma)
    : r_(r), sigma_(sigma), dt_(dt), gamma_(gamma), gamma_hat_(0.0) {
  require(std::isfinite(r) && r >= 0.0, "risk-free rate must be finite and non-negative");
  require(std::isfinite(sigma) && sigma > 0.0, "volatility must be finite and positive");
  require(std::isfinite(dt) && dt > 0.0, "block time must be finite and positive");
  gamma_hat_ = fee_ratio(gamma);
}

MarketParams MarketParams::from_fee_ratio(double r, double sigma, double dt, double gamma_hat) {
  require(std::isfinite(gamma_hat) && gamma_hat > 0.0, "fee ratio must be finite and positive");
  MarketParams p(r, sigma, dt, gamma_hat / (1.0 + gamma_hat));
  // keep the caller's γ̂ bit-exact rather than the round trip through γ
  p.gamma_hat_ = gamma_hat;
  return p;
}

PoolState::PoolState(double price, double liquidity) : price_(price), liquidity_(liquidity) {
  require(std::isfinite(price) && price > 0.0, "price must be positive");
  require(std::isfinite(liquidity) && liquidity > 0.0, "liquidity must be positive");
}

PoolState PoolState::from_holdings(const Holdings& h) {
  require(h.risky > 0.0 && h.numeraire > 0.0, "holdings must be positive");
  return {h.numeraire / h.risky, std::sqrt(h.risky * h.numeraire)};
}

Holdings PoolState::holdings() const noexcept {
  const double root = std::sqrt(price_);
  return {liquidity_ / root, liquidity_ * root};
}

Holdings holdings_from_price(double price, double liquidity) {
  return PoolState(price, liquidity).holdings();
}

double norm_cdf(double x) {
  if (std::isnan(x)) throw DomainError("norm_cdf of NaN");
  return 0.5 * std::erfc(-x * std::numbers::sqrt2 / 2.0);
}

double norm_pdf(double x) {
  constexpr double kInvSqrt2Pi = 0.39894228040143267793994605993438;
  return kInvSqrt2Pi * std::exp(-0.5 * x * x);
}

double norm_cdf_diff(double a, double b) {
  if (a == b) return 0.0;
  if (std::abs(a - b) <= 1.0) {
    const double half = 0.5 * (a - b);
    const double mid = 0.5 * (a + b);
    double sum = 0.0;
    for (std::size_t i = 0; i < kGlNodes.size(); ++i) {
      const double off = half * kGlNodes[i];
      sum += kGlWeights[i] * (norm_pdf(mid + off) + norm_pdf(mid - off));
    }
    return half * sum;
  }
  constexpr double k = std::numbers::sqrt2 / 2.0;
  if (a >= 0.0 && b >= 0.0) return 0.5 * (std::erfc(b * k) - std::erfc(a * k));
  if (a <= 0.0 && b <= 0.0) return 0.5 * (std::erfc(-a * k) - std::erfc(-b * k));
  return norm_cdf(a) - norm_cdf(b);
}

double lambert_w(LambertBranch branch, double x) {
  if (std::isnan(x) || x < -kInvE - 4.0 * std::numeric_limits<double>::epsilon() * kInvE) {
    throw DomainError("lambert_w argument below -1/e");
  }
  if (branch == LambertBranch::minus_one && x >= 0.0) {
    throw DomainError("lambert_w minus-one branch requires x < 0");
  }
  if (x == 0.0) return 0.0;
  if (std::isinf(x)) return x;

  const double near = x + kInvE;
  if (near <= 0.0) return -1.0;

  double w;
  if (x < -0.25) {
    // series about the branch point in p = ±sqrt(2(ex + 1))
    double p = std::sqrt(2.0 * std::numbers::e * near);
    if (branch == LambertBranch::minus_one) p = -p;
    w = -1.0 + p - p * p / 3.0 + 11.0 / 72.0 * p * p * p;
  } else if (branch == LambertBranch::principal) {
    if (std::abs(x) < 1e-3) {
      w = x * (1.0 - x * (1.0 - 1.5 * x));
    } else {
      const double l = std::log1p(x);
      w = l * (1.0 - std::log1p(l) / (2.0 + l));
    }
  } else {
    const double l1 = std::log(-x);
    const double l2 = std::log(-l1);
    w = l1 - l2 + l2 / l1;
  }

  for (int iter = 0; iter < 64; ++iter) {
    const double ew = std::exp(w);
    const double f = w * ew - x;
    const double wp1 = w + 1.0;
    if (wp1 == 0.0) break;
    const double denom = ew * wp1 - (w + 2.0) * f / (2.0 * wp1);
    const double step = f / denom;
    w -= step;
    if (std::abs(step) <= 4.0 * std::numeric_limits<double>::epsilon() * std::abs(w)) break;
  }
  return w;
}

double gbm_step(double price, const MarketParams& params, double z) {
  require(price > 0.0, "price must be positive");
  const double s = params.sigma();
  const double dt = params.dt();
  return price * std::exp((params.r() - 0.5 * s * s) * dt + s * std::sqrt(dt) * z);
}

}  // namespace cpmm
