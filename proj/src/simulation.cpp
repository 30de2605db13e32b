#include "cpmm/simulation.hpp"

#include <cmath>
#include <limits>

#include "cpmm/error.hpp"
#include "cpmm/kernels.hpp"
#include "cpmm/pricing.hpp"
#include "cpmm/rng.hpp"

namespace cpmm {

namespace {

void require_price(double p) {
  if (!(std::isfinite(p) && p > 0.0)) throw DomainError("price must be positive");
}

std::size_t mc_horizon(const MarketParams& params, const McConfig& config) {
  if (!(config.tail_epsilon > 0.0 && config.tail_epsilon < 1.0)) {
    throw DomainError("tail_epsilon must lie in (0, 1)");
  }
  if (config.max_horizon == 0) throw DomainError("max_horizon must be positive");
  const double s = params.sigma();
  const double log_q = -0.5 * (params.r() + 0.25 * s * s) * params.dt();
  const double wanted = std::ceil(std::log(config.tail_epsilon) / log_q);
  if (!(wanted < static_cast<double>(config.max_horizon))) return config.max_horizon;
  return std::max<std::size_t>(1, static_cast<std::size_t>(wanted));
}

}  // namespace

SimulatedPath simulate_path(double p0, std::size_t n_blocks, const MarketParams& params,
                            std::uint64_t seed) {
  require_price(p0);
  if (n_blocks == 0) throw DomainError("n_blocks must be at least 1");
  SimulatedPath path{{}, {}, seed, params};
  path.prices.resize(n_blocks + 1);
  path.fees.resize(n_blocks + 1);
  path.prices[0] = p0;
  path.fees[0] = 0.0;
  NormalStream normals(seed);
  for (std::size_t i = 1; i <= n_blocks; ++i) {
    path.prices[i] = gbm_step(path.prices[i - 1], params, normals.next());
    path.fees[i] = params.gamma_hat() * block_fee(path.prices[i - 1], path.prices[i]);
  }
  return path;
}

McEstimate mc_token_value(double p0, const MarketParams& params, const McConfig& config) {
  require_price(p0);
  if (config.n_paths < 2) throw InsufficientData("Monte Carlo needs at least 2 paths");
  const double gs = gamma_star(params);
  if (!(params.gamma_hat() >= gs)) {
    throw UnsupportedRegime("mc_token_value: requires fee ratio >= gamma_star");
  }
  const std::size_t horizon = mc_horizon(params, config);
  const std::vector<double> heads = kernels::fee_stream_paths(
      p0, params, config.n_paths, horizon, config.seed, kernels::Backend::openmp);

  double mean = 0.0;
  double m2 = 0.0;
  for (std::size_t i = 0; i < heads.size(); ++i) {
    const double d = heads[i] - mean;
    mean += d / static_cast<double>(i + 1);
    m2 += d * (heads[i] - mean);
  }
  const double n = static_cast<double>(heads.size());
  const double se = std::sqrt(m2 / (n - 1.0) / n);

  const FeeTerms t = fee_terms(params);
  const double q_h = std::exp(-0.5 * (params.r() + 0.25 * params.sigma() * params.sigma()) *
                              params.dt() * static_cast<double>(horizon));
  const double tail = params.gamma_hat() * expected_block_fee(p0, params) * q_h / t.decay;
  return {mean + tail, se, tail, horizon, heads.size()};
}

McCheck mc_check(double p0, const MarketParams& params, const McConfig& config) {
  const McEstimate mc = mc_token_value(p0, params, config);
  const double closed = token_value(p0, params).value;
  const double z = mc.standard_error > 0.0 ? (mc.estimate - closed) / mc.standard_error
                                           : std::numeric_limits<double>::quiet_NaN();
  return {mc, closed, z};
}

std::string_view to_string(PricingMode m) {
  switch (m) {
    case PricingMode::market:
      return "market";
    case PricingMode::risk_neutral:
      return "risk_neutral";
  }
  return "?";
}

HedgeLedger backtest_hedge(std::span<const double> prices, std::span<const double> fees,
                           const MarketParams& params, PricingMode mode) {
  if (prices.empty()) throw InputError("backtest needs at least one price");
  if (prices.size() != fees.size()) throw InputError("price and fee series differ in length");
  for (double p : prices) require_price(p);
  for (double f : fees) {
    if (!(std::isfinite(f) && f >= 0.0)) throw DomainError("fees must be nonnegative");
  }

  HedgeLedger ledger;
  ledger.mode = mode;
  ledger.dt = params.dt();
  ledger.r = params.r();
  if (mode == PricingMode::risk_neutral) {
    const double gs = gamma_star(params);
    if (!(params.gamma_hat() >= gs)) {
      throw UnsupportedRegime("risk-neutral backtest requires fee ratio >= gamma_star");
    }
    ledger.repricing_ratio = params.gamma_hat() / gs;
  }
  const double k = ledger.repricing_ratio;
  auto value = [k](double p) { return 2.0 * k * std::sqrt(p); };
  auto hedge = [k](double p) { return k / std::sqrt(p); };

  const double r = params.r();
  const double dt = params.dt();
  const double growth = std::exp(r * dt);

  ledger.records.reserve(prices.size());
  HedgeRecord first{};
  first.price = prices[0];
  first.value = value(prices[0]);
  first.hedge = hedge(prices[0]);
  first.cash = first.hedge * first.price;  // wealth V − ΔP + cash = V
  first.discounted_value = first.value;
  ledger.records.push_back(first);

  for (std::size_t i = 1; i < prices.size(); ++i) {
    const HedgeRecord& prev = ledger.records.back();
    HedgeRecord rec{};
    rec.price = prices[i];
    rec.fee = fees[i];
    rec.value = value(rec.price);
    rec.hedge = hedge(rec.price);
    const double discount = std::exp(-r * static_cast<double>(i) * dt);
    rec.discounted_value =
        prev.discounted_value +
        discount * ((rec.value + rec.fee - growth * prev.value) -
                    prev.hedge * (rec.price - growth * prev.price));
    const double wealth = rec.discounted_value / discount;
    rec.cash = wealth - rec.value + rec.hedge * rec.price;
    rec.token_pnl = rec.value - prev.value;
    rec.hedge_pnl = -prev.hedge * (rec.price - prev.price);
    rec.interest = (growth - 1.0) * prev.cash;
    ledger.records.push_back(rec);
  }
  return ledger;
}

DriftEstimate drift_statistic(std::span<const double> series) {
  const std::size_t n = series.size();
  if (n < 3) throw InsufficientData("drift statistic needs at least 3 points");
  const double nd = static_cast<double>(n);
  const double x_mean = 0.5 * (nd - 1.0);
  double y_mean = 0.0;
  for (double y : series) y_mean += y;
  y_mean /= nd;

  double sxy = 0.0;
  double sxx = 0.0;
  bool constant = true;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = static_cast<double>(i) - x_mean;
    sxy += dx * (series[i] - y_mean);
    sxx += dx * dx;
    constant = constant && series[i] == series[0];
  }
  if (constant) return {0.0, std::nullopt, n};
  const double slope = sxy / sxx;
  const double intercept = y_mean - slope * x_mean;
  double sse = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double e = series[i] - (intercept + slope * static_cast<double>(i));
    sse += e * e;
  }
  const double se = std::sqrt(sse / (nd - 2.0) / sxx);
  if (se == 0.0) {
    return {slope, slope == 0.0 ? 0.0 : std::copysign(std::numeric_limits<double>::infinity(), slope),
            n};
  }
  return {slope, slope / se, n};
}

DriftEstimate drift_statistic(const HedgeLedger& ledger) {
  std::vector<double> h;
  h.reserve(ledger.records.size());
  for (const HedgeRecord& rec : ledger.records) h.push_back(rec.discounted_value);
  return drift_statistic(h);
}

PooledDrift pooled_drift(std::span<const DriftEstimate> per_path) {
  const std::size_t n = per_path.size();
  if (n < 2) throw InsufficientData("pooled drift needs at least 2 paths");
  double mean = 0.0;
  double m2 = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = per_path[i].slope - mean;
    mean += d / static_cast<double>(i + 1);
    m2 += d * (per_path[i].slope - mean);
  }
  const double nd = static_cast<double>(n);
  const double se = std::sqrt(m2 / (nd - 1.0) / nd);
  double t;
  if (se > 0.0) {
    t = mean / se;
  } else {
    t = mean == 0.0 ? 0.0 : std::copysign(std::numeric_limits<double>::infinity(), mean);
  }
  return {mean, t, n};
}

PooledDrift hedge_drift_experiment(double p0, std::size_t n_blocks, const MarketParams& params,
                                   PricingMode mode, std::size_t n_paths, std::uint64_t seed) {
  const std::vector<DriftEstimate> per_path = kernels::hedge_drift_paths(
      p0, n_blocks, params, mode, n_paths, seed, kernels::Backend::openmp);
  return pooled_drift(per_path);
}

}  // namespace cpmm
