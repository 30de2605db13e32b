#include <gtest/gtest.h>

#include <cmath>
#include <utility>

#include "cpmm/error.hpp"
#include "cpmm/implied_vol.hpp"
#include "cpmm/pricing.hpp"

using namespace cpmm;

namespace {

const double kDt2 = seconds_to_years(2.0);

MarketParams polygon(double bps) { return {0.05, 1.0, kDt2, fee_from_bps(bps)}; }

double rel(double a, double b) { return std::abs(a / b - 1.0); }

}  // namespace

TEST(GFunction, FactorsThroughThreshold) {
  const MarketParams p = polygon(5.0);
  for (double s : {0.01, 0.0644, 0.3, 1.0, 3.1, 10.0}) {
    const FeeTerms t = fee_terms(s, p.r(), p.dt());
    const double factored = (t.spread - t.decay) * (gamma_star(s, p.r(), p.dt()) - p.gamma_hat());
    EXPECT_NEAR(g_function(s, p), factored, 1e-12 * std::abs(factored) + 1e-25);
    // G ≤ 0 exactly where depositing is optimal
    EXPECT_EQ(g_function(s, p) <= 0.0, p.gamma_hat() >= gamma_star(s, p.r(), p.dt()));
  }
  EXPECT_THROW(g_function(0.0, p), DomainError);
}

TEST(GFunction, TendsToTwoForLargeVolatility) {
  const MarketParams p = polygon(5.0);
  EXPECT_NEAR(g_function(1e6, p), 2.0, 1e-9);
}

TEST(GPrime, MatchesCentralDifference) {
  const MarketParams p = polygon(5.0);
  for (double s : {0.02, 0.2, 0.9, 3.0, 40.0}) {
    const double h = 1e-5 * s;
    const double fd = (g_function(s + h, p) - g_function(s - h, p)) / (2.0 * h);
    EXPECT_LT(rel(fd, g_prime(s, p)), 1e-6) << s;
  }
}

TEST(ImpliedVols, OneBasisPointHasNoRoot) {
  const ImpliedVolOutcome o = implied_vols(polygon(1.0));
  EXPECT_EQ(o.kind, RootCase::no_root);
  EXPECT_TRUE(o.roots.empty());
  EXPECT_LT(rel(*o.sigma_bar, 0.3168), 1e-3);
  EXPECT_LT(rel(*o.gamma_star_at_sigma_bar, 1.4962e-4), 1e-3);
  EXPECT_LT(rel(years_to_hours(*o.dt_bar), 8.479), 1e-3);
}

TEST(ImpliedVols, FiveBasisPointsHasTwoRoots) {
  const MarketParams p = polygon(5.0);
  const ImpliedVolOutcome o = implied_vols(p);
  ASSERT_EQ(o.kind, RootCase::two_roots);
  EXPECT_LT(rel(o.roots[0], 0.0644022460608), 1e-10);
  EXPECT_LT(rel(o.roots[1], 3.1047051678840), 1e-10);
  EXPECT_LT(o.roots[0], *o.sigma_bar);
  EXPECT_LT(*o.sigma_bar, o.roots[1]);
  EXPECT_LT(rel(*o.sigma_bar, 1.5846), 1e-3);
  EXPECT_LT(rel(*o.gamma_star_at_sigma_bar, 2.7002e-4), 1e-3);
  EXPECT_LT(rel(years_to_hours(*o.dt_bar), 42.40), 1e-3);
  EXPECT_EQ(*o.preferred_root(), o.roots[1]);
  for (double s : o.roots) {
    EXPECT_LT(rel(gamma_star(s, p.r(), p.dt()), p.gamma_hat()), 1e-9);
  }
}

TEST(ImpliedVols, CriticalFeeIsTangent) {
  const double gh = critical_fee_ratio(0.05, kDt2);
  EXPECT_LT(rel(gh, 1.4115684931244231968e-4), 1e-10);  // mpmath findroot
  EXPECT_NEAR(fee_to_bps(fee_from_ratio(gh)), 1.4114, 1e-4);
  const MarketParams p = MarketParams::from_fee_ratio(0.05, 1.0, kDt2, gh);
  const ImpliedVolOutcome o = implied_vols(p);
  ASSERT_EQ(o.kind, RootCase::unique);
  EXPECT_LT(rel(o.roots[0], 0.4472), 1e-3);
  // tangency in γ̂ at Δt = 2s; the block-time bound sits elsewhere
  EXPECT_LT(rel(years_to_hours(*o.dt_bar), 11.967), 1e-4);
}

TEST(ImpliedVols, PrintedTangencyFeeIsJustAboveTangency) {
  // 1.4114bps is the tangent fee rounded up: two roots straddling σ̄. The
  // split grows like the square root of the excess, hence the loose bound.
  const ImpliedVolOutcome o = implied_vols(polygon(1.4114));
  ASSERT_EQ(o.kind, RootCase::two_roots);
  EXPECT_LT(o.roots[0], *o.sigma_bar);
  EXPECT_GT(o.roots[1], *o.sigma_bar);
  EXPECT_LT(rel(o.roots[0], 0.4472), 1e-2);
  EXPECT_LT(rel(o.roots[1], 0.4472), 1e-2);
}

TEST(ImpliedVols, BlockTimeBeyondBoundHasNoRoot) {
  const MarketParams p(0.05, 1.0, seconds_to_years(3600.0 * 50.0), fee_from_bps(5.0));
  const ImpliedVolOutcome o = implied_vols(p);
  EXPECT_EQ(o.kind, RootCase::no_root);
  EXPECT_FALSE(o.sigma_bar.has_value());
  EXPECT_THROW(sigma_bar(p), DomainError);
}

TEST(ImpliedVols, ZeroRateHasUniqueRootAndContinuity) {
  const MarketParams p0(0.0, 1.0, kDt2, fee_from_bps(5.0));
  const ImpliedVolOutcome o = implied_vols(p0);
  ASSERT_EQ(o.kind, RootCase::unique);
  EXPECT_LT(rel(gamma_star(o.roots[0], 0.0, kDt2), p0.gamma_hat()), 1e-9);
  EXPECT_THROW(dt_bar(p0), DomainError);

  const MarketParams tiny(1e-10, 1.0, kDt2, fee_from_bps(5.0));
  const ImpliedVolOutcome ot = implied_vols(tiny);
  ASSERT_EQ(ot.kind, RootCase::two_roots);
  EXPECT_LT(rel(*ot.sigma_bar, *o.sigma_bar), 1e-6);
  EXPECT_LT(rel(ot.roots[1], o.roots[0]), 1e-6);
}

TEST(SigmaBar, IsTheMinimizerOfG) {
  for (double bps : {1.0, 5.0, 30.0}) {
    const MarketParams p = polygon(bps);
    const double sb = sigma_bar(p);
    EXPECT_LT(g_prime(sb * (1 - 1e-6), p), 0.0);
    EXPECT_GT(g_prime(sb * (1 + 1e-6), p), 0.0);
  }
}

TEST(ImpliedVols, GSignPatternInTwoRootCase) {
  const MarketParams p = polygon(5.0);
  const ImpliedVolOutcome o = implied_vols(p);
  for (int k = -300; k <= 300; ++k) {
    const double s = std::pow(10.0, k / 100.0);
    const double g = g_function(s, p);
    if (s > o.roots[0] * (1 + 1e-9) && s < o.roots[1] * (1 - 1e-9)) {
      EXPECT_LT(g, 0.0) << s;
    } else if (s < o.roots[0] * (1 - 1e-9) || s > o.roots[1] * (1 + 1e-9)) {
      EXPECT_GT(g, 0.0) << s;
    }
  }
}

TEST(ArbitrageRegion, PolygonPoints) {
  const MarketParams p = polygon(5.0);
  EXPECT_TRUE(arbitrage_region(0.2582, p));
  EXPECT_FALSE(arbitrage_region(0.05, p));
  EXPECT_FALSE(arbitrage_region(5.0, p));
  for (double s : implied_vols(p).roots) EXPECT_FALSE(arbitrage_region(s, p));
  EXPECT_FALSE(arbitrage_region(0.2582, polygon(1.0)));
  EXPECT_THROW(arbitrage_region(-1.0, p), DomainError);
}

TEST(ArbitrageRegion, AgreesWithValuation) {
  for (double r : {0.0, 0.0005, 0.05}) {
    const MarketParams p(r, 1.0, kDt2, fee_from_bps(5.0));
    for (int k = 0; k < 50; ++k) {
      const double s = std::pow(10.0, -3.0 + 5.0 * k / 49.0);
      for (double price : {0.01, 1.0, 100.0}) {
        const double v = token_value(price, p.with_sigma(s)).value;
        EXPECT_EQ(arbitrage_region(s, p), v > 2.0 * std::sqrt(price)) << r << ' ' << s;
      }
    }
  }
}

TEST(LowVolLimit, ClosedForm) {
  EXPECT_LT(rel(gamma_star_low_vol_limit(0.05, kDt2), 2.0000000031709792009), 1e-15);
  EXPECT_LT(rel(gamma_star(1e-9, 0.05, kDt2), gamma_star_low_vol_limit(0.05, kDt2)), 1e-12);
  EXPECT_EQ(gamma_star_low_vol_limit(0.0, kDt2), 0.0);
  EXPECT_THROW(gamma_star_low_vol_limit(-0.1, kDt2), DomainError);
}

TEST(ImpliedVols, FeeAboveLowVolLimitKeepsUpperRootOnly) {
  const MarketParams p(0.05, 1.0, kDt2, 0.7);
  ASSERT_GT(p.gamma_hat(), gamma_star_low_vol_limit(0.05, kDt2));
  const ImpliedVolOutcome o = implied_vols(p);
  ASSERT_EQ(o.kind, RootCase::unique);
  ASSERT_EQ(o.arbitrage_intervals.size(), 1u);
  EXPECT_EQ(o.arbitrage_intervals[0].first, 0.0);
  EXPECT_EQ(o.arbitrage_intervals[0].second, o.roots[0]);
  EXPECT_LT(rel(gamma_star(o.roots[0], p.r(), p.dt()), p.gamma_hat()), 1e-9);
  EXPECT_TRUE(arbitrage_region(1e-8, p));
}

TEST(ImpliedVols, ThreeRootsJustAboveLowVolLimit) {
  // γ̂*(σ) overshoots its σ → 0 limit by ~6.6e-11 near σ ≈ 2e-6.
  const double gh = gamma_star_low_vol_limit(0.05, kDt2) + 2e-11;
  const MarketParams p = MarketParams::from_fee_ratio(0.05, 1.0, kDt2, gh);
  const ImpliedVolOutcome o = implied_vols(p);
  ASSERT_EQ(o.kind, RootCase::three_roots);
  // mpmath at 50 digits. γ̂* is nearly flat at the small roots: one ulp of γ̂
  // moves them by ~1e-5 relative.
  EXPECT_LT(rel(o.roots[0], 1.0000069931619657418e-6), 1e-4);
  EXPECT_LT(rel(o.roots[1], 2.0743775330662014534e-6), 1e-4);
  EXPECT_LT(rel(o.roots[2], 6728.8049919071949112), 1e-10);
  ASSERT_EQ(o.arbitrage_intervals.size(), 2u);
  EXPECT_EQ(o.arbitrage_intervals[0], std::make_pair(0.0, o.roots[0]));
  EXPECT_EQ(o.arbitrage_intervals[1], std::make_pair(o.roots[1], o.roots[2]));
  EXPECT_EQ(o.preferred_root(), o.roots[2]);
  EXPECT_EQ(to_string(o.kind), "ThreeRoots");
}

TEST(ImpliedVols, IntervalsMatchSignOfG) {
  const double lim = gamma_star_low_vol_limit(0.05, kDt2);
  for (double gh : {1e-4, 5.0025e-4, 0.01, 1.0, lim - 1e-10, lim + 3e-11, lim + 1e-9, 2.5, 50.0}) {
    for (double dt : {kDt2, seconds_to_years(3600.0 * 100.0)}) {
      const MarketParams p = MarketParams::from_fee_ratio(0.05, 1.0, dt, gh);
      const ImpliedVolOutcome o = implied_vols(p);
      ASSERT_EQ(o.roots.size(), static_cast<std::size_t>(o.kind));
      for (int k = -800; k <= 500; ++k) {
        const double s = std::pow(10.0, k / 100.0);
        bool near_root = false;
        for (double x : o.roots) near_root = near_root || rel(s, x) < 1e-3;
        if (near_root) continue;
        EXPECT_EQ(arbitrage_region(s, p), g_function(s, p) < 0.0) << gh << ' ' << dt << ' ' << s;
      }
    }
  }
}

TEST(CriticalFee, Errors) {
  EXPECT_THROW(critical_fee_ratio(0.0, kDt2), DomainError);
  EXPECT_THROW(critical_fee_ratio(0.05, 0.0), DomainError);
}
