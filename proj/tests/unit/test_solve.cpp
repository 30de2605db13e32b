#include <gtest/gtest.h>

#include <cmath>

#include "cpmm/error.hpp"
#include "cpmm/solve.hpp"

using namespace cpmm;

TEST(FindRoot, SmoothFunctions) {
  const RootResult r = find_root([](double x) { return x * x - 2.0; }, 0.0, 2.0);
  EXPECT_NEAR(r.root, std::sqrt(2.0), 2e-12);
  EXPECT_LE(r.upper - r.lower, 1e-12 * r.root + 1e-15);

  const RootResult c = find_root([](double x) { return std::cos(x) - x; }, 0.0, 1.0, 1e-15);
  EXPECT_NEAR(c.root, 0.73908513321516064166, 1e-15);
}

TEST(FindRoot, TinyScaleRoots) {
  // roots at 1e-9 scale with function values at 1e-18 scale
  const double target = 3.7e-9;
  const RootResult r =
      find_root([&](double x) { return (x - target) * 1e-9; }, 1e-12, 1e-6, 1e-12);
  EXPECT_NEAR(r.root / target, 1.0, 1e-12);
}

TEST(FindRoot, EndpointRootsAndBadBracket) {
  EXPECT_EQ(find_root([](double x) { return x - 1.0; }, 1.0, 3.0).root, 1.0);
  EXPECT_EQ(find_root([](double x) { return x - 3.0; }, 1.0, 3.0).root, 3.0);
  EXPECT_THROW(find_root([](double x) { return x * x + 1.0; }, -1.0, 1.0), DomainError);
}

TEST(FindRoot, DiscontinuousSignChange) {
  const RootResult r = find_root([](double x) { return x < 0.3 ? -1.0 : 1.0; }, 0.0, 1.0);
  EXPECT_NEAR(r.root, 0.3, 1e-12);
}

TEST(Bracketing, ExpandAndShrink) {
  EXPECT_EQ(expand_up([](double x) { return x > 100.0; }, 1.0), 128.0);
  EXPECT_EQ(shrink_down([](double x) { return x < 0.01; }, 1.0), 0.0078125);
  EXPECT_THROW(expand_up([](double) { return false; }, 1.0, 10), DomainError);
  EXPECT_THROW(shrink_down([](double) { return false; }, 1.0, 10), DomainError);
}
