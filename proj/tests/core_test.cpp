#include <doctest.h>

#include <cmath>

#include "miscal/binned_pair.hpp"
#include "miscal/cost_context.hpp"
#include "miscal/grid.hpp"
#include "miscal/rng.hpp"
#include "miscal/tolerances.hpp"
#include "test_util.hpp"

using namespace miscal;

TEST_CASE("grid rejects m < 2") {
  CHECK_THROWS_AS(Grid(1), std::invalid_argument);
  CHECK_THROWS_AS(Grid(0), std::invalid_argument);
  CHECK_NOTHROW(Grid(2));
}

TEST_CASE("grid index/threshold round trip is exact") {
  for (int m : {2, 7, 10, 49, 100, 997}) {
    const Grid grid(m);
    for (int i = 0; i <= m; ++i) {
      CHECK(grid.index(grid.threshold(i)) == i);
    }
  }
}

TEST_CASE("cost context from the colorectal screening utilities") {
  const Grid grid(100);
  const auto ctx = make_cost_context(-11.0, -1.0, -100.0, 0.0, grid);
  CHECK(ctx.profit == doctest::Approx(89.0));
  CHECK(ctx.loss == doctest::Approx(1.0));
  CHECK(ctx.j_star == doctest::Approx(100.0 / 90.0).epsilon(1e-12));
  // j* < m/2: loss side normalized to 1.
  CHECK(ctx.l_sym == 1.0);
  CHECK(ctx.p_sym == doctest::Approx((100.0 - ctx.j_star) / ctx.j_star).epsilon(1e-12));
}

TEST_CASE("symmetric utilities give the midpoint threshold") {
  const Grid grid(100);
  const auto ctx = make_cost_context(1.0, -1.0, -1.0, 1.0, grid);
  CHECK(ctx.profit == 2.0);
  CHECK(ctx.loss == 2.0);
  CHECK(ctx.j_star == 50.0);
  CHECK(ctx.p_sym == 1.0);
  CHECK(ctx.l_sym == 1.0);
}

TEST_CASE("19:1 benefit ratio puts the threshold at 5%") {
  const Grid grid(100);
  const auto ctx = make_cost_context(19.0, -1.0, 0.0, 0.0, grid);
  CHECK(ctx.profit == 19.0);
  CHECK(ctx.loss == 1.0);
  CHECK(ctx.j_star == doctest::Approx(5.0).epsilon(1e-12));
}

TEST_CASE("non-positive profit or loss is rejected by name") {
  const Grid grid(100);
  CHECK_THROWS_WITH_AS(make_cost_context(-1.0, 0.0, 0.0, 1.0, grid),
                       doctest::Contains("profit"), std::invalid_argument);
  CHECK_THROWS_WITH_AS(make_cost_context(1.0, 2.0, 0.0, 1.0, grid),
                       doctest::Contains("loss"), std::invalid_argument);
}

TEST_CASE("context from j_star alone") {
  const Grid grid(100);
  SUBCASE("midpoint") {
    const auto ctx = make_context_from_jstar(50.0, grid);
    CHECK(ctx.p_sym == 1.0);
    CHECK(ctx.l_sym == 1.0);
  }
  SUBCASE("asymmetric low") {
    const auto ctx = make_context_from_jstar(5.0, grid);
    CHECK(ctx.p_sym == doctest::Approx(19.0).epsilon(1e-12));
    CHECK(ctx.l_sym == 1.0);
  }
  SUBCASE("asymmetric high") {
    const auto ctx = make_context_from_jstar(99.0, grid);
    CHECK(ctx.p_sym == 1.0);
    CHECK(ctx.l_sym == doctest::Approx(99.0).epsilon(1e-12));
  }
  SUBCASE("range errors") {
    CHECK_THROWS_AS(make_context_from_jstar(0.0, grid), std::invalid_argument);
    CHECK_THROWS_AS(make_context_from_jstar(100.0, grid), std::invalid_argument);
    CHECK_THROWS_AS(make_context_from_jstar(-3.0, grid), std::invalid_argument);
  }
}

TEST_CASE("Eq-1 identity and j_star round trip hold for random costs") {
  Rng rng(11);
  const Grid grid(100);
  for (int trial = 0; trial < 500; ++trial) {
    const double u_tp = rng.uniform(-50.0, 50.0);
    const double u_fn = u_tp - rng.uniform(0.1, 100.0);  // P > 0
    const double u_tn = rng.uniform(-50.0, 50.0);
    const double u_fp = u_tn - rng.uniform(0.1, 100.0);  // L > 0
    const auto ctx = make_cost_context(u_tp, u_fp, u_fn, u_tn, grid);
    const double lhs = (grid.m - ctx.j_star) / ctx.j_star;
    const double rhs = ctx.profit / ctx.loss;
    CHECK(std::abs(lhs - rhs) <= kCostRelTol * std::abs(rhs));
    CHECK(std::abs(ctx.p_sym / ctx.l_sym - rhs) <= kCostRelTol * std::abs(rhs));
    CHECK(std::min(ctx.p_sym, ctx.l_sym) == 1.0);

    const auto again = make_context_from_jstar(ctx.j_star, grid);
    CHECK(std::abs(again.p_sym - ctx.p_sym) <= kCostRelTol * ctx.p_sym);
    CHECK(std::abs(again.l_sym - ctx.l_sym) <= kCostRelTol * ctx.l_sym);
  }
}

TEST_CASE("binned pair validation reports the first violation") {
  const Grid grid(10);
  SUBCASE("point mass at zero is legal") {
    BinnedPair pair(grid);
    pair.mu[0] = 1.0;
    pair.ytilde[0] = 0.0;
    CHECK_FALSE(validate_binned_pair(pair).has_value());
  }
  SUBCASE("mass sum violation") {
    BinnedPair pair(grid);
    pair.mu[0] = 0.98;
    pair.ytilde[0] = 0.0;
    const auto v = validate_binned_pair(pair);
    REQUIRE(v.has_value());
    CHECK(v->what == "mass sum");
  }
  SUBCASE("missing conditional mean names the bin") {
    BinnedPair pair(grid);
    pair.mu[3] = 0.5;
    pair.mu[7] = 0.5;
    pair.ytilde[7] = 0.2;
    const auto v = validate_binned_pair(pair);
    REQUIRE(v.has_value());
    CHECK(v->bin == 3);
    CHECK(v->what == "missing conditional mean");
  }
  SUBCASE("mean out of range") {
    BinnedPair pair(grid);
    pair.mu[2] = 1.0;
    pair.ytilde[2] = 1.5;
    const auto v = validate_binned_pair(pair);
    REQUIRE(v.has_value());
    CHECK(v->bin == 2);
  }
  SUBCASE("random generated pairs are valid") {
    Rng rng(5);
    for (int t = 0; t < 200; ++t) {
      CHECK_FALSE(validate_binned_pair(testutil::random_pair(rng, grid)).has_value());
    }
  }
}
