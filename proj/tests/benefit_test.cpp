#include <doctest.h>

#include <cmath>
#include <sstream>

#include "miscal/benefit.hpp"
#include "miscal/cost_context.hpp"
#include "miscal/rng.hpp"
#include "test_util.hpp"

#include <nlohmann/json.hpp>

using namespace miscal;
namespace nb = miscal::benefit;

TEST_CASE("tp/fp fractions") {
  const Grid grid(100);
  SUBCASE("empty sum at j = m") {
    Rng rng(3);
    const auto pair = testutil::random_pair(rng, grid);
    const auto f = nb::tp_fp_fractions(pair, grid.m);
    CHECK(f.tp == 0.0);
    CHECK(f.fp == 0.0);
  }
  SUBCASE("top-bin pair at treat-all") {
    const auto pair = testutil::top_bin_pair(grid, 0.1);
    const auto f = nb::tp_fp_fractions(pair, 0);
    CHECK(f.tp == doctest::Approx(0.9).epsilon(1e-12));
    CHECK(f.fp == doctest::Approx(0.1).epsilon(1e-12));
  }
  SUBCASE("strict inequality at the bin boundary") {
    const auto pair = make_pair_from_bins(grid, {{60, 1.0, 0.6}});
    const auto at = nb::tp_fp_fractions(pair, 60);
    CHECK(at.tp == 0.0);
    CHECK(at.fp == 0.0);
    const auto below = nb::tp_fp_fractions(pair, 59);
    CHECK(below.tp == doctest::Approx(0.6).epsilon(1e-12));
    CHECK(below.fp == doctest::Approx(0.4).epsilon(1e-12));
  }
}

TEST_CASE("net benefit closed form") {
  const Grid grid(100);
  SUBCASE("single bin above the threshold") {
    const auto pair = make_pair_from_bins(grid, {{60, 1.0, 0.6}});
    const auto ctx = make_context_from_jstar(50.0, grid);
    for (int j : {0, 10, 59}) {
      CHECK(nb::net_benefit(pair, j, ctx) == doctest::Approx(0.2).epsilon(1e-12));
    }
  }
  SUBCASE("worked example: treat-all under a high threshold is 1 - alpha*m") {
    const auto pair = testutil::top_bin_pair(grid, 0.1);
    const auto ctx = make_context_from_jstar(99.0, grid);
    CHECK(nb::net_benefit(pair, 0, ctx) == -9.0);  // exact
  }
  SUBCASE("treat-none is always zero") {
    Rng rng(17);
    for (int t = 0; t < 20; ++t) {
      const auto pair = testutil::random_pair(rng, grid);
      const auto ctx = make_context_from_jstar(rng.uniform(1.0, 99.0), grid);
      CHECK(nb::net_benefit(pair, grid.m, ctx) == 0.0);
    }
  }
}

TEST_CASE("closed form equals p_sym*TP - l_sym*FP on random inputs") {
  Rng rng(23);
  for (int t = 0; t < 1000; ++t) {
    const int m = 10 + static_cast<int>(rng.below(91));
    const Grid grid(m);
    const auto pair = testutil::random_pair(rng, grid);
    const auto ctx = make_context_from_jstar(rng.uniform(0.05 * m, 0.95 * m), grid);
    const int j = static_cast<int>(rng.below(static_cast<std::uint64_t>(m) + 1));
    const double lambda = nb::net_benefit(pair, j, ctx);
    const auto f = nb::tp_fp_fractions(pair, j);
    CHECK(std::abs(lambda - (ctx.p_sym * f.tp - ctx.l_sym * f.fp)) <= 1e-12);
  }
}

TEST_CASE("regret") {
  const Grid grid(100);
  SUBCASE("no regret under perfect calibration at floor(j*)") {
    Rng rng(29);
    for (int t = 0; t < 200; ++t) {
      const auto pair = testutil::random_calibrated_pair(rng, grid);
      const double jstar = rng.uniform(0.5, 99.5);
      const auto ctx = make_context_from_jstar(jstar, grid);
      CHECK(nb::regret(pair, static_cast<int>(std::floor(jstar)), ctx).value <= 1e-12);
    }
  }
  SUBCASE("integral j* also allows ceil(j*) - 1") {
    Rng rng(31);
    for (int t = 0; t < 50; ++t) {
      const auto pair = testutil::random_calibrated_pair(rng, grid);
      const auto ctx = make_context_from_jstar(42.0, grid);
      CHECK(nb::regret(pair, 42, ctx).value <= 1e-12);
      CHECK(nb::regret(pair, 41, ctx).value <= 1e-12);
    }
  }
  SUBCASE("worked example: regret 9 at j* = 99, best alternative treat-none") {
    const auto pair = testutil::top_bin_pair(grid, 0.1);
    const auto ctx = make_context_from_jstar(99.0, grid);
    const auto r = nb::regret(pair, 99, ctx);
    CHECK(r.value == 9.0);  // exact
    CHECK(r.best_j == 100);
  }
  SUBCASE("single bin pair: two-point maximum") {
    const auto pair = make_pair_from_bins(grid, {{30, 1.0, 0.1}});
    const auto ctx = make_context_from_jstar(50.0, grid);
    // Lambda of including the bin is negative; threshold above the bin is
    // optimal and regret at j=40 is exactly -Lambda(include).
    const double include = nb::net_benefit(pair, 0, ctx);
    const auto r = nb::regret(pair, 20, ctx);
    CHECK(r.value == doctest::Approx(std::max(0.0, -include)).epsilon(1e-12));
  }
  SUBCASE("regret is never negative") {
    Rng rng(37);
    for (int t = 0; t < 300; ++t) {
      const int m = 5 + static_cast<int>(rng.below(96));
      const Grid g(m);
      const auto pair = testutil::random_pair(rng, g);
      const auto ctx = make_context_from_jstar(rng.uniform(0.1 * m, 0.9 * m), g);
      const int j = static_cast<int>(rng.below(static_cast<std::uint64_t>(m) + 1));
      CHECK(nb::regret(pair, j, ctx).value >= 0.0);
    }
  }
}

TEST_CASE("clinical harm sits between regret and minus the benefit spread") {
  Rng rng(41);
  for (int t = 0; t < 300; ++t) {
    const int m = 5 + static_cast<int>(rng.below(96));
    const Grid grid(m);
    const auto pair = testutil::random_pair(rng, grid);
    const auto ctx = make_context_from_jstar(rng.uniform(0.1 * m, 0.9 * m), grid);
    const int j = static_cast<int>(rng.below(static_cast<std::uint64_t>(m) + 1));
    const double harm = nb::clinical_harm(pair, j, ctx);
    CHECK(harm <= nb::regret(pair, j, ctx).value + 1e-12);
    double lo = nb::net_benefit(pair, 0, ctx), hi = lo;
    for (int jp = 1; jp <= m; ++jp) {
      const double v = nb::net_benefit(pair, jp, ctx);
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    CHECK(harm >= -(hi - lo) - 1e-12);
  }
}

TEST_CASE("clinical harm worked example") {
  const Grid grid(100);
  const auto pair = testutil::top_bin_pair(grid, 0.1);
  const auto ctx = make_context_from_jstar(99.0, grid);
  CHECK(nb::clinical_harm(pair, 99, ctx) == 9.0);
}

TEST_CASE("no harm at a threshold attaining the overall Net Benefit maximum") {
  Rng rng(59);
  const Grid grid(40);
  for (int t = 0; t < 100; ++t) {
    const auto pair = testutil::random_pair(rng, grid);
    const auto ctx = make_context_from_jstar(rng.uniform(2.0, 38.0), grid);
    int best_j = 0;
    double best = nb::net_benefit(pair, 0, ctx);
    for (int j = 1; j <= grid.m; ++j) {
      const double v = nb::net_benefit(pair, j, ctx);
      if (v > best) {
        best = v;
        best_j = j;
      }
    }
    CHECK(nb::clinical_harm(pair, best_j, ctx) <= 1e-12);
  }
}

TEST_CASE("tp/fp are non-increasing in the threshold") {
  Rng rng(43);
  const Grid grid(60);
  for (int t = 0; t < 100; ++t) {
    const auto pair = testutil::random_pair(rng, grid);
    auto prev = nb::tp_fp_fractions(pair, 0);
    for (int j = 1; j <= grid.m; ++j) {
      const auto cur = nb::tp_fp_fractions(pair, j);
      CHECK(cur.tp <= prev.tp + 1e-15);
      CHECK(cur.fp <= prev.fp + 1e-15);
      prev = cur;
    }
  }
}

TEST_CASE("decision curve invariants") {
  const Grid grid(100);
  SUBCASE("worked example: model at j=0 equals treat-all") {
    const auto pair = testutil::top_bin_pair(grid, 0.1);
    const auto ctx = make_context_from_jstar(99.0, grid);
    const auto curve = nb::decision_curve(pair, ctx);
    CHECK(curve.points[0].nb_model == -9.0);
    CHECK(curve.points[0].nb_treat_all == -9.0);
    for (const auto& p : curve.points) {
      CHECK(p.nb_treat_none == 0.0);
      CHECK(p.nb_treat_all == curve.points[0].nb_treat_all);
      CHECK(std::abs(p.utility -
                     (p.nb_model - std::max(p.nb_treat_all, p.nb_treat_none))) <= 1e-12);
    }
  }
  SUBCASE("calibrated pair peaks at the largest j below j*") {
    Rng rng(47);
    for (int t = 0; t < 50; ++t) {
      const auto pair = testutil::random_calibrated_pair(rng, grid);
      const double jstar = rng.uniform(1.0, 99.0);
      const auto ctx = make_context_from_jstar(jstar, grid);
      const auto curve = nb::decision_curve(pair, ctx);
      const double at_floor = curve.points[static_cast<size_t>(std::floor(jstar))].nb_model;
      for (const auto& p : curve.points) {
        CHECK(p.nb_model <= at_floor + 1e-12);
      }
    }
  }
}

TEST_CASE("decision curve CSV layout") {
  const Grid grid(2);
  const auto pair = make_pair_from_bins(grid, {{2, 1.0, 1.0}});
  const auto ctx = make_context_from_jstar(1.0, grid);
  const auto curve = nb::decision_curve(pair, ctx);
  std::ostringstream os;
  nb::write_csv(curve, os);
  CHECK(os.str() ==
        "j,threshold,nb_model,nb_all,nb_none,utility\n"
        "0,0,1,1,0,0\n"
        "1,0.5,1,1,0,0\n"
        "2,1,0,1,0,-1\n");
}
