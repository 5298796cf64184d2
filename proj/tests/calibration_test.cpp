#include <doctest.h>

#include <cmath>

#include "miscal/calibration.hpp"
#include "miscal/rng.hpp"
#include "test_util.hpp"

#include <nlohmann/json.hpp>

using namespace miscal;
namespace cal = miscal::calibration;

TEST_CASE("perfectly calibrated pairs have zero error") {
  Rng rng(21);
  const Grid grid(100);
  for (int t = 0; t < 50; ++t) {
    const auto pair = testutil::random_calibrated_pair(rng, grid);
    CHECK(cal::expected_calibration_error(pair) == 0.0);
    CHECK(cal::maximum_calibration_error(pair) == 0.0);
    CHECK(cal::in_relation(pair, Relation::ece, 0.0));
    CHECK(cal::in_relation(pair, Relation::mce, 0.0));
  }
}

TEST_CASE("top-bin pair has error alpha") {
  const Grid grid(100);
  const auto pair = testutil::top_bin_pair(grid, 0.1);
  CHECK(cal::expected_calibration_error(pair) == doctest::Approx(0.1).epsilon(1e-12));
  CHECK(cal::maximum_calibration_error(pair) == doctest::Approx(0.1).epsilon(1e-12));
  CHECK(cal::in_relation(pair, Relation::ece, 0.1));
  CHECK_FALSE(cal::in_relation(pair, Relation::mce, 0.05));
}

TEST_CASE("two-bin hand-computed errors") {
  const Grid grid(100);
  const auto pair = make_pair_from_bins(grid, {{20, 0.5, 0.30}, {80, 0.5, 0.80}});
  CHECK(cal::expected_calibration_error(pair) == doctest::Approx(0.05).epsilon(1e-12));
  CHECK(cal::maximum_calibration_error(pair) == doctest::Approx(0.10).epsilon(1e-12));
}

TEST_CASE("negative alpha is rejected") {
  const Grid grid(10);
  const auto pair = testutil::top_bin_pair(grid, 0.0);
  CHECK_THROWS_AS(cal::in_relation(pair, Relation::ece, -0.1), std::invalid_argument);
}

TEST_CASE("mce dominates ece and mce membership implies ece membership") {
  Rng rng(31);
  const Grid grid(50);
  for (int t = 0; t < 300; ++t) {
    const auto pair = testutil::random_pair(rng, grid);
    const double ece = cal::expected_calibration_error(pair);
    const double mce = cal::maximum_calibration_error(pair);
    CHECK(mce >= ece);
    const double alpha = rng.uniform();
    if (cal::in_relation(pair, Relation::mce, alpha)) {
      CHECK(cal::in_relation(pair, Relation::ece, alpha));
    }
  }
}

TEST_CASE("empty bins never affect either error") {
  const Grid grid(20);
  const auto sparse = make_pair_from_bins(grid, {{3, 0.25, 0.4}, {17, 0.75, 0.9}});
  // Same multiset of occupied bins on a pair built in a different order.
  const auto reordered = make_pair_from_bins(grid, {{17, 0.75, 0.9}, {3, 0.25, 0.4}});
  CHECK(cal::expected_calibration_error(sparse) ==
        cal::expected_calibration_error(reordered));
  CHECK(cal::maximum_calibration_error(sparse) ==
        cal::maximum_calibration_error(reordered));
}

TEST_CASE("report recomputes ece from its own rows") {
  Rng rng(41);
  const Grid grid(30);
  for (int t = 0; t < 50; ++t) {
    const auto pair = testutil::random_pair(rng, grid);
    const auto rep = cal::report(pair);
    CHECK(rep.ece <= rep.mce);
    double recomputed = 0.0;
    for (const auto& b : rep.per_bin) recomputed += b.mu * b.gap;
    CHECK(std::abs(recomputed - rep.ece) <= 1e-12);
  }
}

TEST_CASE("report serializes with the documented fields") {
  const Grid grid(100);
  const auto pair = make_pair_from_bins(grid, {{20, 0.5, 0.30}, {80, 0.5, 0.80}});
  const auto j = cal::to_json(cal::report(pair));
  CHECK(j.contains("ece"));
  CHECK(j.contains("mce"));
  REQUIRE(j.at("bins").size() == 2);
  CHECK(j.at("bins")[0].at("i") == 20);
  CHECK(j.at("bins")[0].at("gap").get<double>() == doctest::Approx(0.1).epsilon(1e-12));
}
