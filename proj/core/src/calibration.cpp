#include "miscal/calibration.hpp"

#include <cmath>
#include <stdexcept>

#include "miscal/tolerances.hpp"

#include <nlohmann/json.hpp>

namespace miscal::calibration {

double expected_calibration_error(const BinnedPair& pair) {
  require_valid(pair);
  const int m = pair.grid.m;
  double ece = 0.0;
  for (int i = 0; i <= m; ++i) {
    const double mu = pair.mu[static_cast<size_t>(i)];
    if (mu > 0.0) {
      ece += mu * std::abs(*pair.ytilde[static_cast<size_t>(i)] - pair.grid.threshold(i));
    }
  }
  return ece;
}

double maximum_calibration_error(const BinnedPair& pair) {
  require_valid(pair);
  const int m = pair.grid.m;
  double mce = 0.0;
  for (int i = 0; i <= m; ++i) {
    if (pair.mu[static_cast<size_t>(i)] > 0.0) {
      const double gap = std::abs(*pair.ytilde[static_cast<size_t>(i)] - pair.grid.threshold(i));
      if (gap > mce) mce = gap;
    }
  }
  return mce;
}

bool in_relation(const BinnedPair& pair, Relation relation, double alpha) {
  if (!(alpha >= 0.0)) {
    throw std::invalid_argument("in_relation: alpha must be non-negative");
  }
  const double err = relation == Relation::ece ? expected_calibration_error(pair)
                                               : maximum_calibration_error(pair);
  return err <= alpha + kNumericEps;
}

CalibrationReport report(const BinnedPair& pair) {
  CalibrationReport rep;
  rep.ece = expected_calibration_error(pair);
  rep.mce = maximum_calibration_error(pair);
  const int m = pair.grid.m;
  for (int i = 0; i <= m; ++i) {
    const double mu = pair.mu[static_cast<size_t>(i)];
    if (mu > 0.0) {
      const double y = *pair.ytilde[static_cast<size_t>(i)];
      rep.per_bin.push_back({i, mu, y, std::abs(y - pair.grid.threshold(i))});
    }
  }
  return rep;
}

nlohmann::json to_json(const CalibrationReport& rep) {
  nlohmann::json bins = nlohmann::json::array();
  for (const auto& b : rep.per_bin) {
    bins.push_back({{"i", b.i}, {"mu", b.mu}, {"ytilde", b.ytilde}, {"gap", b.gap}});
  }
  return {{"ece", rep.ece}, {"mce", rep.mce}, {"bins", bins}};
}

}  // namespace miscal::calibration
