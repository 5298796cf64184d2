#pragma once

#include <vector>

#include "miscal/binned_pair.hpp"
#include "miscal/relation.hpp"

#include <nlohmann/json_fwd.hpp>

namespace miscal::calibration {

// Mass-weighted mean gap sum_i mu_i * |ytilde_i - i/m|, in probability units.
double expected_calibration_error(const BinnedPair& pair);

// Worst gap max_i |ytilde_i - i/m| over bins with mu_i > 0.
double maximum_calibration_error(const BinnedPair& pair);

// Membership in R_ECE(alpha) / R_MCE(alpha): error <= alpha + 1e-12.
bool in_relation(const BinnedPair& pair, Relation relation, double alpha);

struct BinReport {
  int i = 0;
  double mu = 0.0;
  double ytilde = 0.0;
  double gap = 0.0;  // |ytilde - i/m|
};

struct CalibrationReport {
  double ece = 0.0;
  double mce = 0.0;
  std::vector<BinReport> per_bin;  // bins with mu > 0, ascending index
};

CalibrationReport report(const BinnedPair& pair);

nlohmann::json to_json(const CalibrationReport& rep);

}  // namespace miscal::calibration
