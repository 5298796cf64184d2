#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "miscal/binned_pair.hpp"
#include "miscal/data.hpp"
#include "miscal/relation.hpp"
#include "miscal/threshold.hpp"

#include <nlohmann/json_fwd.hpp>

namespace miscal::experiments {

// Default quadrature grid for "uniform j* in [0,1]": 99 evenly spaced
// interior points {m/100, ..., 99m/100}.
std::vector<double> default_jstar_grid(const Grid& grid, int points = 99);

struct GainRow {
  double jstar = 0.0;
  double nb_at_jhat = 0.0;
  double nb_at_jstar = 0.0;
  double gain = 0.0;
};

struct GainReport {
  double alpha = 0.0;
  Relation relation = Relation::ece;
  std::vector<GainRow> per_jstar;
  double mean_gain = 0.0;
};

// Net Benefit gained on test_pair by thresholding at floor(j_hat) instead of
// floor(j*), per j* in jstar_grid, plus the grid mean.
GainReport gain_delta(const BinnedPair& test_pair, double alpha, Relation relation,
                      const Grid& grid, const std::vector<double>& jstar_grid,
                      threshold::EceLeftBranch left = threshold::EceLeftBranch::theorem);

struct GroupReport {
  std::string group;
  long n = 0;
  double ece = 0.0;
  double mce = 0.0;
  double worst_clinical_utility_at_jstar = 0.0;
  double worst_clinical_utility_at_jhat = 0.0;
  std::vector<double> harmful_thresholds_jstar;  // j* values with utility < -1e-12
  std::vector<double> harmful_thresholds_jhat;
};

struct SubgroupReport {
  double alpha = 0.0;
  Relation relation = Relation::ece;
  std::vector<GroupReport> per_group;
};

// Bins each group separately and scans jstar_grid: clinical utility at
// floor(j*) vs floor(j_hat(alpha, j*)), worst values and harmful lists.
SubgroupReport subgroup_eval(const data::LabeledDataset& dataset, const Grid& grid,
                             double alpha, Relation relation,
                             const std::vector<double>& jstar_grid,
                             threshold::EceLeftBranch left = threshold::EceLeftBranch::theorem);

struct CompareRow {
  double jstar = 0.0;
  double gain_ece = 0.0;  // at alpha = empirical ECE of the pair
  double gain_mce = 0.0;  // at alpha = empirical MCE of the pair
};

struct CompareReport {
  double alpha_ece = 0.0;
  double alpha_mce = 0.0;
  std::vector<CompareRow> rows;
};

CompareReport compare_relations(const BinnedPair& test_pair, const Grid& grid,
                                const std::vector<double>& jstar_grid,
                                threshold::EceLeftBranch left = threshold::EceLeftBranch::theorem);

void write_csv(const GainReport& report, std::ostream& os);
void write_csv(const SubgroupReport& report, std::ostream& os);
void write_csv(const CompareReport& report, std::ostream& os);

nlohmann::json to_json(const GainReport& report);
nlohmann::json to_json(const SubgroupReport& report);
nlohmann::json to_json(const CompareReport& report);

}  // namespace miscal::experiments
