#include "miscal/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <ostream>
#include <stdexcept>

#include "miscal/benefit.hpp"
#include "miscal/calibration.hpp"
#include "miscal/cost_context.hpp"
#include "miscal/format.hpp"
#include "miscal/tolerances.hpp"

#include <nlohmann/json.hpp>

namespace miscal::experiments {

namespace {

double clinical_utility(const BinnedPair& pair, int j, const CostContext& ctx) {
  const double nb_all = benefit::net_benefit(pair, 0, ctx);
  return benefit::net_benefit(pair, j, ctx) - std::max(nb_all, 0.0);
}

void check_jstar_grid(const std::vector<double>& jstar_grid, const Grid& grid) {
  if (jstar_grid.empty()) {
    throw std::invalid_argument("jstar grid must be non-empty");
  }
  for (double jstar : jstar_grid) {
    if (!(jstar > 0.0) || !(jstar < grid.m)) {
      throw std::invalid_argument("jstar grid value " + fmt_double(jstar) +
                                  " outside (0, m)");
    }
  }
}

}  // namespace

std::vector<double> default_jstar_grid(const Grid& grid, int points) {
  if (points < 1) {
    throw std::invalid_argument("jstar grid needs at least one point");
  }
  std::vector<double> out;
  out.reserve(static_cast<size_t>(points));
  for (int k = 1; k <= points; ++k) {
    out.push_back(static_cast<double>(grid.m) * k / (points + 1));
  }
  return out;
}

GainReport gain_delta(const BinnedPair& test_pair, double alpha, Relation relation,
                      const Grid& grid, const std::vector<double>& jstar_grid,
                      threshold::EceLeftBranch left) {
  require_valid(test_pair);
  check_jstar_grid(jstar_grid, grid);
  GainReport report;
  report.alpha = alpha;
  report.relation = relation;
  double sum = 0.0;
  for (double jstar : jstar_grid) {
    const CostContext ctx = make_context_from_jstar(jstar, grid);
    const auto res = threshold::conservative_threshold(alpha, jstar, relation, grid, left);
    const double nb_hat = benefit::net_benefit(test_pair, res.floor_index(), ctx);
    const double nb_star =
        benefit::net_benefit(test_pair, static_cast<int>(std::floor(jstar)), ctx);
    const double gain = nb_hat - nb_star;
    report.per_jstar.push_back({jstar, nb_hat, nb_star, gain});
    sum += gain;
  }
  report.mean_gain = sum / static_cast<double>(jstar_grid.size());
  return report;
}

SubgroupReport subgroup_eval(const data::LabeledDataset& dataset, const Grid& grid,
                             double alpha, Relation relation,
                             const std::vector<double>& jstar_grid,
                             threshold::EceLeftBranch left) {
  if (!dataset.has_groups()) {
    throw std::invalid_argument("subgroup_eval: dataset has no group column");
  }
  check_jstar_grid(jstar_grid, grid);
  SubgroupReport report;
  report.alpha = alpha;
  report.relation = relation;
  for (const auto& name : dataset.group_names()) {
    data::LabeledDataset slice;
    for (const auto& row : dataset.rows) {
      if (row.group && *row.group == name) slice.rows.push_back(row);
    }
    const BinnedPair pair = data::bin_dataset(slice, grid);
    GroupReport g;
    g.group = name;
    g.n = static_cast<long>(slice.rows.size());
    g.ece = calibration::expected_calibration_error(pair);
    g.mce = calibration::maximum_calibration_error(pair);
    bool first = true;
    for (double jstar : jstar_grid) {
      const CostContext ctx = make_context_from_jstar(jstar, grid);
      const auto res = threshold::conservative_threshold(alpha, jstar, relation, grid, left);
      const double u_star =
          clinical_utility(pair, static_cast<int>(std::floor(jstar)), ctx);
      const double u_hat = clinical_utility(pair, res.floor_index(), ctx);
      if (first) {
        g.worst_clinical_utility_at_jstar = u_star;
        g.worst_clinical_utility_at_jhat = u_hat;
        first = false;
      } else {
        g.worst_clinical_utility_at_jstar = std::min(g.worst_clinical_utility_at_jstar, u_star);
        g.worst_clinical_utility_at_jhat = std::min(g.worst_clinical_utility_at_jhat, u_hat);
      }
      if (u_star < -kNumericEps) g.harmful_thresholds_jstar.push_back(jstar);
      if (u_hat < -kNumericEps) g.harmful_thresholds_jhat.push_back(jstar);
    }
    report.per_group.push_back(std::move(g));
  }
  return report;
}

CompareReport compare_relations(const BinnedPair& test_pair, const Grid& grid,
                                const std::vector<double>& jstar_grid,
                                threshold::EceLeftBranch left) {
  CompareReport report;
  report.alpha_ece = calibration::expected_calibration_error(test_pair);
  report.alpha_mce = calibration::maximum_calibration_error(test_pair);
  const GainReport ece =
      gain_delta(test_pair, report.alpha_ece, Relation::ece, grid, jstar_grid, left);
  const GainReport mce =
      gain_delta(test_pair, report.alpha_mce, Relation::mce, grid, jstar_grid, left);
  for (size_t k = 0; k < jstar_grid.size(); ++k) {
    report.rows.push_back({jstar_grid[k], ece.per_jstar[k].gain, mce.per_jstar[k].gain});
  }
  return report;
}

void write_csv(const GainReport& report, std::ostream& os) {
  os << "jstar,nb_at_jhat,nb_at_jstar,gain\n";
  for (const auto& row : report.per_jstar) {
    os << fmt_double(row.jstar) << ',' << fmt_double(row.nb_at_jhat) << ','
       << fmt_double(row.nb_at_jstar) << ',' << fmt_double(row.gain) << '\n';
  }
}

namespace {

std::string join_values(const std::vector<double>& values) {
  std::string out;
  for (size_t i = 0; i < values.size(); ++i) {
    if (i) out += ';';
    out += fmt_double(values[i]);
  }
  return out;
}

}  // namespace

void write_csv(const SubgroupReport& report, std::ostream& os) {
  os << "group,n,ece,mce,worst_utility_jstar,worst_utility_jhat,harmful_jstar,harmful_jhat\n";
  for (const auto& g : report.per_group) {
    os << g.group << ',' << g.n << ',' << fmt_double(g.ece) << ',' << fmt_double(g.mce) << ','
       << fmt_double(g.worst_clinical_utility_at_jstar) << ','
       << fmt_double(g.worst_clinical_utility_at_jhat) << ','
       << join_values(g.harmful_thresholds_jstar) << ','
       << join_values(g.harmful_thresholds_jhat) << '\n';
  }
}

void write_csv(const CompareReport& report, std::ostream& os) {
  os << "jstar,gain_ece,gain_mce\n";
  for (const auto& row : report.rows) {
    os << fmt_double(row.jstar) << ',' << fmt_double(row.gain_ece) << ','
       << fmt_double(row.gain_mce) << '\n';
  }
}

nlohmann::json to_json(const GainReport& report) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& row : report.per_jstar) {
    rows.push_back({{"jstar", row.jstar},
                    {"nb_at_jhat", row.nb_at_jhat},
                    {"nb_at_jstar", row.nb_at_jstar},
                    {"gain", row.gain}});
  }
  return {{"alpha", report.alpha},
          {"relation", to_string(report.relation)},
          {"mean_gain", report.mean_gain},
          {"per_jstar", rows}};
}

nlohmann::json to_json(const SubgroupReport& report) {
  nlohmann::json groups = nlohmann::json::array();
  for (const auto& g : report.per_group) {
    groups.push_back({{"group", g.group},
                      {"n", g.n},
                      {"ece", g.ece},
                      {"mce", g.mce},
                      {"worst_clinical_utility_at_jstar", g.worst_clinical_utility_at_jstar},
                      {"worst_clinical_utility_at_jhat", g.worst_clinical_utility_at_jhat},
                      {"harmful_thresholds_jstar", g.harmful_thresholds_jstar},
                      {"harmful_thresholds_jhat", g.harmful_thresholds_jhat}});
  }
  return {{"alpha", report.alpha},
          {"relation", to_string(report.relation)},
          {"groups", groups}};
}

nlohmann::json to_json(const CompareReport& report) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& row : report.rows) {
    rows.push_back(
        {{"jstar", row.jstar}, {"gain_ece", row.gain_ece}, {"gain_mce", row.gain_mce}});
  }
  return {{"alpha_ece", report.alpha_ece}, {"alpha_mce", report.alpha_mce}, {"rows", rows}};
}

}  // namespace miscal::experiments
