#pragma once

#include <string>
#include <vector>

#include "miscal/grid.hpp"
#include "miscal/relation.hpp"

#include <nlohmann/json_fwd.hpp>

namespace miscal::threshold {

// The printed ECE left branch clamps at 1 while its derivation clamps at 0;
// both variants are available and the oracle acceptance suite reports which
// one the enumerated minimizer agrees with (it is the 0-clamp).
enum class EceLeftBranch { theorem, appendix };

struct ThresholdResult {
  double j_hat = 0.0;  // real threshold in [0, m]
  Relation relation = Relation::mce;
  double alpha = 0.0;
  double jstar = 0.0;
  double cost_at_j_hat = 0.0;
  double cost_at_jstar = 0.0;
  std::string branch;  // name of the active piecewise case

  int floor_index() const;
  int nearest_index() const;
  int m = 0;
};

// Worst-case regret of threshold j under an MCE budget (constant-adversary
// closed form):
//
//   max{ min{m-j*, j-j*+am}, min{j*, j*-j+am} } / min{m-j*, j*},  a = alpha.
double worst_case_cost_mce(double j, double jstar, double alpha, const Grid& grid);

// Worst-case regret of threshold j under an ECE budget (two-value-adversary
// closed form, four cases; at exact case boundaries the max of the
// applicable cases is taken).
double worst_case_cost_ece(double j, double jstar, double alpha, const Grid& grid);

double worst_case_cost(double j, double jstar, double alpha, Relation relation,
                       const Grid& grid);

// Regret-minimizing threshold under an MCE budget, piecewise in j*:
// 0 | 2j*-am | j* | 2j*-(1-a)m | m.
ThresholdResult conservative_threshold_mce(double alpha, double jstar, const Grid& grid);

// Regret-minimizing threshold under an ECE budget:
// left clamp | j* | min{m, am*j*/(m-j*)}.
ThresholdResult conservative_threshold_ece(double alpha, double jstar, const Grid& grid,
                                           EceLeftBranch left = EceLeftBranch::theorem);

ThresholdResult conservative_threshold(double alpha, double jstar, Relation relation,
                                       const Grid& grid,
                                       EceLeftBranch left = EceLeftBranch::theorem);

struct SweepRow {
  double jstar = 0.0;
  double j_hat = 0.0;
  std::string branch;
};

// Closed form evaluated on jstar_steps evenly spaced interior points
// m*k/(steps+1), k = 1..steps.
std::vector<SweepRow> sweep(double alpha, const Grid& grid, Relation relation,
                            int jstar_steps, EceLeftBranch left = EceLeftBranch::theorem,
                            int jobs = 0);

// CSV with pinned header "jstar,j_hat,branch".
void write_csv(const std::vector<SweepRow>& rows, std::ostream& os);

nlohmann::json to_json(const ThresholdResult& res);
nlohmann::json to_json(const std::vector<SweepRow>& rows);

}  // namespace miscal::threshold
