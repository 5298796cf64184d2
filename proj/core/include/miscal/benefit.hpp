#pragma once

#include <iosfwd>
#include <vector>

#include "miscal/binned_pair.hpp"
#include "miscal/cost_context.hpp"

#include <nlohmann/json_fwd.hpp>

namespace miscal::benefit {

struct TpFp {
  double tp = 0.0;
  double fp = 0.0;
};

// Population fractions of true/false positives of the classifier that
// treats bins i > j (strict inequality).
TpFp tp_fp_fractions(const BinnedPair& pair, int j);

// Disentangled symmetric Net Benefit of thresholding at j under the costs
// implied by ctx.j_star:
//
//   Lambda(j) = sum_{i>j} mu_i * (m*ytilde_i - j*) / min{m-j*, j*}
//
// which equals p_sym*TP - l_sym*FP; both routes are computed and
// cross-checked internally on every call. j = -1 is accepted as an
// extension meaning "treat everyone, including bin 0" (used as the
// treat-all comparator by the oracle); the documented threshold family is
// j in {0..m}.
double net_benefit(const BinnedPair& pair, int j, const CostContext& ctx);

struct RegretResult {
  double value = 0.0;
  int best_j = 0;  // smallest maximizing comparator threshold
};

// max_{j' in {0..m}} Lambda(j') - Lambda(j).
RegretResult regret(const BinnedPair& pair, int j, const CostContext& ctx);

// max{Lambda(0), Lambda(m)} - Lambda(j): regret against the two naive
// baselines only. Never exceeds regret().
double clinical_harm(const BinnedPair& pair, int j, const CostContext& ctx);

struct CurvePoint {
  int j = 0;
  double threshold = 0.0;
  double nb_model = 0.0;
  double nb_treat_all = 0.0;
  double nb_treat_none = 0.0;
  double utility = 0.0;  // nb_model - max(nb_treat_all, nb_treat_none)
};

struct DecisionCurve {
  double jstar = 0.0;
  std::vector<CurvePoint> points;  // one per j in {0..m}
};

DecisionCurve decision_curve(const BinnedPair& pair, const CostContext& ctx);

// CSV with pinned header "j,threshold,nb_model,nb_all,nb_none,utility".
void write_csv(const DecisionCurve& curve, std::ostream& os);

nlohmann::json to_json(const DecisionCurve& curve);

}  // namespace miscal::benefit
