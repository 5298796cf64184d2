#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "miscal/binned_pair.hpp"
#include "miscal/grid.hpp"
#include "miscal/relation.hpp"

#include <nlohmann/json_fwd.hpp>

namespace miscal::oracle {

struct OracleConfig {
  // Grid steps per unit for the adversary parameters (v, v*, mu, delta).
  // Internally rounded up to a multiple of m so witnesses stay representable
  // as BinnedPairs on a refined grid.
  int resolution = 50;
  // Candidate threshold count for argmin; 0 means one candidate per refined
  // grid point (refine_factor(m)*m + 1).
  int threshold_steps = 0;
  // Max level-set support of the general adversary (1 = constant predictors,
  // 2 = two-value predictors, >=3 only for reduction validation).
  int support_cap = 1;
  // Worker threads; 0 = hardware concurrency. Results are identical for any
  // job count.
  int jobs = 0;
};

void validate(const OracleConfig& cfg, const Grid& grid);

// Adversary level sets live K times finer than the prediction grid.
int refine_factor(int m, int resolution);

// A witness is a legal BinnedPair on the (possibly refined) grid together
// with the comparator threshold that realizes the regret. j_r is a bin index
// on the witness grid; -1 encodes the treat-everyone comparator (the one
// constant policy that thresholds j in [0, m] cannot express once bin 0
// carries mass).
struct Witness {
  int grid_m = 0;
  std::vector<int> bins;       // support, ascending
  std::vector<double> mass;    // masses, parallel to bins
  std::vector<double> ytilde;  // conditional means, parallel to bins
  long long j_r = 0;
  long long j_index = 0;  // evaluated threshold as a witness-grid index (floor)

  BinnedPair to_pair() const;
};

struct OracleCertificate {
  double j = 0.0;  // evaluated threshold, original index units
  double approx_cost = 0.0;
  // A priori Lipschitz bound on the gap between approx_cost and the true
  // supremum over the searched adversary class, O(1/resolution).
  double discretization_bound = 0.0;
  Witness witness;
};

// Pairwise regret Lambda(j_r) - Lambda(j_index) of the witness, evaluated
// with the exact arithmetic the enumeration used; reproduces approx_cost
// bit-for-bit.
double replay(const OracleCertificate& cert, double jstar, const Grid& grid);

// Brute force over constant adversaries (v, v*): v on the refined prediction
// grid, v* on an endpoint-anchored resolution grid within [v-a, v+a],
// comparators over {treat-all} and the original grid thresholds.
OracleCertificate oracle_cost_mce(double j, double jstar, double alpha, const Grid& grid,
                                  const OracleConfig& cfg);

// Brute force over two-value adversaries (mu1, v1, v2, delta1, delta2):
// v1 ranges over the refined bins between the comparator and j, delta1 over
// both shift directions on the resolution grid subject to the budget
// mu1*|delta1| + (1-mu1)*|delta2| <= alpha; on top of the mass grid, the
// budget-tight mass min(1, alpha/|delta1|) is tried for every shift. The
// off-window value v2 cancels from every regret difference, so its mass is
// anchored on a fixed outside bin with delta2 = 0 (any delta2 > 0 only
// consumes budget).
OracleCertificate oracle_cost_ece(double j, double jstar, double alpha, const Grid& grid,
                                  const OracleConfig& cfg);

OracleCertificate oracle_cost(double j, double jstar, double alpha, Relation relation,
                              const Grid& grid, const OracleConfig& cfg);

// Exhaustive search over adversaries with up to cfg.support_cap level sets
// (masses on a resolution simplex grid, values on the prediction grid,
// ytilde on a budget-constrained resolution grid). Exponential in
// support_cap; refuses m > 12.
OracleCertificate oracle_general(double j, double jstar, double alpha, Relation relation,
                                 const Grid& grid, const OracleConfig& cfg);

struct ArgminResult {
  double j_min = 0.0;
  double cost = 0.0;
  double candidate_step = 0.0;
  OracleCertificate certificate;  // at j_min
};

// Minimizes the oracle cost over evenly spaced candidate thresholds in
// [0, m]; ties go to the candidate nearest j*, then to the smallest.
ArgminResult oracle_argmin(double jstar, double alpha, Relation relation, const Grid& grid,
                           const OracleConfig& cfg);

nlohmann::json to_json(const OracleCertificate& cert);

}  // namespace miscal::oracle
