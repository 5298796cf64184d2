#pragma once

#include <algorithm>

#include "miscal/grid.hpp"

namespace miscal {

// Cost structure of a treat/don't-treat decision problem.
//
// The profit P = u_tp - u_fn is the utility gained by treating a diseased
// individual; the loss L = u_tn - u_fp is the utility lost by treating a
// healthy one. Both must be positive. The therapeutic threshold j_star is
// the risk level (in index units, real-valued) where treating and not
// treating break even: (m - j_star)/j_star = P/L. The symmetric costs
// (p_sym, l_sym) rescale (P, L) so the lower of the two equals 1.
struct CostContext {
  double u_tp = 0.0;
  double u_fp = 0.0;
  double u_fn = 0.0;
  double u_tn = 0.0;
  double profit = 0.0;  // P
  double loss = 0.0;    // L
  double j_star = 0.0;  // in (0, m), not snapped to the grid
  double p_sym = 0.0;   // P'
  double l_sym = 0.0;   // L'
  int m = 0;

  // min{m - j*, j*}: the normalizer of the disentangled Net Benefit.
  double min_cost_scale() const { return std::min(static_cast<double>(m) - j_star, j_star); }
};

CostContext make_cost_context(double u_tp, double u_fp, double u_fn, double u_tn,
                              const Grid& grid);

// Context from the therapeutic threshold alone. Only the ratio P/L matters,
// so the raw utilities are stored as the canonical pair u_tp = P = m - j*,
// u_tn = L = j*, with u_fn = u_fp = 0.
CostContext make_context_from_jstar(double j_star, const Grid& grid);

}  // namespace miscal
