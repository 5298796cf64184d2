#include "miscal/cost_context.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "miscal/tolerances.hpp"

namespace miscal {

namespace {

// Symmetric costs: fix the lower of (P', L') to 1 while preserving P/L.
// j* = m/2 is its own case; both adjacent rules give P' = L' = 1 there.
void fill_symmetric_costs(CostContext& ctx) {
  const double m = ctx.m;
  if (ctx.j_star < m / 2.0) {
    ctx.l_sym = 1.0;
    ctx.p_sym = (m - ctx.j_star) / ctx.j_star;
  } else if (ctx.j_star > m / 2.0) {
    ctx.p_sym = 1.0;
    ctx.l_sym = ctx.j_star / (m - ctx.j_star);
  } else {
    ctx.p_sym = 1.0;
    ctx.l_sym = 1.0;
  }
}

}  // namespace

CostContext make_cost_context(double u_tp, double u_fp, double u_fn, double u_tn,
                              const Grid& grid) {
  const double profit = u_tp - u_fn;
  const double loss = u_tn - u_fp;
  if (!(profit > 0.0)) {
    throw std::invalid_argument("cost context: profit P = u_tp - u_fn must be positive, got " +
                                std::to_string(profit));
  }
  if (!(loss > 0.0)) {
    throw std::invalid_argument("cost context: loss L = u_tn - u_fp must be positive, got " +
                                std::to_string(loss));
  }
  CostContext ctx;
  ctx.u_tp = u_tp;
  ctx.u_fp = u_fp;
  ctx.u_fn = u_fn;
  ctx.u_tn = u_tn;
  ctx.profit = profit;
  ctx.loss = loss;
  ctx.m = grid.m;
  // (m - j*)/j* = P/L  =>  j* = m*L/(P + L).
  ctx.j_star = grid.m * loss / (profit + loss);
  fill_symmetric_costs(ctx);
  return ctx;
}

CostContext make_context_from_jstar(double j_star, const Grid& grid) {
  if (!(j_star > 0.0) || !(j_star < grid.m)) {
    throw std::invalid_argument("cost context: j_star must lie strictly inside (0, m), got " +
                                std::to_string(j_star) + " with m = " + std::to_string(grid.m));
  }
  CostContext ctx;
  ctx.m = grid.m;
  ctx.j_star = j_star;
  ctx.profit = grid.m - j_star;
  ctx.loss = j_star;
  ctx.u_tp = ctx.profit;
  ctx.u_tn = ctx.loss;
  ctx.u_fp = 0.0;
  ctx.u_fn = 0.0;
  fill_symmetric_costs(ctx);
  return ctx;
}

}  // namespace miscal
