#include "miscal/benefit.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>

#include "miscal/format.hpp"
#include "miscal/tolerances.hpp"

#include <nlohmann/json.hpp>

namespace miscal::benefit {

namespace {

void check_args(const BinnedPair& pair, int j, const CostContext& ctx) {
  require_valid(pair);
  if (j < -1 || j > pair.grid.m) {
    throw std::invalid_argument("threshold index " + std::to_string(j) + " outside -1.." +
                                std::to_string(pair.grid.m));
  }
  if (pair.grid.m != ctx.m) {
    throw std::invalid_argument("pair and cost context use different grids");
  }
  if (!(ctx.min_cost_scale() > 0.0)) {
    throw std::invalid_argument("degenerate costs: j_star at the grid boundary");
  }
}

}  // namespace

TpFp tp_fp_fractions(const BinnedPair& pair, int j) {
  require_valid(pair);
  if (j < -1 || j > pair.grid.m) {
    throw std::invalid_argument("threshold index " + std::to_string(j) + " outside -1.." +
                                std::to_string(pair.grid.m));
  }
  TpFp out;
  for (int i = j + 1; i <= pair.grid.m; ++i) {
    const double mu = pair.mu[static_cast<size_t>(i)];
    if (mu > 0.0) {
      const double y = *pair.ytilde[static_cast<size_t>(i)];
      out.tp += mu * y;
      out.fp += mu * (1.0 - y);
    }
  }
  return out;
}

double net_benefit(const BinnedPair& pair, int j, const CostContext& ctx) {
  check_args(pair, j, ctx);
  const double inv = 1.0 / ctx.min_cost_scale();
  const double m = pair.grid.m;
  double lambda = 0.0;
  for (int i = j + 1; i <= pair.grid.m; ++i) {
    const double mu = pair.mu[static_cast<size_t>(i)];
    if (mu > 0.0) {
      lambda += mu * (m * *pair.ytilde[static_cast<size_t>(i)] - ctx.j_star) * inv;
    }
  }
  // Mandated cross-check: the closed-form sum must agree with the
  // definitional route p_sym*TP - l_sym*FP.
  const TpFp f = tp_fp_fractions(pair, j);
  const double dual = ctx.p_sym * f.tp - ctx.l_sym * f.fp;
  const double scale = std::max({1.0, std::abs(lambda), std::abs(dual)});
  if (std::abs(lambda - dual) > 1e-12 * scale) {
    throw std::logic_error("net benefit dual-computation mismatch: " + fmt_double(lambda) +
                           " vs " + fmt_double(dual));
  }
  return lambda;
}

RegretResult regret(const BinnedPair& pair, int j, const CostContext& ctx) {
  check_args(pair, j, ctx);
  const int m = pair.grid.m;
  const double inv = 1.0 / ctx.min_cost_scale();
  // Lambda(j') is a suffix sum of per-bin contributions; suffix[k] = Lambda(k-1).
  std::vector<double> suffix(static_cast<size_t>(m) + 2, 0.0);
  for (int i = m; i >= 0; --i) {
    const double mu = pair.mu[static_cast<size_t>(i)];
    const double c = mu > 0.0
                         ? mu * (static_cast<double>(m) * *pair.ytilde[static_cast<size_t>(i)] -
                                 ctx.j_star) *
                               inv
                         : 0.0;
    suffix[static_cast<size_t>(i)] = suffix[static_cast<size_t>(i) + 1] + c;
  }
  RegretResult best{suffix[1] - suffix[static_cast<size_t>(j) + 1], 0};
  for (int jp = 1; jp <= m; ++jp) {
    const double value = suffix[static_cast<size_t>(jp) + 1] - suffix[static_cast<size_t>(j) + 1];
    if (value > best.value) {
      best = {value, jp};
    }
  }
  return best;
}

double clinical_harm(const BinnedPair& pair, int j, const CostContext& ctx) {
  const double nb_all = net_benefit(pair, 0, ctx);
  const double nb_none = net_benefit(pair, pair.grid.m, ctx);
  return std::max(nb_all, nb_none) - net_benefit(pair, j, ctx);
}

DecisionCurve decision_curve(const BinnedPair& pair, const CostContext& ctx) {
  check_args(pair, 0, ctx);
  DecisionCurve curve;
  curve.jstar = ctx.j_star;
  const int m = pair.grid.m;
  const double nb_all = net_benefit(pair, 0, ctx);
  const double nb_none = 0.0;  // empty sum at j = m
  const double baseline = std::max(nb_all, nb_none);
  curve.points.reserve(static_cast<size_t>(m) + 1);
  for (int j = 0; j <= m; ++j) {
    const double nb = net_benefit(pair, j, ctx);
    curve.points.push_back({j, pair.grid.threshold(j), nb, nb_all, nb_none, nb - baseline});
  }
  return curve;
}

void write_csv(const DecisionCurve& curve, std::ostream& os) {
  os << "j,threshold,nb_model,nb_all,nb_none,utility\n";
  for (const auto& p : curve.points) {
    os << p.j << ',' << fmt_double(p.threshold) << ',' << fmt_double(p.nb_model) << ','
       << fmt_double(p.nb_treat_all) << ',' << fmt_double(p.nb_treat_none) << ','
       << fmt_double(p.utility) << '\n';
  }
}

nlohmann::json to_json(const DecisionCurve& curve) {
  nlohmann::json points = nlohmann::json::array();
  for (const auto& p : curve.points) {
    points.push_back({{"j", p.j},
                      {"threshold", p.threshold},
                      {"nb_model", p.nb_model},
                      {"nb_all", p.nb_treat_all},
                      {"nb_none", p.nb_treat_none},
                      {"utility", p.utility}});
  }
  return {{"jstar", curve.jstar}, {"points", points}};
}

}  // namespace miscal::benefit
