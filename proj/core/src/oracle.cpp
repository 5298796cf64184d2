#include "miscal/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <thread>

#include "miscal/format.hpp"
#include "miscal/tolerances.hpp"

#include <nlohmann/json.hpp>

namespace miscal::oracle {

namespace {

// Single shared arithmetic path for the contribution of one level set to the
// pairwise regret Lambda(j_r) - Lambda(j). Enumeration and certificate
// replay both go through this, so replay is bit-exact.
inline double bin_term(int s, double mass, double y, double m, double jstar, double inv_min) {
  return s * mass * (m * y - jstar) * inv_min;
}

inline int side(long long bin, long long j_idx, long long jr_idx) {
  return static_cast<int>(bin > jr_idx) - static_cast<int>(bin > j_idx);
}

long long fine_floor(double j, int factor) {
  return static_cast<long long>(std::floor(j * factor + 1e-9));
}

void check_problem(double j, double jstar, double alpha, const Grid& grid) {
  if (!(jstar > 0.0) || !(jstar < grid.m)) {
    throw std::invalid_argument("oracle: degenerate costs, j_star must lie in (0, m), got " +
                                fmt_double(jstar));
  }
  if (!(alpha >= 0.0) || !(alpha <= 1.0)) {
    throw std::invalid_argument("oracle: alpha must lie in [0, 1], got " + fmt_double(alpha));
  }
  if (!(j >= 0.0) || !(j <= grid.m)) {
    throw std::invalid_argument("oracle: threshold j must lie in [0, m], got " + fmt_double(j));
  }
}

Witness trivial_witness(int grid_m, long long j_idx) {
  Witness w;
  w.grid_m = grid_m;
  w.bins = {0};
  w.mass = {1.0};
  w.ytilde = {0.0};
  w.j_r = j_idx;  // comparator equal to the evaluated threshold: zero regret
  w.j_index = j_idx;
  return w;
}

int worker_count(int jobs, long long tasks) {
  int n = jobs > 0 ? jobs : static_cast<int>(std::thread::hardware_concurrency());
  if (n < 1) n = 1;
  if (static_cast<long long>(n) > tasks) n = static_cast<int>(tasks);
  return n;
}

}  // namespace

void validate(const OracleConfig& cfg, const Grid& grid) {
  if (cfg.resolution < 4) {
    throw std::invalid_argument("oracle: resolution must be >= 4");
  }
  if (cfg.threshold_steps != 0 && cfg.threshold_steps < grid.m + 1) {
    throw std::invalid_argument("oracle: threshold_steps must be >= m+1");
  }
  if (cfg.support_cap < 1) {
    throw std::invalid_argument("oracle: support_cap must be >= 1");
  }
}

int refine_factor(int m, int resolution) {
  return std::max(1, (resolution + m - 1) / m);
}

BinnedPair Witness::to_pair() const {
  BinnedPair pair{Grid(grid_m)};
  for (size_t k = 0; k < bins.size(); ++k) {
    pair.mu[static_cast<size_t>(bins[k])] += mass[k];
    pair.ytilde[static_cast<size_t>(bins[k])] = ytilde[k];
  }
  return pair;
}

double replay(const OracleCertificate& cert, double jstar, const Grid& grid) {
  const double md = grid.m;
  const double inv_min = 1.0 / std::min(md - jstar, jstar);
  double r = 0.0;
  const Witness& w = cert.witness;
  for (size_t k = 0; k < w.bins.size(); ++k) {
    const int s = side(w.bins[k], w.j_index, w.j_r);
    if (s != 0) r += bin_term(s, w.mass[k], w.ytilde[k], md, jstar, inv_min);
  }
  return r;
}

OracleCertificate oracle_cost_mce(double j, double jstar, double alpha, const Grid& grid,
                                  const OracleConfig& cfg) {
  validate(cfg, grid);
  check_problem(j, jstar, alpha, grid);
  const int m = grid.m;
  const int K = refine_factor(m, cfg.resolution);
  const long long M = static_cast<long long>(K) * m;
  const double md = m;
  const double inv_min = 1.0 / std::min(md - jstar, jstar);
  const long long j_idx = fine_floor(j, K);

  double best = 0.0;
  Witness w = trivial_witness(static_cast<int>(M), j_idx);

  // Comparators: the original grid thresholds plus the treat-everyone
  // policy (jr = -1), which thresholds in [0, m] cannot express once the
  // 0-bin carries mass.
  for (int jr = -1; jr <= m; ++jr) {
    const long long jr_idx = jr < 0 ? -1 : static_cast<long long>(jr) * K;
    if (jr_idx == j_idx) continue;
    for (long long b = 0; b <= M; ++b) {
      const int s = side(b, j_idx, jr_idx);
      if (s == 0) continue;
      const double v = static_cast<double>(b) / static_cast<double>(M);
      const double lo = std::max(0.0, v - alpha);
      const double hi = std::min(1.0, v + alpha);
      const auto consider = [&](double vstar) {
        if (std::abs(vstar - v) > alpha + kNumericEps || vstar < 0.0 || vstar > 1.0) return;
        const double r = bin_term(s, 1.0, vstar, md, jstar, inv_min);
        if (r > best) {
          best = r;
          w.bins = {static_cast<int>(b)};
          w.mass = {1.0};
          w.ytilde = {vstar};
          w.j_r = jr_idx;
        }
      };
      // Absolute grid points t/M inside [lo, hi] (nested under resolution
      // doubling), plus the exact interval endpoints.
      const long long t_lo = static_cast<long long>(std::ceil(lo * M - 1e-9));
      const long long t_hi = static_cast<long long>(std::floor(hi * M + 1e-9));
      for (long long t = t_lo; t <= t_hi; ++t) {
        consider(static_cast<double>(t) / static_cast<double>(M));
      }
      consider(lo);
      consider(hi);
    }
  }

  OracleCertificate cert;
  cert.j = j;
  cert.approx_cost = best;
  cert.discretization_bound = md * inv_min * (2.0 / static_cast<double>(M));
  cert.witness = w;
  return cert;
}

OracleCertificate oracle_cost_ece(double j, double jstar, double alpha, const Grid& grid,
                                  const OracleConfig& cfg) {
  validate(cfg, grid);
  check_problem(j, jstar, alpha, grid);
  const int m = grid.m;
  const int K = refine_factor(m, cfg.resolution);
  const long long M = static_cast<long long>(K) * m;
  const double md = m;
  const double Md = static_cast<double>(M);
  const double inv_min = 1.0 / std::min(md - jstar, jstar);
  const long long j_idx = fine_floor(j, K);

  double best = 0.0;
  Witness w = trivial_witness(static_cast<int>(M), j_idx);

  const auto consider = [&](int s, long long b1, double mu1, double delta1, long long anchor,
                            long long jr_idx) {
    if (mu1 * std::abs(delta1) > alpha + kNumericEps) return;
    const double v1 = static_cast<double>(b1) / Md;
    double vstar1 = v1 + delta1;
    if (vstar1 > 1.0 && vstar1 < 1.0 + 1e-12) vstar1 = 1.0;
    if (vstar1 < 0.0 && vstar1 > -1e-12) vstar1 = 0.0;
    if (vstar1 < 0.0 || vstar1 > 1.0) return;
    const double r = bin_term(s, mu1, vstar1, md, jstar, inv_min);
    if (r > best) {
      best = r;
      if (mu1 >= 1.0) {
        w.bins = {static_cast<int>(b1)};
        w.mass = {1.0};
        w.ytilde = {vstar1};
      } else if (anchor < b1) {
        w.bins = {static_cast<int>(anchor), static_cast<int>(b1)};
        w.mass = {1.0 - mu1, mu1};
        w.ytilde = {static_cast<double>(anchor) / Md, vstar1};
      } else {
        w.bins = {static_cast<int>(b1), static_cast<int>(anchor)};
        w.mass = {mu1, 1.0 - mu1};
        w.ytilde = {vstar1, static_cast<double>(anchor) / Md};
      }
      w.j_r = jr_idx;
    }
  };

  for (int jr = -1; jr <= m; ++jr) {
    const long long jr_idx = jr < 0 ? -1 : static_cast<long long>(jr) * K;
    if (jr_idx == j_idx) continue;
    const long long w_lo = std::min(jr_idx, j_idx) + 1;
    const long long w_hi = std::max(jr_idx, j_idx);
    if (w_lo > w_hi) continue;
    const int s = jr_idx < j_idx ? 1 : -1;
    // The off-window level set cancels from Lambda(j_r) - Lambda(j), so its
    // mass sits on a fixed outside bin, calibrated (delta2 = 0; any other
    // delta2 only consumes budget).
    const bool has_anchor = w_lo > 0 || w_hi < M;
    const long long anchor = w_lo > 0 ? 0 : M;
    for (long long b1 = w_lo; b1 <= w_hi; ++b1) {
      const double v1 = static_cast<double>(b1) / Md;
      // Mass on the resolution grid, shift within the per-mass budget.
      for (long long mt = has_anchor ? 1 : M; mt <= M; ++mt) {
        const double mu1 = static_cast<double>(mt) / Md;
        const double budget = alpha / mu1;
        const double dmax_up = std::min(1.0 - v1, budget);
        const double dmax_dn = std::min(v1, budget);
        const long long t_lo = -static_cast<long long>(std::floor(dmax_dn * M + 1e-9));
        const long long t_hi = static_cast<long long>(std::floor(dmax_up * M + 1e-9));
        for (long long t = t_lo; t <= t_hi; ++t) {
          consider(s, b1, mu1, static_cast<double>(t) / Md, anchor, jr_idx);
        }
        // Exact interval endpoints (budget- or range-tight shifts).
        consider(s, b1, mu1, -dmax_dn, anchor, jr_idx);
        consider(s, b1, mu1, dmax_up, anchor, jr_idx);
      }
      // Budget-tight mass mu = min(1, alpha/|delta|) for each shift; the
      // regret is linear and increasing in the mass, so the continuous
      // optimum sits on the budget boundary between mass grid points.
      if (has_anchor && alpha > 0.0) {
        const auto tight = [&](double delta) {
          if (delta == 0.0) return;
          consider(s, b1, std::min(1.0, alpha / std::abs(delta)), delta, anchor, jr_idx);
        };
        for (long long t = 1; t <= M - b1; ++t) tight(static_cast<double>(t) / Md);
        tight(1.0 - v1);
        for (long long t = 1; t <= b1; ++t) tight(-static_cast<double>(t) / Md);
        tight(-v1);
      }
    }
  }

  OracleCertificate cert;
  cert.j = j;
  cert.approx_cost = best;
  cert.discretization_bound =
      inv_min * (2.0 * md + std::max(jstar, md - jstar)) / static_cast<double>(M);
  cert.witness = w;
  return cert;
}

OracleCertificate oracle_cost(double j, double jstar, double alpha, Relation relation,
                              const Grid& grid, const OracleConfig& cfg) {
  return relation == Relation::mce ? oracle_cost_mce(j, jstar, alpha, grid, cfg)
                                   : oracle_cost_ece(j, jstar, alpha, grid, cfg);
}

namespace {

struct GeneralBest {
  double value = 0.0;
  Witness witness;
  bool improved = false;
};

// Enumerates ytilde tuples for a fixed support and mass vector, pruning on
// the running budget, and scans all comparators for each complete tuple.
struct GeneralScanner {
  const std::vector<int>& support;
  const std::vector<double>& mass;
  Relation relation;
  double alpha;
  double md;
  double jstar;
  double inv_min;
  long long j_idx;
  int m;
  const std::vector<std::vector<double>>& y_candidates;  // per support slot
  std::vector<double> y;
  GeneralBest* out;

  void scan(size_t k, double budget_used) {
    if (k == support.size()) {
      for (int jr = -1; jr <= m; ++jr) {
        const long long jr_idx = jr < 0 ? -1 : jr;
        if (jr_idx == j_idx) continue;
        double r = 0.0;
        for (size_t q = 0; q < support.size(); ++q) {
          const int s = side(support[q], j_idx, jr_idx);
          if (s != 0) r += bin_term(s, mass[q], y[q], md, jstar, inv_min);
        }
        if (r > out->value) {
          out->value = r;
          out->improved = true;
          Witness& w = out->witness;
          w.grid_m = m;
          w.bins = support;
          w.mass = mass;
          w.ytilde = y;
          w.j_r = jr_idx;
          w.j_index = j_idx;
        }
      }
      return;
    }
    const double v = support[k] / md;
    for (double cand : y_candidates[k]) {
      const double gap = std::abs(cand - v);
      if (relation == Relation::mce) {
        if (gap > alpha + kNumericEps) continue;
        y[k] = cand;
        scan(k + 1, 0.0);
      } else {
        const double used = budget_used + mass[k] * gap;
        if (used > alpha + kNumericEps) continue;
        y[k] = cand;
        scan(k + 1, used);
      }
    }
  }
};

void general_masses(int parts, int total, std::vector<int>& acc,
                    const std::function<void(const std::vector<int>&)>& emit) {
  if (parts == 1) {
    acc.push_back(total);
    emit(acc);
    acc.pop_back();
    return;
  }
  for (int c = 1; c <= total - (parts - 1); ++c) {
    acc.push_back(c);
    general_masses(parts - 1, total - c, acc, emit);
    acc.pop_back();
  }
}

}  // namespace

OracleCertificate oracle_general(double j, double jstar, double alpha, Relation relation,
                                 const Grid& grid, const OracleConfig& cfg) {
  validate(cfg, grid);
  check_problem(j, jstar, alpha, grid);
  const int m = grid.m;
  if (m > 12) {
    const double states = std::pow(static_cast<double>(m + 1), cfg.support_cap) *
                          std::pow(static_cast<double>(cfg.resolution + 1), 2.0 * cfg.support_cap);
    throw std::invalid_argument(
        "oracle_general: m = " + std::to_string(m) +
        " exceeds the m <= 12 budget guard (roughly " + fmt_double(states) +
        " adversary states at support_cap " + std::to_string(cfg.support_cap) + ")");
  }
  const int cap = std::min(cfg.support_cap, m + 1);
  const int R = cfg.resolution;
  const double md = m;
  const double inv_min = 1.0 / std::min(md - jstar, jstar);
  const long long j_idx = fine_floor(j, 1);

  // All supports of size 1..cap, in lexicographic order.
  std::vector<std::vector<int>> supports;
  std::vector<int> pick;
  const std::function<void(int, int)> build = [&](int start, int remaining) {
    if (!pick.empty()) supports.push_back(pick);
    if (remaining == 0) return;
    for (int b = start; b <= m; ++b) {
      pick.push_back(b);
      build(b + 1, remaining - 1);
      pick.pop_back();
    }
  };
  pick.clear();
  for (int b = 0; b <= m; ++b) {
    pick.push_back(b);
    build(b + 1, cap - 1);
    pick.pop_back();
  }

  // Per-bin ytilde candidates: the resolution grid plus the exact MCE
  // extremes v +- alpha.
  std::vector<std::vector<double>> y_all(static_cast<size_t>(m) + 1);
  for (int b = 0; b <= m; ++b) {
    auto& list = y_all[static_cast<size_t>(b)];
    for (int t = 0; t <= R; ++t) list.push_back(static_cast<double>(t) / R);
    if (relation == Relation::mce) {
      const double v = b / md;
      list.push_back(std::max(0.0, v - alpha));
      list.push_back(std::min(1.0, v + alpha));
    }
  }

  const int workers = worker_count(cfg.jobs, static_cast<long long>(supports.size()));
  std::vector<GeneralBest> partial(static_cast<size_t>(workers));
  const auto run = [&](int wid, size_t begin, size_t end) {
    GeneralBest& local = partial[static_cast<size_t>(wid)];
    for (size_t si = begin; si < end; ++si) {
      const auto& support = supports[si];
      std::vector<std::vector<double>> cands;
      cands.reserve(support.size());
      for (int b : support) cands.push_back(y_all[static_cast<size_t>(b)]);
      std::vector<int> acc;
      std::vector<double> mass(support.size());
      general_masses(static_cast<int>(support.size()), R, acc, [&](const std::vector<int>& c) {
        for (size_t q = 0; q < c.size(); ++q) mass[q] = static_cast<double>(c[q]) / R;
        GeneralScanner scanner{support, mass,  relation, alpha, md,
                               jstar,   inv_min, j_idx,  m,     cands,
                               std::vector<double>(support.size()), &local};
        scanner.scan(0, 0.0);
      });
    }
  };

  if (workers == 1) {
    run(0, 0, supports.size());
  } else {
    std::vector<std::thread> pool;
    const size_t chunk = (supports.size() + static_cast<size_t>(workers) - 1) /
                         static_cast<size_t>(workers);
    for (int wid = 0; wid < workers; ++wid) {
      const size_t begin = static_cast<size_t>(wid) * chunk;
      const size_t end = std::min(supports.size(), begin + chunk);
      if (begin < end) pool.emplace_back(run, wid, begin, end);
    }
    for (auto& t : pool) t.join();
  }

  // Merge in chunk order: equal values keep the earliest enumerated witness.
  OracleCertificate cert;
  cert.j = j;
  cert.approx_cost = 0.0;
  cert.witness = trivial_witness(m, j_idx);
  for (const auto& p : partial) {
    if (p.improved && p.value > cert.approx_cost) {
      cert.approx_cost = p.value;
      cert.witness = p.witness;
    }
  }
  cert.discretization_bound =
      inv_min * (md + cap * std::max(jstar, md - jstar)) / static_cast<double>(R);
  return cert;
}

ArgminResult oracle_argmin(double jstar, double alpha, Relation relation, const Grid& grid,
                           const OracleConfig& cfg) {
  validate(cfg, grid);
  check_problem(0.0, jstar, alpha, grid);
  const int m = grid.m;
  const int K = refine_factor(m, cfg.resolution);
  const int steps = cfg.threshold_steps > 0 ? cfg.threshold_steps : K * m + 1;
  const double step = static_cast<double>(m) / (steps - 1);

  struct Entry {
    double cost = 0.0;
    double dist = 0.0;
    double candidate = 0.0;
    bool set = false;
  };
  std::vector<OracleCertificate> certs(static_cast<size_t>(steps));
  const auto eval = [&](int begin, int end) {
    OracleConfig serial = cfg;
    serial.jobs = 1;
    for (int i = begin; i < end; ++i) {
      const double cand = static_cast<double>(i) * m / (steps - 1);
      certs[static_cast<size_t>(i)] = oracle_cost(cand, jstar, alpha, relation, grid, serial);
    }
  };
  const int workers = worker_count(cfg.jobs, steps);
  if (workers == 1) {
    eval(0, steps);
  } else {
    std::vector<std::thread> pool;
    const int chunk = (steps + workers - 1) / workers;
    for (int wid = 0; wid < workers; ++wid) {
      const int begin = wid * chunk;
      const int end = std::min(steps, begin + chunk);
      if (begin < end) pool.emplace_back(eval, begin, end);
    }
    for (auto& t : pool) t.join();
  }

  // Ties on cost go to the candidate nearest j_star, then to the smallest.
  // Candidates are distinct, so the winner is unique and independent of the
  // evaluation partitioning.
  int best = 0;
  for (int i = 1; i < steps; ++i) {
    const double cand = static_cast<double>(i) * m / (steps - 1);
    const double best_cand = static_cast<double>(best) * m / (steps - 1);
    const double ci = certs[static_cast<size_t>(i)].approx_cost;
    const double cb = certs[static_cast<size_t>(best)].approx_cost;
    if (ci < cb ||
        (ci == cb && std::abs(cand - jstar) < std::abs(best_cand - jstar))) {
      best = i;
    }
  }

  ArgminResult out;
  out.j_min = static_cast<double>(best) * m / (steps - 1);
  out.cost = certs[static_cast<size_t>(best)].approx_cost;
  out.candidate_step = step;
  out.certificate = certs[static_cast<size_t>(best)];
  return out;
}

nlohmann::json to_json(const OracleCertificate& cert) {
  const Witness& w = cert.witness;
  nlohmann::json mu = nlohmann::json::array();
  nlohmann::json ytilde = nlohmann::json::array();
  size_t k = 0;
  for (int b = 0; b <= w.grid_m; ++b) {
    if (k < w.bins.size() && w.bins[k] == b) {
      mu.push_back(w.mass[k]);
      ytilde.push_back(w.ytilde[k]);
      ++k;
    } else {
      mu.push_back(0.0);
      ytilde.push_back(nullptr);
    }
  }
  return {{"j", cert.j},
          {"cost", cert.approx_cost},
          {"bound", cert.discretization_bound},
          {"witness",
           {{"grid_m", w.grid_m},
            {"j_r", w.j_r},
            {"j_index", w.j_index},
            {"mu", mu},
            {"ytilde", ytilde}}}};
}

}  // namespace miscal::oracle
