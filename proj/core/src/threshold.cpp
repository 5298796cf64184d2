#include "miscal/threshold.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <thread>
#include <vector>

#include "miscal/format.hpp"

#include <nlohmann/json.hpp>

namespace miscal::threshold {

namespace {

void check_ranges(double jstar, double alpha, const Grid& grid) {
  if (!(alpha >= 0.0) || !(alpha <= 1.0)) {
    throw std::invalid_argument("alpha must lie in [0, 1], got " + fmt_double(alpha));
  }
  if (!(jstar > 0.0) || !(jstar < grid.m)) {
    throw std::invalid_argument("j_star must lie strictly inside (0, m), got " +
                                fmt_double(jstar));
  }
}

void check_j(double j, const Grid& grid) {
  if (!(j >= 0.0) || !(j <= grid.m)) {
    throw std::invalid_argument("threshold j must lie in [0, m], got " + fmt_double(j));
  }
}

}  // namespace

int ThresholdResult::floor_index() const {
  return static_cast<int>(std::floor(std::min(j_hat, static_cast<double>(m))));
}

int ThresholdResult::nearest_index() const {
  long long i = std::llround(j_hat);
  if (i < 0) i = 0;
  if (i > m) i = m;
  return static_cast<int>(i);
}

double worst_case_cost_mce(double j, double jstar, double alpha, const Grid& grid) {
  check_ranges(jstar, alpha, grid);
  check_j(j, grid);
  const double m = grid.m;
  const double am = alpha * m;
  const double up = std::min(m - jstar, j - jstar + am);
  const double down = std::min(jstar, jstar - j + am);
  return std::max(up, down) / std::min(m - jstar, jstar);
}

double worst_case_cost_ece(double j, double jstar, double alpha, const Grid& grid) {
  check_ranges(jstar, alpha, grid);
  check_j(j, grid);
  const double m = grid.m;
  const double am = alpha * m;
  const double inf = std::numeric_limits<double>::infinity();

  // Ratio terms guard their denominators; for j_star strictly inside (0, m)
  // no applicable case can actually divide by zero.
  const auto ratio_left = [&] { return m - j > 0.0 ? am * (m - jstar) / (m - j) : inf; };
  const auto ratio_right = [&] { return j > 0.0 ? am * jstar / j : inf; };

  double cost = -inf;
  if (j <= jstar && j <= am) {
    cost = std::max(cost, std::max(jstar, ratio_left()));
  }
  if (j >= am && j <= jstar) {
    cost = std::max(cost, std::max(jstar - j + am, ratio_left()));
  }
  if (j >= jstar && j <= (1.0 - alpha) * m) {
    cost = std::max(cost, std::max(j - jstar + am, ratio_right()));
  }
  if (j >= jstar && j >= (1.0 - alpha) * m) {
    cost = std::max(cost, std::max(m - jstar, ratio_right()));
  }
  return cost / std::min(m - jstar, jstar);
}

double worst_case_cost(double j, double jstar, double alpha, Relation relation,
                       const Grid& grid) {
  return relation == Relation::mce ? worst_case_cost_mce(j, jstar, alpha, grid)
                                   : worst_case_cost_ece(j, jstar, alpha, grid);
}

ThresholdResult conservative_threshold_mce(double alpha, double jstar, const Grid& grid) {
  check_ranges(jstar, alpha, grid);
  const double m = grid.m;
  const double am = alpha * m;
  ThresholdResult res;
  res.relation = Relation::mce;
  res.alpha = alpha;
  res.jstar = jstar;
  res.m = grid.m;
  if (jstar <= am / 2.0) {
    res.j_hat = 0.0;
    res.branch = "left-clamp";
  } else if (jstar <= am) {
    res.j_hat = 2.0 * jstar - am;
    res.branch = "left-linear";
  } else if (jstar <= (1.0 - alpha) * m) {
    res.j_hat = jstar;
    res.branch = "identity";
  } else if (jstar <= (1.0 - alpha / 2.0) * m) {
    res.j_hat = 2.0 * jstar - (1.0 - alpha) * m;
    res.branch = "right-linear";
  } else {
    res.j_hat = m;
    res.branch = "right-clamp";
  }
  res.j_hat = std::clamp(res.j_hat, 0.0, m);
  res.cost_at_j_hat = worst_case_cost_mce(res.j_hat, jstar, alpha, grid);
  res.cost_at_jstar = worst_case_cost_mce(jstar, jstar, alpha, grid);
  return res;
}

ThresholdResult conservative_threshold_ece(double alpha, double jstar, const Grid& grid,
                                           EceLeftBranch left) {
  check_ranges(jstar, alpha, grid);
  const double m = grid.m;
  const double am = alpha * m;
  ThresholdResult res;
  res.relation = Relation::ece;
  res.alpha = alpha;
  res.jstar = jstar;
  res.m = grid.m;
  // The three candidate regions incur worst-case numerators j*, am and
  // m - j* respectively; pick the cheapest. For alpha <= 1/2 this is
  // exactly the case split j* < am | middle | j* > (1-a)m, and at the
  // region boundaries (ties) the middle case wins.
  const double left_cost = jstar;
  const double right_cost = m - jstar;
  if (left_cost < am && left_cost <= right_cost) {
    const double clamp_at = left == EceLeftBranch::theorem ? 1.0 : 0.0;
    res.j_hat = std::max(clamp_at, (1.0 + alpha) * m - am * m / jstar);
    res.branch = "left";
  } else if (right_cost < am && right_cost < left_cost) {
    res.j_hat = std::min(m, am * jstar / (m - jstar));
    res.branch = "right";
  } else {
    res.j_hat = jstar;
    res.branch = "identity";
  }
  res.j_hat = std::clamp(res.j_hat, 0.0, m);
  res.cost_at_j_hat = worst_case_cost_ece(res.j_hat, jstar, alpha, grid);
  res.cost_at_jstar = worst_case_cost_ece(jstar, jstar, alpha, grid);
  return res;
}

ThresholdResult conservative_threshold(double alpha, double jstar, Relation relation,
                                       const Grid& grid, EceLeftBranch left) {
  return relation == Relation::mce ? conservative_threshold_mce(alpha, jstar, grid)
                                   : conservative_threshold_ece(alpha, jstar, grid, left);
}

std::vector<SweepRow> sweep(double alpha, const Grid& grid, Relation relation, int jstar_steps,
                            EceLeftBranch left, int jobs) {
  if (jstar_steps < 2) {
    throw std::invalid_argument("sweep: jstar_steps must be >= 2");
  }
  std::vector<SweepRow> rows(static_cast<size_t>(jstar_steps));
  const auto fill = [&](int begin, int end) {
    for (int k = begin; k < end; ++k) {
      const double jstar =
          static_cast<double>(grid.m) * (k + 1) / static_cast<double>(jstar_steps + 1);
      const ThresholdResult r = conservative_threshold(alpha, jstar, relation, grid, left);
      rows[static_cast<size_t>(k)] = {jstar, r.j_hat, r.branch};
    }
  };
  int workers = jobs > 0 ? jobs : static_cast<int>(std::thread::hardware_concurrency());
  workers = std::clamp(workers, 1, jstar_steps);
  if (workers == 1) {
    fill(0, jstar_steps);
  } else {
    std::vector<std::thread> pool;
    const int chunk = (jstar_steps + workers - 1) / workers;
    for (int w = 0; w < workers; ++w) {
      const int begin = w * chunk;
      const int end = std::min(jstar_steps, begin + chunk);
      if (begin < end) pool.emplace_back(fill, begin, end);
    }
    for (auto& t : pool) t.join();
  }
  return rows;
}

void write_csv(const std::vector<SweepRow>& rows, std::ostream& os) {
  os << "jstar,j_hat,branch\n";
  for (const auto& r : rows) {
    os << fmt_double(r.jstar) << ',' << fmt_double(r.j_hat) << ',' << r.branch << '\n';
  }
}

nlohmann::json to_json(const ThresholdResult& res) {
  return {{"alpha", res.alpha},
          {"branch", res.branch},
          {"cost_at_j_hat", res.cost_at_j_hat},
          {"cost_at_jstar", res.cost_at_jstar},
          {"j_hat", res.j_hat},
          {"j_hat_floor", res.floor_index()},
          {"j_hat_nearest", res.nearest_index()},
          {"jstar", res.jstar},
          {"m", res.m},
          {"relation", to_string(res.relation)}};
}

nlohmann::json to_json(const std::vector<SweepRow>& rows) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& r : rows) {
    arr.push_back({{"jstar", r.jstar}, {"j_hat", r.j_hat}, {"branch", r.branch}});
  }
  return arr;
}

}  // namespace miscal::threshold
