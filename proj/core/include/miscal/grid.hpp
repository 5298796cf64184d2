#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

namespace miscal {

// Prediction grid of width 1/m. Predictions live on the points i/m for
// bin indices i in {0, ..., m}; decision thresholds j use the same index
// range, with the convention that threshold j treats exactly the bins i > j.
struct Grid {
  int m;

  explicit Grid(int m_in) : m(m_in) {
    if (m < 2) {
      throw std::invalid_argument("grid: m must be >= 2, got " + std::to_string(m_in));
    }
  }

  int bins() const { return m + 1; }

  double threshold(int i) const { return static_cast<double>(i) / m; }

  // Round-half-up of t*m, clamped to [0, m]. Exact round-trip for grid
  // values: index(threshold(i)) == i for every i in {0..m}.
  int index(double t) const {
    long long i = std::llround(t * m);
    if (i < 0) i = 0;
    if (i > m) i = m;
    return static_cast<int>(i);
  }
};

}  // namespace miscal
