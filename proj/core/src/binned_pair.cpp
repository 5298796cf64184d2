#include "miscal/binned_pair.hpp"

#include <cmath>
#include <stdexcept>
#include <tuple>

#include "miscal/tolerances.hpp"

namespace miscal {

std::optional<PairViolation> validate_binned_pair(const BinnedPair& pair) {
  const size_t want = static_cast<size_t>(pair.grid.m) + 1;
  if (pair.mu.size() != want || pair.ytilde.size() != want) {
    return PairViolation{-1, "vector length must be m+1"};
  }
  double sum = 0.0;
  for (int i = 0; i < static_cast<int>(want); ++i) {
    const double mu = pair.mu[static_cast<size_t>(i)];
    const auto& y = pair.ytilde[static_cast<size_t>(i)];
    if (!(mu >= 0.0) || std::isnan(mu)) {
      return PairViolation{i, "negative mass"};
    }
    if (mu > 0.0 && !y.has_value()) {
      return PairViolation{i, "missing conditional mean"};
    }
    if (mu == 0.0 && y.has_value()) {
      return PairViolation{i, "conditional mean present for empty bin"};
    }
    if (y.has_value() && (!(*y >= 0.0) || !(*y <= 1.0))) {
      return PairViolation{i, "conditional mean outside [0,1]"};
    }
    sum += mu;
  }
  if (std::abs(sum - 1.0) > kMassTol) {
    return PairViolation{-1, "mass sum"};
  }
  return std::nullopt;
}

void require_valid(const BinnedPair& pair) {
  if (auto v = validate_binned_pair(pair)) {
    throw std::invalid_argument("invalid binned pair (bin " + std::to_string(v->bin) +
                                "): " + v->what);
  }
}

BinnedPair make_pair_from_bins(const Grid& grid,
                               const std::vector<std::tuple<int, double, double>>& bins) {
  BinnedPair pair(grid);
  for (const auto& [i, mass, y] : bins) {
    if (i < 0 || i > grid.m) {
      throw std::invalid_argument("bin index " + std::to_string(i) + " outside 0.." +
                                  std::to_string(grid.m));
    }
    pair.mu[static_cast<size_t>(i)] += mass;
    pair.ytilde[static_cast<size_t>(i)] = y;
  }
  return pair;
}

}  // namespace miscal
