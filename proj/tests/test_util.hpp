#pragma once

#include <tuple>
#include <vector>

#include "miscal/binned_pair.hpp"
#include "miscal/grid.hpp"
#include "miscal/rng.hpp"

namespace testutil {

// Random legal pair: a few occupied bins, normalized masses, ytilde free.
inline miscal::BinnedPair random_pair(miscal::Rng& rng, const miscal::Grid& grid,
                                      int max_support = 6) {
  const int support = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(max_support)));
  std::vector<int> bins;
  while (static_cast<int>(bins.size()) < support) {
    const int b = static_cast<int>(rng.below(static_cast<std::uint64_t>(grid.m) + 1));
    bool fresh = true;
    for (int seen : bins) fresh = fresh && seen != b;
    if (fresh) bins.push_back(b);
  }
  std::vector<double> mass(bins.size());
  double total = 0.0;
  for (auto& w : mass) {
    w = rng.uniform() + 1e-3;
    total += w;
  }
  miscal::BinnedPair pair(grid);
  for (size_t k = 0; k < bins.size(); ++k) {
    pair.mu[static_cast<size_t>(bins[k])] = mass[k] / total;
    pair.ytilde[static_cast<size_t>(bins[k])] = rng.uniform();
  }
  return pair;
}

// Random pair with ytilde_i = i/m on every occupied bin.
inline miscal::BinnedPair random_calibrated_pair(miscal::Rng& rng, const miscal::Grid& grid,
                                                 int max_support = 6) {
  miscal::BinnedPair pair = random_pair(rng, grid, max_support);
  for (int i = 0; i <= grid.m; ++i) {
    if (pair.mu[static_cast<size_t>(i)] > 0.0) {
      pair.ytilde[static_cast<size_t>(i)] = grid.threshold(i);
    }
  }
  return pair;
}

// The worked example pair: all mass on the top bin, truth 1 - alpha.
inline miscal::BinnedPair top_bin_pair(const miscal::Grid& grid, double alpha) {
  miscal::BinnedPair pair(grid);
  pair.mu[static_cast<size_t>(grid.m)] = 1.0;
  pair.ytilde[static_cast<size_t>(grid.m)] = 1.0 - alpha;
  return pair;
}

}  // namespace testutil
