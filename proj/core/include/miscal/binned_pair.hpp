#pragma once

#include <optional>
#include <string>
#include <vector>

#include "miscal/grid.hpp"

namespace miscal {

// Joint description of a predictor p and ground truth p* over a grid:
// mu[i] is the probability mass of individuals predicted i/m, ytilde[i]
// the mean outcome among them. ytilde[i] is engaged exactly when mu[i] > 0.
struct BinnedPair {
  Grid grid;
  std::vector<double> mu;                     // size m+1
  std::vector<std::optional<double>> ytilde;  // size m+1

  explicit BinnedPair(Grid g)
      : grid(g), mu(static_cast<size_t>(g.m) + 1, 0.0), ytilde(static_cast<size_t>(g.m) + 1) {}
};

// First violated invariant, or empty when the pair is legal. Diagnostic
// only; never throws. bin == -1 marks violations that are not tied to a
// single bin (wrong vector length, bad mass sum).
struct PairViolation {
  int bin = -1;
  std::string what;
};

std::optional<PairViolation> validate_binned_pair(const BinnedPair& pair);

// Throwing wrapper used by operations whose contract is "propagate
// validation errors".
void require_valid(const BinnedPair& pair);

// Convenience constructor for sparse pairs: (bin, mass, ytilde) triples.
BinnedPair make_pair_from_bins(const Grid& grid,
                               const std::vector<std::tuple<int, double, double>>& bins);

}  // namespace miscal
