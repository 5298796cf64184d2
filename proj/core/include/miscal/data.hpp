#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "miscal/binned_pair.hpp"
#include "miscal/grid.hpp"

namespace miscal::data {

struct LabeledRow {
  double score = 0.0;  // in [0, 1]
  int outcome = 0;     // 0 or 1
  std::optional<std::string> group;
};

struct LabeledDataset {
  std::vector<LabeledRow> rows;

  bool has_groups() const;
  std::vector<std::string> group_names() const;  // distinct, in first-seen order
};

// CSV with header `score,outcome[,group]`. Any malformed or out-of-range row
// aborts ingestion with its line number; an empty data section is an error.
LabeledDataset read_csv(std::istream& is, const std::string& source_name);
LabeledDataset read_csv_file(const std::string& path);

void write_csv(const LabeledDataset& dataset, std::ostream& os);

// Empirical binning: score s lands in bin round-half-up(s*m) clamped to
// [0, m]; ytilde is the mean outcome of the bin, absent for empty bins.
BinnedPair bin_dataset(const LabeledDataset& dataset, const Grid& grid);

// Deterministic shuffled split; train gets floor(n * train_fraction) rows.
std::pair<LabeledDataset, LabeledDataset> split(const LabeledDataset& dataset,
                                                double train_fraction, std::uint64_t seed);

enum class RiskLaw { uniform_grid, two_point, logit_normal };
enum class Corruption { none, logit_shift, logit_scale, subgroup_shift };

// Synthetic population: true risk r drawn from risk_law, outcome ~
// Bernoulli(r), score = corruption(r) snapped to the grid.
//
// two_point puts mass `mu` at (score v, true risk v_star) and the remaining
// mass at the calibrated anchor (score 0, risk 0). subgroup_shift applies
// logit_shift(c) to a `group_fraction` slice labeled "shifted"; the rest is
// labeled "base" and left uncorrupted.
struct SyntheticSpec {
  long n = 0;
  RiskLaw law = RiskLaw::uniform_grid;
  double v = 1.0;        // two_point
  double v_star = 1.0;   // two_point
  double mu = 1.0;       // two_point
  double location = 0.0;  // logit_normal
  double scale = 1.0;     // logit_normal
  Corruption corruption = Corruption::none;
  double shift_c = 0.0;
  double scale_s = 1.0;
  double group_fraction = 0.5;
  std::uint64_t seed = 0;
};

LabeledDataset generate(const SyntheticSpec& spec, const Grid& grid);

// key=value config lines (law, n, seed, v, vstar, mu, location, scale,
// corruption, shift_c, scale_s, group_fraction); '#' starts a comment.
SyntheticSpec spec_from_config(std::istream& is);

RiskLaw risk_law_from_string(const std::string& s);
Corruption corruption_from_string(const std::string& s);

}  // namespace miscal::data
