#include "miscal/data.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <unordered_set>

#include "miscal/format.hpp"
#include "miscal/rng.hpp"

namespace miscal::data {

namespace {

[[noreturn]] void fail(const std::string& source, long line, const std::string& what) {
  throw std::invalid_argument(source + ": line " + std::to_string(line) + ": " + what);
}

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

double parse_double(const std::string& s, const std::string& source, long line,
                    const std::string& field) {
  double value = 0.0;
  const char* b = s.data();
  const char* e = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(b, e, value);
  if (ec != std::errc{} || ptr != e) {
    fail(source, line, "unparsable " + field + " '" + s + "'");
  }
  return value;
}

double logit(double p) { return std::log(p / (1.0 - p)); }
double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

// Logit-space maps fix the endpoints: risks of exactly 0 or 1 stay put.
double apply_logit_shift(double r, double c) {
  if (r <= 0.0 || r >= 1.0) return r;
  return sigmoid(logit(r) + c);
}

double apply_logit_scale(double r, double s) {
  if (r <= 0.0 || r >= 1.0) return r;
  return sigmoid(s * logit(r));
}

}  // namespace

bool LabeledDataset::has_groups() const {
  return !rows.empty() && rows.front().group.has_value();
}

std::vector<std::string> LabeledDataset::group_names() const {
  std::vector<std::string> names;
  std::unordered_set<std::string> seen;
  for (const auto& row : rows) {
    if (row.group && seen.insert(*row.group).second) {
      names.push_back(*row.group);
    }
  }
  return names;
}

LabeledDataset read_csv(std::istream& is, const std::string& source_name) {
  std::string line;
  if (!std::getline(is, line)) {
    throw std::invalid_argument(source_name + ": empty file");
  }
  const auto header = split_fields(line);
  bool has_group = false;
  if (header.size() == 2 && header[0] == "score" && header[1] == "outcome") {
    has_group = false;
  } else if (header.size() == 3 && header[0] == "score" && header[1] == "outcome" &&
             header[2] == "group") {
    has_group = true;
  } else {
    throw std::invalid_argument(source_name +
                                ": line 1: header must be 'score,outcome[,group]', got '" +
                                line + "'");
  }

  LabeledDataset out;
  long line_no = 1;
  while (std::getline(is, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    const auto fields = split_fields(line);
    if (fields.size() != (has_group ? 3u : 2u)) {
      fail(source_name, line_no, "expected " + std::to_string(has_group ? 3 : 2) + " fields");
    }
    LabeledRow row;
    row.score = parse_double(fields[0], source_name, line_no, "score");
    if (!(row.score >= 0.0) || !(row.score <= 1.0)) {
      fail(source_name, line_no, "score " + fmt_double(row.score) + " outside [0,1]");
    }
    if (fields[1] == "0") {
      row.outcome = 0;
    } else if (fields[1] == "1") {
      row.outcome = 1;
    } else {
      fail(source_name, line_no, "outcome must be 0 or 1, got '" + fields[1] + "'");
    }
    if (has_group) {
      if (fields[2].empty()) fail(source_name, line_no, "empty group label");
      row.group = fields[2];
    }
    out.rows.push_back(std::move(row));
  }
  if (out.rows.empty()) {
    throw std::invalid_argument(source_name + ": no data rows");
  }
  return out;
}

LabeledDataset read_csv_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) {
    throw std::invalid_argument(path + ": cannot open");
  }
  return read_csv(is, path);
}

void write_csv(const LabeledDataset& dataset, std::ostream& os) {
  const bool groups = dataset.has_groups();
  os << (groups ? "score,outcome,group\n" : "score,outcome\n");
  for (const auto& row : dataset.rows) {
    os << fmt_double(row.score) << ',' << row.outcome;
    if (groups) os << ',' << (row.group ? *row.group : std::string());
    os << '\n';
  }
}

BinnedPair bin_dataset(const LabeledDataset& dataset, const Grid& grid) {
  if (dataset.rows.empty()) {
    throw std::invalid_argument("bin_dataset: empty dataset");
  }
  std::vector<long> count(static_cast<size_t>(grid.m) + 1, 0);
  std::vector<long> positives(static_cast<size_t>(grid.m) + 1, 0);
  for (const auto& row : dataset.rows) {
    const int i = grid.index(row.score);
    ++count[static_cast<size_t>(i)];
    positives[static_cast<size_t>(i)] += row.outcome;
  }
  BinnedPair pair(grid);
  const double n = static_cast<double>(dataset.rows.size());
  for (int i = 0; i <= grid.m; ++i) {
    const long c = count[static_cast<size_t>(i)];
    if (c > 0) {
      pair.mu[static_cast<size_t>(i)] = static_cast<double>(c) / n;
      pair.ytilde[static_cast<size_t>(i)] =
          static_cast<double>(positives[static_cast<size_t>(i)]) / static_cast<double>(c);
    }
  }
  return pair;
}

std::pair<LabeledDataset, LabeledDataset> split(const LabeledDataset& dataset,
                                                double train_fraction, std::uint64_t seed) {
  if (!(train_fraction > 0.0) || !(train_fraction < 1.0)) {
    throw std::invalid_argument("split: train_fraction must lie in (0, 1)");
  }
  std::vector<size_t> order(dataset.rows.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = i;
  Rng rng(seed);
  for (size_t i = order.size(); i > 1; --i) {  // Fisher-Yates
    const size_t k = static_cast<size_t>(rng.below(i));
    std::swap(order[i - 1], order[k]);
  }
  const size_t train_n =
      static_cast<size_t>(std::floor(static_cast<double>(dataset.rows.size()) * train_fraction));
  LabeledDataset train, test;
  train.rows.reserve(train_n);
  test.rows.reserve(dataset.rows.size() - train_n);
  for (size_t i = 0; i < order.size(); ++i) {
    (i < train_n ? train : test).rows.push_back(dataset.rows[order[i]]);
  }
  return {std::move(train), std::move(test)};
}

LabeledDataset generate(const SyntheticSpec& spec, const Grid& grid) {
  if (spec.n < 1) {
    throw std::invalid_argument("generate: n must be >= 1");
  }
  if (spec.law == RiskLaw::two_point &&
      (!(spec.mu >= 0.0) || !(spec.mu <= 1.0) || !(spec.v >= 0.0) || !(spec.v <= 1.0) ||
       !(spec.v_star >= 0.0) || !(spec.v_star <= 1.0))) {
    throw std::invalid_argument("generate: two_point parameters must lie in [0,1]");
  }
  if (!(spec.group_fraction >= 0.0) || !(spec.group_fraction <= 1.0)) {
    throw std::invalid_argument("generate: group_fraction must lie in [0,1]");
  }
  Rng rng(spec.seed);
  LabeledDataset out;
  out.rows.reserve(static_cast<size_t>(spec.n));
  for (long k = 0; k < spec.n; ++k) {
    double risk = 0.0;
    double score_base = 0.0;
    switch (spec.law) {
      case RiskLaw::uniform_grid: {
        const int i = static_cast<int>(rng.below(static_cast<std::uint64_t>(grid.m) + 1));
        risk = grid.threshold(i);
        score_base = risk;
        break;
      }
      case RiskLaw::two_point: {
        if (rng.uniform() < spec.mu) {
          risk = spec.v_star;
          score_base = spec.v;  // predictor reports v regardless of the truth
        } else {
          risk = 0.0;
          score_base = 0.0;
        }
        break;
      }
      case RiskLaw::logit_normal: {
        risk = sigmoid(rng.normal(spec.location, spec.scale));
        score_base = risk;
        break;
      }
    }

    LabeledRow row;
    row.outcome = rng.bernoulli(risk) ? 1 : 0;
    double score = score_base;
    switch (spec.corruption) {
      case Corruption::none:
        break;
      case Corruption::logit_shift:
        score = apply_logit_shift(score, spec.shift_c);
        break;
      case Corruption::logit_scale:
        score = apply_logit_scale(score, spec.scale_s);
        break;
      case Corruption::subgroup_shift: {
        const bool shifted = rng.uniform() < spec.group_fraction;
        if (shifted) score = apply_logit_shift(score, spec.shift_c);
        row.group = shifted ? "shifted" : "base";
        break;
      }
    }
    row.score = grid.threshold(grid.index(score));  // snap to the grid
    out.rows.push_back(std::move(row));
  }
  return out;
}

RiskLaw risk_law_from_string(const std::string& s) {
  if (s == "uniform" || s == "uniform_grid" || s == "uniform-grid") return RiskLaw::uniform_grid;
  if (s == "two-point" || s == "two_point") return RiskLaw::two_point;
  if (s == "logit-normal" || s == "logit_normal") return RiskLaw::logit_normal;
  throw std::invalid_argument("unknown risk law '" + s + "'");
}

Corruption corruption_from_string(const std::string& s) {
  if (s == "none") return Corruption::none;
  if (s == "logit-shift" || s == "logit_shift") return Corruption::logit_shift;
  if (s == "logit-scale" || s == "logit_scale") return Corruption::logit_scale;
  if (s == "subgroup-shift" || s == "subgroup_shift") return Corruption::subgroup_shift;
  throw std::invalid_argument("unknown corruption '" + s + "'");
}

SyntheticSpec spec_from_config(std::istream& is) {
  SyntheticSpec spec;
  std::string line;
  long line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    while (!line.empty() && (line.back() == ' ' || line.back() == '\r' || line.back() == '\t')) {
      line.pop_back();
    }
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      fail("config", line_no, "expected key=value");
    }
    const std::string key = line.substr(0, eq);
    const std::string value = line.substr(eq + 1);
    if (key == "n") {
      spec.n = std::stol(value);
    } else if (key == "seed") {
      spec.seed = std::stoull(value);
    } else if (key == "law") {
      spec.law = risk_law_from_string(value);
    } else if (key == "corruption") {
      spec.corruption = corruption_from_string(value);
    } else if (key == "v") {
      spec.v = parse_double(value, "config", line_no, "v");
    } else if (key == "vstar" || key == "v_star") {
      spec.v_star = parse_double(value, "config", line_no, "vstar");
    } else if (key == "mu") {
      spec.mu = parse_double(value, "config", line_no, "mu");
    } else if (key == "location") {
      spec.location = parse_double(value, "config", line_no, "location");
    } else if (key == "scale") {
      spec.scale = parse_double(value, "config", line_no, "scale");
    } else if (key == "shift_c") {
      spec.shift_c = parse_double(value, "config", line_no, "shift_c");
    } else if (key == "scale_s") {
      spec.scale_s = parse_double(value, "config", line_no, "scale_s");
    } else if (key == "group_fraction") {
      spec.group_fraction = parse_double(value, "config", line_no, "group_fraction");
    } else {
      fail("config", line_no, "unknown key '" + key + "'");
    }
  }
  return spec;
}

}  // namespace miscal::data
