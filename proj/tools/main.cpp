// miscal: regret-minimizing decision thresholds for risk predictors with
// bounded miscalibration, plus Net Benefit / calibration / oracle tooling.
//
// Exit codes: 0 success, 1 domain or I/O error, 2 usage error. Every error
// path prints a single `error: <code>: <message>` line to stderr.

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "miscal/benefit.hpp"
#include "miscal/calibration.hpp"
#include "miscal/cost_context.hpp"
#include "miscal/data.hpp"
#include "miscal/experiments.hpp"
#include "miscal/format.hpp"
#include "miscal/oracle.hpp"
#include "miscal/threshold.hpp"
#include "miscal/tolerances.hpp"

namespace {

using nlohmann::json;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void write_output(const std::string& text, const std::string& path) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream os(path, std::ios::binary);
  if (!os) {
    throw std::ios_base::failure("cannot open output file '" + path + "'");
  }
  os << text;
  if (!os) {
    throw std::ios_base::failure("failed writing output file '" + path + "'");
  }
}

miscal::Relation parse_relation(const std::string& s) {
  try {
    return miscal::relation_from_string(s);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
}

miscal::threshold::EceLeftBranch parse_left(const std::string& s) {
  if (s == "theorem") return miscal::threshold::EceLeftBranch::theorem;
  if (s == "appendix") return miscal::threshold::EceLeftBranch::appendix;
  throw UsageError("--ece-left must be 'theorem' or 'appendix', got '" + s + "'");
}

std::vector<double> parse_jstar_grid(const std::string& points, int steps,
                                     const miscal::Grid& grid) {
  if (!points.empty()) {
    std::vector<double> out;
    std::stringstream ss(points);
    std::string item;
    while (std::getline(ss, item, ',')) {
      try {
        size_t used = 0;
        out.push_back(std::stod(item, &used));
        if (used != item.size()) throw std::invalid_argument(item);
      } catch (const std::exception&) {
        throw UsageError("--jstar-points: unparsable value '" + item + "'");
      }
    }
    return out;
  }
  return miscal::experiments::default_jstar_grid(grid, steps);
}

// ---- threshold -----------------------------------------------------------

int cmd_threshold(double alpha, int m, double jstar, const std::string& relation,
                  const std::string& ece_left, const std::string& output) {
  const miscal::Grid grid(m);
  const auto res = miscal::threshold::conservative_threshold(
      alpha, jstar, parse_relation(relation), grid, parse_left(ece_left));
  write_output(miscal::threshold::to_json(res).dump(2) + "\n", output);
  return 0;
}

// ---- calibration ---------------------------------------------------------

int cmd_calibration(const std::string& input, int m, const std::string& output) {
  const miscal::Grid grid(m);
  const auto dataset = miscal::data::read_csv_file(input);
  const auto pair = miscal::data::bin_dataset(dataset, grid);
  const auto rep = miscal::calibration::report(pair);
  write_output(miscal::calibration::to_json(rep).dump(2) + "\n", output);
  return 0;
}

// ---- curve ---------------------------------------------------------------

int cmd_curve(const std::string& input, int m, double jstar, double alpha,
              const std::string& relation, const std::string& ece_left,
              const std::string& output, const std::string& format) {
  const miscal::Grid grid(m);
  const auto dataset = miscal::data::read_csv_file(input);
  const auto pair = miscal::data::bin_dataset(dataset, grid);
  const auto ctx = miscal::make_context_from_jstar(jstar, grid);
  const auto curve = miscal::benefit::decision_curve(pair, ctx);

  const bool with_alpha = alpha >= 0.0;
  int jhat_floor = -1;
  const int jstar_floor = static_cast<int>(std::floor(jstar));
  if (with_alpha) {
    const auto res = miscal::threshold::conservative_threshold(
        alpha, jstar, parse_relation(relation), grid, parse_left(ece_left));
    jhat_floor = res.floor_index();
  }

  std::ostringstream body;
  if (format == "csv") {
    if (!with_alpha) {
      miscal::benefit::write_csv(curve, body);
    } else {
      body << "j,threshold,nb_model,nb_all,nb_none,utility,mark\n";
      for (const auto& p : curve.points) {
        std::string mark;
        if (p.j == jhat_floor && p.j == jstar_floor) {
          mark = "both";
        } else if (p.j == jhat_floor) {
          mark = "jhat";
        } else if (p.j == jstar_floor) {
          mark = "jstar";
        }
        body << p.j << ',' << miscal::fmt_double(p.threshold) << ','
             << miscal::fmt_double(p.nb_model) << ',' << miscal::fmt_double(p.nb_treat_all)
             << ',' << miscal::fmt_double(p.nb_treat_none) << ','
             << miscal::fmt_double(p.utility) << ',' << mark << '\n';
      }
    }
  } else if (format == "json") {
    json j = miscal::benefit::to_json(curve);
    if (with_alpha) {
      j["marks"] = {{"jhat_floor", jhat_floor}, {"jstar_floor", jstar_floor}};
    }
    body << j.dump(2) << "\n";
  } else {
    throw UsageError("--format must be 'csv' or 'json'");
  }
  write_output(body.str(), output);

  // Summary to stdout: calibration errors and utilities at the two policies.
  const double ece = miscal::calibration::expected_calibration_error(pair);
  const double mce = miscal::calibration::maximum_calibration_error(pair);
  const double u_star = curve.points[static_cast<size_t>(jstar_floor)].utility;
  std::cout << "ece=" << miscal::fmt_double(ece) << " mce=" << miscal::fmt_double(mce)
            << " utility_at_jstar=" << miscal::fmt_double(u_star);
  if (with_alpha) {
    const double u_hat = curve.points[static_cast<size_t>(jhat_floor)].utility;
    std::cout << " utility_at_jhat=" << miscal::fmt_double(u_hat);
  }
  std::cout << "\n";
  return 0;
}

// ---- evaluate ------------------------------------------------------------

int cmd_evaluate(const std::string& input, int m, double alpha, const std::string& relation,
                 const std::string& ece_left, const std::string& jstar_points, int jstar_steps,
                 const std::string& output, const std::string& format) {
  const miscal::Grid grid(m);
  const auto dataset = miscal::data::read_csv_file(input);
  const auto pair = miscal::data::bin_dataset(dataset, grid);
  const auto jstar_grid = parse_jstar_grid(jstar_points, jstar_steps, grid);
  const auto report = miscal::experiments::gain_delta(pair, alpha, parse_relation(relation),
                                                      grid, jstar_grid, parse_left(ece_left));
  std::ostringstream body;
  if (format == "csv") {
    miscal::experiments::write_csv(report, body);
  } else if (format == "json") {
    body << miscal::experiments::to_json(report).dump(2) << "\n";
  } else {
    throw UsageError("--format must be 'csv' or 'json'");
  }
  write_output(body.str(), output);
  return 0;
}

// ---- oracle --------------------------------------------------------------

int cmd_oracle(int m, double jstar, double alpha, const std::string& relation, double j,
               bool has_j, int resolution, int threshold_steps, bool general, int support_cap,
               int jobs, const std::string& output) {
  const miscal::Grid grid(m);
  const miscal::Relation rel = parse_relation(relation);
  miscal::oracle::OracleConfig cfg;
  cfg.resolution = resolution;
  cfg.threshold_steps = threshold_steps;
  cfg.support_cap = support_cap;
  cfg.jobs = jobs;

  json out;
  if (general) {
    // Reduction check: the general adversary class must not beat the simple
    // class by more than the simple oracle's discretization bound.
    const auto scan_one = [&](double jv) {
      const auto gen = miscal::oracle::oracle_general(jv, jstar, alpha, rel, grid, cfg);
      const auto simple = miscal::oracle::oracle_cost(jv, jstar, alpha, rel, grid, cfg);
      const double excess = gen.approx_cost - simple.approx_cost;
      return json{{"j", jv},
                  {"general_cost", gen.approx_cost},
                  {"simple_cost", simple.approx_cost},
                  {"excess", excess},
                  {"bound", simple.discretization_bound},
                  {"pass", excess <= simple.discretization_bound + miscal::kNumericEps}};
    };
    json rows = json::array();
    bool all_pass = true;
    double max_excess = 0.0;
    if (has_j) {
      rows.push_back(scan_one(j));
    } else {
      for (int jj = 0; jj <= m; ++jj) rows.push_back(scan_one(jj));
    }
    for (const auto& row : rows) {
      all_pass = all_pass && row["pass"].get<bool>();
      max_excess = std::max(max_excess, row["excess"].get<double>());
    }
    out = {{"mode", "general"},
           {"relation", relation},
           {"alpha", alpha},
           {"jstar", jstar},
           {"support_cap", support_cap},
           {"rows", rows},
           {"max_excess", max_excess},
           {"pass", all_pass}};
  } else if (has_j) {
    const auto cert = miscal::oracle::oracle_cost(j, jstar, alpha, rel, grid, cfg);
    const double closed = miscal::threshold::worst_case_cost(j, jstar, alpha, rel, grid);
    const double gap = std::abs(cert.approx_cost - closed);
    out = {{"mode", "cost"},
           {"relation", relation},
           {"alpha", alpha},
           {"jstar", jstar},
           {"certificate", miscal::oracle::to_json(cert)},
           {"closed_form_cost", closed},
           {"gap", gap},
           {"pass", gap <= cert.discretization_bound + miscal::kNumericEps}};
  } else {
    const auto res = miscal::oracle::oracle_argmin(jstar, alpha, rel, grid, cfg);
    const auto closed = miscal::threshold::conservative_threshold(alpha, jstar, rel, grid);
    const double closed_cost =
        miscal::threshold::worst_case_cost(res.j_min, jstar, alpha, rel, grid);
    const double gap = std::abs(res.cost - closed_cost);
    out = {{"mode", "argmin"},
           {"relation", relation},
           {"alpha", alpha},
           {"jstar", jstar},
           {"j_min", res.j_min},
           {"oracle_cost", res.cost},
           {"candidate_step", res.candidate_step},
           {"j_hat_closed_form", closed.j_hat},
           {"closed_form_cost_at_j_min", closed_cost},
           {"gap", gap},
           {"certificate", miscal::oracle::to_json(res.certificate)},
           {"argmin_within_step", std::abs(res.j_min - closed.j_hat) <=
                                      res.candidate_step + miscal::kNumericEps},
           {"pass", gap <= res.certificate.discretization_bound + miscal::kNumericEps &&
                        std::abs(res.j_min - closed.j_hat) <=
                            res.candidate_step + miscal::kNumericEps}};
  }
  write_output(out.dump(2) + "\n", output);
  return 0;
}

// ---- sweep ---------------------------------------------------------------

int cmd_sweep(double alpha, int m, const std::string& relation, int steps,
              const std::string& ece_left, int jobs, const std::string& output,
              const std::string& format) {
  const miscal::Grid grid(m);
  const auto rows = miscal::threshold::sweep(alpha, grid, parse_relation(relation), steps,
                                             parse_left(ece_left), jobs);
  std::ostringstream body;
  if (format == "csv") {
    miscal::threshold::write_csv(rows, body);
  } else if (format == "json") {
    body << miscal::threshold::to_json(rows).dump(2) << "\n";
  } else {
    throw UsageError("--format must be 'csv' or 'json'");
  }
  write_output(body.str(), output);
  return 0;
}

// ---- generate ------------------------------------------------------------

struct GenerateFlags {
  long n = 0;
  int m = 100;
  std::string law, corruption, config, output;
  double v = 0.0, vstar = 0.0, mu = 0.0, location = 0.0, scale = 1.0;
  double shift_c = 0.0, scale_s = 1.0, group_fraction = 0.5;
  std::uint64_t seed = 0;
  // Presence markers so explicit flags override config values and nothing
  // else does.
  bool has_v = false, has_vstar = false, has_mu = false, has_location = false,
       has_scale = false, has_shift_c = false, has_scale_s = false,
       has_group_fraction = false, has_seed = false;
};

int cmd_generate(const GenerateFlags& f) {
  const miscal::Grid grid(f.m);
  miscal::data::SyntheticSpec spec;
  if (!f.config.empty()) {
    std::ifstream is(f.config);
    if (!is) throw std::ios_base::failure("cannot open config file '" + f.config + "'");
    spec = miscal::data::spec_from_config(is);
  }
  if (f.n > 0) spec.n = f.n;
  if (!f.law.empty()) spec.law = miscal::data::risk_law_from_string(f.law);
  if (!f.corruption.empty()) {
    spec.corruption = miscal::data::corruption_from_string(f.corruption);
  }
  if (f.has_v) spec.v = f.v;
  if (f.has_vstar) spec.v_star = f.vstar;
  if (f.has_mu) spec.mu = f.mu;
  if (f.has_location) spec.location = f.location;
  if (f.has_scale) spec.scale = f.scale;
  if (f.has_shift_c) spec.shift_c = f.shift_c;
  if (f.has_scale_s) spec.scale_s = f.scale_s;
  if (f.has_group_fraction) spec.group_fraction = f.group_fraction;
  if (f.has_seed) spec.seed = f.seed;

  const auto dataset = miscal::data::generate(spec, grid);
  std::ostringstream body;
  miscal::data::write_csv(dataset, body);
  write_output(body.str(), f.output);
  return 0;
}

// ---- experiment ----------------------------------------------------------

int cmd_experiment(const std::string& design, const std::string& input, int m, double alpha,
                   const std::string& relation, const std::string& ece_left,
                   const std::string& jstar_points, int jstar_steps,
                   const std::string& output_dir) {
  const miscal::Grid grid(m);
  const auto dataset = miscal::data::read_csv_file(input);
  const auto jstar_grid = parse_jstar_grid(jstar_points, jstar_steps, grid);
  const auto left = parse_left(ece_left);

  const auto file_for = [&](const std::string& rel_name, double a) {
    return (std::filesystem::path(output_dir) /
            (design + "_" + rel_name + "_" + miscal::fmt_double(a) + ".csv"))
        .string();
  };

  json summary;
  if (design == "gain") {
    const auto pair = miscal::data::bin_dataset(dataset, grid);
    const auto report = miscal::experiments::gain_delta(pair, alpha, parse_relation(relation),
                                                        grid, jstar_grid, left);
    std::ostringstream body;
    miscal::experiments::write_csv(report, body);
    write_output(body.str(), file_for(relation, alpha));
    summary = miscal::experiments::to_json(report);
  } else if (design == "subgroup") {
    const auto report = miscal::experiments::subgroup_eval(
        dataset, grid, alpha, parse_relation(relation), jstar_grid, left);
    std::ostringstream body;
    miscal::experiments::write_csv(report, body);
    write_output(body.str(), file_for(relation, alpha));
    summary = miscal::experiments::to_json(report);
  } else if (design == "compare") {
    const auto pair = miscal::data::bin_dataset(dataset, grid);
    const auto report = miscal::experiments::compare_relations(pair, grid, jstar_grid, left);
    std::ostringstream body;
    miscal::experiments::write_csv(report, body);
    write_output(body.str(), file_for("both", report.alpha_ece));
    summary = miscal::experiments::to_json(report);
  } else {
    throw UsageError("--design must be 'gain', 'subgroup' or 'compare'");
  }
  std::cout << summary.dump(2) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "miscal: conservative (regret-minimizing) decision thresholds under bounded "
      "miscalibration, Net Benefit evaluation, and brute-force oracle verification"};
  app.require_subcommand(1);

  // threshold
  auto* threshold = app.add_subcommand(
      "threshold", "Closed-form conservative threshold for a miscalibration budget");
  double alpha = 0.0, jstar = 0.0;
  int m = 100;
  std::string relation = "mce", ece_left = "theorem", output, format = "csv";
  threshold->add_option("--alpha", alpha, "miscalibration budget, probability units (0.1 = 10 points)")
      ->required();
  threshold->add_option("--m", m, "grid intervals (predictions live on i/m)")->required();
  threshold->add_option("--jstar", jstar, "therapeutic threshold, index units in (0, m)")
      ->required();
  threshold->add_option("--relation", relation, "calibration relation: ece or mce")->required();
  threshold->add_option("--ece-left", ece_left,
                        "ECE left-branch clamp: theorem (max with 1) or appendix (max with 0)");
  threshold->add_option("--output", output, "output file (default: stdout)");

  // calibration
  auto* calibration = app.add_subcommand(
      "calibration", "Expected/maximum calibration error of a score,outcome CSV");
  std::string cal_input, cal_output;
  int cal_m = 100;
  calibration->add_option("--input", cal_input, "CSV with header score,outcome[,group]")
      ->required();
  calibration->add_option("--m", cal_m, "grid intervals for binning")->required();
  calibration->add_option("--output", cal_output, "output file (default: stdout)");

  // curve
  auto* curve = app.add_subcommand("curve", "Decision curve (Net Benefit by threshold)");
  std::string curve_input, curve_output, curve_relation = "ece", curve_left = "theorem",
              curve_format = "csv";
  int curve_m = 100;
  double curve_jstar = 0.0, curve_alpha = -1.0;
  curve->add_option("--input", curve_input, "CSV with header score,outcome[,group]")->required();
  curve->add_option("--m", curve_m, "grid intervals")->required();
  curve->add_option("--jstar", curve_jstar, "therapeutic threshold, index units in (0, m)")
      ->required();
  curve->add_option("--alpha", curve_alpha,
                    "optional miscalibration budget, probability units; marks floor(j_hat) and "
                    "floor(jstar) rows");
  curve->add_option("--relation", curve_relation, "relation for j_hat: ece or mce");
  curve->add_option("--ece-left", curve_left, "ECE left-branch clamp: theorem or appendix");
  curve->add_option("--output", curve_output, "output file")->required();
  curve->add_option("--format", curve_format, "output format: csv or json");

  // evaluate
  auto* evaluate =
      app.add_subcommand("evaluate", "Gain from conservative thresholding on test data");
  std::string ev_input, ev_relation = "ece", ev_left = "theorem", ev_points, ev_output,
              ev_format = "json";
  int ev_m = 100, ev_steps = 99;
  double ev_alpha = 0.0;
  evaluate->add_option("--input", ev_input, "CSV with header score,outcome[,group]")->required();
  evaluate->add_option("--m", ev_m, "grid intervals")->required();
  evaluate->add_option("--alpha", ev_alpha, "miscalibration budget, probability units")
      ->required();
  evaluate->add_option("--relation", ev_relation, "calibration relation: ece or mce")->required();
  evaluate->add_option("--ece-left", ev_left, "ECE left-branch clamp: theorem or appendix");
  evaluate->add_option("--jstar-points", ev_points,
                       "comma-separated j* values, index units in (0, m)");
  evaluate->add_option("--jstar-steps", ev_steps,
                       "number of evenly spaced interior j* points (default 99)");
  evaluate->add_option("--output", ev_output, "output file (default: stdout)");
  evaluate->add_option("--format", ev_format, "output format: csv or json");

  // oracle
  auto* oracle = app.add_subcommand(
      "oracle", "Brute-force worst-case regret vs the closed forms (certificate JSON)");
  std::string or_relation = "mce", or_output;
  int or_m = 10, or_resolution = 50, or_threshold_steps = 0, or_support_cap = 3, or_jobs = 0;
  double or_jstar = 0.0, or_alpha = 0.0, or_j = 0.0;
  bool or_general = false;
  oracle->add_option("--m", or_m, "grid intervals")->required();
  oracle->add_option("--jstar", or_jstar, "therapeutic threshold, index units in (0, m)")
      ->required();
  oracle->add_option("--alpha", or_alpha, "miscalibration budget, probability units")->required();
  oracle->add_option("--relation", or_relation, "calibration relation: ece or mce")->required();
  auto* or_j_opt =
      oracle->add_option("--j", or_j, "evaluate the cost at this threshold (index units); "
                                      "without it the oracle minimizes over candidates");
  oracle->add_option("--resolution", or_resolution,
                     "adversary grid steps per unit for v*, mu, delta (>= 4)");
  oracle->add_option("--threshold-steps", or_threshold_steps,
                     "argmin candidate count (>= m+1; 0 = one per refined grid point)");
  oracle->add_flag("--general", or_general,
                   "search adversaries with up to --support-cap level sets (requires m <= 12)");
  oracle->add_option("--support-cap", or_support_cap,
                     "max level-set support of the general adversary");
  oracle->add_option("--jobs", or_jobs, "worker threads (0 = available parallelism)");
  oracle->add_option("--output", or_output, "output file (default: stdout)");

  // sweep
  auto* sweep = app.add_subcommand("sweep", "Conservative threshold as a function of j*");
  std::string sw_relation = "mce", sw_left = "theorem", sw_output, sw_format = "csv";
  int sw_m = 100, sw_steps = 199, sw_jobs = 0;
  double sw_alpha = 0.0;
  sweep->add_option("--alpha", sw_alpha, "miscalibration budget, probability units")->required();
  sweep->add_option("--m", sw_m, "grid intervals")->required();
  sweep->add_option("--relation", sw_relation, "calibration relation: ece or mce")->required();
  sweep->add_option("--steps", sw_steps, "number of interior j* samples (default 199)");
  sweep->add_option("--ece-left", sw_left, "ECE left-branch clamp: theorem or appendix");
  sweep->add_option("--jobs", sw_jobs, "worker threads (0 = available parallelism)");
  sweep->add_option("--output", sw_output, "output file (default: stdout)");
  sweep->add_option("--format", sw_format, "output format: csv or json");

  // generate
  auto* generate = app.add_subcommand("generate", "Synthetic score,outcome[,group] CSV");
  GenerateFlags ge;
  generate->add_option("--n", ge.n, "sample count")->required();
  generate->add_option("--m", ge.m, "grid intervals (scores are snapped to i/m)")->required();
  generate->add_option("--law", ge.law, "risk law: uniform, two-point or logit-normal");
  auto* ge_v = generate->add_option("--v", ge.v, "two-point: reported score, probability units");
  auto* ge_vstar =
      generate->add_option("--vstar", ge.vstar, "two-point: true risk, probability units");
  auto* ge_mu =
      generate->add_option("--mu", ge.mu, "two-point: mass on (v, vstar); rest is (0, 0)");
  auto* ge_location =
      generate->add_option("--location", ge.location, "logit-normal: location (logit units)");
  auto* ge_scale =
      generate->add_option("--scale", ge.scale, "logit-normal: scale (logit units)");
  generate->add_option("--corruption", ge.corruption,
                       "none, logit-shift, logit-scale or subgroup-shift");
  auto* ge_shift_c =
      generate->add_option("--shift-c", ge.shift_c, "logit-shift offset (logit units)");
  auto* ge_scale_s = generate->add_option("--scale-s", ge.scale_s, "logit-scale factor");
  auto* ge_group_fraction =
      generate->add_option("--group-fraction", ge.group_fraction,
                           "subgroup-shift: fraction labeled 'shifted' in [0,1]");
  auto* ge_seed = generate->add_option("--seed", ge.seed, "64-bit RNG seed");
  generate->add_option("--config", ge.config, "key=value config file (flags override it)");
  generate->add_option("--output", ge.output, "output file (default: stdout)");

  // experiment
  auto* experiment =
      app.add_subcommand("experiment", "Gain / subgroup-shift / relation-comparison designs");
  std::string ex_design, ex_input, ex_relation = "ece", ex_left = "theorem", ex_points,
              ex_output_dir = ".";
  int ex_m = 100, ex_steps = 99;
  double ex_alpha = 0.0;
  experiment->add_option("--design", ex_design, "gain, subgroup or compare")->required();
  experiment->add_option("--input", ex_input, "CSV with header score,outcome[,group]")
      ->required();
  experiment->add_option("--m", ex_m, "grid intervals")->required();
  experiment->add_option("--alpha", ex_alpha,
                         "miscalibration budget, probability units (gain/subgroup)");
  experiment->add_option("--relation", ex_relation, "calibration relation: ece or mce");
  experiment->add_option("--ece-left", ex_left, "ECE left-branch clamp: theorem or appendix");
  experiment->add_option("--jstar-points", ex_points,
                         "comma-separated j* values, index units in (0, m)");
  experiment->add_option("--jstar-steps", ex_steps,
                         "number of evenly spaced interior j* points (default 99)");
  experiment->add_option("--output-dir", ex_output_dir,
                         "directory for {design}_{relation}_{alpha}.csv (default '.')");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: usage: " << e.what() << "\n";
    return 2;
  }

  try {
    if (threshold->parsed()) {
      return cmd_threshold(alpha, m, jstar, relation, ece_left, output);
    }
    if (calibration->parsed()) {
      return cmd_calibration(cal_input, cal_m, cal_output);
    }
    if (curve->parsed()) {
      return cmd_curve(curve_input, curve_m, curve_jstar, curve_alpha, curve_relation,
                       curve_left, curve_output, curve_format);
    }
    if (evaluate->parsed()) {
      return cmd_evaluate(ev_input, ev_m, ev_alpha, ev_relation, ev_left, ev_points, ev_steps,
                          ev_output, ev_format);
    }
    if (oracle->parsed()) {
      return cmd_oracle(or_m, or_jstar, or_alpha, or_relation, or_j, or_j_opt->count() > 0,
                        or_resolution, or_threshold_steps, or_general, or_support_cap, or_jobs,
                        or_output);
    }
    if (sweep->parsed()) {
      return cmd_sweep(sw_alpha, sw_m, sw_relation, sw_steps, sw_left, sw_jobs, sw_output,
                       sw_format);
    }
    if (generate->parsed()) {
      ge.has_v = ge_v->count() > 0;
      ge.has_vstar = ge_vstar->count() > 0;
      ge.has_mu = ge_mu->count() > 0;
      ge.has_location = ge_location->count() > 0;
      ge.has_scale = ge_scale->count() > 0;
      ge.has_shift_c = ge_shift_c->count() > 0;
      ge.has_scale_s = ge_scale_s->count() > 0;
      ge.has_group_fraction = ge_group_fraction->count() > 0;
      ge.has_seed = ge_seed->count() > 0;
      return cmd_generate(ge);
    }
    if (experiment->parsed()) {
      return cmd_experiment(ex_design, ex_input, ex_m, ex_alpha, ex_relation, ex_left,
                            ex_points, ex_steps, ex_output_dir);
    }
    std::cerr << "error: usage: no subcommand given\n";
    return 2;
  } catch (const UsageError& e) {
    std::cerr << "error: usage: " << e.what() << "\n";
    return 2;
  } catch (const std::ios_base::failure& e) {
    std::cerr << "error: io: " << e.what() << "\n";
    return 1;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: domain: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: internal: " << e.what() << "\n";
    return 1;
  }
}
