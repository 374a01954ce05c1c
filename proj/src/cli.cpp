#include "effdf/cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <cmath>
#include <fstream>
#include <json.hpp>
#include <ostream>
#include <sstream>

#include "effdf/applications.hpp"
#include "effdf/calibration.hpp"
#include "effdf/error.hpp"
#include "effdf/estimators.hpp"
#include "effdf/io.hpp"
#include "effdf/published.hpp"
#include "effdf/sampling.hpp"

namespace effdf::cli {

namespace {

struct Common {
  std::string format;
  unsigned long long seed = kDefaultSeed;
  int replicates = 10000;
  int threads = 0;
};

io::Table estimates_table(const std::vector<DfEstimate>& estimates) {
  io::Table t{{"method", "df"}, {}};
  for (const auto& e : estimates) t.rows.push_back({e.method.label(), e.value});
  return t;
}

io::Table components_table(const std::vector<VarianceComponent>& comps) {
  io::Table t{{"weight", "s2", "df"}, {}};
  for (const auto& c : comps) t.rows.push_back({c.weight(), c.s2(), static_cast<long long>(c.df())});
  return t;
}

// --- estimate -------------------------------------------------------------

struct EstimateArgs {
  std::string path;
  std::string method = "all";
  double constant = AdjustmentConfig::kRecommendedConstant;
  int offset = 0;
  std::string format = "markdown";
};

int cmd_estimate(const EstimateArgs& a, std::ostream& out) {
  const auto comps = io::read_component_file(a.path);
  const auto format = io::parse_format(a.format);
  std::vector<Method> methods;
  if (a.method == "all") {
    methods = {Method::satterthwaite()};
    if (comps.size() >= 2) methods.push_back(Method::von_davier_2025());
    methods.push_back(Method::adjusted(a.constant, a.offset));
  } else if (a.method == "satterthwaite") {
    methods = {Method::satterthwaite()};
  } else if (a.method == "vd2025") {
    methods = {Method::von_davier_2025()};
  } else if (a.method == "adjusted") {
    methods = {Method::adjusted(a.constant, a.offset)};
  } else {
    throw InputError("unknown method '" + a.method + "'");
  }
  std::vector<DfEstimate> estimates;
  for (const auto& m : methods) estimates.push_back(estimate(comps, m));
  io::render(estimates_table(estimates), format, out);
  return kExitOk;
}

// --- reproduce ------------------------------------------------------------

struct ReproduceArgs {
  std::string table;
  Common common{"markdown"};
  bool diff = false;
};

int cmd_reproduce(const ReproduceArgs& a, std::ostream& out) {
  const auto format = io::parse_format(a.common.format);
  const SimulationGrid grid = SimulationGrid::published(a.common.replicates, a.common.seed);
  const Execution exec{a.common.threads};

  if (a.table == "x2") {
    io::Table t{{"method", "C", "K_adj", "x2", "x2_relative"}, {}};
    if (a.diff) t.columns.push_back("published_x2");
    for (const auto& row : published::x2_rows()) {
      const MeanDfTable table = generate_table(grid, row.method, exec);
      const Method& m = row.method;
      std::vector<io::Value> r{std::string(row.label)};
      if (m.kind == EstimatorKind::Satterthwaite) {
        r.push_back(std::string("N/A"));
        r.push_back(std::string("N/A"));
      } else {
        r.push_back(m.config.c());
        r.push_back(std::string(m.config.offset() == 1 ? "K-1" : "K"));
      }
      r.push_back(pseudo_x2(table, X2Normalization::Expected));
      r.push_back(pseudo_x2(table, X2Normalization::SquaredExpected));
      if (a.diff) r.push_back(row.x2);
      t.rows.push_back(std::move(r));
    }
    io::render(t, format, out);
    return kExitOk;
  }

  int id = 0;
  try {
    id = std::stoi(a.table);
  } catch (const std::exception&) {
    throw InputError("table must be 1, 2, 3, 4 or x2");
  }
  if (std::to_string(id) != a.table) throw InputError("table must be 1, 2, 3, 4 or x2");
  const published::MeanTable ref = published::mean_table(id);
  const MeanDfTable table = generate_table(grid, ref.method, exec);

  io::Table t{{"K", "nu", "expected", "mean", "std_error"}, {}};
  if (a.diff) {
    t.columns.push_back("published");
    t.columns.push_back("z");
  }
  for (std::size_t i = 0; i < grid.k_values.size(); ++i) {
    for (std::size_t j = 0; j < grid.nu_values.size(); ++j) {
      const CellStats& c = table.cell(i, j);
      std::vector<io::Value> r{static_cast<long long>(grid.k_values[i]), static_cast<long long>(grid.nu_values[j]),
                               c.expected, c.mean, c.std_error};
      if (a.diff) {
        const double p = (*ref.means)[i][j];
        r.push_back(p);
        r.push_back(c.std_error > 0.0 ? (c.mean - p) / c.std_error : std::nan(""));
      }
      t.rows.push_back(std::move(r));
    }
  }
  io::render(t, format, out);
  return kExitOk;
}

// --- calibrate ------------------------------------------------------------

struct CalibrateArgs {
  int kmax = 5;
  int numax = 5;
  CalibrationOptions options;
  std::string normalization = "relative";
  Common common{"json"};
  std::string curve_path;
};

nlohmann::json summary_json(const CalibrationCurve& c) {
  nlohmann::json j;
  j["size"] = {c.k_max, c.nu_max};
  j["cells"] = c.cells;
  j["degree"] = c.fitted_degree;
  j["r_squared"] = c.r_squared;
  j["c_opt"] = c.c_opt;
  j["x2_min"] = c.x2_min;
  j["coefficients"] = c.coefficients;
  return j;
}

int cmd_calibrate(CalibrateArgs a, std::ostream& out) {
  const auto format = io::parse_format(a.common.format);
  if (a.normalization == "relative") {
    a.options.normalization = X2Normalization::SquaredExpected;
  } else if (a.normalization == "expected") {
    a.options.normalization = X2Normalization::Expected;
  } else {
    throw InputError("normalization must be 'relative' or 'expected'");
  }
  if (!(a.options.c_min >= a.options.bound_low && a.options.c_min < a.options.c_max &&
        a.options.c_max <= a.options.bound_high))
    throw InputError("need bound_low <= cmin < cmax <= bound_high");
  a.options.exec.threads = a.common.threads;

  const CalibrationCurve curve = calibrate(a.kmax, a.numax, a.common.replicates, a.common.seed, a.options);

  if (!a.curve_path.empty()) {
    std::ofstream f(a.curve_path, std::ios::binary);
    if (!f) throw InputError("cannot write " + a.curve_path);
    io::Table t{{"C", "X2"}, {}};
    for (std::size_t i = 0; i < curve.c_points.size(); ++i) t.rows.push_back({curve.c_points[i], curve.x2_points[i]});
    io::render(t, io::Format::Csv, f);
  }

  if (format == io::Format::Json) {
    out << summary_json(curve).dump(2) << "\n";
  } else {
    io::Table t{{"k_max", "nu_max", "cells", "degree", "r_squared", "c_opt", "x2_min"}, {}};
    t.rows.push_back({static_cast<long long>(curve.k_max), static_cast<long long>(curve.nu_max),
                      static_cast<long long>(curve.cells), static_cast<long long>(curve.fitted_degree),
                      curve.r_squared, curve.c_opt, curve.x2_min});
    io::render(t, format, out);
  }
  return kExitOk;
}

// --- density --------------------------------------------------------------

struct DensityArgs {
  Common common{"csv"};
  int bins = 50;
  std::string samples_path;
};

int cmd_density(const DensityArgs& a, std::ostream& out) {
  const auto format = io::parse_format(a.common.format);
  Rng rng = substream(a.common.seed, 2, 1, 0x64656e73ULL, 0);
  const std::vector<double> samples = ratio_samples_k2_nu1(a.common.replicates, rng);
  const Histogram h = make_histogram(samples, a.bins, 1.0, 2.0);

  if (!a.samples_path.empty()) {
    std::ofstream f(a.samples_path, std::ios::binary);
    if (!f) throw InputError("cannot write " + a.samples_path);
    f << "ratio\r\n";
    for (double x : samples) f << io::format_double(x) << "\r\n";
  }

  io::Table t{{"bin_low", "bin_high", "count", "density"}, {}};
  const double n = static_cast<double>(samples.size());
  for (std::size_t i = 0; i < h.counts.size(); ++i) {
    const double lo = h.low + static_cast<double>(i) * h.bin_width();
    const double hi = i + 1 == h.counts.size() ? h.high : lo + h.bin_width();
    t.rows.push_back({lo, hi, static_cast<long long>(h.counts[i]), static_cast<double>(h.counts[i]) / (n * h.bin_width())});
  }
  io::render(t, format, out);
  return kExitOk;
}

// --- apply ----------------------------------------------------------------

struct ApplyArgs {
  double constant = AdjustmentConfig::kRecommendedConstant;
  int offset = 0;
  std::string format = "markdown";

  RubinVariance rubin;
  WelchInput welch;
  int welch_df1 = 0;
  int welch_df2 = 0;
  std::vector<double> deviations;
  std::string deviations_path;
};

void print_apply(const std::vector<VarianceComponent>& comps, const DfEstimate& e, io::Format f, std::ostream& out) {
  if (f == io::Format::Json) {
    nlohmann::json j;
    j["method"] = e.method.label();
    j["df"] = e.value;
    j["components"] = nlohmann::json::array();
    for (const auto& c : comps) j["components"].push_back({{"weight", c.weight()}, {"s2", c.s2()}, {"df", c.df()}});
    out << j.dump(2) << "\n";
    return;
  }
  io::render(estimates_table({e}), f, out);
  out << "\n";
  io::render(components_table(comps), f, out);
}

std::vector<double> read_deviations(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw InputError("cannot open " + path);
  std::vector<double> out;
  std::string line;
  int line_no = 0;
  while (std::getline(f, line)) {
    ++line_no;
    for (auto& field : io::split_csv_record(line)) {
      const auto first = field.find_first_not_of(" \t\r");
      if (first == std::string::npos) continue;
      try {
        std::size_t used = 0;
        out.push_back(std::stod(field, &used));
        if (field.find_first_not_of(" \t\r", used) != std::string::npos) throw std::invalid_argument("trailing");
      } catch (const std::exception&) {
        throw InputError("line " + std::to_string(line_no) + ": not a number: '" + field + "'");
      }
    }
  }
  return out;
}

int cmd_apply(const std::string& which, ApplyArgs a, std::ostream& out) {
  const auto format = io::parse_format(a.format);
  const AdjustmentConfig config{a.constant, a.offset};
  if (which == "rubin") {
    const auto comps = rubin_components(a.rubin);
    print_apply(comps, rubin_df(a.rubin, config), format, out);
  } else if (which == "welch") {
    a.welch.df1 = a.welch_df1 > 0 ? a.welch_df1 : a.welch.n1 - 1;
    a.welch.df2 = a.welch_df2 > 0 ? a.welch_df2 : a.welch.n2 - 1;
    const auto comps = welch_components(a.welch);
    print_apply(comps, welch_df(a.welch, config), format, out);
  } else if (which == "jackknife") {
    if (a.offset != 0) throw InputError("jackknife uses offset 0");
    JackknifeDeviations jk{a.deviations, a.constant};
    if (!a.deviations_path.empty()) {
      const auto more = read_deviations(a.deviations_path);
      jk.deviations.insert(jk.deviations.end(), more.begin(), more.end());
    }
    const auto comps = jackknife_components(jk);
    print_apply(comps, jackknife_df(jk), format, out);
  } else {
    brr_df();
  }
  return kExitOk;
}

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("--seed", c.seed, "random seed")->capture_default_str();
  cmd->add_option("--replicates", c.replicates, "Monte Carlo replicates")->capture_default_str()->check(CLI::PositiveNumber);
  cmd->add_option("--threads", c.threads, "worker threads (0 = all)")->capture_default_str()->check(CLI::NonNegativeNumber);
  cmd->add_option("--format", c.format, "csv, markdown or json")->capture_default_str();
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Effective degrees of freedom for weighted syntheses of variance components", "effdf"};
  app.require_subcommand(1);

  EstimateArgs est;
  auto* estimate_cmd = app.add_subcommand("estimate", "estimate d.f. from a component file");
  estimate_cmd->add_option("input", est.path, "CSV (weight,s2,df) or JSON component file")->required();
  estimate_cmd->add_option("--method", est.method, "satterthwaite, vd2025, adjusted or all")->capture_default_str();
  estimate_cmd->add_option("--constant", est.constant, "correction constant C")->capture_default_str();
  estimate_cmd->add_option("--offset", est.offset, "offset p in K - p (0 or 1)")->capture_default_str();
  estimate_cmd->add_option("--format", est.format, "csv, markdown or json")->capture_default_str();

  ReproduceArgs rep;
  auto* reproduce_cmd = app.add_subcommand("reproduce", "regenerate a published mean-d.f. or X2 table");
  reproduce_cmd->add_option("table", rep.table, "1, 2, 3, 4 or x2")->required();
  add_common(reproduce_cmd, rep.common);
  reproduce_cmd->add_flag("--diff", rep.diff, "also print published values and z-scores");

  CalibrateArgs cal;
  auto* calibrate_cmd = app.add_subcommand("calibrate", "select the correction constant by Monte Carlo");
  calibrate_cmd->add_option("--kmax", cal.kmax, "largest K")->capture_default_str()->check(CLI::Range(2, 100000));
  calibrate_cmd->add_option("--numax", cal.numax, "largest nu")->capture_default_str()->check(CLI::Range(1, 100000));
  calibrate_cmd->add_option("--cmin", cal.options.c_min, "smallest C")->capture_default_str();
  calibrate_cmd->add_option("--cmax", cal.options.c_max, "largest C")->capture_default_str();
  calibrate_cmd->add_option("--step", cal.options.step, "C grid spacing")->capture_default_str();
  calibrate_cmd->add_option("--bound-low", cal.options.bound_low, "open lower bound of the C interval")->capture_default_str();
  calibrate_cmd->add_option("--bound-high", cal.options.bound_high, "open upper bound of the C interval")->capture_default_str();
  calibrate_cmd->add_option("--folds", cal.options.folds, "cross-validation folds")->capture_default_str();
  calibrate_cmd->add_option("--max-degree", cal.options.max_degree, "largest polynomial degree")->capture_default_str();
  calibrate_cmd->add_option("--normalization", cal.normalization, "relative: (K nu)^2, expected: K nu")->capture_default_str();
  calibrate_cmd->add_option("--curve", cal.curve_path, "write the (C, X2) curve as CSV");
  add_common(calibrate_cmd, cal.common);

  DensityArgs den;
  den.common.replicates = 10000;
  auto* density_cmd = app.add_subcommand("density", "histogram of the K = 2, nu = 1 Satterthwaite estimate");
  add_common(density_cmd, den.common);
  density_cmd->add_option("--bins", den.bins, "histogram bins over [1, 2]")->capture_default_str()->check(CLI::PositiveNumber);
  density_cmd->add_option("--samples", den.samples_path, "write raw samples as CSV");

  ApplyArgs ap;
  auto* apply_cmd = app.add_subcommand("apply", "adjusted d.f. for a worked setting");
  apply_cmd->require_subcommand(1);
  auto add_config = [&](CLI::App* c) {
    c->add_option("--constant", ap.constant, "correction constant C")->capture_default_str();
    c->add_option("--offset", ap.offset, "offset p in K - p (0 or 1)")->capture_default_str();
    c->add_option("--format", ap.format, "csv, markdown or json")->capture_default_str();
  };
  auto* rubin_cmd = apply_cmd->add_subcommand("rubin", "multiple-imputation total variance");
  rubin_cmd->add_option("--m", ap.rubin.m, "number of imputations")->required();
  rubin_cmd->add_option("--sampling-s2", ap.rubin.sampling_s2, "sampling variance")->required();
  rubin_cmd->add_option("--sampling-df", ap.rubin.sampling_df, "sampling variance d.f.")->required();
  rubin_cmd->add_option("--imputation-s2", ap.rubin.imputation_s2, "between-imputation variance")->required();
  add_config(rubin_cmd);
  auto* welch_cmd = apply_cmd->add_subcommand("welch", "two-sample Welch setting");
  welch_cmd->add_option("--s2-1", ap.welch.s2_1, "sample variance 1")->required();
  welch_cmd->add_option("--s2-2", ap.welch.s2_2, "sample variance 2")->required();
  welch_cmd->add_option("--n1", ap.welch.n1, "sample size 1")->required();
  welch_cmd->add_option("--n2", ap.welch.n2, "sample size 2")->required();
  welch_cmd->add_option("--df1", ap.welch_df1, "d.f. of variance 1 (default n1 - 1)");
  welch_cmd->add_option("--df2", ap.welch_df2, "d.f. of variance 2 (default n2 - 1)");
  add_config(welch_cmd);
  auto* jk_cmd = apply_cmd->add_subcommand("jackknife", "jackknife pseudo-value deviations");
  jk_cmd->add_option("--deviations", ap.deviations, "deviations T - T_k")->delimiter(',');
  jk_cmd->add_option("--file", ap.deviations_path, "file of deviations (comma or newline separated)");
  add_config(jk_cmd);
  apply_cmd->add_subcommand("brr", "balanced repeated replication (unsupported)");

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend() - (args.empty() ? 0 : 1));
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInput;
  }

  try {
    if (estimate_cmd->parsed()) return cmd_estimate(est, out);
    if (reproduce_cmd->parsed()) return cmd_reproduce(rep, out);
    if (calibrate_cmd->parsed()) return cmd_calibrate(cal, out);
    if (density_cmd->parsed()) return cmd_density(den, out);
    if (apply_cmd->parsed()) {
      for (const char* name : {"rubin", "welch", "jackknife", "brr"})
        if (apply_cmd->get_subcommand(name)->parsed()) return cmd_apply(name, ap, out);
    }
  } catch (const InputError& e) {
    err << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const DegenerateError& e) {
    err << "error: " << e.what() << "\n";
    return kExitNumerical;
  }
  return kExitInput;
}

}  // namespace effdf::cli
