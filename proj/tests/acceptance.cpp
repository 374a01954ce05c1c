// Acceptance suite: one PASS/FAIL line per criterion.
//
//   acceptance        run all criteria
//   acceptance N      run criterion N only (1..7)
//
// Exit status is 0 only if every selected criterion passed.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "effdf/applications.hpp"
#include "effdf/cli.hpp"
#include "effdf/estimators.hpp"
#include "effdf/published.hpp"
#include "effdf/sampling.hpp"

using namespace effdf;

namespace {

// Tolerances.
constexpr int kReplicates = 10000;
constexpr std::uint64_t kSeed = 20250515;
constexpr double kCellSe = 3.0;         // cells: max(3 SE, 1% relative)
constexpr double kCellRel = 0.01;
constexpr double kRatioTol = 0.002;
constexpr double kConstantTol = 0.01;
constexpr double kX2SatterthwaiteMin = 10.0;
constexpr double kX2AdjustedMax = 0.1;
constexpr double kCoptTol = 0.06;
constexpr double kRSquaredMin = 0.99;
constexpr int kDegreeMax = 6;
constexpr double kRescaleRel = 1e-12;
constexpr double kMomentSe = 5.0;
constexpr int kRandomInputs = 1000;

struct Outcome {
  bool pass = true;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

bool cell_ok(const CellStats& c, double target) {
  return std::abs(c.mean - target) <= std::max(kCellSe * c.std_error, kCellRel * std::abs(target));
}

// Compares a simulated table with its published counterpart; reports the worst
// cell in units of the tolerance.
Outcome compare_table(int id, const MeanDfTable& table) {
  const auto ref = published::mean_table(id);
  const auto& grid = table.grid();
  Outcome o;
  int fails = 0;
  double worst = 0.0;
  int wk = 0, wnu = 0;
  for (std::size_t i = 0; i < grid.k_values.size(); ++i)
    for (std::size_t j = 0; j < grid.nu_values.size(); ++j) {
      const auto& c = table.cell(i, j);
      const double p = (*ref.means)[i][j];
      const double tol = std::max(kCellSe * c.std_error, kCellRel * std::abs(p));
      const double r = std::abs(c.mean - p) / tol;
      if (r > worst) {
        worst = r;
        wk = grid.k_values[i];
        wnu = grid.nu_values[j];
      }
      if (!cell_ok(c, p)) {
        ++fails;
        std::cout << fmt("  table %d K=%d nu=%d: mean %.4f se %.4f published %.2f\n", id, grid.k_values[i],
                         grid.nu_values[j], c.mean, c.std_error, p);
      }
    }
  o.pass = fails == 0;
  o.detail = fmt("table %d (%s): %d/64 cells outside tolerance, worst |diff|/tol %.3f at K=%d nu=%d", id,
                 std::string(ref.name).c_str(), fails, worst, wk, wnu);
  return o;
}

MeanDfTable published_table(int id) {
  return generate_table(SimulationGrid::published(kReplicates, kSeed), published::mean_table(id).method);
}

Outcome criterion1() { return compare_table(1, published_table(1)); }

Outcome criterion2() {
  Outcome o;
  const double expected_21[] = {1.42, 2.00, 1.80};
  for (int id = 2; id <= 4; ++id) {
    const auto t = published_table(id);
    const auto r = compare_table(id, t);
    std::cout << "  " << r.detail << "\n";
    o.pass = o.pass && r.pass;
    const auto& c = t.at(2, 1);
    const bool ok = cell_ok(c, expected_21[id - 2]);
    std::cout << fmt("  table %d K=2 nu=1: %.4f (target %.2f) %s\n", id, c.mean, expected_21[id - 2], ok ? "ok" : "off");
    o.pass = o.pass && ok;
    if (id == 4) {
      const auto& c69 = t.at(6, 9);
      const bool ok69 = cell_ok(c69, 53.76);
      std::cout << fmt("  table 4 K=6 nu=9: %.4f (target 53.76) %s\n", c69.mean, ok69 ? "ok" : "off");
      o.pass = o.pass && ok69;
    }
  }
  o.detail = "tables 2-4 within max(3 SE, 1%) of published cells";
  return o;
}

Outcome criterion3() {
  Rng rng(kSeed);
  const double m = ratio_mean_k2_nu1(published::kRatioMeanReplicates, rng);
  const double c = (6.0 - 2.0 * m) / m;
  Outcome o;
  o.pass = std::abs(m - published::kRatioMeanK2Nu1) <= kRatioTol && std::abs(c - 2.24) <= kConstantTol;
  o.detail = fmt("K=2 nu=1 ratio mean %.5f over %d draws (target 1.41425 +- %.3f); C = (6 - 2m)/m = %.4f "
                 "(target 2.24 +- %.2f)",
                 m, published::kRatioMeanReplicates, kRatioTol, c, kConstantTol);
  return o;
}

Outcome criterion4() {
  const auto grid = SimulationGrid::published(kReplicates, kSeed);
  std::vector<double> x2;
  for (const auto& row : published::x2_rows()) {
    const auto t = generate_table(grid, row.method);
    x2.push_back(pseudo_x2(t, X2Normalization::Expected));
    std::cout << fmt("  %-22s X2 %.5f  (relative %.5f, published %.5f)\n", std::string(row.label).c_str(), x2.back(),
                     pseudo_x2(t, X2Normalization::SquaredExpected), row.x2);
  }
  const bool ordered = x2[0] > x2[1] && x2[1] > x2[2] && x2[2] > x2[3];
  const bool satt_large = x2[0] > kX2SatterthwaiteMin;
  const bool adj_small = x2[3] < kX2AdjustedMax;
  Outcome o;
  o.pass = ordered && satt_large && adj_small;
  o.detail = fmt("ordering %s; X2(Satterthwaite) = %.3f > %.0f %s; X2(2.69, K) = %.4f < %.1f %s", ordered ? "ok" : "violated",
                 x2[0], kX2SatterthwaiteMin, satt_large ? "ok" : "violated", x2[3], kX2AdjustedMax,
                 adj_small ? "ok" : "violated");
  return o;
}

Outcome calibrate_size(int k, double target) {
  std::ostringstream out, err;
  const int code = cli::run({"effdf", "calibrate", "--kmax", std::to_string(k), "--numax", std::to_string(k),
                             "--replicates", std::to_string(kReplicates), "--seed", std::to_string(kSeed)},
                            out, err);
  Outcome o;
  if (code != 0) {
    o.pass = false;
    o.detail = fmt("calibrate (%d,%d) exited %d: %s", k, k, code, err.str().c_str());
    return o;
  }
  const auto j = nlohmann::json::parse(out.str());
  const double c_opt = j["c_opt"].get<double>();
  const double r2 = j["r_squared"].get<double>();
  const int degree = j["degree"].get<int>();
  o.pass = std::abs(c_opt - target) <= kCoptTol && r2 > kRSquaredMin && degree <= kDegreeMax;
  o.detail = fmt("(%d,%d): c_opt %.4f (target %.2f +- %.2f), R2 %.6f, degree %d, min X2 %.5f", k, k, c_opt, target,
                 kCoptTol, r2, degree, j["x2_min"].get<double>());
  return o;
}

Outcome criterion5() {
  const auto a = calibrate_size(5, 2.42);
  const auto b = calibrate_size(10, 2.53);
  return {a.pass && b.pass, a.detail + "; " + b.detail};
}

std::vector<VarianceComponent> random_synthesis(Rng& rng) {
  std::uniform_int_distribution<int> k_dist(2, 12);
  std::uniform_int_distribution<int> df_dist(1, 60);
  std::uniform_real_distribution<double> log_dist(-3.0, 3.0);
  const int k = k_dist(rng);
  std::vector<VarianceComponent> out;
  for (int i = 0; i < k; ++i) out.emplace_back(std::pow(10.0, log_dist(rng)), std::pow(10.0, log_dist(rng)), df_dist(rng));
  return out;
}

bool rel_close(double a, double b) { return std::abs(a - b) <= kRescaleRel * std::max(std::abs(a), std::abs(b)); }

Outcome criterion6() {
  Rng rng(kSeed);
  std::uniform_real_distribution<double> log_scale(-6.0, 6.0);
  std::uniform_real_distribution<double> c_dist(0.0, 4.0);
  const std::vector<Method> methods{Method::satterthwaite(), Method::von_davier_2025(), Method::recommended(),
                                    Method::adjusted(2.69, 0)};
  int rescale_bad = 0, offset_bad = 0, bound_bad = 0;
  for (int trial = 0; trial < kRandomInputs; ++trial) {
    const auto c = random_synthesis(rng);
    const double cw = std::pow(10.0, log_scale(rng));
    const double rs = std::pow(10.0, log_scale(rng));
    std::vector<VarianceComponent> by_w, by_s2;
    int df_sum = 0;
    for (const auto& x : c) {
      by_w.emplace_back(x.weight() * cw, x.s2(), x.df());
      by_s2.emplace_back(x.weight(), x.s2() / rs, x.df());
      df_sum += x.df();
    }
    for (const auto& m : methods) {
      const double base = estimate(c, m).value;
      if (!rel_close(estimate(by_w, m).value, base) || !rel_close(estimate(by_s2, m).value, base)) ++rescale_bad;
    }
    const double k = static_cast<double>(c.size());
    const double constant = c_dist(rng);
    if (adjusted_df(c, {constant, 1}).value != adjusted_df(c, {constant * k / (k - 1.0), 0}).value) ++offset_bad;
    if (satterthwaite_df(c).value > df_sum * (1.0 + 1e-15)) ++bound_bad;
  }
  std::cout << fmt("  rescaling: %d/%d mismatches; offset: %d/%d; Satterthwaite bound: %d/%d\n", rescale_bad,
                   kRandomInputs * static_cast<int>(methods.size()), offset_bad, kRandomInputs, bound_bad, kRandomInputs);

  const auto ratios = ratio_samples_k2_nu1(1'000'000, rng);
  const auto outside = std::count_if(ratios.begin(), ratios.end(), [](double r) { return r < 1.0 || r > 2.0; });
  std::cout << fmt("  K=2 nu=1 ratio outside [1,2]: %ld of 1000000\n", static_cast<long>(outside));

  int moment_bad = 0;
  for (int nu : {1, 3, 5, 9}) {
    RunningStats s;
    for (int i = 0; i < 1'000'000; ++i) s.push(sample_chi2(nu, rng));
    const double n = static_cast<double>(s.count());
    const double zm = (s.mean() - nu) / std::sqrt(2.0 * nu / n);
    const double zv = (s.variance() - 2.0 * nu) / std::sqrt((48.0 * nu + 8.0 * nu * nu) / n);
    if (std::abs(zm) > kMomentSe || std::abs(zv) > kMomentSe) ++moment_bad;
    std::cout << fmt("  chi2(%d): mean %.5f (z %.2f), variance %.5f (z %.2f)\n", nu, s.mean(), zm, s.variance(), zv);
  }

  const SimulationGrid grid{{2, 4, 10}, {1, 5, 9}, 3000, kSeed};
  const auto serial = reference::generate_table(grid, Method::recommended());
  int repro_bad = 0;
  for (int threads : {1, 2, 4, 8})
    if (!(generate_table(grid, Method::recommended(), Execution{threads}) == serial)) ++repro_bad;
  std::cout << fmt("  thread counts 1/2/4/8 vs serial reference: %d differ\n", repro_bad);

  Outcome o;
  o.pass = rescale_bad == 0 && offset_bad == 0 && bound_bad == 0 && outside == 0 && moment_bad == 0 && repro_bad == 0;
  o.detail = "rescaling invariance, offset equivalence, Satterthwaite bound, ratio bounds, sampler moments, "
             "thread-count reproducibility";
  return o;
}

Outcome criterion7() {
  Rng rng(kSeed + 7);
  std::uniform_real_distribution<double> s2(0.01, 100.0);
  std::uniform_real_distribution<double> c_dist(0.0, 4.0);
  std::uniform_int_distribution<int> small(2, 60);
  std::uniform_int_distribution<int> offset(0, 1);
  int bad = 0;
  for (int i = 0; i < kRandomInputs; ++i) {
    const AdjustmentConfig cfg{c_dist(rng), offset(rng)};
    const RubinVariance r{s2(rng), small(rng), s2(rng), small(rng)};
    if (rubin_df(r, cfg).value != adjusted_df(rubin_components(r), cfg).value) ++bad;

    WelchInput w{s2(rng), s2(rng), small(rng), small(rng), 1, 1};
    w.df1 = std::uniform_int_distribution<int>(1, w.n1 - 1)(rng);
    w.df2 = std::uniform_int_distribution<int>(1, w.n2 - 1)(rng);
    if (welch_df(w, cfg).value != adjusted_df(welch_components(w), cfg).value) ++bad;

    JackknifeDeviations jk;
    jk.constant = cfg.c();
    const int n = small(rng);
    for (int k = 0; k < n; ++k) jk.deviations.push_back(s2(rng) - 50.0);
    if (jackknife_df(jk).value != adjusted_df(jackknife_components(jk), {cfg.c(), 0}).value) ++bad;
  }
  return {bad == 0, fmt("rubin/welch/jackknife vs adjusted_df on %d random inputs each: %d mismatches", kRandomInputs, bad)};
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"Satterthwaite mean-d.f. table", criterion1},
      {"adjusted mean-d.f. tables", criterion2},
      {"K=2 nu=1 ratio mean and derived constant", criterion3},
      {"pseudo-X2 ordering and magnitude", criterion4},
      {"calibration of C at (5,5) and (10,10)", criterion5},
      {"property suites", criterion6},
      {"adapter equivalence", criterion7},
  };

  int only = 0;
  if (argc > 1) {
    only = std::atoi(argv[1]);
    if (only < 1 || only > static_cast<int>(criteria.size())) {
      std::cerr << "usage: acceptance [1-" << criteria.size() << "]\n";
      return 2;
    }
  }

  bool all = true;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    if (only && static_cast<int>(i) + 1 != only) continue;
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    std::cout << (o.pass ? "PASS" : "FAIL") << " [" << i + 1 << "] " << criteria[i].first << ": " << o.detail << "\n"
              << std::flush;
    all = all && o.pass;
  }
  return all ? 0 : 1;
}
