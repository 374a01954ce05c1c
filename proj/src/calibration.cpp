#include "effdf/calibration.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <boost/math/tools/minima.hpp>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

#include "effdf/detail/mix.hpp"
#include "effdf/error.hpp"

namespace effdf {

namespace {

constexpr std::uint64_t kCurveStreamTag = 0x7832637572766521ULL;

struct Affine {
  double center = 0.0;
  double scale = 1.0;
};

Affine normalizer(std::span<const CurvePoint> points) {
  auto [lo, hi] = std::minmax_element(points.begin(), points.end(),
                                      [](const CurvePoint& a, const CurvePoint& b) { return a.x < b.x; });
  Affine a;
  a.center = 0.5 * (lo->x + hi->x);
  const double half = 0.5 * (hi->x - lo->x);
  a.scale = half > 0.0 ? half : 1.0;
  return a;
}

// Coefficients in t = (x - center) / scale; empty on rank deficiency.
Eigen::VectorXd solve_scaled(std::span<const CurvePoint> points, std::span<const std::size_t> rows, int degree,
                             const Affine& a) {
  const auto n = static_cast<Eigen::Index>(rows.size());
  const auto p = static_cast<Eigen::Index>(degree + 1);
  if (n < p) return {};
  Eigen::MatrixXd design(n, p);
  Eigen::VectorXd y(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const CurvePoint& pt = points[rows[static_cast<std::size_t>(i)]];
    const double t = (pt.x - a.center) / a.scale;
    double v = 1.0;
    for (Eigen::Index j = 0; j < p; ++j) {
      design(i, j) = v;
      v *= t;
    }
    y(i) = pt.y;
  }
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(design);
  if (qr.rank() < p) return {};
  return qr.solve(y);
}

// Expand sum_j b_j ((x - c) / s)^j into ascending powers of x.
std::vector<double> to_original(const Eigen::VectorXd& scaled, const Affine& a) {
  const auto p = static_cast<std::size_t>(scaled.size());
  std::vector<double> out(p, 0.0);
  // basis holds the coefficients of ((x - c) / s)^j
  std::vector<double> basis{1.0};
  for (std::size_t j = 0; j < p; ++j) {
    for (std::size_t i = 0; i < basis.size(); ++i) out[i] += scaled(static_cast<Eigen::Index>(j)) * basis[i];
    std::vector<double> next(basis.size() + 1, 0.0);
    for (std::size_t i = 0; i < basis.size(); ++i) {
      next[i + 1] += basis[i] / a.scale;
      next[i] -= basis[i] * a.center / a.scale;
    }
    basis = std::move(next);
  }
  return out;
}

double scaled_value(const Eigen::VectorXd& b, double t) {
  double v = 0.0;
  for (Eigen::Index j = b.size(); j-- > 0;) v = v * t + b(j);
  return v;
}

}  // namespace

double polyval(std::span<const double> coefficients, double x) noexcept {
  double v = 0.0;
  for (std::size_t j = coefficients.size(); j-- > 0;) v = v * x + coefficients[j];
  return v;
}

std::vector<double> fit_polynomial(std::span<const CurvePoint> points, int degree) {
  if (degree < 0) throw InputError("degree must be nonnegative");
  if (points.empty()) throw InputError("no points to fit");
  std::vector<std::size_t> rows(points.size());
  std::iota(rows.begin(), rows.end(), std::size_t{0});
  const Affine a = normalizer(points);
  const Eigen::VectorXd b = solve_scaled(points, rows, degree, a);
  if (b.size() == 0) throw DegenerateError("rank-deficient polynomial design");
  return to_original(b, a);
}

PolynomialFit fit_polynomial_cv(std::span<const CurvePoint> points, int max_degree, int folds, std::uint64_t seed) {
  if (max_degree < 1) throw InputError("max_degree must be at least 1");
  if (folds < 2) throw InputError("need at least two folds");
  if (points.size() < static_cast<std::size_t>(folds)) throw InputError("fewer points than folds");

  std::vector<std::size_t> order(points.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::mt19937_64 rng(detail::mix64(seed));
  std::shuffle(order.begin(), order.end(), rng);
  std::vector<int> fold_of(points.size());
  for (std::size_t i = 0; i < order.size(); ++i) fold_of[order[i]] = static_cast<int>(i % static_cast<std::size_t>(folds));

  const Affine a = normalizer(points);
  PolynomialFit fit;
  fit.cv_rmse.assign(static_cast<std::size_t>(max_degree), std::numeric_limits<double>::infinity());

  for (int d = 1; d <= max_degree; ++d) {
    double total = 0.0;
    bool ok = true;
    for (int f = 0; f < folds && ok; ++f) {
      std::vector<std::size_t> train;
      std::vector<std::size_t> test;
      for (std::size_t i = 0; i < points.size(); ++i) (fold_of[i] == f ? test : train).push_back(i);
      const Eigen::VectorXd b = solve_scaled(points, train, d, a);
      if (b.size() == 0) {
        ok = false;
        break;
      }
      double sse = 0.0;
      for (std::size_t i : test) {
        const double r = points[i].y - scaled_value(b, (points[i].x - a.center) / a.scale);
        sse += r * r;
      }
      total += std::sqrt(sse / static_cast<double>(test.size()));
    }
    if (ok) fit.cv_rmse[static_cast<std::size_t>(d - 1)] = total / folds;
  }

  const double best = *std::min_element(fit.cv_rmse.begin(), fit.cv_rmse.end());
  if (!std::isfinite(best)) throw DegenerateError("no polynomial degree could be cross-validated");
  for (int d = 1; d <= max_degree; ++d) {
    if (fit.cv_rmse[static_cast<std::size_t>(d - 1)] <= best + 1e-12) {
      fit.degree = d;
      break;
    }
  }

  fit.coefficients = fit_polynomial(points, fit.degree);

  double mean = 0.0;
  for (const auto& p : points) mean += p.y;
  mean /= static_cast<double>(points.size());
  double sse = 0.0;
  double sst = 0.0;
  for (const auto& p : points) {
    const double r = p.y - polyval(fit.coefficients, p.x);
    sse += r * r;
    sst += (p.y - mean) * (p.y - mean);
  }
  fit.r_squared = sst > 0.0 ? 1.0 - sse / sst : 1.0;
  return fit;
}

Minimum find_c_opt(std::span<const double> coefficients, double low, double high, double step) {
  if (coefficients.empty()) throw InputError("empty polynomial");
  if (!(high > low)) throw InputError("search interval is empty");
  if (!(step > 0.0)) throw InputError("step must be positive");
  const auto n = static_cast<long>(std::ceil((high - low) / step));
  const double h = (high - low) / static_cast<double>(n);

  long best_i = 0;
  double best = polyval(coefficients, low);
  for (long i = 1; i <= n; ++i) {
    const double x = i == n ? high : low + static_cast<double>(i) * h;
    const double v = polyval(coefficients, x);
    if (v < best) {
      best = v;
      best_i = i;
    }
  }
  const double grid_x = best_i == n ? high : low + static_cast<double>(best_i) * h;

  const double a = std::max(low, grid_x - h);
  const double b = std::min(high, grid_x + h);
  const auto f = [&](double x) { return polyval(coefficients, x); };
  const auto [rx, rv] = boost::math::tools::brent_find_minima(f, a, b, std::numeric_limits<double>::digits / 2);
  if (rv < best || (rv == best && rx < grid_x)) return {rx, rv};
  return {grid_x, best};
}

std::vector<double> make_c_grid(double low, double high, double step) {
  if (!(step > 0.0)) throw InputError("step must be positive");
  if (!(high > low)) throw InputError("C interval is empty");
  std::vector<double> grid;
  for (long i = 0;; ++i) {
    const double c = low + static_cast<double>(i) * step;
    if (c > high + step * 1e-9) break;
    grid.push_back(std::min(c, high));
  }
  if (grid.size() < 2) throw InputError("step larger than the C interval");
  return grid;
}

std::vector<CurvePoint> evaluate_x2_curve(std::span<const double> c_grid, const SimulationGrid& grid,
                                          const CalibrationOptions& options) {
  if (c_grid.empty()) throw InputError("empty C grid");
  std::vector<Method> methods;
  methods.reserve(c_grid.size());
  for (double c : c_grid) {
    if (!(c > options.bound_low && c < options.bound_high))
      throw InputError("C outside the search interval");
    methods.push_back(Method::adjusted(c, 0));
  }
  const auto tables = generate_tables(grid, methods, kCurveStreamTag, options.exec);
  std::vector<CurvePoint> curve;
  curve.reserve(c_grid.size());
  for (std::size_t i = 0; i < c_grid.size(); ++i)
    curve.push_back({c_grid[i], pseudo_x2(tables[i], options.normalization)});
  return curve;
}

CalibrationCurve calibrate(int k_max, int nu_max, int replicates, std::uint64_t seed,
                           const CalibrationOptions& options) {
  const SimulationGrid grid = SimulationGrid::dense(k_max, nu_max, replicates, seed);
  const std::vector<double> c_grid = make_c_grid(options.c_min, options.c_max, options.step);
  const std::vector<CurvePoint> curve = evaluate_x2_curve(c_grid, grid, options);
  const PolynomialFit fit = fit_polynomial_cv(curve, options.max_degree, options.folds, seed);
  const Minimum min = find_c_opt(fit.coefficients, c_grid.front(), c_grid.back());

  CalibrationCurve out;
  out.k_max = k_max;
  out.nu_max = nu_max;
  out.cells = grid.cell_count();
  for (const auto& p : curve) {
    out.c_points.push_back(p.x);
    out.x2_points.push_back(p.y);
  }
  out.fitted_degree = fit.degree;
  out.coefficients = fit.coefficients;
  out.r_squared = fit.r_squared;
  out.c_opt = min.x;
  out.x2_min = min.value;
  return out;
}

std::vector<CalibrationCurve> convergence_study(std::span<const std::pair<int, int>> sizes, int replicates,
                                                std::uint64_t seed, const CalibrationOptions& options) {
  if (sizes.empty()) throw InputError("no study sizes");
  std::vector<CalibrationCurve> out;
  out.reserve(sizes.size());
  for (auto [k_max, nu_max] : sizes) out.push_back(calibrate(k_max, nu_max, replicates, seed, options));
  return out;
}

}  // namespace effdf
