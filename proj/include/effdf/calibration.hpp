#pragma once

// Selection of the adjustment constant C by Monte Carlo.
//
// For each C on a grid the adjusted (C, K) estimator is simulated over a dense
// K x nu grid and scored by the pseudo-X2 discrepancy from K * nu. The curve
// X2(C) is smoothed with a least-squares polynomial whose degree is chosen by
// k-fold cross-validation, and C_opt is the minimiser of that polynomial.

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "effdf/sampling.hpp"

namespace effdf {

struct CurvePoint {
  double x = 0.0;
  double y = 0.0;
};

struct PolynomialFit {
  int degree = 0;
  std::vector<double> coefficients;  // ascending powers of x
  double r_squared = 0.0;
  std::vector<double> cv_rmse;       // mean held-out RMSE per degree 1..max (inf if not estimable)
};

// Horner evaluation of an ascending-power polynomial.
double polyval(std::span<const double> coefficients, double x) noexcept;

// Ordinary least squares at a fixed degree. Abscissae are centred and scaled
// internally; coefficients are returned in the original coordinates.
// Throws DegenerateError if the design is rank deficient.
std::vector<double> fit_polynomial(std::span<const CurvePoint> points, int degree);

// Picks the degree in [1, max_degree] with the lowest mean CV-RMSE (smallest
// degree within 1e-12 of the minimum), then refits on all points. Folds are
// formed by shuffling once with `seed` and dealing round-robin.
PolynomialFit fit_polynomial_cv(std::span<const CurvePoint> points, int max_degree, int folds,
                                std::uint64_t seed = 0);

struct Minimum {
  double x = 0.0;
  double value = 0.0;
};

// Global minimum of the polynomial on [low, high]: dense scan with spacing at
// most `step`, refined by Brent's method next to the best grid point.
Minimum find_c_opt(std::span<const double> coefficients, double low, double high, double step = 1e-4);

// low, low + step, ... up to high (inclusive, to within step * 1e-9).
// Throws InputError when the grid would hold fewer than two points.
std::vector<double> make_c_grid(double low, double high, double step);

struct CalibrationOptions {
  // Every C must lie strictly inside (bound_low, bound_high).
  double bound_low = 2.0;
  double bound_high = 3.2;
  double c_min = 2.01;
  double c_max = 3.19;
  double step = 0.01;
  int max_degree = 6;
  int folds = 10;
  X2Normalization normalization = X2Normalization::SquaredExpected;
  Execution exec;
};

// X2(C) for every C, all evaluated on one shared set of component draws.
std::vector<CurvePoint> evaluate_x2_curve(std::span<const double> c_grid, const SimulationGrid& grid,
                                          const CalibrationOptions& options = {});

struct CalibrationCurve {
  int k_max = 0;
  int nu_max = 0;
  std::size_t cells = 0;
  std::vector<double> c_points;
  std::vector<double> x2_points;
  int fitted_degree = 0;
  std::vector<double> coefficients;
  double r_squared = 0.0;
  double c_opt = 0.0;
  double x2_min = 0.0;
};

// Full pipeline on the dense grid {2..k_max} x {1..nu_max}.
CalibrationCurve calibrate(int k_max, int nu_max, int replicates, std::uint64_t seed,
                           const CalibrationOptions& options = {});

std::vector<CalibrationCurve> convergence_study(std::span<const std::pair<int, int>> sizes, int replicates,
                                                std::uint64_t seed, const CalibrationOptions& options = {});

}  // namespace effdf
