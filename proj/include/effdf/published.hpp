#pragma once

// Published reference values for reproduction checks (--diff and the
// acceptance suite), transcribed from the reference study's tables.

#include <array>
#include <optional>
#include <span>
#include <string_view>

#include "effdf/estimators.hpp"
#include "effdf/sampling.hpp"

namespace effdf::published {

// Rows K in {2,4,6,8,10,20,40,160}, columns nu in {1,3,5,7,9,15,30,80}.
using MeanGrid = std::array<std::array<double, 8>, 8>;

struct MeanTable {
  int id;                 // 1..4
  std::string_view name;
  Method method;
  const MeanGrid* means;
};

// Throws InputError for ids outside 1..4.
MeanTable mean_table(int id);

struct X2Row {
  std::string_view label;
  Method method;
  double x2;
};

std::span<const X2Row> x2_rows();

struct CalibrationRow {
  int k_max;
  int nu_max;
  int cells;
  int degree;
  double r_squared;
  double c_opt;
  double x2_min;
};

std::span<const CalibrationRow> calibration_rows();
std::optional<CalibrationRow> calibration_row(int k_max, int nu_max);

// Mean of the unadjusted K = 2, nu = 1 ratio over 4,000,000 replicates.
inline constexpr double kRatioMeanK2Nu1 = 1.41425;
inline constexpr int kRatioMeanReplicates = 4'000'000;

}  // namespace effdf::published
