#pragma once

// Adapters that build component lists for common settings and hand them to
// adjusted_df. They contain no estimator math of their own.

#include <vector>

#include "effdf/estimators.hpp"

namespace effdf {

// Rubin's total variance: sampling + (m + 1) / m * imputation, where the
// imputation variance has m - 1 d.f.
struct RubinVariance {
  double sampling_s2 = 0.0;
  int sampling_df = 1;
  double imputation_s2 = 0.0;
  int m = 2;
};

// Welch two-sample setting: weights 1 / n_i, d.f. nu_i <= n_i - 1.
struct WelchInput {
  double s2_1 = 0.0;
  double s2_2 = 0.0;
  int n1 = 2;
  int n2 = 2;
  int df1 = 1;
  int df2 = 1;
};

// Jackknife: each deviation T - T_k contributes one unit-weight, 1-d.f.
// component (T - T_k)^2.
struct JackknifeDeviations {
  std::vector<double> deviations;
  double constant = AdjustmentConfig::kRecommendedConstant;
};

std::vector<VarianceComponent> rubin_components(const RubinVariance& input);
std::vector<VarianceComponent> welch_components(const WelchInput& input);
std::vector<VarianceComponent> jackknife_components(const JackknifeDeviations& input);

const AdjustmentConfig& recommended_config();

DfEstimate rubin_df(const RubinVariance& input, const AdjustmentConfig& config = recommended_config());
DfEstimate welch_df(const WelchInput& input, const AdjustmentConfig& config = recommended_config());
DfEstimate jackknife_df(const JackknifeDeviations& input);

// Balanced repeated replication produces correlated components, which this
// library does not model. Always throws InputError pointing at jackknife_df.
[[noreturn]] void brr_df();

}  // namespace effdf
