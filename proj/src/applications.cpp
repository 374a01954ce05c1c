#include "effdf/applications.hpp"

#include <cmath>

#include "effdf/error.hpp"

namespace effdf {

const AdjustmentConfig& recommended_config() {
  static const AdjustmentConfig config{AdjustmentConfig::kRecommendedConstant, 0};
  return config;
}

std::vector<VarianceComponent> rubin_components(const RubinVariance& in) {
  if (in.m < 2) throw InputError("need at least two imputations");
  const double m = in.m;
  return {VarianceComponent{1.0, in.sampling_s2, in.sampling_df},
          VarianceComponent{(m + 1.0) / m, in.imputation_s2, in.m - 1}};
}

std::vector<VarianceComponent> welch_components(const WelchInput& in) {
  if (in.n1 < 2 || in.n2 < 2) throw InputError("sample sizes must be at least 2");
  if (in.df1 > in.n1 - 1 || in.df2 > in.n2 - 1) throw InputError("df exceeds sample size - 1");
  return {VarianceComponent{1.0 / in.n1, in.s2_1, in.df1}, VarianceComponent{1.0 / in.n2, in.s2_2, in.df2}};
}

std::vector<VarianceComponent> jackknife_components(const JackknifeDeviations& in) {
  if (in.deviations.size() < 2) throw InputError("jackknife needs at least two replicates");
  std::vector<VarianceComponent> out;
  out.reserve(in.deviations.size());
  for (double d : in.deviations) {
    if (!std::isfinite(d)) throw InputError("deviation must be finite");
    out.emplace_back(1.0, d * d, 1);
  }
  return out;
}

DfEstimate rubin_df(const RubinVariance& input, const AdjustmentConfig& config) {
  return adjusted_df(rubin_components(input), config);
}

DfEstimate welch_df(const WelchInput& input, const AdjustmentConfig& config) {
  return adjusted_df(welch_components(input), config);
}

DfEstimate jackknife_df(const JackknifeDeviations& input) {
  return adjusted_df(jackknife_components(input), AdjustmentConfig{input.constant, 0});
}

void brr_df() {
  throw InputError(
      "BRR replicate components are correlated and not supported; compute jackknife pseudo-value "
      "deviations and use jackknife_df instead");
}

}  // namespace effdf
