#pragma once

// Effective degrees of freedom for a weighted synthesis of independent
// variance components, sum_k w_k S_k^2.
//
// Three estimator families are provided:
//   * Satterthwaite:   (sum w S^2)^2 / sum w^2 S^4 / nu
//   * adjusted (C, p): (1 + C / ((K - p) nu_w))^-1 (sum w S^2)^2 / sum w^2 S^4 / (nu + 2)
//   * the 2025 variant, which is the adjusted form with C = 2, p = 1.
// nu_w is the weight-averaged component d.f.  All functions are pure.

#include <cstdint>
#include <span>
#include <string>

namespace effdf {

// One term w * S^2 of a synthesis, with nu d.f. behind S^2.
class VarianceComponent {
 public:
  // Throws InputError unless weight > 0, s2 >= 0 and df >= 1 (all finite).
  VarianceComponent(double weight, double s2, int df);

  double weight() const noexcept { return weight_; }
  double s2() const noexcept { return s2_; }
  int df() const noexcept { return df_; }

  friend bool operator==(const VarianceComponent&, const VarianceComponent&) = default;

 private:
  double weight_;
  double s2_;
  int df_;
};

// Correction constant C and offset p in the factor (1 + C / ((K - p) nu_w))^-1.
class AdjustmentConfig {
 public:
  static constexpr double kRecommendedConstant = 2.24;

  // Throws InputError unless c >= 0 (finite) and offset is 0 or 1.
  AdjustmentConfig(double c, int offset);

  double c() const noexcept { return c_; }
  int offset() const noexcept { return offset_; }

  friend bool operator==(const AdjustmentConfig&, const AdjustmentConfig&) = default;

 private:
  double c_;
  int offset_;
};

enum class EstimatorKind { Satterthwaite, VonDavier2025, Adjusted };

// Estimator variant descriptor. For Satterthwaite the config is unused.
struct Method {
  EstimatorKind kind = EstimatorKind::Satterthwaite;
  AdjustmentConfig config{0.0, 0};

  static Method satterthwaite() { return {}; }
  static Method von_davier_2025() { return {EstimatorKind::VonDavier2025, AdjustmentConfig{2.0, 1}}; }
  static Method adjusted(double c, int offset = 0) {
    return {EstimatorKind::Adjusted, AdjustmentConfig{c, offset}};
  }
  static Method recommended() { return adjusted(AdjustmentConfig::kRecommendedConstant, 0); }

  // Smallest K the method accepts (2 when the offset is 1).
  int min_components() const noexcept;

  // Human-readable label, e.g. "satterthwaite", "vd2025", "adjusted(C=2.24,K)".
  std::string label() const;

  // Stable 64-bit identifier, used to derive random substreams.
  std::uint64_t tag() const noexcept;

  friend bool operator==(const Method&, const Method&) = default;
};

struct DfEstimate {
  double value = 0.0;
  Method method;
};

// Sufficient statistics of a synthesis. Every estimator variant is a function
// of these; computing them once lets callers evaluate many variants cheaply.
// S^2 and weights are rescaled by their maxima before forming powers, so the
// sums are scale-free (the estimators are invariant under both rescalings).
struct SynthesisMoments {
  int count = 0;                          // K
  double numerator = 0.0;                 // (sum w S^2)^2
  double satterthwaite_denominator = 0.0; // sum w^2 S^4 / nu
  double adjusted_denominator = 0.0;      // sum w^2 S^4 / (nu + 2)
  double mean_df = 0.0;                   // nu_w
};

// Throws InputError("no components") on an empty list.
SynthesisMoments summarize(std::span<const VarianceComponent> components);

// Throws DegenerateError when every S^2 is zero and InputError when the
// method's offset is not smaller than K.
double evaluate(const SynthesisMoments& moments, const Method& method);

// sum w nu / sum w
double weighted_mean_df(std::span<const VarianceComponent> components);

DfEstimate satterthwaite_df(std::span<const VarianceComponent> components);
DfEstimate adjusted_df(std::span<const VarianceComponent> components, const AdjustmentConfig& config);
DfEstimate vondavier2025_df(std::span<const VarianceComponent> components);
DfEstimate recommended_df(std::span<const VarianceComponent> components);

DfEstimate estimate(std::span<const VarianceComponent> components, const Method& method);

}  // namespace effdf
