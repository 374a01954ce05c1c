#include "effdf/estimators.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <sstream>

#include "effdf/detail/mix.hpp"
#include "effdf/error.hpp"

namespace effdf {

VarianceComponent::VarianceComponent(double weight, double s2, int df) : weight_(weight), s2_(s2), df_(df) {
  if (!std::isfinite(weight) || weight <= 0.0) throw InputError("weight must be positive");
  if (!std::isfinite(s2) || s2 < 0.0) throw InputError("s2 must be nonnegative");
  if (df < 1) throw InputError("df must be a positive integer");
}

AdjustmentConfig::AdjustmentConfig(double c, int offset) : c_(c), offset_(offset) {
  if (!std::isfinite(c) || c < 0.0) throw InputError("correction constant must be nonnegative");
  if (offset != 0 && offset != 1) throw InputError("offset must be 0 or 1");
}

int Method::min_components() const noexcept {
  return kind == EstimatorKind::Satterthwaite ? 1 : 1 + config.offset();
}

std::string Method::label() const {
  switch (kind) {
    case EstimatorKind::Satterthwaite:
      return "satterthwaite";
    case EstimatorKind::VonDavier2025:
      return "vd2025";
    case EstimatorKind::Adjusted:
      break;
  }
  std::ostringstream os;
  os << "adjusted(C=" << config.c() << (config.offset() == 1 ? ",K-1)" : ",K)");
  return os.str();
}

std::uint64_t Method::tag() const noexcept {
  return detail::hash_words({static_cast<std::uint64_t>(kind), std::bit_cast<std::uint64_t>(config.c()),
                             static_cast<std::uint64_t>(config.offset())});
}

SynthesisMoments summarize(std::span<const VarianceComponent> components) {
  if (components.empty()) throw InputError("no components");

  double max_s2 = 0.0;
  double max_w = 0.0;
  for (const auto& c : components) {
    max_s2 = std::max(max_s2, c.s2());
    max_w = std::max(max_w, c.weight());
  }
  const double s2_scale = max_s2 > 0.0 ? 1.0 / max_s2 : 1.0;
  const double w_scale = 1.0 / max_w;

  SynthesisMoments m;
  m.count = static_cast<int>(components.size());
  double total = 0.0;
  double weight_sum = 0.0;
  double weighted_df = 0.0;
  for (const auto& c : components) {
    const double w = c.weight() * w_scale;
    const double ws2 = w * (c.s2() * s2_scale);
    const double nu = c.df();
    total += ws2;
    m.satterthwaite_denominator += ws2 * ws2 / nu;
    m.adjusted_denominator += ws2 * ws2 / (nu + 2.0);
    weight_sum += w;
    weighted_df += w * nu;
  }
  m.numerator = total * total;
  m.mean_df = weighted_df / weight_sum;
  return m;
}

double evaluate(const SynthesisMoments& moments, const Method& method) {
  if (moments.count < method.min_components()) throw InputError("offset exceeds component count");
  if (!(moments.satterthwaite_denominator > 0.0)) throw DegenerateError("degenerate synthesis");

  if (method.kind == EstimatorKind::Satterthwaite) return moments.numerator / moments.satterthwaite_denominator;

  // Offset p = 1 is carried as the p = 0 constant C K / (K - 1).
  const double k = moments.count;
  double c = method.config.c();
  if (method.config.offset() == 1) c = c * k / (k - 1.0);
  const double factor = 1.0 + c / (k * moments.mean_df);
  return moments.numerator / moments.adjusted_denominator / factor;
}

double weighted_mean_df(std::span<const VarianceComponent> components) {
  if (components.empty()) throw InputError("no components");
  double weight_sum = 0.0;
  double weighted_df = 0.0;
  for (const auto& c : components) {
    weight_sum += c.weight();
    weighted_df += c.weight() * c.df();
  }
  return weighted_df / weight_sum;
}

DfEstimate estimate(std::span<const VarianceComponent> components, const Method& method) {
  return {evaluate(summarize(components), method), method};
}

DfEstimate satterthwaite_df(std::span<const VarianceComponent> components) {
  return estimate(components, Method::satterthwaite());
}

DfEstimate adjusted_df(std::span<const VarianceComponent> components, const AdjustmentConfig& config) {
  return estimate(components, Method{EstimatorKind::Adjusted, config});
}

DfEstimate vondavier2025_df(std::span<const VarianceComponent> components) {
  return estimate(components, Method::von_davier_2025());
}

DfEstimate recommended_df(std::span<const VarianceComponent> components) {
  return estimate(components, Method::recommended());
}

}  // namespace effdf
