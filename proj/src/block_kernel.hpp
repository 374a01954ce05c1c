#pragma once

#include <span>
#include <vector>

#include "effdf/estimators.hpp"
#include "effdf/sampling.hpp"

namespace effdf::detail {

// Replicates [begin, end) of one (K, nu) cell on a dedicated generator. Every
// method sees the same component draws; out[m] accumulates method m.
inline void run_block(int k, int nu, int begin, int end, Rng rng, std::span<const Method> methods,
                      std::span<RunningStats> out) {
  Chi2Sampler chi2;
  std::vector<VarianceComponent> components;
  components.reserve(static_cast<std::size_t>(k));
  for (int r = begin; r < end; ++r) {
    components.clear();
    for (int i = 0; i < k; ++i) components.emplace_back(1.0, chi2(nu, rng), nu);
    const SynthesisMoments moments = summarize(components);
    for (std::size_t m = 0; m < methods.size(); ++m) out[m].push(evaluate(moments, methods[m]));
  }
}

inline int block_count(int replicates) { return (replicates + kReplicateBlock - 1) / kReplicateBlock; }

}  // namespace effdf::detail
