#pragma once

// Monte Carlo study of the estimators on chi-square components.
//
// Each replicate draws K independent S_k^2 = sum_{j=1..nu} Z_j^2 and evaluates
// an estimator with unit weights; a cell is the mean over replicates, which is
// compared with the true effective d.f. K * nu.
//
// Determinism: replicates are processed in fixed blocks of kReplicateBlock,
// each with its own generator seeded from (seed, K, nu, stream tag, block).
// Block results are merged in block order, so a table depends only on the
// grid and the tag, never on the number of threads or the schedule.

#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "effdf/estimators.hpp"

namespace effdf {

using Rng = std::mt19937_64;

inline constexpr int kReplicateBlock = 1000;

// Sum of df squared deviates drawn from `normal`, any callable returning N(0,1).
template <class NormalSource>
double sum_of_squared_normals(int df, NormalSource&& normal) {
  double s = 0.0;
  for (int j = 0; j < df; ++j) {
    const double z = normal();
    s += z * z;
  }
  return s;
}

// Chi-square variates built from squared normals (not a gamma sampler).
class Chi2Sampler {
 public:
  double operator()(int df, Rng& rng) {
    return sum_of_squared_normals(df, [&] { return normal_(rng); });
  }

 private:
  std::normal_distribution<double> normal_;
};

// One chi-square(df) draw, df >= 1.
double sample_chi2(int df, Rng& rng);

// Welford accumulator with a deterministic pairwise merge.
class RunningStats {
 public:
  void push(double x) noexcept;
  void merge(const RunningStats& other) noexcept;

  std::int64_t count() const noexcept { return n_; }
  double mean() const noexcept { return mean_; }
  // Sample variance (n - 1 denominator); 0 for fewer than two values.
  double variance() const noexcept;
  double std_error() const noexcept;

 private:
  std::int64_t n_ = 0;
  double mean_ = 0.0;
  double m2_ = 0.0;
};

struct SimulationGrid {
  std::vector<int> k_values;
  std::vector<int> nu_values;
  int replicates = 10000;
  std::uint64_t seed = 20250515;

  // Throws InputError on empty or unsorted value sets, K < 1, nu < 1 or
  // replicates < 1.
  void validate() const;

  std::size_t cell_count() const noexcept { return k_values.size() * nu_values.size(); }

  // K in {2,4,6,8,10,20,40,160}, nu in {1,3,5,7,9,15,30,80}: the grid of the
  // published mean-d.f. tables.
  static SimulationGrid published(int replicates = 10000, std::uint64_t seed = 20250515);
  // K in {2..k_max}, nu in {1..nu_max}.
  static SimulationGrid dense(int k_max, int nu_max, int replicates = 10000, std::uint64_t seed = 20250515);

  friend bool operator==(const SimulationGrid&, const SimulationGrid&) = default;
};

struct CellStats {
  double mean = 0.0;
  double std_error = 0.0;
  double expected = 0.0;  // K * nu

  friend bool operator==(const CellStats&, const CellStats&) = default;
};

class MeanDfTable {
 public:
  MeanDfTable(SimulationGrid grid, Method method);

  const SimulationGrid& grid() const noexcept { return grid_; }
  const Method& method() const noexcept { return method_; }

  // Cells are stored row-major: K index major, nu index minor.
  std::span<const CellStats> cells() const noexcept { return cells_; }
  CellStats& cell(std::size_t k_index, std::size_t nu_index);
  const CellStats& cell(std::size_t k_index, std::size_t nu_index) const;
  // Lookup by value; throws InputError if (k, nu) is not on the grid.
  const CellStats& at(int k, int nu) const;

  friend bool operator==(const MeanDfTable&, const MeanDfTable&) = default;

 private:
  SimulationGrid grid_;
  Method method_;
  std::vector<CellStats> cells_;
};

struct Execution {
  int threads = 0;  // 0: OpenMP default
};

// Serial single-stream cell: `replicates` draws of K chi-square(nu) components
// with unit weights. Requires replicates >= 2.
CellStats simulate_mean_df(int k, int nu, const Method& method, int replicates, Rng& rng);

// As above with caller-supplied weights (K = weights.size()).
CellStats simulate_mean_df_weighted(std::span<const double> weights, int nu, const Method& method, int replicates,
                                    Rng& rng);

// Generator of one (cell, block) work unit.
Rng substream(std::uint64_t seed, int k, int nu, std::uint64_t stream_tag, int block);

// Tables for several methods evaluated on the same draws (common random
// numbers). OpenMP-parallel over (cell, block) units.
std::vector<MeanDfTable> generate_tables(const SimulationGrid& grid, std::span<const Method> methods,
                                         std::uint64_t stream_tag, Execution exec = {});

// One table keyed by the method's own tag.
MeanDfTable generate_table(const SimulationGrid& grid, const Method& method, Execution exec = {});

namespace reference {

// Single-threaded loops with the same block/substream layout as
// generate_tables; results must agree bit for bit.
std::vector<MeanDfTable> generate_tables(const SimulationGrid& grid, std::span<const Method> methods,
                                         std::uint64_t stream_tag);
MeanDfTable generate_table(const SimulationGrid& grid, const Method& method);

}  // namespace reference

enum class X2Normalization {
  Expected,         // sum (M - K nu)^2 / (K nu)
  SquaredExpected,  // sum (M - K nu)^2 / (K nu)^2
};

double pseudo_x2(const MeanDfTable& table, X2Normalization norm = X2Normalization::Expected);

// (s1 + s2)^2 / (s1^2 + s2^2): the unadjusted K = 2, nu = 1 estimate,
// always in [1, 2] when s1 + s2 > 0.
double k2_nu1_ratio(double s1, double s2) noexcept;

std::vector<double> ratio_samples_k2_nu1(int replicates, Rng& rng);
double ratio_mean_k2_nu1(int replicates, Rng& rng);

struct Histogram {
  double low = 0.0;
  double high = 0.0;
  std::vector<std::int64_t> counts;
  std::int64_t outside = 0;

  double bin_width() const noexcept { return (high - low) / static_cast<double>(counts.size()); }
};

// Equal-width bins over [low, high]; the top edge belongs to the last bin.
Histogram make_histogram(std::span<const double> samples, int bins, double low, double high);

}  // namespace effdf
