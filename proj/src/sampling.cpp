#include "effdf/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <numeric>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "block_kernel.hpp"
#include "effdf/detail/mix.hpp"
#include "effdf/error.hpp"

namespace effdf {

double sample_chi2(int df, Rng& rng) {
  if (df < 1) throw InputError("df must be a positive integer");
  Chi2Sampler chi2;
  return chi2(df, rng);
}

void RunningStats::push(double x) noexcept {
  ++n_;
  const double delta = x - mean_;
  mean_ += delta / static_cast<double>(n_);
  m2_ += delta * (x - mean_);
}

void RunningStats::merge(const RunningStats& other) noexcept {
  if (other.n_ == 0) return;
  if (n_ == 0) {
    *this = other;
    return;
  }
  const double na = static_cast<double>(n_);
  const double nb = static_cast<double>(other.n_);
  const double n = na + nb;
  const double delta = other.mean_ - mean_;
  mean_ += delta * nb / n;
  m2_ += other.m2_ + delta * delta * na * nb / n;
  n_ += other.n_;
}

double RunningStats::variance() const noexcept { return n_ < 2 ? 0.0 : m2_ / static_cast<double>(n_ - 1); }

double RunningStats::std_error() const noexcept {
  return n_ < 2 ? 0.0 : std::sqrt(variance() / static_cast<double>(n_));
}

void SimulationGrid::validate() const {
  if (k_values.empty() || nu_values.empty()) throw InputError("simulation grid needs K and nu values");
  if (!std::is_sorted(k_values.begin(), k_values.end()) ||
      std::adjacent_find(k_values.begin(), k_values.end()) != k_values.end())
    throw InputError("K values must be strictly increasing");
  if (!std::is_sorted(nu_values.begin(), nu_values.end()) ||
      std::adjacent_find(nu_values.begin(), nu_values.end()) != nu_values.end())
    throw InputError("nu values must be strictly increasing");
  if (k_values.front() < 1) throw InputError("K values must be positive");
  if (nu_values.front() < 1) throw InputError("nu values must be positive");
  if (replicates < 1) throw InputError("replicates must be positive");
}

SimulationGrid SimulationGrid::published(int replicates, std::uint64_t seed) {
  return {{2, 4, 6, 8, 10, 20, 40, 160}, {1, 3, 5, 7, 9, 15, 30, 80}, replicates, seed};
}

SimulationGrid SimulationGrid::dense(int k_max, int nu_max, int replicates, std::uint64_t seed) {
  if (k_max < 2 || nu_max < 1) throw InputError("dense grid needs k_max >= 2 and nu_max >= 1");
  SimulationGrid g;
  g.k_values.resize(static_cast<std::size_t>(k_max - 1));
  std::iota(g.k_values.begin(), g.k_values.end(), 2);
  g.nu_values.resize(static_cast<std::size_t>(nu_max));
  std::iota(g.nu_values.begin(), g.nu_values.end(), 1);
  g.replicates = replicates;
  g.seed = seed;
  return g;
}

MeanDfTable::MeanDfTable(SimulationGrid grid, Method method)
    : grid_(std::move(grid)), method_(method), cells_(grid_.cell_count()) {
  for (std::size_t i = 0; i < grid_.k_values.size(); ++i)
    for (std::size_t j = 0; j < grid_.nu_values.size(); ++j)
      cell(i, j).expected = static_cast<double>(grid_.k_values[i]) * grid_.nu_values[j];
}

CellStats& MeanDfTable::cell(std::size_t k_index, std::size_t nu_index) {
  return cells_.at(k_index * grid_.nu_values.size() + nu_index);
}

const CellStats& MeanDfTable::cell(std::size_t k_index, std::size_t nu_index) const {
  return cells_.at(k_index * grid_.nu_values.size() + nu_index);
}

const CellStats& MeanDfTable::at(int k, int nu) const {
  const auto ki = std::find(grid_.k_values.begin(), grid_.k_values.end(), k);
  const auto ni = std::find(grid_.nu_values.begin(), grid_.nu_values.end(), nu);
  if (ki == grid_.k_values.end() || ni == grid_.nu_values.end()) throw InputError("cell not on the grid");
  return cell(static_cast<std::size_t>(ki - grid_.k_values.begin()),
              static_cast<std::size_t>(ni - grid_.nu_values.begin()));
}

CellStats simulate_mean_df(int k, int nu, const Method& method, int replicates, Rng& rng) {
  const std::vector<double> weights(static_cast<std::size_t>(std::max(k, 0)), 1.0);
  return simulate_mean_df_weighted(weights, nu, method, replicates, rng);
}

CellStats simulate_mean_df_weighted(std::span<const double> weights, int nu, const Method& method, int replicates,
                                    Rng& rng) {
  const int k = static_cast<int>(weights.size());
  if (k < method.min_components()) throw InputError("too few components for method " + method.label());
  if (nu < 1) throw InputError("nu must be positive");
  if (replicates < 2) throw InputError("replicates must be at least 2");

  Chi2Sampler chi2;
  RunningStats stats;
  std::vector<VarianceComponent> components;
  components.reserve(weights.size());
  for (int r = 0; r < replicates; ++r) {
    components.clear();
    for (double w : weights) components.emplace_back(w, chi2(nu, rng), nu);
    stats.push(estimate(components, method).value);
  }
  // True effective d.f. of sum_k w_k S_k^2 with iid chi-square(nu) terms:
  // nu (sum w)^2 / sum w^2, which is K nu for unit weights.
  double w_sum = 0.0;
  double w2_sum = 0.0;
  for (double w : weights) {
    w_sum += w;
    w2_sum += w * w;
  }
  return {stats.mean(), stats.std_error(), nu * w_sum * w_sum / w2_sum};
}

Rng substream(std::uint64_t seed, int k, int nu, std::uint64_t stream_tag, int block) {
  return Rng(detail::hash_words({seed, static_cast<std::uint64_t>(k), static_cast<std::uint64_t>(nu), stream_tag,
                                 static_cast<std::uint64_t>(block)}));
}

namespace {

void check_methods(const SimulationGrid& grid, std::span<const Method> methods) {
  grid.validate();
  if (methods.empty()) throw InputError("no methods to simulate");
  for (const auto& m : methods)
    if (grid.k_values.front() < m.min_components())
      throw InputError("grid K values too small for method " + m.label());
}

}  // namespace

std::vector<MeanDfTable> generate_tables(const SimulationGrid& grid, std::span<const Method> methods,
                                         std::uint64_t stream_tag, Execution exec) {
  check_methods(grid, methods);

  const std::size_t nk = grid.k_values.size();
  const std::size_t nn = grid.nu_values.size();
  const std::size_t nm = methods.size();
  const int blocks = detail::block_count(grid.replicates);
  const std::size_t units = nk * nn * static_cast<std::size_t>(blocks);

  // Unit u covers cell u / blocks, block u % blocks. Expensive cells (large
  // K * nu) are scheduled first for balance; output slots are fixed per unit.
  std::vector<std::size_t> order(units);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const std::size_t ca = a / blocks, cb = b / blocks;
    const long wa = static_cast<long>(grid.k_values[ca / nn]) * grid.nu_values[ca % nn];
    const long wb = static_cast<long>(grid.k_values[cb / nn]) * grid.nu_values[cb % nn];
    return wa > wb;
  });

  std::vector<RunningStats> partial(units * nm);
  const long n_units = static_cast<long>(units);
  std::exception_ptr failure;

#ifndef _OPENMP
  (void)exec;
#else
  const int threads = exec.threads > 0 ? exec.threads : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic, 1) num_threads(threads)
#endif
  for (long i = 0; i < n_units; ++i) {
    const std::size_t u = order[static_cast<std::size_t>(i)];
    const std::size_t c = u / static_cast<std::size_t>(blocks);
    const int b = static_cast<int>(u % static_cast<std::size_t>(blocks));
    const int k = grid.k_values[c / nn];
    const int nu = grid.nu_values[c % nn];
    const int begin = b * kReplicateBlock;
    const int end = std::min(grid.replicates, begin + kReplicateBlock);
    try {
      detail::run_block(k, nu, begin, end, substream(grid.seed, k, nu, stream_tag, b), methods,
                        std::span(partial).subspan(u * nm, nm));
    } catch (...) {
#ifdef _OPENMP
#pragma omp critical(effdf_table_failure)
#endif
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);

  std::vector<MeanDfTable> tables;
  tables.reserve(nm);
  for (const auto& m : methods) tables.emplace_back(grid, m);
  for (std::size_t c = 0; c < nk * nn; ++c) {
    for (std::size_t m = 0; m < nm; ++m) {
      RunningStats total;
      for (int b = 0; b < blocks; ++b) total.merge(partial[(c * blocks + b) * nm + m]);
      CellStats& cell = tables[m].cell(c / nn, c % nn);
      cell.mean = total.mean();
      cell.std_error = total.std_error();
    }
  }
  return tables;
}

MeanDfTable generate_table(const SimulationGrid& grid, const Method& method, Execution exec) {
  return std::move(generate_tables(grid, std::span(&method, 1), method.tag(), exec).front());
}

namespace reference {

std::vector<MeanDfTable> generate_tables(const SimulationGrid& grid, std::span<const Method> methods,
                                         std::uint64_t stream_tag) {
  check_methods(grid, methods);
  const int blocks = detail::block_count(grid.replicates);

  std::vector<MeanDfTable> tables;
  for (const auto& m : methods) tables.emplace_back(grid, m);

  std::vector<RunningStats> block_stats(methods.size());
  for (std::size_t i = 0; i < grid.k_values.size(); ++i) {
    for (std::size_t j = 0; j < grid.nu_values.size(); ++j) {
      const int k = grid.k_values[i];
      const int nu = grid.nu_values[j];
      std::vector<RunningStats> totals(methods.size());
      for (int b = 0; b < blocks; ++b) {
        std::fill(block_stats.begin(), block_stats.end(), RunningStats{});
        const int begin = b * kReplicateBlock;
        const int end = std::min(grid.replicates, begin + kReplicateBlock);
        detail::run_block(k, nu, begin, end, substream(grid.seed, k, nu, stream_tag, b), methods, block_stats);
        for (std::size_t m = 0; m < methods.size(); ++m) totals[m].merge(block_stats[m]);
      }
      for (std::size_t m = 0; m < methods.size(); ++m) {
        tables[m].cell(i, j).mean = totals[m].mean();
        tables[m].cell(i, j).std_error = totals[m].std_error();
      }
    }
  }
  return tables;
}

MeanDfTable generate_table(const SimulationGrid& grid, const Method& method) {
  return std::move(reference::generate_tables(grid, std::span(&method, 1), method.tag()).front());
}

}  // namespace reference

double pseudo_x2(const MeanDfTable& table, X2Normalization norm) {
  double x2 = 0.0;
  for (const auto& c : table.cells()) {
    const double d = c.mean - c.expected;
    const double scale = norm == X2Normalization::Expected ? c.expected : c.expected * c.expected;
    x2 += d * d / scale;
  }
  return x2;
}

double k2_nu1_ratio(double s1, double s2) noexcept {
  const double total = s1 + s2;
  return total * total / (s1 * s1 + s2 * s2);
}

std::vector<double> ratio_samples_k2_nu1(int replicates, Rng& rng) {
  if (replicates < 1) throw InputError("replicates must be positive");
  Chi2Sampler chi2;
  std::vector<double> out(static_cast<std::size_t>(replicates));
  for (auto& x : out) {
    const double s1 = chi2(1, rng);
    const double s2 = chi2(1, rng);
    x = k2_nu1_ratio(s1, s2);
  }
  return out;
}

double ratio_mean_k2_nu1(int replicates, Rng& rng) {
  if (replicates < 2) throw InputError("replicates must be at least 2");
  Chi2Sampler chi2;
  RunningStats stats;
  for (int r = 0; r < replicates; ++r) {
    const double s1 = chi2(1, rng);
    const double s2 = chi2(1, rng);
    stats.push(k2_nu1_ratio(s1, s2));
  }
  return stats.mean();
}

Histogram make_histogram(std::span<const double> samples, int bins, double low, double high) {
  if (bins < 1) throw InputError("bins must be positive");
  if (!(high > low)) throw InputError("histogram range is empty");
  Histogram h{low, high, std::vector<std::int64_t>(static_cast<std::size_t>(bins), 0), 0};
  const double width = h.bin_width();
  for (double x : samples) {
    if (!(x >= low && x <= high)) {
      ++h.outside;
      continue;
    }
    auto idx = static_cast<std::size_t>((x - low) / width);
    idx = std::min(idx, h.counts.size() - 1);
    ++h.counts[idx];
  }
  return h;
}

}  // namespace effdf
