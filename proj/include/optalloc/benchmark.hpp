#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "optalloc/design_model.hpp"
#include "optalloc/solvers.hpp"

namespace optalloc {

struct BenchSpec {
  std::vector<std::size_t> k_values{10, 20, 30, 40};
  std::vector<std::size_t> p_values{4, 5, 8, 10, 15, 20, 25, 30};
  std::size_t replications = 50;
  Criterion criterion = Criterion::DOptimal;
  double tolerance = 1e-4;
  std::uint64_t seed = 42;
  /// Worker threads; 0 picks OPTALLOC_THREADS or the hardware concurrency.
  std::size_t threads = 0;

  void validate() const;
  /// (k, p) pairs with p < k, in k-major order.
  std::vector<std::pair<std::size_t, std::size_t>> grid() const;
};

struct BenchCell {
  std::size_t k = 0;
  std::size_t p = 0;
  double mean_iterations = 0.0;
  double sd_iterations = 0.0;
  double mean_elapsed_seconds = 0.0;
  double sd_elapsed_seconds = 0.0;
  std::size_t failures = 0;
};

/// Stream seed for one replication: a SplitMix64 chain over (seed, k, p, rep).
std::uint64_t replication_seed(std::uint64_t seed, std::size_t k, std::size_t p,
                               std::size_t replication) noexcept;

/// k rank-one components from points with i.i.d. U(-1, 1) coordinates drawn
/// from an mt19937_64 seeded with rng_state. Bit-reproducible across platforms.
DesignProblem generate_problem(std::size_t k, std::size_t p, std::uint64_t rng_state);

std::vector<BenchCell> run_benchmark(const BenchSpec& spec);

enum class TableFormat { Csv, Markdown, Json };

std::string emit_table(const std::vector<BenchCell>& cells, TableFormat format);

/// Threads requested through OPTALLOC_THREADS, or 0 when unset/invalid.
std::size_t threads_from_environment();

}  // namespace optalloc
