#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "optalloc/design_model.hpp"

namespace optalloc {

enum class Criterion { DOptimal, AOptimal };

std::string_view to_string(Criterion c) noexcept;
/// Accepts "d"/"a" (any case) and "D-optimal"/"A-optimal".
std::optional<Criterion> parse_criterion(std::string_view text) noexcept;

struct SolverConfig {
  Criterion criterion = Criterion::DOptimal;
  /// Stop once max_l |w_l^(h) - w_l^(h-1)| < tolerance.
  double tolerance = 1e-4;
  std::size_t max_iterations = 100000;
  /// Defaults to uniform 1/k. Must be strictly positive.
  std::optional<Allocation> initial;
  bool record_trace = false;
  /// Weights are clamped to at least this value and renormalized after each
  /// step. 0 disables clamping, so zero stays zero.
  double weight_floor = 0.0;

  /// Throws InvalidConfig.
  void validate(std::size_t k) const;
};

struct IterationRecord {
  std::size_t h = 0;
  Allocation weights = Allocation::uniform(1);
  double objective = 0.0;
  double max_abs_delta = 0.0;
  double l1_delta = 0.0;
  /// D: (objective - previous objective) - (p/2) * l1_delta^2.
  /// A: previous objective - objective (positive when trace decreased).
  double bound_slack = 0.0;
};

struct SolveReport {
  Criterion criterion = Criterion::DOptimal;
  Allocation final_weights = Allocation::uniform(1);
  std::size_t iterations = 0;
  bool converged = false;
  /// log|Sigma| for D, trace(Sigma^{-1}) for A.
  double objective = 0.0;
  double kkt_residual = 0.0;
  double elapsed_seconds = 0.0;
  /// D: steps violating the log-det increase bound by more than 1e-9.
  /// A: steps where the trace increased.
  std::size_t monotone_violations = 0;
  /// False when the components are linearly dependent: the optimum weights
  /// need not be unique then.
  bool independent = true;
  std::vector<IterationRecord> trace;
};

/// Tolerance applied to the per-step D bound.
inline constexpr double kMonotoneSlackTolerance = 1e-9;

/// w_l <- w_l * trace(A_l Sigma^{-1}(w)) / p
Allocation d_step(const DesignProblem& problem, const Allocation& w);
/// w_l <- (w_l / p) * [trace(Sigma^{-1} A_l Sigma^{-1}) / trace(Sigma^{-1}) + p - 1]
Allocation a_step(const DesignProblem& problem, const Allocation& w);

/// Iterates the multiplicative update for config.criterion from the initial
/// allocation. Hitting max_iterations returns converged = false.
SolveReport solve(const DesignProblem& problem, const SolverConfig& config = {});

/// Integer unit counts summing to n by largest remainder on n * w_l; equal
/// remainders go to the lower index first.
std::vector<std::int64_t> apportion(const Allocation& w, std::int64_t n);

}  // namespace optalloc
