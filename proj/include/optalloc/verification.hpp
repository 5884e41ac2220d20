#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "optalloc/design_model.hpp"
#include "optalloc/solvers.hpp"

namespace optalloc {

inline constexpr double kDefaultSupportTolerance = 1e-6;

struct ConditionCheck {
  double sensitivity = 0.0;
  double weight = 0.0;
  bool active = false;
};

/// Optimality-condition check. per_condition carries the raw sensitivities
/// (trace(A_l Sigma^{-1}) for D, bounded by p; the A ratio, bounded by 1).
struct KktReport {
  double residual = 0.0;
  std::vector<ConditionCheck> per_condition;
  double support_tolerance = kDefaultSupportTolerance;
};

/// Max over active l of |s_l/p - 1| and over inactive l of (s_l/p - 1)+,
/// with s_l = trace(A_l Sigma^{-1}).
KktReport kkt_residual_d(const DesignProblem& problem, const Allocation& w,
                         double support_tolerance = kDefaultSupportTolerance);
/// Same shape with the A sensitivity and bound 1.
KktReport kkt_residual_a(const DesignProblem& problem, const Allocation& w,
                         double support_tolerance = kDefaultSupportTolerance);
KktReport kkt_residual(const DesignProblem& problem, const Allocation& w, Criterion criterion,
                       double support_tolerance = kDefaultSupportTolerance);

struct OracleResult {
  Allocation weights;
  double objective;
};

/// Exhaustive search over the simplex lattice with spacing `resolution`.
/// Singular lattice points are skipped; ties keep the lexicographically
/// smallest allocation. Throws ProblemTooLarge for k > 4 or resolution < 1e-3.
OracleResult grid_oracle(const DesignProblem& problem, Criterion criterion, double resolution);

/// exp((log|Sigma(w)| - log|Sigma(w_ref)|) / p)
double d_efficiency(const DesignProblem& problem, const Allocation& w, const Allocation& w_ref);

struct MonotonicityAudit {
  std::size_t violations = 0;
  double min_slack = 0.0;
};

/// Checks objective(h) - objective(h-1) >= (p/2) * l1_delta(h)^2 on each
/// consecutive pair of a D trace.
MonotonicityAudit monotonicity_audit(std::span<const IterationRecord> trace, std::size_t p);

}  // namespace optalloc
