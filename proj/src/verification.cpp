#include "optalloc/verification.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace optalloc {

namespace {

KktReport build_report(const Allocation& w, const std::vector<double>& sensitivity, double bound,
                       double support_tolerance) {
  KktReport report;
  report.support_tolerance = support_tolerance;
  report.per_condition.reserve(w.size());
  for (std::size_t l = 0; l < w.size(); ++l) {
    const bool active = w[l] > support_tolerance;
    const double excess = sensitivity[l] / bound - 1.0;
    const double violation = active ? std::fabs(excess) : std::max(0.0, excess);
    report.residual = std::max(report.residual, violation);
    report.per_condition.push_back(ConditionCheck{sensitivity[l], w[l], active});
  }
  return report;
}

void check_support_tolerance(double tol) {
  if (!(tol >= 0.0)) throw Error(ErrorCode::InvalidConfig, "support tolerance must be nonnegative");
}

}  // namespace

KktReport kkt_residual_d(const DesignProblem& problem, const Allocation& w, double support_tolerance) {
  check_support_tolerance(support_tolerance);
  const InfoMatrix info = fisher_information(problem, w);
  return build_report(w, d_sensitivities(problem, info), static_cast<double>(problem.p()),
                      support_tolerance);
}

KktReport kkt_residual_a(const DesignProblem& problem, const Allocation& w, double support_tolerance) {
  check_support_tolerance(support_tolerance);
  const InfoMatrix info = fisher_information(problem, w);
  return build_report(w, a_sensitivities(problem, info), 1.0, support_tolerance);
}

KktReport kkt_residual(const DesignProblem& problem, const Allocation& w, Criterion criterion,
                       double support_tolerance) {
  return criterion == Criterion::DOptimal ? kkt_residual_d(problem, w, support_tolerance)
                                          : kkt_residual_a(problem, w, support_tolerance);
}

OracleResult grid_oracle(const DesignProblem& problem, Criterion criterion, double resolution) {
  const std::size_t k = problem.k();
  if (k > 4) throw Error(ErrorCode::ProblemTooLarge, "grid oracle is limited to k <= 4");
  if (!(resolution >= 1e-3)) throw Error(ErrorCode::ProblemTooLarge, "grid oracle resolution must be >= 1e-3");
  const double steps_real = 1.0 / resolution;
  const long steps = std::lround(steps_real);
  if (steps < 1 || std::fabs(static_cast<double>(steps) * resolution - 1.0) > 1e-9) {
    std::ostringstream msg;
    msg << "grid oracle resolution " << resolution << " does not divide 1";
    throw Error(ErrorCode::InvalidConfig, msg.str());
  }

  const bool maximize = criterion == Criterion::DOptimal;
  std::vector<long> counts(k, 0);
  std::vector<double> weights(k, 0.0);
  std::vector<double> best_weights;
  double best = maximize ? -std::numeric_limits<double>::infinity() : std::numeric_limits<double>::infinity();

  // Lexicographic enumeration of compositions of `steps` into k parts; only a
  // strict improvement replaces the incumbent, so ties keep the smallest.
  auto evaluate = [&] {
    for (std::size_t l = 0; l < k; ++l) weights[l] = static_cast<double>(counts[l]) / static_cast<double>(steps);
    const InfoMatrix info(problem, weights);
    if (!info.positive_definite()) return;
    const double value = maximize ? info.log_determinant() : info.trace_of_inverse();
    if (maximize ? value > best : value < best) {
      best = value;
      best_weights = weights;
    }
  };
  auto recurse = [&](auto&& self, std::size_t index, long remaining) -> void {
    if (index + 1 == k) {
      counts[index] = remaining;
      evaluate();
      return;
    }
    for (long c = 0; c <= remaining; ++c) {
      counts[index] = c;
      self(self, index + 1, remaining - c);
    }
  };
  recurse(recurse, 0, steps);

  if (best_weights.empty())
    throw Error(ErrorCode::SingularInformation, "every lattice allocation has singular information");
  return OracleResult{Allocation::assume_simplex(std::move(best_weights)), best};
}

double d_efficiency(const DesignProblem& problem, const Allocation& w, const Allocation& w_ref) {
  const double diff = d_objective(problem, w) - d_objective(problem, w_ref);
  return std::exp(diff / static_cast<double>(problem.p()));
}

MonotonicityAudit monotonicity_audit(std::span<const IterationRecord> trace, std::size_t p) {
  MonotonicityAudit audit;
  if (trace.size() < 2) return audit;
  const double half_p = 0.5 * static_cast<double>(p);
  audit.min_slack = std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i < trace.size(); ++i) {
    const double l1 = trace[i].l1_delta;
    const double slack = (trace[i].objective - trace[i - 1].objective) - half_p * l1 * l1;
    audit.min_slack = std::min(audit.min_slack, slack);
    if (slack < -kMonotoneSlackTolerance) ++audit.violations;
  }
  return audit;
}

}  // namespace optalloc
