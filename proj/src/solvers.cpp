#include "optalloc/solvers.hpp"

#include <algorithm>
#include <chrono>
#include <cctype>
#include <cmath>
#include <numeric>
#include <sstream>
#include <string>

#include "optalloc/kernels.hpp"
#include "optalloc/verification.hpp"

namespace optalloc {

std::string_view to_string(Criterion c) noexcept {
  return c == Criterion::DOptimal ? "D" : "A";
}

std::optional<Criterion> parse_criterion(std::string_view text) noexcept {
  std::string lower;
  for (char ch : text) lower.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(ch))));
  if (lower == "d" || lower == "d-optimal" || lower == "doptimal") return Criterion::DOptimal;
  if (lower == "a" || lower == "a-optimal" || lower == "aoptimal") return Criterion::AOptimal;
  return std::nullopt;
}

void SolverConfig::validate(std::size_t k) const {
  if (!(tolerance > 0.0) || !std::isfinite(tolerance))
    throw Error(ErrorCode::InvalidConfig, "tolerance must be a positive finite number");
  if (max_iterations == 0) throw Error(ErrorCode::InvalidConfig, "max_iterations must be at least 1");
  if (!(weight_floor >= 0.0) || weight_floor * static_cast<double>(k) >= 1.0)
    throw Error(ErrorCode::InvalidConfig, "weight_floor must satisfy 0 <= floor < 1/k");
  if (initial) {
    if (initial->size() != k) {
      std::ostringstream msg;
      msg << "initial allocation has " << initial->size() << " weights for " << k << " conditions";
      throw Error(ErrorCode::InvalidConfig, msg.str());
    }
    for (double w : initial->weights()) {
      if (!(w > 0.0))
        throw Error(ErrorCode::InvalidConfig,
                    "initial weights must be strictly positive; a zero weight can never recover");
    }
  }
}

namespace {

// Relative rise in trace(Sigma^{-1}) counted as an A-step increase.
constexpr double kAIncreaseTolerance = 1e-10;

double objective_of(const InfoMatrix& info, Criterion c) {
  return c == Criterion::DOptimal ? info.log_determinant() : info.trace_of_inverse();
}

std::vector<double> multiplicative_update(const DesignProblem& problem, std::span<const double> w,
                                          const InfoMatrix& info, Criterion c) {
  const double p = static_cast<double>(problem.p());
  std::vector<double> next(w.size());
  if (c == Criterion::DOptimal) {
    const std::vector<double> s = d_sensitivities(problem, info);
    for (std::size_t l = 0; l < w.size(); ++l) next[l] = w[l] * s[l] / p;
  } else {
    const std::vector<double> s = a_sensitivities(problem, info);
    for (std::size_t l = 0; l < w.size(); ++l) next[l] = w[l] / p * (s[l] + p - 1.0);
  }
  return next;
}

void apply_floor(std::vector<double>& w, double floor) {
  if (floor <= 0.0) return;
  // lift to the floor, then shrink the mass above it so the total stays 1
  double excess = 0.0;
  for (double v : w) excess += std::max(v - floor, 0.0);
  const double budget = 1.0 - floor * static_cast<double>(w.size());
  for (double& v : w) v = floor + std::max(v - floor, 0.0) * (budget / excess);
}

}  // namespace

Allocation d_step(const DesignProblem& problem, const Allocation& w) {
  const InfoMatrix info = fisher_information(problem, w);
  return Allocation::assume_simplex(multiplicative_update(problem, w.weights(), info, Criterion::DOptimal));
}

Allocation a_step(const DesignProblem& problem, const Allocation& w) {
  const InfoMatrix info = fisher_information(problem, w);
  return Allocation::assume_simplex(multiplicative_update(problem, w.weights(), info, Criterion::AOptimal));
}

SolveReport solve(const DesignProblem& problem, const SolverConfig& config) {
  const std::size_t k = problem.k();
  config.validate(k);

  SolveReport report;
  report.criterion = config.criterion;
  report.independent = check_independence(problem);

  const auto started = std::chrono::steady_clock::now();
  const double half_p = 0.5 * static_cast<double>(problem.p());

  Allocation w = config.initial ? *config.initial : Allocation::uniform(k);
  InfoMatrix info(problem, w.weights());
  if (!info.positive_definite())
    throw Error(ErrorCode::SingularInformation, "information matrix at the initial allocation is singular");
  double objective = objective_of(info, config.criterion);

  if (config.record_trace) {
    report.trace.push_back(IterationRecord{0, w, objective, 0.0, 0.0, 0.0});
  }

  for (std::size_t h = 1; h <= config.max_iterations; ++h) {
    std::vector<double> next = multiplicative_update(problem, w.weights(), info, config.criterion);
    apply_floor(next, config.weight_floor);

    InfoMatrix next_info(problem, next);
    if (!next_info.positive_definite()) {
      std::ostringstream msg;
      msg << "information matrix became singular at iteration " << h;
      throw Error(ErrorCode::SingularInformation, msg.str());
    }
    const double next_objective = objective_of(next_info, config.criterion);

    double max_delta = 0.0;
    const double l1 = kernels::active().abs_diff(next.data(), w.weights().data(), k, &max_delta);

    double slack;
    if (config.criterion == Criterion::DOptimal) {
      slack = (next_objective - objective) - half_p * l1 * l1;
      if (slack < -kMonotoneSlackTolerance) ++report.monotone_violations;
    } else {
      slack = objective - next_objective;
      if (-slack > kAIncreaseTolerance * std::fabs(objective)) ++report.monotone_violations;
    }

    w = Allocation::assume_simplex(std::move(next));
    info = std::move(next_info);
    objective = next_objective;
    report.iterations = h;

    if (config.record_trace) {
      report.trace.push_back(IterationRecord{h, w, objective, max_delta, l1, slack});
    }
    if (max_delta < config.tolerance) {
      report.converged = true;
      break;
    }
  }

  report.elapsed_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  report.objective = objective;
  report.kkt_residual = kkt_residual(problem, w, config.criterion).residual;
  report.final_weights = std::move(w);
  return report;
}

std::vector<std::int64_t> apportion(const Allocation& w, std::int64_t n) {
  if (n < 1) throw Error(ErrorCode::InvalidConfig, "apportion needs at least one unit");
  const std::size_t k = w.size();
  std::vector<std::int64_t> counts(k);
  // Remainders are compared on a 1e-9 grid so that weights equal up to
  // round-off tie, and ties resolve to the lower index.
  std::vector<std::int64_t> remainder_key(k);
  std::int64_t assigned = 0;
  for (std::size_t l = 0; l < k; ++l) {
    const double quota = static_cast<double>(n) * w[l];
    const double whole = std::floor(quota);
    counts[l] = static_cast<std::int64_t>(whole);
    remainder_key[l] = std::llround((quota - whole) * 1e9);
    assigned += counts[l];
  }
  std::vector<std::size_t> order(k);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return remainder_key[a] > remainder_key[b]; });
  for (std::int64_t left = n - assigned, i = 0; left > 0; --left, ++i) {
    ++counts[order[static_cast<std::size_t>(i) % k]];
  }
  return counts;
}

}  // namespace optalloc
