#include "optalloc/design_model.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "optalloc/kernels.hpp"

namespace optalloc {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::NonFinite: return "NonFinite";
    case ErrorCode::Asymmetric: return "Asymmetric";
    case ErrorCode::NotNonnegativeDefinite: return "NotNonnegativeDefinite";
    case ErrorCode::EmptyProblem: return "EmptyProblem";
    case ErrorCode::SingularInformation: return "SingularInformation";
    case ErrorCode::InvalidAllocation: return "InvalidAllocation";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    case ErrorCode::ProblemTooLarge: return "ProblemTooLarge";
  }
  return "Unknown";
}

namespace {

bool all_finite(std::span<const double> v) {
  return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
}

Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> as_eigen(
    const SquareMatrix& m) {
  return {m.data().data(), static_cast<Eigen::Index>(m.size()), static_cast<Eigen::Index>(m.size())};
}

}  // namespace

// ---------------------------------------------------------------------------
// InformationComponent

InformationComponent InformationComponent::from_matrix(SquareMatrix m) {
  const std::size_t n = m.size();
  if (n == 0) throw Error(ErrorCode::DimensionMismatch, "information component has dimension 0");
  if (!all_finite(m.data())) throw Error(ErrorCode::NonFinite, "information component has a non-finite entry");

  const double scale = m.max_abs();
  double asym = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) asym = std::max(asym, std::fabs(m(i, j) - m(j, i)));
  if (asym > kSymmetryRepairTolerance * scale) {
    std::ostringstream msg;
    msg << "information component is not symmetric (max |a_ij - a_ji| = " << asym << ")";
    throw Error(ErrorCode::Asymmetric, msg.str());
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double avg = 0.5 * (m(i, j) + m(j, i));
      m(i, j) = avg;
      m(j, i) = avg;
    }
  }

  if (scale > 0.0) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(as_eigen(m), Eigen::EigenvaluesOnly);
    const auto& ev = eig.eigenvalues();
    const double spectral = ev.cwiseAbs().maxCoeff();
    if (ev.minCoeff() < -kNegativeEigenvalueTolerance * spectral) {
      std::ostringstream msg;
      msg << "information component is not nonnegative definite (min eigenvalue " << ev.minCoeff() << ")";
      throw Error(ErrorCode::NotNonnegativeDefinite, msg.str());
    }
  }
  return InformationComponent(std::move(m));
}

InformationComponent InformationComponent::outer_product(std::span<const double> x) {
  SquareMatrix m(x.size());
  for (std::size_t i = 0; i < x.size(); ++i)
    for (std::size_t j = 0; j < x.size(); ++j) m(i, j) = x[i] * x[j];
  return InformationComponent(std::move(m));
}

// ---------------------------------------------------------------------------
// Allocation

Allocation::Allocation(std::vector<double> weights) : weights_(std::move(weights)) {
  if (weights_.empty()) throw Error(ErrorCode::InvalidAllocation, "allocation is empty");
  double sum = 0.0;
  for (double w : weights_) {
    if (!std::isfinite(w) || w < 0.0)
      throw Error(ErrorCode::InvalidAllocation, "allocation weights must be finite and nonnegative");
    sum += w;
  }
  if (std::fabs(sum - 1.0) > kSimplexTolerance) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "allocation weights sum to " << sum << ", not 1";
    throw Error(ErrorCode::InvalidAllocation, msg.str());
  }
}

Allocation Allocation::uniform(std::size_t k) {
  if (k == 0) throw Error(ErrorCode::InvalidAllocation, "allocation is empty");
  return Allocation(Unchecked{}, std::vector<double>(k, 1.0 / static_cast<double>(k)));
}

Allocation Allocation::assume_simplex(std::vector<double> weights) noexcept {
  return Allocation(Unchecked{}, std::move(weights));
}

// ---------------------------------------------------------------------------
// DesignProblem

DesignProblem DesignProblem::from_points(std::span<const DesignPoint> points,
                                         std::vector<std::string> labels) {
  if (points.empty()) throw Error(ErrorCode::EmptyProblem, "a design problem needs at least one condition");
  const std::size_t p = points.front().coordinates.size();
  if (p == 0) throw Error(ErrorCode::DimensionMismatch, "design points must have dimension >= 1");

  DesignProblem problem;
  problem.p_ = p;
  problem.points_.reserve(points.size() * p);
  problem.components_.reserve(points.size());
  for (std::size_t l = 0; l < points.size(); ++l) {
    const auto& x = points[l].coordinates;
    if (x.size() != p) {
      std::ostringstream msg;
      msg << "design point " << l << " has dimension " << x.size() << ", expected " << p;
      throw Error(ErrorCode::DimensionMismatch, msg.str());
    }
    if (!all_finite(x)) {
      std::ostringstream msg;
      msg << "design point " << l << " has a non-finite coordinate";
      throw Error(ErrorCode::NonFinite, msg.str());
    }
    problem.points_.insert(problem.points_.end(), x.begin(), x.end());
    problem.components_.push_back(InformationComponent::outer_product(x));
  }
  if (!labels.empty() && labels.size() != points.size())
    throw Error(ErrorCode::DimensionMismatch, "label count does not match the number of conditions");
  problem.labels_ = std::move(labels);
  problem.validate_nonsingular_total();
  return problem;
}

DesignProblem DesignProblem::from_components(std::vector<InformationComponent> components,
                                             std::vector<std::string> labels) {
  if (components.empty()) throw Error(ErrorCode::EmptyProblem, "a design problem needs at least one condition");
  const std::size_t p = components.front().size();
  for (std::size_t l = 0; l < components.size(); ++l) {
    if (components[l].size() != p) {
      std::ostringstream msg;
      msg << "component " << l << " is " << components[l].size() << "x" << components[l].size()
          << ", expected " << p << "x" << p;
      throw Error(ErrorCode::DimensionMismatch, msg.str());
    }
  }
  if (!labels.empty() && labels.size() != components.size())
    throw Error(ErrorCode::DimensionMismatch, "label count does not match the number of conditions");
  DesignProblem problem;
  problem.p_ = p;
  problem.components_ = std::move(components);
  problem.labels_ = std::move(labels);
  problem.validate_nonsingular_total();
  return problem;
}

void DesignProblem::validate_nonsingular_total() const {
  SquareMatrix total(p_);
  for (const auto& c : components_) total.add_scaled(1.0, c.matrix());
  if (!Cholesky::factor(total))
    throw Error(ErrorCode::SingularInformation,
                "the components sum to a singular matrix; no allocation is informative for all parameters");
}

DesignProblem DesignProblem::scaled(double c) const {
  if (!(c > 0.0) || !std::isfinite(c)) throw Error(ErrorCode::InvalidConfig, "scale factor must be positive");
  DesignProblem out = *this;
  for (auto& comp : out.components_) {
    SquareMatrix m = comp.matrix();
    m *= c;
    comp = InformationComponent(std::move(m));
  }
  const double root = std::sqrt(c);
  for (double& v : out.points_) v *= root;
  return out;
}

DesignProblem DesignProblem::as_general() const {
  DesignProblem out = *this;
  out.points_.clear();
  return out;
}

// ---------------------------------------------------------------------------
// InfoMatrix

InfoMatrix::InfoMatrix(const DesignProblem& problem, std::span<const double> weights)
    : sigma_(problem.p()) {
  if (weights.size() != problem.k()) {
    std::ostringstream msg;
    msg << "allocation has " << weights.size() << " weights for " << problem.k() << " conditions";
    throw Error(ErrorCode::DimensionMismatch, msg.str());
  }
  for (std::size_t l = 0; l < problem.k(); ++l) {
    if (weights[l] == 0.0) continue;
    if (problem.has_points()) {
      sigma_.add_outer(weights[l], problem.point(l));
    } else {
      sigma_.add_scaled(weights[l], problem.component(l).matrix());
    }
  }
  if (auto chol = Cholesky::factor(sigma_)) {
    log_det_ = chol->log_determinant();
    inverse_ = chol->inverse();
    trace_inverse_ = inverse_.trace();
  }
}

void InfoMatrix::require_pd() const {
  if (!log_det_) throw Error(ErrorCode::SingularInformation, "information matrix is not positive definite");
}

double InfoMatrix::log_determinant() const {
  require_pd();
  return *log_det_;
}

const SquareMatrix& InfoMatrix::inverse() const {
  require_pd();
  return inverse_;
}

double InfoMatrix::trace_of_inverse() const {
  require_pd();
  return trace_inverse_;
}

InfoMatrix fisher_information(const DesignProblem& problem, const Allocation& w) {
  return InfoMatrix(problem, w.weights());
}

double d_objective(const DesignProblem& problem, const Allocation& w) {
  return fisher_information(problem, w).log_determinant();
}

double a_objective(const DesignProblem& problem, const Allocation& w) {
  return fisher_information(problem, w).trace_of_inverse();
}

std::vector<double> d_sensitivities(const DesignProblem& problem, const InfoMatrix& info) {
  const SquareMatrix& inv = info.inverse();
  std::vector<double> out(problem.k());
  for (std::size_t l = 0; l < problem.k(); ++l) {
    if (problem.has_points()) {
      const auto x = problem.point(l);
      const std::vector<double> v = multiply(inv, x);
      out[l] = kernels::dot(x.data(), v.data(), x.size());
    } else {
      out[l] = frobenius_dot(problem.component(l).matrix(), inv);
    }
  }
  return out;
}

std::vector<double> a_sensitivities(const DesignProblem& problem, const InfoMatrix& info) {
  const SquareMatrix& inv = info.inverse();
  const double tr = info.trace_of_inverse();
  std::vector<double> out(problem.k());
  if (problem.has_points()) {
    for (std::size_t l = 0; l < problem.k(); ++l) {
      const std::vector<double> v = multiply(inv, problem.point(l));
      out[l] = kernels::dot(v.data(), v.data(), v.size()) / tr;
    }
  } else {
    const SquareMatrix inv2 = symmetric_product(inv, inv);
    for (std::size_t l = 0; l < problem.k(); ++l) {
      out[l] = frobenius_dot(problem.component(l).matrix(), inv2) / tr;
    }
  }
  return out;
}

namespace {

void check_index(const DesignProblem& problem, std::size_t l) {
  if (l >= problem.k()) throw Error(ErrorCode::DimensionMismatch, "condition index out of range");
}

}  // namespace

double d_sensitivity(const DesignProblem& problem, const Allocation& w, std::size_t l) {
  check_index(problem, l);
  const InfoMatrix info = fisher_information(problem, w);
  const SquareMatrix& inv = info.inverse();
  if (problem.has_points()) {
    const auto x = problem.point(l);
    const std::vector<double> v = multiply(inv, x);
    return kernels::dot(x.data(), v.data(), x.size());
  }
  return frobenius_dot(problem.component(l).matrix(), inv);
}

double a_sensitivity(const DesignProblem& problem, const Allocation& w, std::size_t l) {
  check_index(problem, l);
  const InfoMatrix info = fisher_information(problem, w);
  const SquareMatrix& inv = info.inverse();
  if (problem.has_points()) {
    const std::vector<double> v = multiply(inv, problem.point(l));
    return kernels::dot(v.data(), v.data(), v.size()) / info.trace_of_inverse();
  }
  // trace(S A S) = <A, S S> for symmetric S, A.
  return frobenius_dot(problem.component(l).matrix(), symmetric_product(inv, inv)) / info.trace_of_inverse();
}

bool check_independence(const DesignProblem& problem) {
  const std::size_t p = problem.p();
  const std::size_t k = problem.k();
  const std::size_t m = p * (p + 1) / 2;
  if (k > m) return false;

  Eigen::MatrixXd rows(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(m));
  for (std::size_t l = 0; l < k; ++l) {
    const SquareMatrix& a = problem.component(l).matrix();
    Eigen::Index c = 0;
    for (std::size_t i = 0; i < p; ++i)
      for (std::size_t j = i; j < p; ++j) rows(static_cast<Eigen::Index>(l), c++) = a(i, j);
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(rows);
  const auto& sv = svd.singularValues();
  if (sv.size() == 0 || sv(0) == 0.0) return false;
  const double cutoff = 1e-10 * sv(0);
  std::size_t rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv(i) > cutoff) ++rank;
  return rank == k;
}

}  // namespace optalloc
