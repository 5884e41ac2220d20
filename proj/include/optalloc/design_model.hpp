#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "optalloc/error.hpp"
#include "optalloc/matrix.hpp"

namespace optalloc {

/// Covariate levels x_l of one experimental condition.
struct DesignPoint {
  std::vector<double> coordinates;
};

/// Per-unit information contributed by one condition: a symmetric
/// nonnegative-definite p x p matrix.
class InformationComponent {
 public:
  /// Relative asymmetry up to which input is silently symmetrized.
  static constexpr double kSymmetryRepairTolerance = 1e-8;
  /// Eigenvalues down to -tol * spectral norm are accepted as round-off.
  static constexpr double kNegativeEigenvalueTolerance = 1e-10;

  /// Validates and symmetrizes. Throws NonFinite, Asymmetric or
  /// NotNonnegativeDefinite.
  static InformationComponent from_matrix(SquareMatrix m);

  /// x x', symmetric and rank one by construction.
  static InformationComponent outer_product(std::span<const double> x);

  const SquareMatrix& matrix() const noexcept { return matrix_; }
  std::size_t size() const noexcept { return matrix_.size(); }

 private:
  friend class DesignProblem;
  explicit InformationComponent(SquareMatrix m) : matrix_(std::move(m)) {}
  SquareMatrix matrix_;
};

/// Weight vector on the probability simplex.
class Allocation {
 public:
  static constexpr double kSimplexTolerance = 1e-10;

  /// Throws InvalidAllocation unless every weight is finite and >= 0 and the
  /// weights sum to 1 within kSimplexTolerance.
  explicit Allocation(std::vector<double> weights);

  static Allocation uniform(std::size_t k);

  /// Skips validation. For iterates that are on the simplex analytically.
  static Allocation assume_simplex(std::vector<double> weights) noexcept;

  std::span<const double> weights() const noexcept { return weights_; }
  const std::vector<double>& values() const noexcept { return weights_; }
  std::size_t size() const noexcept { return weights_.size(); }
  double operator[](std::size_t l) const noexcept { return weights_[l]; }

  bool operator==(const Allocation&) const = default;

 private:
  struct Unchecked {};
  Allocation(Unchecked, std::vector<double> weights) noexcept : weights_(std::move(weights)) {}
  std::vector<double> weights_;
};

/// k information components over a common parameter dimension p. When built
/// from design points, the points are kept so sensitivities can use quadratic
/// forms instead of full trace products.
class DesignProblem {
 public:
  static DesignProblem from_points(std::span<const DesignPoint> points,
                                   std::vector<std::string> labels = {});
  static DesignProblem from_components(std::vector<InformationComponent> components,
                                       std::vector<std::string> labels = {});

  std::size_t p() const noexcept { return p_; }
  std::size_t k() const noexcept { return components_.size(); }

  const InformationComponent& component(std::size_t l) const { return components_.at(l); }

  bool has_points() const noexcept { return !points_.empty(); }
  /// Coordinates of point l; only valid when has_points().
  std::span<const double> point(std::size_t l) const noexcept {
    return {points_.data() + l * p_, p_};
  }

  const std::vector<std::string>& labels() const noexcept { return labels_; }

  /// Every component multiplied by c > 0 (points by sqrt(c)).
  DesignProblem scaled(double c) const;

  /// Same components with the point representation dropped, forcing the
  /// general trace-product path.
  DesignProblem as_general() const;

 private:
  DesignProblem() = default;
  void validate_nonsingular_total() const;

  std::size_t p_ = 0;
  std::vector<InformationComponent> components_;
  std::vector<double> points_;  // k x p row-major, or empty
  std::vector<std::string> labels_;
};

/// Sigma(w) = sum_l w_l A_l together with its Cholesky factorization and
/// inverse, all computed at construction. When Sigma(w) is only semidefinite
/// the matrix is still available, but the derived quantities throw
/// SingularInformation.
class InfoMatrix {
 public:
  InfoMatrix(const DesignProblem& problem, std::span<const double> weights);

  std::size_t p() const noexcept { return sigma_.size(); }
  const SquareMatrix& matrix() const noexcept { return sigma_; }
  bool positive_definite() const noexcept { return log_det_.has_value(); }

  double log_determinant() const;
  const SquareMatrix& inverse() const;
  double trace_of_inverse() const;

 private:
  void require_pd() const;

  SquareMatrix sigma_;
  std::optional<double> log_det_;
  SquareMatrix inverse_;
  double trace_inverse_ = 0.0;
};

InfoMatrix fisher_information(const DesignProblem& problem, const Allocation& w);

/// log |Sigma(w)|, to be maximized.
double d_objective(const DesignProblem& problem, const Allocation& w);
/// trace(Sigma(w)^{-1}), to be minimized.
double a_objective(const DesignProblem& problem, const Allocation& w);

/// trace(A_l Sigma^{-1}). Weighted mean over w is exactly p.
double d_sensitivity(const DesignProblem& problem, const Allocation& w, std::size_t l);
/// trace(Sigma^{-1} A_l Sigma^{-1}) / trace(Sigma^{-1}). Weighted mean over w is exactly 1.
double a_sensitivity(const DesignProblem& problem, const Allocation& w, std::size_t l);

// Batched forms sharing one factorization across all k conditions.
std::vector<double> d_sensitivities(const DesignProblem& problem, const InfoMatrix& info);
std::vector<double> a_sensitivities(const DesignProblem& problem, const InfoMatrix& info);

/// Whether A_1..A_k are linearly independent as symmetric matrices.
bool check_independence(const DesignProblem& problem);

}  // namespace optalloc
