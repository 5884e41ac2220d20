#pragma once

#include <cstddef>
#include <initializer_list>
#include <optional>
#include <span>
#include <vector>

namespace optalloc {

/// Dense n x n matrix, row-major. Rows are contiguous so the dot/axpy kernels
/// can run over them directly.
class SquareMatrix {
 public:
  SquareMatrix() = default;
  explicit SquareMatrix(std::size_t n) : n_(n), data_(n * n, 0.0) {}
  SquareMatrix(std::size_t n, std::vector<double> row_major);
  SquareMatrix(std::initializer_list<std::initializer_list<double>> rows);

  static SquareMatrix identity(std::size_t n);

  std::size_t size() const noexcept { return n_; }

  double& operator()(std::size_t i, std::size_t j) noexcept { return data_[i * n_ + j]; }
  double operator()(std::size_t i, std::size_t j) const noexcept { return data_[i * n_ + j]; }

  std::span<double> row(std::size_t i) noexcept { return {data_.data() + i * n_, n_}; }
  std::span<const double> row(std::size_t i) const noexcept { return {data_.data() + i * n_, n_}; }

  std::span<double> data() noexcept { return data_; }
  std::span<const double> data() const noexcept { return data_; }

  double trace() const noexcept;
  double max_abs() const noexcept;

  /// this += alpha * other
  void add_scaled(double alpha, const SquareMatrix& other);
  /// this += alpha * x x'
  void add_outer(double alpha, std::span<const double> x);

  SquareMatrix& operator*=(double c) noexcept;

  bool operator==(const SquareMatrix&) const = default;

 private:
  std::size_t n_ = 0;
  std::vector<double> data_;
};

/// sum_ij a_ij b_ij; for symmetric operands this is trace(a b).
double frobenius_dot(const SquareMatrix& a, const SquareMatrix& b);

/// a * b for symmetric a and b (uses rows of both).
SquareMatrix symmetric_product(const SquareMatrix& a, const SquareMatrix& b);

/// y = m x
std::vector<double> multiply(const SquareMatrix& m, std::span<const double> x);

/// Lower Cholesky factor of a symmetric positive-definite matrix.
///
/// A pivot below `relative_pivot_floor * max_i a_ii` counts as a failure; that
/// is the library-wide meaning of "singular".
class Cholesky {
 public:
  static constexpr double kRelativePivotFloor = 1e-12;

  static std::optional<Cholesky> factor(const SquareMatrix& a,
                                        double relative_pivot_floor = kRelativePivotFloor);

  const SquareMatrix& lower() const noexcept { return lower_; }
  double log_determinant() const noexcept;
  /// Full symmetric inverse, formed as L^{-T} L^{-1}.
  SquareMatrix inverse() const;

 private:
  explicit Cholesky(SquareMatrix lower) : lower_(std::move(lower)) {}
  SquareMatrix lower_;
};

}  // namespace optalloc
