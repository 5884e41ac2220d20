#include "optalloc/matrix.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <stdexcept>

#include "optalloc/kernels.hpp"

namespace optalloc {

SquareMatrix::SquareMatrix(std::size_t n, std::vector<double> row_major)
    : n_(n), data_(std::move(row_major)) {
  if (data_.size() != n_ * n_) throw std::invalid_argument("SquareMatrix: element count is not n*n");
}

SquareMatrix::SquareMatrix(std::initializer_list<std::initializer_list<double>> rows)
    : n_(rows.size()) {
  data_.reserve(n_ * n_);
  for (const auto& r : rows) {
    if (r.size() != n_) throw std::invalid_argument("SquareMatrix: ragged initializer");
    data_.insert(data_.end(), r.begin(), r.end());
  }
}

SquareMatrix SquareMatrix::identity(std::size_t n) {
  SquareMatrix m(n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

double SquareMatrix::trace() const noexcept {
  double t = 0.0;
  for (std::size_t i = 0; i < n_; ++i) t += (*this)(i, i);
  return t;
}

double SquareMatrix::max_abs() const noexcept {
  double m = 0.0;
  for (double v : data_) m = std::max(m, std::fabs(v));
  return m;
}

void SquareMatrix::add_scaled(double alpha, const SquareMatrix& other) {
  assert(other.n_ == n_);
  kernels::axpy(alpha, other.data_.data(), data_.data(), data_.size());
}

void SquareMatrix::add_outer(double alpha, std::span<const double> x) {
  assert(x.size() == n_);
  for (std::size_t i = 0; i < n_; ++i) {
    kernels::axpy(alpha * x[i], x.data(), data_.data() + i * n_, n_);
  }
}

SquareMatrix& SquareMatrix::operator*=(double c) noexcept {
  for (double& v : data_) v *= c;
  return *this;
}

double frobenius_dot(const SquareMatrix& a, const SquareMatrix& b) {
  assert(a.size() == b.size());
  return kernels::dot(a.data().data(), b.data().data(), a.data().size());
}

SquareMatrix symmetric_product(const SquareMatrix& a, const SquareMatrix& b) {
  const std::size_t n = a.size();
  SquareMatrix out(n);
  // (ab)_ij = sum_m a_im b_mj = a.row(i) . b.row(j) since b is symmetric.
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      out(i, j) = kernels::dot(a.row(i).data(), b.row(j).data(), n);
    }
  }
  return out;
}

std::vector<double> multiply(const SquareMatrix& m, std::span<const double> x) {
  const std::size_t n = m.size();
  std::vector<double> y(n);
  for (std::size_t i = 0; i < n; ++i) y[i] = kernels::dot(m.row(i).data(), x.data(), n);
  return y;
}

std::optional<Cholesky> Cholesky::factor(const SquareMatrix& a, double relative_pivot_floor) {
  const std::size_t n = a.size();
  double max_diag = 0.0;
  for (std::size_t i = 0; i < n; ++i) max_diag = std::max(max_diag, a(i, i));
  if (!(max_diag > 0.0)) return std::nullopt;
  const double floor = relative_pivot_floor * max_diag;

  SquareMatrix l(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double* lj = l.row(j).data();
    const double pivot = a(j, j) - kernels::dot(lj, lj, j);
    if (!(pivot > floor)) return std::nullopt;
    const double d = std::sqrt(pivot);
    l(j, j) = d;
    for (std::size_t i = j + 1; i < n; ++i) {
      l(i, j) = (a(i, j) - kernels::dot(l.row(i).data(), lj, j)) / d;
    }
  }
  return Cholesky(std::move(l));
}

double Cholesky::log_determinant() const noexcept {
  double s = 0.0;
  for (std::size_t i = 0; i < lower_.size(); ++i) s += std::log(lower_(i, i));
  return 2.0 * s;
}

SquareMatrix Cholesky::inverse() const {
  const std::size_t n = lower_.size();
  // Row j of u holds column j of L^{-1} (entries j..n-1), so u = L^{-T}.
  SquareMatrix u(n);
  for (std::size_t j = 0; j < n; ++j) {
    double* y = u.row(j).data();
    for (std::size_t i = j; i < n; ++i) {
      const double rhs = (i == j ? 1.0 : 0.0) - kernels::dot(lower_.row(i).data() + j, y + j, i - j);
      y[i] = rhs / lower_(i, i);
    }
  }
  // Sigma^{-1} = L^{-T} L^{-1}; (i, j) entry is u.row(i) . u.row(j) over the shared tail.
  SquareMatrix inv(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) {
      const double v = kernels::dot(u.row(i).data() + j, u.row(j).data() + j, n - j);
      inv(i, j) = v;
      inv(j, i) = v;
    }
  }
  return inv;
}

}  // namespace optalloc
