#include "optalloc/kernels.hpp"

#include <cmath>

namespace optalloc::kernels {
namespace {

double dot_scalar(const double* a, const double* b, std::size_t n) noexcept {
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) sum += a[i] * b[i];
  return sum;
}

void axpy_scalar(double alpha, const double* x, double* y, std::size_t n) noexcept {
  for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

double abs_diff_scalar(const double* a, const double* b, std::size_t n, double* max_out) noexcept {
  double sum = 0.0;
  double mx = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = std::fabs(a[i] - b[i]);
    sum += d;
    if (d > mx) mx = d;
  }
  *max_out = mx;
  return sum;
}

constexpr KernelTable kScalar{"scalar", &dot_scalar, &axpy_scalar, &abs_diff_scalar};

}  // namespace

const KernelTable& scalar() noexcept { return kScalar; }

}  // namespace optalloc::kernels
