#pragma once

#include <cstddef>
#include <string_view>

// Data-parallel inner loops used by the matrix and sensitivity code. Every
// kernel has a portable scalar reference; wider variants are compiled into
// separate translation units and picked once at startup from CPUID.
//
// Set OPTALLOC_KERNELS=scalar in the environment to force the reference path.

namespace optalloc::kernels {

struct KernelTable {
  std::string_view name;
  /// sum_i a[i] * b[i]
  double (*dot)(const double* a, const double* b, std::size_t n) noexcept;
  /// y[i] += alpha * x[i]
  void (*axpy)(double alpha, const double* x, double* y, std::size_t n) noexcept;
  /// sum_i |a[i] - b[i]|, with max_i |a[i] - b[i]| written to *max_out
  double (*abs_diff)(const double* a, const double* b, std::size_t n, double* max_out) noexcept;
};

const KernelTable& scalar() noexcept;

/// Null when the binary was built without the AVX2 unit or the CPU lacks AVX2+FMA.
const KernelTable* avx2() noexcept;

/// Table used by the library. Selected on first use; stable afterwards unless
/// a ScopedOverride is live.
const KernelTable& active() noexcept;

/// Test hook: routes active() to a specific table for the lifetime of the
/// object. Not for use while other threads are computing.
class ScopedOverride {
 public:
  explicit ScopedOverride(const KernelTable& table) noexcept;
  ~ScopedOverride();
  ScopedOverride(const ScopedOverride&) = delete;
  ScopedOverride& operator=(const ScopedOverride&) = delete;

 private:
  const KernelTable* previous_;
};

inline double dot(const double* a, const double* b, std::size_t n) noexcept {
  return active().dot(a, b, n);
}

inline void axpy(double alpha, const double* x, double* y, std::size_t n) noexcept {
  active().axpy(alpha, x, y, n);
}

}  // namespace optalloc::kernels
