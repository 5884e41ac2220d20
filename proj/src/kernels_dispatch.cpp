#include <atomic>
#include <cstdlib>
#include <string_view>

#include "optalloc/kernels.hpp"

namespace optalloc::kernels {

#if defined(OPTALLOC_HAVE_AVX2)
const KernelTable& avx2_table() noexcept;
#endif

namespace {

[[maybe_unused]] bool cpu_has_avx2() noexcept {
#if defined(OPTALLOC_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

const KernelTable* select() noexcept {
  if (const char* forced = std::getenv("OPTALLOC_KERNELS")) {
    if (std::string_view(forced) == "scalar") return &scalar();
  }
  if (const KernelTable* wide = avx2()) return wide;
  return &scalar();
}

std::atomic<const KernelTable*>& current() noexcept {
  static std::atomic<const KernelTable*> table{select()};
  return table;
}

}  // namespace

const KernelTable* avx2() noexcept {
#if defined(OPTALLOC_HAVE_AVX2)
  static const bool supported = cpu_has_avx2();
  return supported ? &avx2_table() : nullptr;
#else
  return nullptr;
#endif
}

const KernelTable& active() noexcept { return *current().load(std::memory_order_acquire); }

ScopedOverride::ScopedOverride(const KernelTable& table) noexcept
    : previous_(current().exchange(&table, std::memory_order_acq_rel)) {}

ScopedOverride::~ScopedOverride() { current().store(previous_, std::memory_order_release); }

}  // namespace optalloc::kernels
