#include <atomic>

#include "pmfix/kernels.hpp"

namespace pmfix::kernels {
namespace {

Backend detect() noexcept {
#if defined(PMFIX_HAVE_AVX2)
  if (cpu_has_avx2()) return Backend::Avx2;
#endif
  return Backend::Scalar;
}

std::atomic<Backend>& current() noexcept {
  static std::atomic<Backend> backend{detect()};
  return backend;
}

}  // namespace

bool cpu_has_avx2() noexcept {
#if defined(__x86_64__) || defined(__i386__)
  return __builtin_cpu_supports("avx2");
#else
  return false;
#endif
}

Backend default_backend() noexcept { return detect(); }

Backend active_backend() noexcept { return current().load(std::memory_order_relaxed); }

bool set_backend(Backend backend) noexcept {
  if (backend == Backend::Avx2) {
#if defined(PMFIX_HAVE_AVX2)
    if (!cpu_has_avx2()) return false;
#else
    return false;
#endif
  }
  current().store(backend, std::memory_order_relaxed);
  return true;
}

const KernelTable& table_for(Backend backend) noexcept {
#if defined(PMFIX_HAVE_AVX2)
  if (backend == Backend::Avx2) return detail::avx2_table;
#else
  (void)backend;
#endif
  return detail::scalar_table;
}

const KernelTable& active() noexcept { return table_for(active_backend()); }

const char* to_string(Backend backend) noexcept {
  return backend == Backend::Avx2 ? "avx2" : "scalar";
}

}  // namespace pmfix::kernels
