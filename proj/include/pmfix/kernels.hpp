#pragma once

// Data-parallel inner loops used by the axiom scans and the gauge samplers.
//
// Every kernel has a scalar reference implementation and, on x86-64, an AVX2
// variant. The variant is picked once at startup from the CPU feature bits and
// can be overridden for testing. Both variants perform the same IEEE
// operations in the same order per element, so results are bit-identical;
// tests/test_kernels.cpp holds them to that.

#include <cstddef>
#include <span>

namespace pmfix::kernels {

enum class Backend { Scalar, Avx2 };

/// Smallest value and the first index attaining it.
struct ArgMin {
  double value;
  std::size_t index;
};

/// Closed-form gap families ψ(t) = t − φ(t) with a vectorised evaluation.
enum class GapFamily {
  Linear,    // (1 − α)·t
  Rational,  // t² / (1 + t)
};

struct KernelTable {
  /// min over k of (c + plus[k]) − minus[k]; n ≥ 1.
  ArgMin (*min_shifted_difference)(double c, const double* plus, const double* minus,
                                   std::size_t n);
  /// min over k of gap(start + k·step) for k in [0, count); count ≥ 1.
  double (*min_gap_arithmetic)(GapFamily family, double param, double start, double step,
                               std::size_t count);
  /// min over k of gap(t[k]); n ≥ 1.
  double (*min_gap_samples)(GapFamily family, double param, const double* t, std::size_t n);
};

bool cpu_has_avx2() noexcept;

/// The backend chosen at startup (AVX2 when the CPU and build support it).
Backend default_backend() noexcept;
Backend active_backend() noexcept;

/// Switch backends; returns false (and leaves the backend unchanged) when the
/// requested one is unavailable on this machine or build.
bool set_backend(Backend backend) noexcept;

const KernelTable& table_for(Backend backend) noexcept;
const KernelTable& active() noexcept;

const char* to_string(Backend backend) noexcept;

// Convenience wrappers over the active table.

inline ArgMin min_shifted_difference(double c, std::span<const double> plus,
                                     std::span<const double> minus) {
  return active().min_shifted_difference(c, plus.data(), minus.data(), plus.size());
}

inline double min_gap_arithmetic(GapFamily family, double param, double start, double step,
                                 std::size_t count) {
  return active().min_gap_arithmetic(family, param, start, step, count);
}

inline double min_gap_samples(GapFamily family, double param, std::span<const double> t) {
  return active().min_gap_samples(family, param, t.data(), t.size());
}

namespace detail {
extern const KernelTable scalar_table;
#if defined(PMFIX_HAVE_AVX2)
extern const KernelTable avx2_table;
#endif
}  // namespace detail

}  // namespace pmfix::kernels
