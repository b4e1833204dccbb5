#include "pmfix/kernels.hpp"

#if defined(PMFIX_HAVE_AVX2)

#include <immintrin.h>

namespace pmfix::kernels {
namespace {

#define PMFIX_AVX2 __attribute__((target("avx2")))

PMFIX_AVX2 inline __m256d gap4(GapFamily family, __m256d one_minus, __m256d t) {
  if (family == GapFamily::Linear) return _mm256_mul_pd(one_minus, t);
  const __m256d one = _mm256_set1_pd(1.0);
  return _mm256_div_pd(_mm256_mul_pd(t, t), _mm256_add_pd(one, t));
}

inline double gap1(GapFamily family, double param, double t) {
  if (family == GapFamily::Linear) return (1.0 - param) * t;
  return (t * t) / (1.0 + t);
}

PMFIX_AVX2 inline double hmin(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d m = _mm_min_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_min_sd(m, _mm_unpackhi_pd(m, m)));
}

PMFIX_AVX2 ArgMin avx2_min_shifted_difference(double c, const double* plus,
                                              const double* minus, std::size_t n) {
  if (n < 4) return detail::scalar_table.min_shifted_difference(c, plus, minus, n);

  const __m256d cv = _mm256_set1_pd(c);
  const __m256d four = _mm256_set1_pd(4.0);
  __m256d idx = _mm256_set_pd(3.0, 2.0, 1.0, 0.0);
  __m256d best = _mm256_sub_pd(_mm256_add_pd(cv, _mm256_loadu_pd(plus)), _mm256_loadu_pd(minus));
  __m256d best_idx = idx;

  std::size_t k = 4;
  for (; k + 4 <= n; k += 4) {
    idx = _mm256_add_pd(idx, four);
    const __m256d v =
        _mm256_sub_pd(_mm256_add_pd(cv, _mm256_loadu_pd(plus + k)), _mm256_loadu_pd(minus + k));
    const __m256d lt = _mm256_cmp_pd(v, best, _CMP_LT_OQ);
    best = _mm256_blendv_pd(best, v, lt);
    best_idx = _mm256_blendv_pd(best_idx, idx, lt);
  }

  alignas(32) double vals[4];
  alignas(32) double inds[4];
  _mm256_store_pd(vals, best);
  _mm256_store_pd(inds, best_idx);
  ArgMin out{vals[0], static_cast<std::size_t>(inds[0])};
  for (int lane = 1; lane < 4; ++lane) {
    const auto li = static_cast<std::size_t>(inds[lane]);
    if (vals[lane] < out.value || (vals[lane] == out.value && li < out.index)) {
      out = {vals[lane], li};
    }
  }
  for (; k < n; ++k) {
    const double v = (c + plus[k]) - minus[k];
    if (v < out.value) out = {v, k};
  }
  return out;
}

PMFIX_AVX2 double avx2_min_gap_arithmetic(GapFamily family, double param, double start,
                                          double step, std::size_t count) {
  if (count < 4) {
    return detail::scalar_table.min_gap_arithmetic(family, param, start, step, count);
  }
  const __m256d one_minus = _mm256_set1_pd(1.0 - param);
  const __m256d sv = _mm256_set1_pd(start);
  const __m256d stepv = _mm256_set1_pd(step);
  const __m256d four = _mm256_set1_pd(4.0);
  __m256d kv = _mm256_set_pd(3.0, 2.0, 1.0, 0.0);
  __m256d best = gap4(family, one_minus, _mm256_add_pd(sv, _mm256_mul_pd(kv, stepv)));

  std::size_t k = 4;
  for (; k + 4 <= count; k += 4) {
    kv = _mm256_add_pd(kv, four);
    const __m256d t = _mm256_add_pd(sv, _mm256_mul_pd(kv, stepv));
    best = _mm256_min_pd(best, gap4(family, one_minus, t));
  }
  double out = hmin(best);
  for (; k < count; ++k) {
    const double g = gap1(family, param, start + static_cast<double>(k) * step);
    if (g < out) out = g;
  }
  return out;
}

PMFIX_AVX2 double avx2_min_gap_samples(GapFamily family, double param, const double* t,
                                       std::size_t n) {
  if (n < 4) return detail::scalar_table.min_gap_samples(family, param, t, n);
  const __m256d one_minus = _mm256_set1_pd(1.0 - param);
  __m256d best = gap4(family, one_minus, _mm256_loadu_pd(t));
  std::size_t k = 4;
  for (; k + 4 <= n; k += 4) {
    best = _mm256_min_pd(best, gap4(family, one_minus, _mm256_loadu_pd(t + k)));
  }
  double out = hmin(best);
  for (; k < n; ++k) {
    const double g = gap1(family, param, t[k]);
    if (g < out) out = g;
  }
  return out;
}

#undef PMFIX_AVX2

}  // namespace

namespace detail {
const KernelTable avx2_table{
    &avx2_min_shifted_difference,
    &avx2_min_gap_arithmetic,
    &avx2_min_gap_samples,
};
}  // namespace detail

}  // namespace pmfix::kernels

#endif  // PMFIX_HAVE_AVX2
