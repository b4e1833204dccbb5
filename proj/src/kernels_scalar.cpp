#include "pmfix/kernels.hpp"

namespace pmfix::kernels {
namespace {

inline double gap(GapFamily family, double param, double t) {
  switch (family) {
    case GapFamily::Linear:
      return (1.0 - param) * t;
    case GapFamily::Rational:
      return (t * t) / (1.0 + t);
  }
  return t;
}

ArgMin scalar_min_shifted_difference(double c, const double* plus, const double* minus,
                                     std::size_t n) {
  ArgMin best{(c + plus[0]) - minus[0], 0};
  for (std::size_t k = 1; k < n; ++k) {
    const double v = (c + plus[k]) - minus[k];
    if (v < best.value) best = {v, k};
  }
  return best;
}

double scalar_min_gap_arithmetic(GapFamily family, double param, double start, double step,
                                 std::size_t count) {
  double best = gap(family, param, start + 0.0 * step);
  for (std::size_t k = 1; k < count; ++k) {
    const double t = start + static_cast<double>(k) * step;
    const double g = gap(family, param, t);
    if (g < best) best = g;
  }
  return best;
}

double scalar_min_gap_samples(GapFamily family, double param, const double* t, std::size_t n) {
  double best = gap(family, param, t[0]);
  for (std::size_t k = 1; k < n; ++k) {
    const double g = gap(family, param, t[k]);
    if (g < best) best = g;
  }
  return best;
}

}  // namespace

namespace detail {
const KernelTable scalar_table{
    &scalar_min_shifted_difference,
    &scalar_min_gap_arithmetic,
    &scalar_min_gap_samples,
};
}  // namespace detail

}  // namespace pmfix::kernels
