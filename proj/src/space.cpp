#include "pmfix/space.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "format.hpp"
#include "pmfix/error.hpp"
#include "pmfix/kernels.hpp"
#include "pmfix/random.hpp"

namespace pmfix {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

[[noreturn]] void unknown_point(const std::string& why) {
  throw Error(ErrorKind::UnknownPoint, why);
}

}  // namespace

// ---------------------------------------------------------------------------
// FiniteSpace

FiniteSpace::FiniteSpace(std::vector<std::string> labels, std::vector<double> table)
    : labels_(std::move(labels)), table_(std::move(table)) {
  const std::size_t n = labels_.size();
  if (n == 0) throw Error(ErrorKind::MalformedTable, "distance table must have at least one point");
  if (table_.size() != n * n) {
    throw Error(ErrorKind::MalformedTable,
                "distance table has " + std::to_string(table_.size()) + " entries, expected " +
                    std::to_string(n * n));
  }
  for (std::size_t k = 0; k < table_.size(); ++k) {
    const double v = table_[k];
    if (!std::isfinite(v) || v < 0.0) {
      throw Error(ErrorKind::MalformedTable, "entry (" + std::to_string(k / n) + "," +
                                                 std::to_string(k % n) +
                                                 ") is negative or non-finite");
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (labels_[i] == labels_[j]) {
        throw Error(ErrorKind::MalformedTable, "duplicate label '" + labels_[i] + "'");
      }
    }
  }
}

FiniteSpace FiniteSpace::from_rows(std::vector<std::string> labels,
                                   const std::vector<std::vector<double>>& rows) {
  const std::size_t n = labels.size();
  if (rows.size() != n) {
    throw Error(ErrorKind::MalformedTable, "table has " + std::to_string(rows.size()) +
                                               " rows for " + std::to_string(n) + " labels");
  }
  std::vector<double> flat;
  flat.reserve(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    if (rows[i].size() != n) {
      throw Error(ErrorKind::MalformedTable, "row " + std::to_string(i) + " has " +
                                                 std::to_string(rows[i].size()) +
                                                 " entries, expected " + std::to_string(n));
    }
    flat.insert(flat.end(), rows[i].begin(), rows[i].end());
  }
  return FiniteSpace(std::move(labels), std::move(flat));
}

FiniteSpace FiniteSpace::from_rows(const std::vector<std::vector<double>>& rows) {
  std::vector<std::string> labels;
  labels.reserve(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) labels.push_back("p" + std::to_string(i));
  return from_rows(std::move(labels), rows);
}

std::size_t FiniteSpace::index_of(const std::string& label) const {
  const auto it = std::find(labels_.begin(), labels_.end(), label);
  if (it == labels_.end()) unknown_point("unknown point label '" + label + "'");
  return static_cast<std::size_t>(it - labels_.begin());
}

// ---------------------------------------------------------------------------
// ContinuousSpace

const char* to_string(Family family) noexcept {
  switch (family) {
    case Family::MaxOnRPlus: return "max_on_rplus";
    case Family::Intervals: return "intervals";
    case Family::WeightedMetric: return "weighted";
  }
  return "?";
}

namespace {
void check_region(const std::optional<Interval>& region) {
  if (region && !(std::isfinite(region->lo) && std::isfinite(region->hi) &&
                  region->lo <= region->hi)) {
    throw Error(ErrorKind::InvalidArgument, "region must be a finite [lo, hi] with lo <= hi");
  }
}
}  // namespace

ContinuousSpace ContinuousSpace::max_on_rplus(std::optional<Interval> region) {
  check_region(region);
  if (region && region->lo < 0.0) {
    throw Error(ErrorKind::InvalidArgument, "max_on_rplus region must lie in [0, inf)");
  }
  return ContinuousSpace(Family::MaxOnRPlus, region);
}

ContinuousSpace ContinuousSpace::intervals(std::optional<Interval> region) {
  check_region(region);
  return ContinuousSpace(Family::Intervals, region);
}

ContinuousSpace ContinuousSpace::weighted(std::vector<double> knots, std::vector<double> weights,
                                          std::optional<Interval> region) {
  check_region(region);
  if (knots.size() != weights.size()) {
    throw Error(ErrorKind::InvalidArgument, "weighted space needs one weight per knot");
  }
  for (std::size_t i = 0; i < knots.size(); ++i) {
    if (!std::isfinite(knots[i]) || !std::isfinite(weights[i]) || weights[i] < 0.0) {
      throw Error(ErrorKind::InvalidArgument, "weights must be finite and non-negative");
    }
    if (i > 0 && !(knots[i] > knots[i - 1])) {
      throw Error(ErrorKind::InvalidArgument, "knots must be strictly increasing");
    }
  }
  ContinuousSpace s(Family::WeightedMetric, region);
  s.knots_ = std::move(knots);
  s.weights_ = std::move(weights);
  return s;
}

double ContinuousSpace::weight(double x) const {
  if (knots_.empty()) return 0.0;
  if (x <= knots_.front()) return weights_.front();
  if (x >= knots_.back()) return weights_.back();
  const auto hi = static_cast<std::size_t>(
      std::upper_bound(knots_.begin(), knots_.end(), x) - knots_.begin());
  const std::size_t lo = hi - 1;
  const double u = (x - knots_[lo]) / (knots_[hi] - knots_[lo]);
  return weights_[lo] + u * (weights_[hi] - weights_[lo]);
}

void ContinuousSpace::validate(const Point& p) const {
  switch (family_) {
    case Family::MaxOnRPlus: {
      const double* x = std::get_if<double>(&p);
      if (x == nullptr || !std::isfinite(*x) || *x < 0.0) {
        unknown_point("max_on_rplus points are finite non-negative reals");
      }
      return;
    }
    case Family::WeightedMetric: {
      const double* x = std::get_if<double>(&p);
      if (x == nullptr || !std::isfinite(*x)) unknown_point("weighted points are finite reals");
      return;
    }
    case Family::Intervals: {
      const Interval* x = std::get_if<Interval>(&p);
      if (x == nullptr || !std::isfinite(x->lo) || !std::isfinite(x->hi) || x->lo > x->hi) {
        unknown_point("interval points are finite [a, b] with a <= b");
      }
      return;
    }
  }
}

double ContinuousSpace::d(const Point& x, const Point& y) const {
  validate(x);
  validate(y);
  switch (family_) {
    case Family::MaxOnRPlus:
      return std::max(std::get<double>(x), std::get<double>(y));
    case Family::Intervals: {
      const Interval& a = std::get<Interval>(x);
      const Interval& b = std::get<Interval>(y);
      return std::max(a.hi, b.hi) - std::min(a.lo, b.lo);
    }
    case Family::WeightedMetric: {
      const double a = std::get<double>(x);
      const double b = std::get<double>(y);
      return std::fabs(a - b) + std::max(weight(a), weight(b));
    }
  }
  return 0.0;
}

// ---------------------------------------------------------------------------
// Space

void Space::validate(const Point& p) const {
  if (const auto* f = std::get_if<FiniteSpace>(&impl_)) {
    const std::size_t* i = std::get_if<std::size_t>(&p);
    if (i == nullptr || *i >= f->size()) unknown_point("point is not an index of this finite space");
    return;
  }
  std::get<ContinuousSpace>(impl_).validate(p);
}

double Space::d(const Point& x, const Point& y) const {
  if (const auto* f = std::get_if<FiniteSpace>(&impl_)) {
    validate(x);
    validate(y);
    return f->d(std::get<std::size_t>(x), std::get<std::size_t>(y));
  }
  return std::get<ContinuousSpace>(impl_).d(x, y);
}

double Space::b(const Point& x, const Point& y) const { return 0.5 * (d(x, x) + d(y, y)); }

double Space::c(const Point& x, const Point& y) const { return std::max(d(x, x), d(y, y)); }

double Space::e(const Point& x, const Point& y) const {
  return 2.0 * (d(x, y) - b(x, y));
}

std::string Space::describe(const Point& p) const {
  if (const auto* f = std::get_if<FiniteSpace>(&impl_)) {
    validate(p);
    return f->label(std::get<std::size_t>(p));
  }
  if (const auto* iv = std::get_if<Interval>(&p)) {
    return "[" + format_real(iv->lo) + ", " + format_real(iv->hi) + "]";
  }
  if (const auto* x = std::get_if<double>(&p)) return format_real(*x);
  return "?";
}

// ---------------------------------------------------------------------------
// Derived maps

const char* to_string(Derived which) noexcept {
  switch (which) {
    case Derived::B: return "b";
    case Derived::C: return "c";
    case Derived::E: return "e";
  }
  return "?";
}

double derive(const Space& space, Derived which, const Point& x, const Point& y) {
  switch (which) {
    case Derived::B: return space.b(x, y);
    case Derived::C: return space.c(x, y);
    case Derived::E: return space.e(x, y);
  }
  return 0.0;
}

std::vector<double> derive_table(const FiniteSpace& space, Derived which) {
  const std::size_t n = space.size();
  std::vector<double> out(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const double dii = space.d(i, i);
      const double djj = space.d(j, j);
      const double b = 0.5 * (dii + djj);
      switch (which) {
        case Derived::B: out[i * n + j] = b; break;
        case Derived::C: out[i * n + j] = std::max(dii, djj); break;
        case Derived::E: out[i * n + j] = 2.0 * (space.d(i, j) - b); break;
      }
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Axiom checks

namespace {

PropertyCheck make_check(const char* name, std::size_t arity) {
  PropertyCheck c;
  c.name = name;
  c.arity = arity;
  c.margin = kInf;
  return c;
}

void consider(PropertyCheck& check, double margin, std::size_t i, std::size_t j, std::size_t k) {
  if (margin < check.margin) {
    check.margin = margin;
    check.witness = {i, j, k};
  }
}

/// min over (x, y, z) of t(x,y) + t(y,z) − shift(y) − t(x,z), via the
/// vectorised row kernel. With shift = diagonal this is (b02); with shift = 0
/// on the e-table it is the triangle inequality.
void triangle_scan(PropertyCheck& check, std::span<const double> t, std::size_t n,
                   bool subtract_diagonal) {
  for (std::size_t x = 0; x < n; ++x) {
    const std::span<const double> row_x = t.subspan(x * n, n);
    for (std::size_t y = 0; y < n; ++y) {
      const std::span<const double> row_y = t.subspan(y * n, n);
      const double c = t[x * n + y] - (subtract_diagonal ? t[y * n + y] : 0.0);
      const kernels::ArgMin m = kernels::min_shifted_difference(c, row_y, row_x);
      consider(check, m.value, x, y, m.index);
    }
  }
}

}  // namespace

bool AxiomReport::all_pass() const noexcept {
  return symmetry.pass && reflexive_triangular.pass && matthews.pass && weak_sufficiency.pass;
}

std::array<const PropertyCheck*, 4> AxiomReport::checks() const noexcept {
  return {&symmetry, &reflexive_triangular, &matthews, &weak_sufficiency};
}

AxiomReport check_axioms(const FiniteSpace& space, double tol) {
  if (!(tol >= 0.0)) throw Error(ErrorKind::InvalidArgument, "tolerance must be non-negative");
  const std::size_t n = space.size();
  AxiomReport r{make_check("symmetry", 2), make_check("reflexive_triangular", 3),
                make_check("matthews", 2), make_check("weak_sufficiency", 2)};

  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      consider(r.symmetry, -std::fabs(space.d(i, j) - space.d(j, i)), i, j, j);
      consider(r.matthews, space.d(i, j) - std::max(space.d(i, i), space.d(j, j)), i, j, j);
      if (i != j) {
        const double dev = std::max(std::fabs(space.d(i, j) - space.d(i, i)),
                                    std::fabs(space.d(i, j) - space.d(j, j)));
        consider(r.weak_sufficiency, dev, i, j, j);
      }
    }
  }
  triangle_scan(r.reflexive_triangular, space.table(), n, true);

  r.symmetry.pass = r.symmetry.margin >= -tol;
  r.reflexive_triangular.pass = r.reflexive_triangular.margin >= -tol;
  r.matthews.pass = r.matthews.margin >= -tol;
  r.weak_sufficiency.pass = r.weak_sufficiency.margin > tol;
  return r;
}

bool MetricReport::all_pass() const noexcept {
  return symmetry.pass && identity.pass && triangle.pass && self_bound.pass;
}

std::array<const PropertyCheck*, 4> MetricReport::checks() const noexcept {
  return {&symmetry, &identity, &triangle, &self_bound};
}

MetricReport check_e_is_metric(const FiniteSpace& space, double tol) {
  const AxiomReport axioms = check_axioms(space, tol);
  if (!axioms.all_pass()) {
    throw Error(ErrorKind::InvalidSpace,
                "space fails the partial metric axioms; the induced metric is not guaranteed");
  }
  const std::size_t n = space.size();
  const std::vector<double> e = derive_table(space, Derived::E);
  MetricReport r{make_check("e_symmetry", 2), make_check("e_identity", 2),
                 make_check("e_triangle", 3), make_check("self_distance_bound", 2)};

  bool diagonal_zero = true;
  for (std::size_t i = 0; i < n; ++i) {
    if (std::fabs(e[i * n + i]) > tol) diagonal_zero = false;
    for (std::size_t j = 0; j < n; ++j) {
      consider(r.symmetry, -std::fabs(e[i * n + j] - e[j * n + i]), i, j, j);
      if (i != j) consider(r.identity, e[i * n + j], i, j, j);
      consider(r.self_bound, e[i * n + j] - std::fabs(space.d(i, i) - space.d(j, j)), i, j, j);
    }
  }
  triangle_scan(r.triangle, e, n, false);

  r.symmetry.pass = r.symmetry.margin >= -tol;
  r.identity.pass = diagonal_zero && r.identity.margin > tol;
  r.triangle.pass = r.triangle.margin >= -tol;
  r.self_bound.pass = r.self_bound.margin >= -tol;
  return r;
}

// ---------------------------------------------------------------------------

FiniteSpace generate_random_space(std::size_t n, std::uint64_t seed,
                                  const GeneratorParams& params) {
  if (n == 0) throw Error(ErrorKind::InvalidArgument, "point count must be at least 1");
  if (!(params.w_max >= 0.0) || !std::isfinite(params.w_max) || !(params.extent >= 0.0) ||
      !std::isfinite(params.extent)) {
    throw Error(ErrorKind::InvalidArgument, "w_max and extent must be finite and non-negative");
  }
  Rng rng(seed);
  std::vector<double> px(n), py(n), w(n);
  for (std::size_t i = 0; i < n; ++i) {
    px[i] = rng.uniform(0.0, params.extent);
    py[i] = rng.uniform(0.0, params.extent);
    w[i] = rng.uniform(0.0, params.w_max);
  }
  std::vector<double> table(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const double m = i == j ? 0.0 : std::hypot(px[i] - px[j], py[i] - py[j]);
      table[i * n + j] = m + std::max(w[i], w[j]);
    }
  }
  std::vector<std::string> labels;
  labels.reserve(n);
  for (std::size_t i = 0; i < n; ++i) labels.push_back("p" + std::to_string(i));
  return FiniteSpace(std::move(labels), std::move(table));
}

bool sphere_contains(const Space& space, const Point& center, double radius, const Point& y) {
  if (!(radius > 0.0)) throw Error(ErrorKind::NonPositiveRadius, "sphere radius must be positive");
  return space.d(center, y) < space.d(center, center) + radius;
}

// ---------------------------------------------------------------------------

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::MalformedTable: return "MalformedTable";
    case ErrorKind::UnknownPoint: return "UnknownPoint";
    case ErrorKind::InvalidSpace: return "InvalidSpace";
    case ErrorKind::NonPositiveRadius: return "NonPositiveRadius";
    case ErrorKind::NegativeArgument: return "NegativeArgument";
    case ErrorKind::ExpressionDomainError: return "ExpressionDomainError";
    case ErrorKind::NonPositivePoint: return "NonPositivePoint";
    case ErrorKind::SyntaxError: return "SyntaxError";
    case ErrorKind::EmptyPrefix: return "EmptyPrefix";
    case ErrorKind::SamplerExhausted: return "SamplerExhausted";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::ParseError: return "ParseError";
  }
  return "Error";
}

}  // namespace pmfix
