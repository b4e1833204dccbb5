#pragma once

// Partial metric spaces: finite tables and a few parametric continuous
// families, the axiom checks, and the derived maps b, c and e.

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace pmfix {

struct Interval {
  double lo;
  double hi;
  friend bool operator==(const Interval&, const Interval&) = default;
};

/// A point of some space: an index into a finite table, a real (MaxOnRPlus,
/// WeightedMetric), or a closed interval.
using Point = std::variant<std::size_t, double, Interval>;

class FiniteSpace {
 public:
  /// `table` is row-major with side labels.size(). Throws MalformedTable when
  /// the table is not square, empty, or has a negative or non-finite entry.
  /// The partial-metric axioms are not assumed; see check_axioms.
  FiniteSpace(std::vector<std::string> labels, std::vector<double> table);

  static FiniteSpace from_rows(std::vector<std::string> labels,
                               const std::vector<std::vector<double>>& rows);
  /// Labels default to p0, p1, ….
  static FiniteSpace from_rows(const std::vector<std::vector<double>>& rows);

  std::size_t size() const noexcept { return labels_.size(); }
  double d(std::size_t i, std::size_t j) const { return table_[i * size() + j]; }
  std::span<const double> row(std::size_t i) const {
    return {table_.data() + i * size(), size()};
  }
  const std::vector<double>& table() const noexcept { return table_; }
  const std::vector<std::string>& labels() const noexcept { return labels_; }
  const std::string& label(std::size_t i) const { return labels_.at(i); }

  /// Throws UnknownPoint.
  std::size_t index_of(const std::string& label) const;

 private:
  std::vector<std::string> labels_;
  std::vector<double> table_;
};

enum class Family { MaxOnRPlus, Intervals, WeightedMetric };

const char* to_string(Family family) noexcept;

/// Evaluation-only parametric space. Every family here is complete for its
/// induced metric, so (X, e) completeness holds by construction.
class ContinuousSpace {
 public:
  /// d(x, y) = max(x, y) on [0, ∞).
  static ContinuousSpace max_on_rplus(std::optional<Interval> region = std::nullopt);
  /// d([a,b],[c,d]) = max(b, d) − min(a, c).
  static ContinuousSpace intervals(std::optional<Interval> region = std::nullopt);
  /// d(x, y) = |x − y| + max(w(x), w(y)), w piecewise linear through
  /// (knots[i], weights[i]) and constant outside; no knots means w ≡ 0.
  static ContinuousSpace weighted(std::vector<double> knots, std::vector<double> weights,
                                  std::optional<Interval> region = std::nullopt);

  Family family() const noexcept { return family_; }
  /// Declared bounded region for samplers and multi-start runs.
  const std::optional<Interval>& region() const noexcept { return region_; }
  const std::vector<double>& knots() const noexcept { return knots_; }
  const std::vector<double>& weights() const noexcept { return weights_; }

  double weight(double x) const;
  double d(const Point& x, const Point& y) const;
  /// Throws UnknownPoint when the point does not belong to this family.
  void validate(const Point& p) const;

 private:
  ContinuousSpace(Family family, std::optional<Interval> region)
      : family_(family), region_(region) {}

  Family family_;
  std::optional<Interval> region_;
  std::vector<double> knots_;
  std::vector<double> weights_;
};

class Space {
 public:
  Space(FiniteSpace s) : impl_(std::move(s)) {}          // NOLINT(google-explicit-constructor)
  Space(ContinuousSpace s) : impl_(std::move(s)) {}      // NOLINT(google-explicit-constructor)

  bool is_finite() const noexcept { return std::holds_alternative<FiniteSpace>(impl_); }
  const FiniteSpace& finite() const { return std::get<FiniteSpace>(impl_); }
  const ContinuousSpace& continuous() const { return std::get<ContinuousSpace>(impl_); }

  /// Throws UnknownPoint for points outside the space.
  double d(const Point& x, const Point& y) const;
  double b(const Point& x, const Point& y) const;
  double c(const Point& x, const Point& y) const;
  double e(const Point& x, const Point& y) const;
  void validate(const Point& p) const;

  /// Label for finite points, decimal text otherwise.
  std::string describe(const Point& p) const;

 private:
  std::variant<FiniteSpace, ContinuousSpace> impl_;
};

enum class Derived { B, C, E };

const char* to_string(Derived which) noexcept;

/// b(x,y) = (d(x,x)+d(y,y))/2, c(x,y) = max(d(x,x), d(y,y)),
/// e(x,y) = 2(d(x,y) − b(x,y)).
double derive(const Space& space, Derived which, const Point& x, const Point& y);
/// Row-major table of b, c or e over all pairs of a finite space.
std::vector<double> derive_table(const FiniteSpace& space, Derived which);

/// One exhaustively checked property. `margin` is the worst signed slack over
/// all tuples (negative means violated, except for weak sufficiency where it
/// is the smallest distance from equality and must exceed tol). `witness`
/// holds the tuple attaining it; unused slots repeat the last index.
struct PropertyCheck {
  std::string name;
  bool pass = true;
  double margin = 0.0;
  std::array<std::size_t, 3> witness{0, 0, 0};
  std::size_t arity = 2;
};

struct AxiomReport {
  PropertyCheck symmetry;              // d(x,y) = d(y,x)
  PropertyCheck reflexive_triangular;  // d(x,z) ≤ d(x,y) + d(y,z) − d(y,y)
  PropertyCheck matthews;              // c(x,y) ≤ d(x,y)
  PropertyCheck weak_sufficiency;      // d(x,y)=d(x,x)=d(y,y) ⇒ x = y
  bool all_pass() const noexcept;
  std::array<const PropertyCheck*, 4> checks() const noexcept;
};

inline constexpr double kDefaultTol = 1e-9;

AxiomReport check_axioms(const FiniteSpace& space, double tol = kDefaultTol);

struct MetricReport {
  PropertyCheck symmetry;     // e(x,y) = e(y,x)
  PropertyCheck identity;     // e(x,x) = 0 and e(x,y) > tol for x ≠ y
  PropertyCheck triangle;     // e(x,z) ≤ e(x,y) + e(y,z)
  PropertyCheck self_bound;   // |d(x,x) − d(y,y)| ≤ e(x,y)
  bool all_pass() const noexcept;
  std::array<const PropertyCheck*, 4> checks() const noexcept;
};

/// Throws InvalidSpace when the axioms fail (the metric claim has no
/// hypothesis to stand on).
MetricReport check_e_is_metric(const FiniteSpace& space, double tol = kDefaultTol);

struct GeneratorParams {
  double w_max = 2.0;   // weights uniform on [0, w_max]
  double extent = 1.0;  // base points uniform on [0, extent]²
};

/// d(i,j) = |p_i − p_j|₂ + max(w_i, w_j) for random planar points p and
/// weights w. Always a partial metric; a pure function of its arguments.
FiniteSpace generate_random_space(std::size_t n, std::uint64_t seed,
                                  const GeneratorParams& params = {});

/// y ∈ X_d(x, ε), i.e. d(x,y) < d(x,x) + ε. Throws NonPositiveRadius.
bool sphere_contains(const Space& space, const Point& center, double radius, const Point& y);

}  // namespace pmfix
