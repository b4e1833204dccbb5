#pragma once

// Gauge functions φ on R₊ and their numerical classification.
//
// All limit estimators work on the gap ψ(t) = t − φ(t), evaluated in extended
// precision with a closed form per family. Using
//   limsup_{t→s+} φ(t) = s − liminf_{t→s+} ψ(t)
// keeps strict inequalities like "limsup φ < s" decidable where φ(t) and t
// agree to every bit of a double (t·(1 − e^{−t}) for t beyond ~40).

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pmfix/expression.hpp"
#include "pmfix/kernels.hpp"

namespace pmfix {

enum class GaugeFamily { Linear, Rational, ExpSaturating, UserExpression };

/// What the family definition guarantees, independent of any grid.
struct AnalyticFlags {
  bool normal;
  bool right_limit_normal;
  bool limit_normal;
  bool psi_semi_coercive;
};

class Gauge {
 public:
  /// φ(t) = αt, α ≥ 0.
  static Gauge linear(double alpha);
  /// φ(t) = t / (1 + t).
  static Gauge rational();
  /// φ(t) = t·(1 − e^{−t}).
  static Gauge exp_saturating();
  /// φ given by an expression in t.
  static Gauge user(Expression expr);
  /// `linear:0.5`, `rational`, `expsat`, or `expr:<expression in t>`.
  static Gauge from_spec(const std::string& spec);

  GaugeFamily family() const noexcept { return family_; }
  double parameter() const noexcept { return alpha_; }
  std::string spec() const;

  /// φ(t). Throws NegativeArgument for t < 0, ExpressionDomainError when a
  /// user expression is undefined at t.
  double eval(double t) const;
  double operator()(double t) const { return eval(t); }

  /// ψ(t) = t − φ(t) in extended precision.
  long double gap(long double t) const;

  /// Families with a vectorised gap kernel.
  std::optional<kernels::GapFamily> kernel_family() const noexcept;

  /// Closed-form guarantees; empty for user expressions.
  std::optional<AnalyticFlags> analytic() const noexcept;

 private:
  Gauge(GaugeFamily family, double alpha) : family_(family), alpha_(alpha) {}

  GaugeFamily family_;
  double alpha_ = 0.0;
  std::optional<Expression> expr_;
};

/// Sampling grid for limit estimates and classification. Verdicts are only
/// as strong as this grid ("grid-certified").
struct GridSpec {
  std::size_t points = 512;  // log-spaced s in [s_min, s_max]
  double s_min = 1e-6;
  double s_max = 1e3;
  double eps0 = 1.0;           // first window; the sampler uses min(eps0, s)
  std::size_t halvings = 20;   // windows eps0, eps0/2, …, eps0/2^halvings
  std::size_t samples = 64;    // per window side
  double t_far = 1e6;          // tail horizon for Ψ
  double tail_alpha_min = 1.0;
  std::size_t tail_alphas = 64;
  std::size_t tail_samples = 4096;
  double coercive_threshold = 1e-6;

  /// Throws InvalidArgument on an unusable grid.
  void validate() const;
  std::vector<double> s_grid() const;
  std::vector<double> tail_alpha_grid() const;
  std::vector<double> tail_sample_grid() const;
};

struct LimitEstimate {
  double value = 0.0;        // estimated limsup of φ
  long double gap = 0.0L;    // s − value, kept in extended precision
  std::vector<double> epsilons;
  std::vector<double> trace;  // running inf of the window suprema, non-increasing
  /// φ(s) ≤ value ≤ s, flagged false when a non-normal gauge breaks it.
  bool sandwich = true;
};

/// Φ[s+](ε) = sup φ over [s, s+ε), inf over the ε grid. Throws NonPositivePoint.
LimitEstimate limsup_right(const Gauge& g, double s, const GridSpec& grid = {});
/// Φ[s](ε) = sup φ over (s−ε, s+ε) ∩ [0, ∞), inf over the ε grid.
LimitEstimate limsup_sym(const Gauge& g, double s, const GridSpec& grid = {});

/// Ψ(α) = inf{ψ(t); t ≥ α} over the tail samples.
long double psi_inf(const Gauge& g, double alpha, const GridSpec& grid = {});

struct ClassVerdict {
  std::string name;
  bool pass = true;
  /// Grid point (s, or α for the Ψ claim) where the margin is worst.
  double witness = 0.0;
  /// Worst margin; for the three normality classes the smallest gap, for
  /// semi-coercivity Ψ at the largest α.
  long double margin = 0.0L;
  std::size_t checked = 0;
  std::optional<bool> analytic;
};

struct GaugeClassification {
  std::string gauge;
  ClassVerdict normal;
  ClassVerdict right_limit_normal;
  ClassVerdict limit_normal;
  ClassVerdict psi_semi_coercive;
  std::vector<double> alphas;
  std::vector<long double> psi_trace;  // Ψ(α), non-decreasing in α
  long double psi_sup = 0.0L;
  bool grid_certified = true;

  std::vector<const ClassVerdict*> verdicts() const;
};

GaugeClassification classify(const Gauge& g, const GridSpec& grid = {});

/// Trailing-window max (limsup) / min (liminf) of a sequence prefix.
/// Throws EmptyPrefix; window must be in [1, ts.size()].
double limsup_seq(std::span<const double> ts, std::size_t window);
double liminf_seq(std::span<const double> ts, std::size_t window);

/// Composer F: R₊³ → R₊, increasing in each variable.
using Composer = std::function<double(double, double, double)>;

/// F(a, b, c) = a + max(b, c).
double default_composer(double a, double b, double c);

struct ComposeBound {
  double lhs;  // limsup_n F(a_n, b_n, c_n)
  double rhs;  // F(limsup a, limsup b, limsup c)
  bool pass;
};

ComposeBound compose_bound_check(const Composer& F, std::span<const double> a,
                                 std::span<const double> b, std::span<const double> c,
                                 std::size_t window, double tol = 1e-12);

}  // namespace pmfix
