#include "pmfix/gauge.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "format.hpp"
#include "pmfix/error.hpp"

namespace pmfix {

namespace {

std::vector<double> log_spaced(double lo, double hi, std::size_t count) {
  std::vector<double> out(count);
  if (count == 1) {
    out[0] = lo;
    return out;
  }
  const double a = std::log(lo);
  const double b = std::log(hi);
  for (std::size_t i = 0; i < count; ++i) {
    out[i] = std::exp(a + (b - a) * static_cast<double>(i) / static_cast<double>(count - 1));
  }
  out.front() = lo;
  out.back() = hi;
  return out;
}

/// min over k < count of ψ(start + k·step).
long double window_min_gap(const Gauge& g, double start, double step, std::size_t count) {
  if (const auto fam = g.kernel_family()) {
    return kernels::min_gap_arithmetic(*fam, g.parameter(), start, step, count);
  }
  long double best = g.gap(start + 0.0 * step);
  for (std::size_t k = 1; k < count; ++k) {
    best = std::min(best, g.gap(start + static_cast<double>(k) * step));
  }
  return best;
}

LimitEstimate estimate(const Gauge& g, double s, const GridSpec& grid, bool symmetric) {
  grid.validate();
  if (!(s > 0.0) || !std::isfinite(s)) {
    throw Error(ErrorKind::NonPositivePoint, "limit point must be a positive real");
  }
  LimitEstimate out;
  double eps = std::min(grid.eps0, s);
  long double best_gap = -1.0L;
  for (std::size_t k = 0; k <= grid.halvings; ++k, eps *= 0.5) {
    const double h = eps / static_cast<double>(grid.samples);
    long double gap = window_min_gap(g, s, h, grid.samples);
    if (symmetric) {
      const auto reach = static_cast<std::size_t>(std::floor(s / h)) + 1;
      const std::size_t left = std::min(grid.samples, reach);
      gap = std::min(gap, window_min_gap(g, s, -h, left));
    }
    // Running inf of the window suprema ⇔ running sup of the window gaps.
    if (k == 0 || gap > best_gap) best_gap = gap;
    out.epsilons.push_back(eps);
    out.trace.push_back(static_cast<double>(static_cast<long double>(s) - best_gap));
  }
  out.gap = best_gap;
  out.value = static_cast<double>(static_cast<long double>(s) - best_gap);
  out.sandwich = best_gap >= 0.0L;
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------
// Gauge

Gauge Gauge::linear(double alpha) {
  if (!(alpha >= 0.0) || !std::isfinite(alpha)) {
    throw Error(ErrorKind::InvalidArgument, "linear gauge needs a finite alpha >= 0");
  }
  return Gauge(GaugeFamily::Linear, alpha);
}

Gauge Gauge::rational() { return Gauge(GaugeFamily::Rational, 0.0); }

Gauge Gauge::exp_saturating() { return Gauge(GaugeFamily::ExpSaturating, 0.0); }

Gauge Gauge::user(Expression expr) {
  if (expr.variable() != "t") {
    throw Error(ErrorKind::InvalidArgument, "gauge expressions use the variable t");
  }
  Gauge g(GaugeFamily::UserExpression, 0.0);
  g.expr_ = std::move(expr);
  return g;
}

Gauge Gauge::from_spec(const std::string& spec) {
  if (spec == "rational") return rational();
  if (spec == "expsat") return exp_saturating();
  if (spec.rfind("linear:", 0) == 0) {
    const std::string num = spec.substr(7);
    char* end = nullptr;
    const double alpha = std::strtod(num.c_str(), &end);
    if (num.empty() || end == nullptr || *end != '\0') {
      throw Error(ErrorKind::InvalidArgument, "bad linear gauge parameter '" + num + "'");
    }
    return linear(alpha);
  }
  if (spec.rfind("expr:", 0) == 0) return user(Expression::parse(spec.substr(5), "t"));
  throw Error(ErrorKind::InvalidArgument,
              "unknown gauge '" + spec + "' (expected linear:A, rational, expsat or expr:...)");
}

std::string Gauge::spec() const {
  switch (family_) {
    case GaugeFamily::Linear: return "linear:" + format_real(alpha_);
    case GaugeFamily::Rational: return "rational";
    case GaugeFamily::ExpSaturating: return "expsat";
    case GaugeFamily::UserExpression: return "expr:" + expr_->source();
  }
  return "?";
}

double Gauge::eval(double t) const {
  if (!(t >= 0.0)) throw Error(ErrorKind::NegativeArgument, "gauge argument must be >= 0");
  switch (family_) {
    case GaugeFamily::Linear: return alpha_ * t;
    case GaugeFamily::Rational: return t / (1.0 + t);
    case GaugeFamily::ExpSaturating: return t * -std::expm1(-t);
    case GaugeFamily::UserExpression: return static_cast<double>(expr_->evaluate(t));
  }
  return 0.0;
}

long double Gauge::gap(long double t) const {
  switch (family_) {
    case GaugeFamily::Linear: return (1.0L - alpha_) * t;
    case GaugeFamily::Rational: return t * t / (1.0L + t);
    case GaugeFamily::ExpSaturating: return t * std::exp(-t);
    case GaugeFamily::UserExpression: return t - expr_->evaluate(t);
  }
  return 0.0L;
}

std::optional<kernels::GapFamily> Gauge::kernel_family() const noexcept {
  if (family_ == GaugeFamily::Linear) return kernels::GapFamily::Linear;
  if (family_ == GaugeFamily::Rational) return kernels::GapFamily::Rational;
  return std::nullopt;
}

std::optional<AnalyticFlags> Gauge::analytic() const noexcept {
  switch (family_) {
    case GaugeFamily::Linear: {
      const bool below_one = alpha_ < 1.0;
      return AnalyticFlags{below_one, below_one, below_one, below_one};
    }
    case GaugeFamily::Rational: return AnalyticFlags{true, true, true, true};
    case GaugeFamily::ExpSaturating: return AnalyticFlags{true, true, true, false};
    case GaugeFamily::UserExpression: return std::nullopt;
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Grid

void GridSpec::validate() const {
  const bool ok = points >= 1 && s_min > 0.0 && s_max >= s_min && std::isfinite(s_max) &&
                  eps0 > 0.0 && samples >= 1 && tail_alpha_min > 0.0 &&
                  t_far > tail_alpha_min && std::isfinite(t_far) && tail_alphas >= 1 &&
                  tail_samples >= 2 && coercive_threshold >= 0.0;
  if (!ok) throw Error(ErrorKind::InvalidArgument, "invalid gauge sampling grid");
}

std::vector<double> GridSpec::s_grid() const { return log_spaced(s_min, s_max, points); }

std::vector<double> GridSpec::tail_alpha_grid() const {
  return log_spaced(tail_alpha_min, t_far, tail_alphas);
}

std::vector<double> GridSpec::tail_sample_grid() const {
  return log_spaced(tail_alpha_min, t_far, tail_samples);
}

// ---------------------------------------------------------------------------
// Estimators

LimitEstimate limsup_right(const Gauge& g, double s, const GridSpec& grid) {
  return estimate(g, s, grid, false);
}

LimitEstimate limsup_sym(const Gauge& g, double s, const GridSpec& grid) {
  return estimate(g, s, grid, true);
}

namespace {

long double psi_inf_on(const Gauge& g, double alpha, std::span<const double> samples) {
  long double best = g.gap(alpha);
  const auto first = std::lower_bound(samples.begin(), samples.end(), alpha);
  const auto tail = samples.subspan(static_cast<std::size_t>(first - samples.begin()));
  if (tail.empty()) return best;
  if (const auto fam = g.kernel_family()) {
    return std::min<long double>(best, kernels::min_gap_samples(*fam, g.parameter(), tail));
  }
  for (const double t : tail) best = std::min(best, g.gap(t));
  return best;
}

}  // namespace

long double psi_inf(const Gauge& g, double alpha, const GridSpec& grid) {
  grid.validate();
  if (!(alpha >= 0.0)) throw Error(ErrorKind::NegativeArgument, "alpha must be >= 0");
  const std::vector<double> samples = grid.tail_sample_grid();
  return psi_inf_on(g, alpha, samples);
}

std::vector<const ClassVerdict*> GaugeClassification::verdicts() const {
  return {&normal, &right_limit_normal, &limit_normal, &psi_semi_coercive};
}

GaugeClassification classify(const Gauge& g, const GridSpec& grid) {
  grid.validate();
  GaugeClassification out;
  out.gauge = g.spec();
  const auto flags = g.analytic();

  auto init = [](ClassVerdict& v, const char* name, std::optional<bool> analytic) {
    v.name = name;
    v.margin = std::numeric_limits<long double>::infinity();
    v.analytic = analytic;
  };
  init(out.normal, "normal", flags ? std::optional<bool>(flags->normal) : std::nullopt);
  init(out.right_limit_normal, "right_limit_normal",
       flags ? std::optional<bool>(flags->right_limit_normal) : std::nullopt);
  init(out.limit_normal, "limit_normal",
       flags ? std::optional<bool>(flags->limit_normal) : std::nullopt);
  init(out.psi_semi_coercive, "psi_semi_coercive",
       flags ? std::optional<bool>(flags->psi_semi_coercive) : std::nullopt);

  auto worst = [](ClassVerdict& v, double at, long double margin) {
    ++v.checked;
    if (margin < v.margin) {
      v.margin = margin;
      v.witness = at;
    }
  };

  bool non_negative = true;
  const bool zero_ok = g.eval(0.0) == 0.0;
  for (const double s : grid.s_grid()) {
    if (g.eval(s) < 0.0) non_negative = false;
    worst(out.normal, s, g.gap(s));
    worst(out.right_limit_normal, s, limsup_right(g, s, grid).gap);
    worst(out.limit_normal, s, limsup_sym(g, s, grid).gap);
  }
  out.normal.pass = zero_ok && non_negative && out.normal.margin > 0.0L;
  // (c04) presupposes normality.
  out.right_limit_normal.pass = out.normal.pass && out.right_limit_normal.margin > 0.0L;
  out.limit_normal.pass = out.normal.pass && out.limit_normal.margin > 0.0L;

  const std::vector<double> samples = grid.tail_sample_grid();
  out.alphas = grid.tail_alpha_grid();
  long double running = -std::numeric_limits<long double>::infinity();
  for (const double a : out.alphas) {
    running = std::max(running, psi_inf_on(g, a, samples));
    out.psi_trace.push_back(running);
  }
  out.psi_sup = out.psi_trace.back();
  out.psi_semi_coercive.checked = out.alphas.size();
  out.psi_semi_coercive.witness = out.alphas.back();
  out.psi_semi_coercive.margin = out.psi_trace.back();
  out.psi_semi_coercive.pass = out.psi_trace.back() > grid.coercive_threshold;
  return out;
}

// ---------------------------------------------------------------------------
// Sequence estimators

namespace {
std::span<const double> trailing(std::span<const double> ts, std::size_t window) {
  if (ts.empty()) throw Error(ErrorKind::EmptyPrefix, "sequence prefix is empty");
  if (window == 0 || window > ts.size()) {
    throw Error(ErrorKind::InvalidArgument, "window must be between 1 and the prefix length");
  }
  return ts.subspan(ts.size() - window);
}
}  // namespace

double limsup_seq(std::span<const double> ts, std::size_t window) {
  const auto tail = trailing(ts, window);
  return *std::max_element(tail.begin(), tail.end());
}

double liminf_seq(std::span<const double> ts, std::size_t window) {
  const auto tail = trailing(ts, window);
  return *std::min_element(tail.begin(), tail.end());
}

double default_composer(double a, double b, double c) { return a + std::max(b, c); }

ComposeBound compose_bound_check(const Composer& F, std::span<const double> a,
                                 std::span<const double> b, std::span<const double> c,
                                 std::size_t window, double tol) {
  if (a.empty() || b.empty() || c.empty()) {
    throw Error(ErrorKind::EmptyPrefix, "sequence prefix is empty");
  }
  if (a.size() != b.size() || a.size() != c.size()) {
    throw Error(ErrorKind::InvalidArgument, "composed sequences must have equal length");
  }
  std::vector<double> f(a.size());
  for (std::size_t n = 0; n < a.size(); ++n) f[n] = F(a[n], b[n], c[n]);
  ComposeBound out;
  out.lhs = limsup_seq(f, window);
  out.rhs = F(limsup_seq(a, window), limsup_seq(b, window), limsup_seq(c, window));
  out.pass = out.lhs <= out.rhs + tol;
  return out;
}

}  // namespace pmfix
