#include "pmfix/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "format.hpp"
#include "pmfix/error.hpp"

namespace pmfix {

const char* to_string(StopReason r) noexcept {
  return r == StopReason::Converged ? "converged" : "budget";
}

const char* to_string(HypothesisState s) noexcept {
  switch (s) {
    case HypothesisState::Verified: return "verified";
    case HypothesisState::Sampled: return "sampled";
    case HypothesisState::Assumed: return "assumed";
    case HypothesisState::Failed: return "failed";
  }
  return "?";
}

const char* to_string(CertificateKind k) noexcept {
  switch (k) {
    case CertificateKind::DFixedPoint: return "d_fixed_point";
    case CertificateKind::TrueFixedPoint: return "true_fixed_point";
    case CertificateKind::Theorem2Unique: return "theorem2_unique";
  }
  return "?";
}

const char* to_string(SolveStatus s) noexcept {
  switch (s) {
    case SolveStatus::Certified: return "certified";
    case SolveStatus::HypothesisFailed: return "hypothesis_failed";
    case SolveStatus::BudgetExhausted: return "budget_exhausted";
    case SolveStatus::ConclusionViolated: return "conclusion_violated";
    case SolveStatus::UniquenessViolated: return "uniqueness_violated";
  }
  return "?";
}

namespace {

// Index of the first term in the trailing window.
std::size_t window_start(std::size_t size, std::size_t window) {
  if (size == 0) throw Error(ErrorKind::EmptyPrefix, "sequence prefix is empty");
  if (window == 0) throw Error(ErrorKind::InvalidArgument, "window must be at least 1");
  return size - std::min(size, window);
}

}  // namespace

std::vector<DeltaEntry> delta_window(const Space& space, std::span<const Point> xs,
                                     std::size_t window) {
  const std::size_t s = window_start(xs.size(), window);
  std::vector<DeltaEntry> out;
  for (std::size_t m = s; m < xs.size(); ++m) {
    for (std::size_t n = m; n < xs.size(); ++n) out.push_back({m, n, space.d(xs[m], xs[n])});
  }
  return out;
}

OrbitTrace iterate(const Space& space, const SelfMap& T, const Point& x0,
                   const OrbitOptions& options) {
  if (options.max_iter == 0) throw Error(ErrorKind::InvalidArgument, "max_iter must be at least 1");
  T.check_compatible(space);
  space.validate(x0);

  OrbitTrace tr;
  tr.points.push_back(x0);
  tr.alpha.push_back(space.d(x0, x0));
  for (std::size_t step = 0; step < options.max_iter; ++step) {
    const Point& x = tr.points.back();
    Point next = T.apply(space, x);
    tr.rho.push_back(space.d(x, next));
    tr.e_residual = space.e(x, next);
    tr.alpha.push_back(space.d(next, next));
    tr.points.push_back(std::move(next));
    if (tr.e_residual <= options.stop_tol) {
      tr.stop_reason = StopReason::Converged;
      break;
    }
  }
  tr.delta = delta_window(space, tr.points, options.window);
  const std::size_t s = window_start(tr.rho.size(), options.window);
  tr.gamma_estimate = *std::min_element(tr.rho.begin() + static_cast<std::ptrdiff_t>(s), tr.rho.end());
  return tr;
}

// ---------------------------------------------------------------------------

DConvergence diagnose_d_convergence(const Space& space, std::span<const Point> xs,
                                    const Point& x, double tol, std::size_t window) {
  const std::size_t s = window_start(xs.size(), window);
  DConvergence r;
  r.window = xs.size() - s;
  const double dxx = space.d(x, x);
  for (std::size_t n = s; n < xs.size(); ++n) {
    r.worst = std::max(r.worst, std::fabs(space.d(xs[n], x) - dxx));
  }
  r.verdict = r.worst <= tol;
  return r;
}

EConvergence diagnose_e_convergence(const Space& space, std::span<const Point> xs,
                                    const Point& x, double tol, std::size_t window) {
  const std::size_t s = window_start(xs.size(), window);
  EConvergence r;
  r.window = xs.size() - s;
  const double dxx = space.d(x, x);
  for (std::size_t n = s; n < xs.size(); ++n) {
    r.max_e = std::max(r.max_e, space.e(xs[n], x));
    r.max_dev_x = std::max(r.max_dev_x, std::fabs(space.d(xs[n], x) - dxx));
  }
  for (const DeltaEntry& de : delta_window(space, xs, window)) {
    r.max_dev_delta = std::max(r.max_dev_delta, std::fabs(de.value - dxx));
  }
  r.verdict = r.max_e <= tol;
  r.double_limit = r.max_dev_x <= tol && r.max_dev_delta <= 2.0 * tol;
  r.agree = r.verdict == r.double_limit;
  r.ambiguous = !r.verdict && r.max_e <= 4.0 * tol;
  return r;
}

ECauchy diagnose_e_cauchy(const Space& space, std::span<const Point> xs, double tol,
                          std::size_t window) {
  const std::size_t s = window_start(xs.size(), window);
  ECauchy r;
  r.window = xs.size() - s;
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  double sum = 0.0;
  std::size_t count = 0;
  for (const DeltaEntry& de : delta_window(space, xs, window)) {
    lo = std::min(lo, de.value);
    hi = std::max(hi, de.value);
    sum += de.value;
    ++count;
    if (de.m != de.n) r.max_e = std::max(r.max_e, space.e(xs[de.m], xs[de.n]));
  }
  r.spread = hi - lo;
  r.gamma = sum / static_cast<double>(count);
  r.verdict = r.spread <= tol;
  r.e_side = r.max_e <= 2.0 * tol;
  r.agree = r.verdict == r.e_side;
  r.ambiguous = !r.verdict && r.spread <= 3.0 * tol;
  return r;
}

SemiCauchy diagnose_semi_cauchy(const Space& space, std::span<const Point> xs, double tol,
                                std::size_t window) {
  window_start(xs.size(), window);
  if (xs.size() < 2) {
    throw Error(ErrorKind::EmptyPrefix, "semi-Cauchy diagnosis needs at least two terms");
  }
  const std::size_t size = xs.size();
  std::vector<double> alpha(size);
  std::vector<double> rho(size - 1);
  for (std::size_t i = 0; i < size; ++i) alpha[i] = space.d(xs[i], xs[i]);
  for (std::size_t i = 0; i + 1 < size; ++i) rho[i] = space.d(xs[i], xs[i + 1]);

  SemiCauchy r;
  const std::size_t sa = window_start(alpha.size(), window);
  const std::size_t sr = window_start(rho.size(), window);
  r.window = alpha.size() - sa;
  const double amin = *std::min_element(alpha.begin() + static_cast<std::ptrdiff_t>(sa), alpha.end());
  const double rmin = *std::min_element(rho.begin() + static_cast<std::ptrdiff_t>(sr), rho.end());
  r.gamma = std::min(amin, rmin);
  for (std::size_t i = sa; i < alpha.size(); ++i) r.alpha_dev = std::max(r.alpha_dev, alpha[i] - r.gamma);
  for (std::size_t i = sr; i < rho.size(); ++i) r.rho_dev = std::max(r.rho_dev, rho[i] - r.gamma);

  // Smallest k with both traces non-increasing (within tol) from k on.
  std::size_t k = size - 1;
  while (k > 0) {
    const std::size_t i = k - 1;
    const bool a_ok = alpha[i + 1] <= alpha[i] + tol;
    const bool r_ok = i + 1 >= rho.size() || rho[i + 1] <= rho[i] + tol;
    if (!a_ok || !r_ok) break;
    --k;
  }
  r.monotone_from = k;
  r.verdict = r.alpha_dev <= tol && r.rho_dev <= tol && r.monotone_from <= sa;
  return r;
}

RankReport extract_violation_ranks(const Space& space, std::span<const Point> xs, double gamma,
                                   double eps, std::size_t k, const RankOptions& options) {
  if (xs.empty()) throw Error(ErrorKind::EmptyPrefix, "sequence prefix is empty");
  if (!(eps > 0.0)) throw Error(ErrorKind::InvalidArgument, "eps must be positive");
  const std::size_t size = xs.size();
  const double thr = gamma + eps;
  auto d = [&](std::size_t m, std::size_t n) { return space.d(xs[m], xs[n]); };

  RankReport r;

  // j(ε): from here to the end, α_i < γ+ε and ρ_i < γ+ε.
  if (size >= 2) {
    std::size_t j = size - 1;
    while (j > k) {
      const std::size_t i = j - 1;
      if (!(d(i, i) < thr && d(i, i + 1) < thr)) break;
      --j;
    }
    const bool tail_ok = d(size - 1, size - 1) < thr && d(size - 2, size - 1) < thr;
    if (tail_ok && j >= k) r.j_eps = j;
  }

  std::size_t prev_n = k;
  for (std::size_t j = k; j < size; ++j) {
    bool hit = false;
    std::size_t n = std::max(prev_n, j);
    std::size_t m = j;
    for (; n < size && !hit; ++n) {
      for (m = j; m <= n; ++m) {
        if (d(m, n) >= thr) {
          hit = true;
          break;
        }
      }
      if (hit) break;
    }
    if (!hit) break;
    r.pairs.push_back({j, m, n, d(m, n)});
    prev_n = n;
  }

  if (r.j_eps) {
    r.found = std::any_of(r.pairs.begin(), r.pairs.end(),
                          [&](const RankPair& p) { return p.j >= *r.j_eps; });
    for (const RankPair& p : r.pairs) {
      if (p.j < *r.j_eps) continue;
      ++r.gap_checked;
      if (p.n < p.m + 2 || !(d(p.m, p.n - 1) < thr)) r.gap_rule = false;
    }
  } else {
    r.found = !r.pairs.empty();
  }

  if (!r.pairs.empty()) {
    const auto count = static_cast<std::size_t>(
        std::ceil(options.tail_share * static_cast<double>(r.pairs.size())));
    const std::size_t start = r.pairs.size() - std::clamp<std::size_t>(count, 1, r.pairs.size());
    r.tail_min = std::numeric_limits<double>::infinity();
    r.tail_max = -r.tail_min;
    for (std::size_t i = start; i < r.pairs.size(); ++i) {
      const RankPair& p = r.pairs[i];
      ++r.tail_checked;
      r.tail_min = std::min(r.tail_min, p.value);
      r.tail_max = std::max(r.tail_max, p.value);
      if (p.value < thr || p.value > thr + options.band) r.descent = false;
      for (std::size_t dp = 0; dp <= 1; ++dp) {
        for (std::size_t dq = 0; dq <= 1; ++dq) {
          if (p.m + dp >= size || p.n + dq >= size) continue;
          if (std::fabs(d(p.m + dp, p.n + dq) - thr) > options.band) r.shifted = false;
        }
      }
    }
  }
  return r;
}

// ---------------------------------------------------------------------------

FixedStructure enumerate_fixed_structure(const FiniteSpace& space, const SelfMap& T,
                                         double tol) {
  T.check_compatible(Space(space));
  const auto& tgt = T.targets();
  FixedStructure fs;
  for (std::size_t z = 0; z < space.size(); ++z) {
    if (std::fabs(space.d(z, tgt[z]) - space.d(z, z)) <= tol) fs.d_fixed.push_back(z);
    if (tgt[z] == z) fs.fixed.push_back(z);
  }
  if (!fs.d_fixed.empty()) {
    double theta = std::numeric_limits<double>::infinity();
    for (const std::size_t z : fs.d_fixed) theta = std::min(theta, space.d(z, z));
    fs.theta = theta;
    for (const std::size_t z : fs.d_fixed) {
      if (std::fabs(space.d(z, z) - theta) <= tol) fs.x_set.push_back(z);
    }
  }
  fs.x_subset_fixed = std::all_of(fs.x_set.begin(), fs.x_set.end(),
                                  [&](std::size_t z) { return tgt[z] == z; });
  return fs;
}

std::vector<ThetaApprox> theta_approximation(const FiniteSpace& space, const SelfMap& T,
                                             const FixedStructure& fs,
                                             std::span<const double> eps_grid) {
  std::vector<ThetaApprox> out;
  for (const double eps : eps_grid) {
    ThetaApprox a{eps, false, std::nullopt};
    if (fs.theta) {
      for (const std::size_t z : fs.d_fixed) {
        const double dzz = space.d(z, z);
        const std::size_t tz = T.targets()[z];
        if (dzz < *fs.theta + eps && dzz - space.d(tz, tz) < 2.0 * eps) {
          a.pass = true;
          a.witness = z;
          break;
        }
      }
    }
    out.push_back(a);
  }
  return out;
}

ConclusionReport check_theorem1_conclusions(const Space& space, const OrbitTrace& trace,
                                            double tol) {
  (void)space;
  ConclusionReport c;
  const auto& rho = trace.rho;
  const auto& alpha = trace.alpha;
  auto fail = [&](bool& flag, const char* what) {
    if (flag && c.first_failure.empty()) c.first_failure = what;
    flag = false;
  };
  if (rho.empty()) return c;
  c.gamma = rho.back();

  for (std::size_t n = 0; n + 1 < rho.size(); ++n) {
    if (rho[n + 1] > rho[n] + tol) fail(c.rho_descending, "rho is not non-increasing");
  }
  for (std::size_t n = 0; n < rho.size(); ++n) {
    if (alpha[n] > rho[n] + tol) fail(c.alpha_below_rho, "alpha exceeds rho");
  }

  c.settle_index = 0;
  while (c.settle_index < rho.size() && rho[c.settle_index] > c.gamma + tol) ++c.settle_index;

  // α ↘ γ: from some rank on α_n ≥ γ, and α_n → γ. Monotonicity is not part
  // of the claim.
  for (std::size_t n = c.settle_index; n < alpha.size(); ++n) {
    if (alpha[n] < c.gamma - tol) fail(c.alpha_to_gamma, "alpha drops below gamma after settling");
  }
  if (std::fabs(alpha.back() - c.gamma) > tol) fail(c.alpha_to_gamma, "alpha does not reach gamma");

  for (const DeltaEntry& de : trace.delta) {
    if (de.m < c.settle_index) continue;
    if (std::fabs(de.value - c.gamma) > tol) fail(c.delta_to_gamma, "delta window does not settle on gamma");
  }
  return c;
}

// ---------------------------------------------------------------------------

namespace {

bool is_exact_fixed(const Space& space, const SelfMap& T, const Point& x) {
  return space.is_finite() && T.apply(space, x) == x;
}

Certificate make_certificate(const Space& space, const SelfMap& T, const Point& x,
                             double tol) {
  Certificate cert;
  cert.point = x;
  const Point tx = T.apply(space, x);
  cert.self_distance = space.d(x, x);
  cert.displacement = space.d(x, tx);
  cert.e_residual = space.e(x, tx);
  const bool exact = is_exact_fixed(space, T, x);
  cert.kind = (exact || (!space.is_finite() && cert.e_residual <= tol))
                  ? CertificateKind::TrueFixedPoint
                  : CertificateKind::DFixedPoint;
  return cert;
}

HypothesisEntry completeness_entry(const Space& space) {
  if (space.is_finite()) {
    return {"completeness", HypothesisState::Verified, "finite space"};
  }
  return {"completeness", HypothesisState::Assumed,
          std::string("built-in family ") + to_string(space.continuous().family())};
}

std::string margin_detail(const ContractionReport& r) {
  return "worst margin " + format_real(r.worst_margin) + " over " +
         std::to_string(r.checked) + " pairs";
}

HypothesisEntry contractive_entry(const Space& space, const SelfMap& T, const Gauge& gauge,
                                  GMap g, const SolveOptions& options) {
  ContractionOptions co;
  co.tol = options.tol;
  co.sampler = options.sampler;
  co.require_valid_space = false;
  const ContractionReport r = verify_contractive(space, T, gauge, g, co);
  const std::string name = std::string("contractive_") + to_string(g);
  if (!r.pass) return {name, HypothesisState::Failed, margin_detail(r)};
  return {name, r.sampled ? HypothesisState::Sampled : HypothesisState::Verified, margin_detail(r)};
}

HypothesisEntry class_entry(const std::string& name, const ClassVerdict& v) {
  return {name, v.pass ? HypothesisState::Verified : HypothesisState::Failed,
          "grid-certified over " + std::to_string(v.checked) + " points"};
}

std::optional<HypothesisEntry> axioms_entry(const Space& space, double tol) {
  if (!space.is_finite()) return std::nullopt;
  const AxiomReport ax = check_axioms(space.finite(), tol);
  if (ax.all_pass()) return HypothesisEntry{"axioms", HypothesisState::Verified, "exhaustive"};
  for (const PropertyCheck* c : ax.checks()) {
    if (!c->pass) return HypothesisEntry{"axioms", HypothesisState::Failed, c->name + " fails"};
  }
  return std::nullopt;
}

}  // namespace

SolveResult solve_theorem1(const Space& space, const SelfMap& T, const Gauge& gauge,
                           const Point& x0, const SolveOptions& options) {
  T.check_compatible(space);
  space.validate(x0);
  SolveResult res;

  if (options.check_hypotheses) {
    if (auto ax = axioms_entry(space, options.tol)) res.hypotheses.push_back(*ax);
    res.hypotheses.push_back(completeness_entry(space));
    res.hypotheses.push_back(contractive_entry(space, T, gauge, GMap::C, options));
    const GaugeClassification cls = classify(gauge, options.grid);
    res.hypotheses.push_back(class_entry("right_limit_normal", cls.right_limit_normal));
  }

  res.traces.push_back(iterate(space, T, x0, options.orbit));
  const OrbitTrace& tr = res.traces.back();
  res.conclusions.push_back(check_theorem1_conclusions(space, tr, options.tol));
  const ConclusionReport& c = res.conclusions.back();

  if (tr.stop_reason == StopReason::Budget) {
    res.status = SolveStatus::BudgetExhausted;
    res.detail = "no convergence within " + std::to_string(tr.steps()) + " steps";
    return res;
  }
  if (!c.all_pass()) {
    res.status = SolveStatus::ConclusionViolated;
    res.detail = c.first_failure;
    return res;
  }
  Certificate cert = make_certificate(space, T, tr.last(), options.tol);
  if (std::fabs(cert.displacement - cert.self_distance) > options.tol) {
    res.status = SolveStatus::ConclusionViolated;
    res.detail = "orbit limit is not d-fixed";
    return res;
  }
  cert.hypotheses = res.hypotheses;
  if (space.is_finite()) cert.structure = enumerate_fixed_structure(space.finite(), T, options.tol);
  res.certificate = std::move(cert);
  return res;
}

std::vector<Point> spread_starts(const Space& space, const std::optional<Point>& x0,
                                 const std::optional<Interval>& region_override,
                                 std::size_t count) {
  std::vector<Point> out;
  if (x0) out.push_back(*x0);
  if (space.is_finite()) {
    for (std::size_t i = 0; i < space.finite().size() && out.size() < count; ++i) {
      if (!x0 || Point(i) != *x0) out.emplace_back(i);
    }
    return out;
  }
  const std::optional<Interval> region =
      region_override ? region_override : space.continuous().region();
  if (!region) {
    throw Error(ErrorKind::SamplerExhausted, "continuous space has no bounded region for starts");
  }
  const std::size_t spread = count - out.size();
  const bool intervals = space.continuous().family() == Family::Intervals;
  for (std::size_t i = 0; i < spread; ++i) {
    const double u = spread > 1 ? static_cast<double>(i) / static_cast<double>(spread - 1) : 1.0;
    const double v = region->lo + (region->hi - region->lo) * u;
    const Point p = intervals ? Point(Interval{region->lo, v}) : Point(v);
    if (!x0 || p != *x0) out.push_back(p);
  }
  return out;
}

SolveResult solve_theorem2(const Space& space, const SelfMap& T, const Gauge& gauge,
                           const std::optional<Point>& x0, const SolveOptions& options) {
  T.check_compatible(space);
  if (x0) space.validate(*x0);
  SolveResult res;

  auto fail_hypothesis = [&](const HypothesisEntry& h) {
    res.status = SolveStatus::HypothesisFailed;
    res.failed_hypothesis = h.name;
    res.detail = h.detail;
  };
  auto record = [&](HypothesisEntry h) {
    res.hypotheses.push_back(h);
    if (h.state == HypothesisState::Failed) {
      fail_hypothesis(h);
      return false;
    }
    return true;
  };

  if (auto ax = axioms_entry(space, options.tol)) {
    if (!record(*ax)) return res;
  }
  record(completeness_entry(space));
  if (!record(contractive_entry(space, T, gauge, GMap::B, options))) return res;
  const GaugeClassification cls = classify(gauge, options.grid);
  if (!record(class_entry("limit_normal", cls.limit_normal))) return res;
  if (!record(class_entry("semi_coercive", cls.psi_semi_coercive))) return res;

  std::vector<Point> starts;
  if (space.is_finite()) {
    for (std::size_t i = 0; i < space.finite().size(); ++i) starts.emplace_back(i);
  } else {
    starts = spread_starts(space, x0, options.sampler.region);
  }

  for (const Point& s : starts) {
    res.traces.push_back(iterate(space, T, s, options.orbit));
    const OrbitTrace& tr = res.traces.back();
    res.conclusions.push_back(check_theorem1_conclusions(space, tr, options.tol));
    if (tr.stop_reason == StopReason::Budget) {
      res.status = SolveStatus::BudgetExhausted;
      res.detail = "orbit from " + space.describe(s) + " did not converge";
      return res;
    }
    if (!res.conclusions.back().all_pass()) {
      res.status = SolveStatus::ConclusionViolated;
      res.detail = "orbit from " + space.describe(s) + ": " + res.conclusions.back().first_failure;
      return res;
    }
  }

  Certificate cert;
  if (space.is_finite()) {
    const FixedStructure fs = enumerate_fixed_structure(space.finite(), T, options.tol);
    if (fs.fixed.size() > 1) {
      res.status = SolveStatus::UniquenessViolated;
      res.detail = "Fix(T) has " + std::to_string(fs.fixed.size()) + " points";
      return res;
    }
    if (fs.fixed.empty() || fs.x_set.empty()) {
      res.status = SolveStatus::ConclusionViolated;
      res.detail = fs.fixed.empty() ? "Fix(T) is empty" : "X(T;d) is empty";
      return res;
    }
    if (fs.x_set != fs.fixed) {
      res.status = SolveStatus::ConclusionViolated;
      res.detail = "X(T;d) differs from Fix(T)";
      return res;
    }
    const Point z = fs.fixed.front();
    for (const OrbitTrace& tr : res.traces) {
      if (tr.last() != z) {
        res.status = SolveStatus::ConclusionViolated;
        res.detail = "orbit from " + space.describe(tr.points.front()) + " ends at " +
                     space.describe(tr.last());
        return res;
      }
    }
    cert = make_certificate(space, T, z, options.tol);
    cert.structure = fs;
  } else {
    for (const OrbitTrace& tr : res.traces) {
      const Point tx = T.apply(space, tr.last());
      if (space.e(tr.last(), tx) > options.tol) {
        res.status = SolveStatus::ConclusionViolated;
        res.detail = "limit " + space.describe(tr.last()) + " is not a true fixed point";
        return res;
      }
    }
    for (std::size_t i = 0; i < res.traces.size(); ++i) {
      for (std::size_t j = i + 1; j < res.traces.size(); ++j) {
        if (space.e(res.traces[i].last(), res.traces[j].last()) > options.tol) {
          res.status = SolveStatus::UniquenessViolated;
          res.detail = "limits " + space.describe(res.traces[i].last()) + " and " +
                       space.describe(res.traces[j].last()) + " are e-apart";
          return res;
        }
      }
    }
    cert = make_certificate(space, T, res.traces.front().last(), options.tol);
  }
  cert.kind = CertificateKind::Theorem2Unique;
  cert.hypotheses = res.hypotheses;
  res.certificate = std::move(cert);
  return res;
}

}  // namespace pmfix
