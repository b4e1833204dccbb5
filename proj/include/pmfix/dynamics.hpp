#pragma once

// Picard orbits, sequence diagnostics (d- and e-convergence, e-Cauchy,
// e-semi-Cauchy, violation ranks), and the two fixed-point solvers.

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pmfix/contraction.hpp"
#include "pmfix/gauge.hpp"
#include "pmfix/space.hpp"

namespace pmfix {

enum class StopReason { Converged, Budget };

const char* to_string(StopReason r) noexcept;

struct OrbitOptions {
  std::size_t max_iter = 1'000'000;
  double stop_tol = 1e-12;  // on e(x_n, x_{n+1})
  std::size_t window = 64;
};

/// d(x_m, x_n) for m ≤ n inside the trailing window.
struct DeltaEntry {
  std::size_t m;
  std::size_t n;
  double value;
};

struct OrbitTrace {
  std::vector<Point> points;  // x_0 … x_N
  std::vector<double> rho;    // ρ_n = d(x_n, x_{n+1}), size N
  std::vector<double> alpha;  // α_n = d(x_n, x_n), size N+1
  std::vector<DeltaEntry> delta;
  double gamma_estimate = 0.0;
  double e_residual = 0.0;  // e(x_{N-1}, x_N)
  StopReason stop_reason = StopReason::Budget;

  std::size_t steps() const noexcept { return rho.size(); }
  const Point& last() const { return points.back(); }
};

/// x_{n+1} = T(x_n) until e(x_n, x_{n+1}) ≤ stop_tol or max_iter steps.
/// Throws InvalidArgument when max_iter is 0.
OrbitTrace iterate(const Space& space, const SelfMap& T, const Point& x0,
                   const OrbitOptions& options = {});

/// d(x_m, x_n) over all m ≤ n in the last `window` terms.
std::vector<DeltaEntry> delta_window(const Space& space, std::span<const Point> xs,
                                     std::size_t window);

// ---------------------------------------------------------------------------
// Diagnostics on a sequence prefix. Windows longer than the prefix are
// clipped; an empty prefix throws EmptyPrefix, window 0 InvalidArgument.

struct DConvergence {
  bool verdict = false;
  double worst = 0.0;  // max |d(x_n,x) − d(x,x)| on the window
  std::size_t window = 0;
};

DConvergence diagnose_d_convergence(const Space& space, std::span<const Point> xs,
                                    const Point& x, double tol, std::size_t window);

/// Direct side: max e(x_n, x) ≤ tol. Double-limit side: max |d(x_n,x) − d(x,x)|
/// ≤ tol and max |d(x_m,x_n) − d(x,x)| ≤ 2·tol. The direct side implies the
/// other; the converse holds once max e ≤ 4·tol is excluded, which is the
/// ambiguous band.
struct EConvergence {
  bool verdict = false;  // direct side
  bool double_limit = false;
  bool agree = false;
  bool ambiguous = false;
  double max_e = 0.0;
  double max_dev_x = 0.0;
  double max_dev_delta = 0.0;
  std::size_t window = 0;
};

EConvergence diagnose_e_convergence(const Space& space, std::span<const Point> xs,
                                    const Point& x, double tol, std::size_t window);

/// d side: spread of d(x_m,x_n) on the window ≤ tol. e side: max e(x_m,x_n) ≤
/// 2·tol. The d side implies the e side; the converse fails only when the
/// spread lies in (tol, 3·tol].
struct ECauchy {
  bool verdict = false;  // d side
  bool e_side = false;
  bool agree = false;
  bool ambiguous = false;
  double spread = 0.0;
  double max_e = 0.0;
  double gamma = 0.0;  // window mean of d(x_m,x_n)
  std::size_t window = 0;
};

ECauchy diagnose_e_cauchy(const Space& space, std::span<const Point> xs, double tol,
                          std::size_t window);

/// α_n and ρ_n settle on a common γ (the window minimum) and are
/// non-increasing from `monotone_from` on. Needs at least two terms.
struct SemiCauchy {
  bool verdict = false;
  double gamma = 0.0;
  double alpha_dev = 0.0;  // max α_n − γ on the window
  double rho_dev = 0.0;    // max ρ_n − γ on the window
  std::size_t monotone_from = 0;
  std::size_t window = 0;
};

SemiCauchy diagnose_semi_cauchy(const Space& space, std::span<const Point> xs, double tol,
                                std::size_t window);

struct RankPair {
  std::size_t j;
  std::size_t m;
  std::size_t n;
  double value;  // d(x_m, x_n)
};

struct RankOptions {
  double band = 0.05;       // limit checks: values within [γ+ε, γ+ε+band]
  double tail_share = 0.25; // limit checks run on this trailing share of pairs
};

/// For each j ≥ k: n(j) is the least n with some m in [j, n] and
/// d(x_m, x_n) ≥ γ + ε; m(j) is the least such m. Extraction stops at the
/// first j whose pair would lie past the prefix.
struct RankReport {
  bool found = false;  // false: no violation at this ε (prefix looks e-Cauchy)
  std::vector<RankPair> pairs;
  /// First index from which γ ≤ α_i ≤ ρ_i < γ + ε holds up to the prefix end
  /// (within the prefix; absent when it never settles).
  std::optional<std::size_t> j_eps;
  bool gap_rule = true;     // n − m ≥ 2 and d(x_m, x_{n−1}) < γ+ε for j ≥ j(ε)
  std::size_t gap_checked = 0;
  bool descent = true;      // tail values in [γ+ε, γ+ε+band]
  bool shifted = true;      // tail d(x_{m+p}, x_{n+q}) within band of γ+ε
  std::size_t tail_checked = 0;
  double tail_min = 0.0;
  double tail_max = 0.0;
};

RankReport extract_violation_ranks(const Space& space, std::span<const Point> xs, double gamma,
                                   double eps, std::size_t k, const RankOptions& options = {});

// ---------------------------------------------------------------------------
// Solvers

enum class HypothesisState { Verified, Sampled, Assumed, Failed };

const char* to_string(HypothesisState s) noexcept;

struct HypothesisEntry {
  std::string name;
  HypothesisState state;
  std::string detail;
};

enum class CertificateKind { DFixedPoint, TrueFixedPoint, Theorem2Unique };

const char* to_string(CertificateKind k) noexcept;

struct FixedStructure {
  std::vector<std::size_t> d_fixed;  // Fix(T;d)
  std::optional<double> theta;       // absent when Fix(T;d) is empty
  std::vector<std::size_t> x_set;    // X(T;d)
  std::vector<std::size_t> fixed;    // Fix(T)
  bool x_subset_fixed = true;
};

/// Exhaustive scan. Membership in Fix(T;d) and X(T;d) uses tol; Fix(T) is
/// exact index equality.
FixedStructure enumerate_fixed_structure(const FiniteSpace& space, const SelfMap& T,
                                         double tol = kDefaultTol);

struct ThetaApprox {
  double eps;
  bool pass;
  std::optional<std::size_t> witness;
};

/// For each ε: some z ∈ Fix(T;d) with d(z,z) < θ + ε and d(z,z) − d(Tz,Tz) < 2ε.
std::vector<ThetaApprox> theta_approximation(const FiniteSpace& space, const SelfMap& T,
                                             const FixedStructure& fs,
                                             std::span<const double> eps_grid);

struct Certificate {
  CertificateKind kind = CertificateKind::DFixedPoint;
  Point point = std::size_t{0};
  double self_distance = 0.0;  // d(x*, x*)
  double displacement = 0.0;   // d(x*, Tx*)
  double e_residual = 0.0;     // e(x*, Tx*)
  std::vector<HypothesisEntry> hypotheses;
  std::optional<FixedStructure> structure;  // finite spaces
};

/// Theorem-1 conclusions checked on a trace: ρ non-increasing, α_n ≤ ρ_n,
/// α_n ≥ γ from the settle index on with α_N = γ, and the trailing δ window
/// settled on γ. The settle index is the first n with ρ_n ≤ γ + tol.
struct ConclusionReport {
  bool rho_descending = true;
  bool alpha_below_rho = true;
  bool alpha_to_gamma = true;
  bool delta_to_gamma = true;
  double gamma = 0.0;
  std::size_t settle_index = 0;
  std::string first_failure;
  bool all_pass() const noexcept {
    return rho_descending && alpha_below_rho && alpha_to_gamma && delta_to_gamma;
  }
};

ConclusionReport check_theorem1_conclusions(const Space& space, const OrbitTrace& trace,
                                            double tol);

enum class SolveStatus {
  Certified,
  HypothesisFailed,
  BudgetExhausted,
  ConclusionViolated,
  UniquenessViolated,
};

const char* to_string(SolveStatus s) noexcept;

struct SolveOptions {
  double tol = kDefaultTol;
  OrbitOptions orbit{};
  SamplerSpec sampler{};
  GridSpec grid{};
  /// Run the hypothesis checks (Theorem 1 records failures as warnings).
  bool check_hypotheses = true;
};

struct SolveResult {
  SolveStatus status = SolveStatus::Certified;
  std::optional<Certificate> certificate;
  std::vector<OrbitTrace> traces;
  std::vector<ConclusionReport> conclusions;
  std::vector<HypothesisEntry> hypotheses;
  std::string failed_hypothesis;
  std::string detail;
  bool ok() const noexcept { return status == SolveStatus::Certified; }
};

/// Hypothesis failures are recorded but do not stop the run.
SolveResult solve_theorem1(const Space& space, const SelfMap& T, const Gauge& gauge,
                           const Point& x0, const SolveOptions& options = {});

/// Hypotheses are checked in the order contractive_b, limit_normal,
/// semi_coercive; the first failure ends the run. Finite spaces are
/// enumerated and orbits run from every point; continuous spaces use eight
/// starts (x0 first when given) over the declared region.
SolveResult solve_theorem2(const Space& space, const SelfMap& T, const Gauge& gauge,
                           const std::optional<Point>& x0 = std::nullopt,
                           const SolveOptions& options = {});

/// Eight deterministic starts over the declared region.
std::vector<Point> spread_starts(const Space& space, const std::optional<Point>& x0,
                                 const std::optional<Interval>& region_override,
                                 std::size_t count = 8);

}  // namespace pmfix
