#include <doctest.h>

#include <cmath>
#include <vector>

#include "oracles.hpp"
#include "pmfix/dynamics.hpp"
#include "pmfix/error.hpp"
#include "pmfix/random.hpp"

using namespace pmfix;

namespace {

FiniteSpace table3() { return FiniteSpace::from_rows({{0, 2, 3}, {2, 1, 3}, {3, 3, 2}}); }

Space max_space(std::optional<Interval> region = std::nullopt) {
  return Space(ContinuousSpace::max_on_rplus(region));
}
Space standard() { return Space(ContinuousSpace::weighted({}, {})); }

std::vector<Point> one_plus_inv(std::size_t count) {
  std::vector<Point> xs;
  for (std::size_t n = 1; n <= count; ++n) xs.emplace_back(1.0 + 1.0 / static_cast<double>(n));
  return xs;
}

std::vector<Point> harmonic(std::size_t count) {
  std::vector<Point> xs;
  double h = 0.0;
  for (std::size_t n = 0; n < count; ++n) {
    if (n > 0) h += 1.0 / static_cast<double>(n);
    xs.emplace_back(h);
  }
  return xs;
}

ErrorKind kind_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  return ErrorKind::ParseError;
}

}  // namespace

TEST_CASE("halving orbit under max") {
  const OrbitTrace t = iterate(max_space(), SelfMap::halving(), 1.0);
  CHECK(t.stop_reason == StopReason::Converged);
  CHECK(t.steps() >= 38);
  CHECK(t.steps() <= 42);
  for (std::size_t n = 0; n < t.steps(); ++n) {
    CHECK(std::get<double>(t.points[n]) == std::ldexp(1.0, -static_cast<int>(n)));
    CHECK(t.rho[n] == std::ldexp(1.0, -static_cast<int>(n)));
    CHECK(t.alpha[n] == std::ldexp(1.0, -static_cast<int>(n)));
  }
  CHECK(t.e_residual <= 1e-12);
}

TEST_CASE("orbit from a fixed point and from a finite table") {
  const OrbitTrace f = iterate(max_space(), SelfMap::affine(1.0, 0.0), 0.7);
  CHECK(f.steps() == 1);
  CHECK(f.e_residual == 0.0);

  const OrbitTrace t = iterate(Space(table3()), SelfMap::table({0, 0, 0}), std::size_t{2});
  REQUIRE(t.steps() >= 2);
  CHECK(std::get<std::size_t>(t.points[1]) == 0);
  CHECK(t.rho[0] == 3.0);
  CHECK(t.rho[1] == 0.0);
  CHECK(t.alpha[0] == 2.0);
  CHECK(t.alpha[1] == 0.0);

  OrbitOptions bad;
  bad.max_iter = 0;
  CHECK(kind_of([&] { iterate(max_space(), SelfMap::halving(), 1.0, bad); }) == ErrorKind::InvalidArgument);
  OrbitOptions short_run;
  short_run.max_iter = 5;
  CHECK(iterate(max_space(), SelfMap::halving(), 1.0, short_run).stop_reason == StopReason::Budget);
}

TEST_CASE("d-convergence limits are not unique") {
  const auto xs = one_plus_inv(1000);
  const Space m = max_space();
  CHECK(diagnose_d_convergence(m, xs, 1.0, 1e-2, 64).verdict);
  CHECK(diagnose_d_convergence(m, xs, 2.0, 1e-9, 64).verdict);
  CHECK_FALSE(diagnose_d_convergence(m, xs, 0.5, 1e-2, 64).verdict);
}

TEST_CASE("e-convergence picks the right limit, both characterisations agree") {
  const auto xs = one_plus_inv(1000);
  const Space m = max_space();
  const EConvergence a = diagnose_e_convergence(m, xs, 1.0, 1e-2, 64);
  CHECK(a.verdict);
  CHECK(a.double_limit);
  CHECK(a.agree);
  const EConvergence b = diagnose_e_convergence(m, xs, 2.0, 1e-2, 64);
  CHECK_FALSE(b.verdict);
  CHECK_FALSE(b.double_limit);
  CHECK(b.agree);
  const std::vector<Point> c(20, Point(3.0));
  CHECK(diagnose_e_convergence(m, c, 3.0, 1e-12, 10).verdict);
}

TEST_CASE("e-Cauchy") {
  const OrbitTrace t = iterate(max_space(), SelfMap::halving(), 1.0);
  const ECauchy h = diagnose_e_cauchy(max_space(), t.points, 1e-6, 16);
  CHECK(h.verdict);
  CHECK(h.agree);
  CHECK(h.gamma <= 1e-6);

  const auto hs = harmonic(2000);
  const ECauchy r = diagnose_e_cauchy(standard(), hs, 1e-9, 100);
  CHECK_FALSE(r.verdict);
  CHECK(r.agree);
  CHECK(r.spread == doctest::Approx(std::get<double>(hs[1999]) - std::get<double>(hs[1900])));

  const std::vector<Point> c(10, Point(2.5));
  const ECauchy k = diagnose_e_cauchy(max_space(), c, 1e-12, 5);
  CHECK(k.verdict);
  CHECK(k.gamma == 2.5);
}

TEST_CASE("e-semi-Cauchy") {
  const SemiCauchy h = diagnose_semi_cauchy(standard(), harmonic(2000), 1e-2, 64);
  CHECK(h.verdict);
  CHECK(h.gamma == 0.0);
  const OrbitTrace t = iterate(max_space(), SelfMap::halving(), 1.0);
  CHECK(diagnose_semi_cauchy(max_space(), t.points, 1e-6, 16).verdict);
  std::vector<Point> alt;
  for (int i = 0; i < 40; ++i) alt.emplace_back(static_cast<double>(i % 2));
  CHECK_FALSE(diagnose_semi_cauchy(standard(), alt, 1e-9, 16).verdict);
  CHECK(kind_of([] { diagnose_semi_cauchy(standard(), std::vector<Point>{}, 1e-9, 4); }) == ErrorKind::EmptyPrefix);
  CHECK(kind_of([] { diagnose_e_cauchy(standard(), std::vector<Point>{Point(1.0)}, 1e-9, 0); }) ==
        ErrorKind::InvalidArgument);
}

TEST_CASE("violation ranks on the harmonic prefix match a brute-force scan") {
  const auto xs = harmonic(2000);
  const Space s = standard();
  auto dist = [&](std::size_t m, std::size_t n) { return s.d(xs[m], xs[n]); };
  for (const double eps : {0.1, 0.5}) {
    for (const std::size_t k : {std::size_t{0}, std::size_t{1}, std::size_t{7}}) {
      CAPTURE(eps);
      CAPTURE(k);
      const RankReport r = extract_violation_ranks(s, xs, 0.0, eps, k);
      const auto want = oracle::violation_ranks(xs.size(), dist, eps, k);
      REQUIRE(r.pairs.size() == want.size());
      for (std::size_t i = 0; i < want.size(); ++i) {
        CHECK(r.pairs[i].j == want[i].j);
        CHECK(r.pairs[i].m == want[i].m);
        CHECK(r.pairs[i].n == want[i].n);
      }
      CHECK(r.j_eps == oracle::settle_rank(xs.size(), dist, eps, k));
      CHECK(r.found);
      CHECK(r.gap_rule);
      CHECK(r.descent);
    }
  }
  const RankReport half = extract_violation_ranks(s, xs, 0.0, 0.5, 1);
  REQUIRE_FALSE(half.pairs.empty());
  CHECK(half.pairs[0].m == 1);
  CHECK(half.pairs[0].n == 2);  // H_2 − H_1 = 1/2 reaches the threshold
}

TEST_CASE("an e-Cauchy orbit has no violation past j(eps)") {
  const OrbitTrace t = iterate(max_space(), SelfMap::halving(), 1.0);
  for (const double eps : {0.01, 0.1, 0.5}) {
    const RankReport r = extract_violation_ranks(max_space(), t.points, 0.0, eps, 0);
    CHECK_FALSE(r.found);
  }
  CHECK(kind_of([&] { extract_violation_ranks(max_space(), t.points, 0.0, 0.0, 0); }) == ErrorKind::InvalidArgument);
}

TEST_CASE("fixed structure") {
  const FiniteSpace f = table3();
  const FixedStructure c = enumerate_fixed_structure(f, SelfMap::table({0, 0, 0}));
  CHECK(c.d_fixed == std::vector<std::size_t>{0});
  CHECK(c.theta == 0.0);
  CHECK(c.x_set == std::vector<std::size_t>{0});
  CHECK(c.fixed == std::vector<std::size_t>{0});

  const FixedStructure id = enumerate_fixed_structure(f, SelfMap::table({0, 1, 2}));
  CHECK(id.d_fixed.size() == 3);
  CHECK(id.fixed.size() == 3);
  CHECK(id.theta == 0.0);
  CHECK(id.x_set == std::vector<std::size_t>{0});
  CHECK(id.x_subset_fixed);

  const FixedStructure sw = enumerate_fixed_structure(FiniteSpace::from_rows({{0, 1}, {1, 0}}), SelfMap::table({1, 0}));
  CHECK(sw.d_fixed.empty());
  CHECK_FALSE(sw.theta);

  const std::vector<double> eps{1, 0.1, 1e-6};
  for (const ThetaApprox& a : theta_approximation(f, SelfMap::table({0, 0, 0}), c, eps)) {
    CHECK(a.pass);
    CHECK(a.witness == std::size_t{0});
  }
}

TEST_CASE("Theorem 1 solver") {
  SolveOptions opt;
  opt.sampler.region = Interval{0.0, 1.0};
  const SolveResult h = solve_theorem1(max_space(), SelfMap::halving(), Gauge::linear(0.5), 1.0, opt);
  REQUIRE(h.ok());
  CHECK(std::fabs(std::get<double>(h.certificate->point)) <= 1e-10);
  CHECK(h.certificate->self_distance <= 1e-10);
  CHECK(h.conclusions.at(0).all_pass());
  CHECK(h.traces.at(0).steps() <= 50);

  const SolveResult t = solve_theorem1(Space(table3()), SelfMap::table({0, 0, 0}), Gauge::linear(0.5), std::size_t{2});
  REQUIRE(t.ok());
  CHECK(std::get<std::size_t>(t.certificate->point) == 0);
  CHECK(t.certificate->kind == CertificateKind::TrueFixedPoint);
  CHECK(t.certificate->self_distance == 0.0);
  REQUIRE(t.certificate->structure);
  for (const HypothesisEntry& e : t.hypotheses) CHECK(e.state == HypothesisState::Verified);

  const SolveResult fixed = solve_theorem1(max_space(), SelfMap::affine(1.0, 0.0), Gauge::linear(0.5), 0.4, opt);
  REQUIRE(fixed.ok());
  CHECK(fixed.conclusions.at(0).gamma == 0.4);
}

TEST_CASE("Theorem 1 records failed hypotheses but still runs") {
  const Space sw(FiniteSpace::from_rows({{0, 1}, {1, 0}}));
  SolveOptions opt;
  opt.orbit.max_iter = 20;
  const SolveResult r = solve_theorem1(sw, SelfMap::table({1, 0}), Gauge::linear(0.5), std::size_t{0}, opt);
  CHECK(r.status == SolveStatus::BudgetExhausted);
  bool saw_failed = false;
  for (const HypothesisEntry& e : r.hypotheses) saw_failed = saw_failed || e.state == HypothesisState::Failed;
  CHECK(saw_failed);
}

TEST_CASE("Theorem 2 solver") {
  const SolveResult h = solve_theorem2(max_space(Interval{0.0, 1.0}), SelfMap::halving(), Gauge::linear(0.5), Point(0.3));
  REQUIRE(h.ok());
  CHECK(h.certificate->kind == CertificateKind::Theorem2Unique);
  CHECK(std::fabs(std::get<double>(h.certificate->point)) <= 1e-10);
  CHECK(h.traces.size() >= 7);
  for (const OrbitTrace& t : h.traces) CHECK(std::get<double>(t.last()) <= 1e-10);

  const SolveResult c = solve_theorem2(Space(table3()), SelfMap::table({0, 0, 0}), Gauge::linear(0.5));
  REQUIRE(c.ok());
  REQUIRE(c.certificate->structure);
  CHECK(c.certificate->structure->fixed.size() == 1);

  const SolveResult e = solve_theorem2(max_space(Interval{0.0, 1.0}), SelfMap::halving(), Gauge::exp_saturating());
  CHECK(e.status == SolveStatus::HypothesisFailed);
  CHECK(e.failed_hypothesis == "semi_coercive");

  const SolveResult s = solve_theorem2(Space(FiniteSpace::from_rows({{0, 1}, {1, 0}})), SelfMap::table({1, 0}),
                                       Gauge::linear(0.5));
  CHECK(s.status == SolveStatus::HypothesisFailed);
  CHECK(s.failed_hypothesis == "contractive_b");
}

TEST_CASE("starts") {
  const auto starts = spread_starts(max_space(Interval{0.0, 1.0}), Point(0.3), std::nullopt, 8);
  CHECK(std::get<double>(starts.front()) == 0.3);
  CHECK(starts.size() == 8);
  CHECK(kind_of([] { spread_starts(max_space(), std::nullopt, std::nullopt, 8); }) == ErrorKind::SamplerExhausted);
  const auto dup = spread_starts(max_space(Interval{0.0, 1.0}), Point(1.0), std::nullopt, 8);
  CHECK(dup.size() == 7);
}

TEST_CASE("Banach case: metric tables with contractions") {
  Rng rng(3);
  int solved = 0;
  for (int trial = 0; trial < 300 && solved < 20; ++trial) {
    const std::size_t n = 2 + rng.index(4);
    GeneratorParams p;
    p.w_max = 0.0;
    const FiniteSpace f = generate_random_space(n, rng.bits(), p);
    std::vector<std::size_t> t(n);
    for (std::size_t& v : t) v = rng.index(n);
    const SelfMap T = SelfMap::table(t);
    if (!verify_contractive(Space(f), T, Gauge::linear(0.5), GMap::B).pass) continue;
    const SolveResult r = solve_theorem2(Space(f), T, Gauge::linear(0.5));
    REQUIRE(r.ok());
    std::size_t fixed = n;
    int count = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (t[i] == i) {
        fixed = i;
        ++count;
      }
    }
    CHECK(count == 1);
    CHECK(std::get<std::size_t>(r.certificate->point) == fixed);
    ++solved;
  }
  CHECK(solved == 20);
}
