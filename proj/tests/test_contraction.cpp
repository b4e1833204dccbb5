#include <doctest.h>

#include <algorithm>
#include <vector>

#include "pmfix/contraction.hpp"
#include "pmfix/error.hpp"
#include "pmfix/random.hpp"

using namespace pmfix;

namespace {

FiniteSpace table3() { return FiniteSpace::from_rows({{0, 2, 3}, {2, 1, 3}, {3, 3, 2}}); }

ErrorKind kind_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  return ErrorKind::ParseError;
}

SelfMap random_table(Rng& rng, std::size_t n) {
  std::vector<std::size_t> t(n);
  for (std::size_t& v : t) v = rng.index(n);
  return SelfMap::table(t);
}

// The contractive inequality written out directly.
bool brute_contractive(const FiniteSpace& s, const std::vector<std::size_t>& T, double alpha, bool use_b) {
  const std::size_t n = s.size();
  for (std::size_t x = 0; x < n; ++x) {
    for (std::size_t y = 0; y < n; ++y) {
      const double m = std::max({s.d(x, y), s.d(x, T[x]), s.d(y, T[y]),
                                 (s.d(x, T[y]) + s.d(T[x], y)) / 2});
      const double g = use_b ? (s.d(x, x) + s.d(y, y)) / 2 : std::max(s.d(x, x), s.d(y, y));
      if (s.d(T[x], T[y]) > std::max(alpha * m, g) + kDefaultTol) return false;
    }
  }
  return true;
}

}  // namespace

TEST_CASE("M quantities under max with halving") {
  const Space m(ContinuousSpace::max_on_rplus());
  const MQuantities q = m_quantities(m, SelfMap::halving(), 1.0, 4.0);
  CHECK(q.m1 == 4.0);
  CHECK(q.m2 == 3.0);
  CHECK(q.m3 == 4.0);
}

TEST_CASE("M(x,x) = d(x,Tx) and M(x,Tx) = max{d(x,Tx), d(Tx,TTx)}") {
  Rng rng(5);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 1 + rng.index(7);
    const Space s(generate_random_space(n, rng.bits()));
    const SelfMap T = random_table(rng, n);
    for (std::size_t x = 0; x < n; ++x) {
      const std::size_t tx = T.targets()[x];
      const std::size_t ttx = T.targets()[tx];
      CHECK(m_quantities(s, T, x, x).m3 == s.d(x, tx));
      CHECK(m_quantities(s, T, x, tx).m3 == std::max(s.d(x, tx), s.d(tx, ttx)));
    }
  }
}

TEST_CASE("halving on max is b-contractive") {
  ContractionOptions opt;
  opt.sampler.region = Interval{0.0, 1.0};
  opt.sampler.random_pairs = 2000;
  const ContractionReport r =
      verify_contractive(Space(ContinuousSpace::max_on_rplus()), SelfMap::halving(), Gauge::linear(0.5), GMap::B, opt);
  CHECK(r.pass);
  CHECK(r.sampled);
  CHECK(r.checked == 64 * 64 + 2000);
}

TEST_CASE("constant map on the three-point table") {
  for (const Gauge& g : {Gauge::linear(0.5), Gauge::rational(), Gauge::linear(0.0)}) {
    const ContractionReport r = verify_contractive(Space(table3()), SelfMap::table({0, 0, 0}), g, GMap::C);
    CHECK(r.pass);
    CHECK(r.checked == 9);
    CHECK(r.witness_lhs == 0.0);
  }
}

TEST_CASE("swap on a two-point metric fails with a witness") {
  const ContractionReport r = verify_contractive(Space(FiniteSpace::from_rows({{0, 1}, {1, 0}})),
                                                 SelfMap::table({1, 0}), Gauge::linear(0.5), GMap::C);
  CHECK_FALSE(r.pass);
  CHECK(r.worst_margin == -0.5);
  CHECK(r.witness_lhs == 1.0);
  CHECK(r.witness_phi == 0.5);
  CHECK(r.witness_g == 0.0);
  CHECK(std::get<std::size_t>(r.witness_x) != std::get<std::size_t>(r.witness_y));
}

TEST_CASE("exhaustive check agrees with the direct inequality; g=b implies g=c") {
  Rng rng(99);
  int b_pass = 0;
  for (int trial = 0; trial < 500; ++trial) {
    const std::size_t n = 1 + rng.index(5);
    const FiniteSpace f = generate_random_space(n, rng.bits());
    const SelfMap T = random_table(rng, n);
    const double alpha = rng.uniform(0.0, 0.9);
    const Gauge g = Gauge::linear(alpha);
    const bool pb = verify_contractive(Space(f), T, g, GMap::B).pass;
    const bool pc = verify_contractive(Space(f), T, g, GMap::C).pass;
    CHECK(pb == brute_contractive(f, T.targets(), alpha, true));
    CHECK(pc == brute_contractive(f, T.targets(), alpha, false));
    if (pb) CHECK(pc);
    b_pass += pb;
  }
  CHECK(b_pass > 0);
}

TEST_CASE("phi = 0 leaves only the g branch") {
  const FiniteSpace f = table3();
  const ContractionReport r = verify_contractive(Space(f), SelfMap::table({0, 0, 0}), Gauge::linear(0.0), GMap::C);
  CHECK(r.pass);
  CHECK(r.g_branch + r.phi_branch == r.checked);
  CHECK(r.g_branch == 8);  // only (p0,p0) has g = 0 = phi
}

TEST_CASE("errors") {
  const Space bad(FiniteSpace::from_rows({{2, 1}, {1, 0}}));
  CHECK(kind_of([&] { verify_contractive(bad, SelfMap::table({0, 0}), Gauge::linear(0.5), GMap::C); }) ==
        ErrorKind::InvalidSpace);
  const Space m(ContinuousSpace::max_on_rplus());
  CHECK(kind_of([&] { verify_contractive(m, SelfMap::halving(), Gauge::linear(0.5), GMap::B); }) ==
        ErrorKind::SamplerExhausted);
  CHECK(kind_of([] { SelfMap::table({0, 3, 0}).check_compatible(Space(table3())); }) == ErrorKind::InvalidArgument);
  CHECK(kind_of([] { SelfMap::table({0, 0}).check_compatible(Space(table3())); }) == ErrorKind::InvalidArgument);
  CHECK(kind_of([&] { SelfMap::halving().check_compatible(Space(table3())); }) == ErrorKind::InvalidArgument);
  CHECK(kind_of([&] { SelfMap::affine(1.0, -5.0).apply(m, 1.0); }) == ErrorKind::UnknownPoint);
}

TEST_CASE("maps") {
  const Space m(ContinuousSpace::max_on_rplus());
  CHECK(std::get<double>(SelfMap::expression(Expression::parse("max(x/2, 0)", "x")).apply(m, 3.0)) == 1.5);
  const Space iv(ContinuousSpace::intervals());
  CHECK(std::get<Interval>(SelfMap::affine(-1.0, 0.0).apply(iv, Interval{1.0, 2.0})) == Interval{-2.0, -1.0});
  CHECK(std::get<Interval>(SelfMap::halving().apply(iv, Interval{1.0, 2.0})) == Interval{0.5, 1.0});
}

TEST_CASE("fixed-point identities under max with halving") {
  const Space m(ContinuousSpace::max_on_rplus());
  const SelfMap T = SelfMap::halving();
  CHECK(is_d_fixed(m, T, 0.8, 1e-12));
  const std::vector<Point> probes{0.0, 0.1, 0.5, 1.0, 3.0};
  const IdentityReport r = fixed_point_identities(m, T, 0.8, 0.3, 1e-12, probes);
  CHECK(r.precondition);
  CHECK(r.all_pass());
  CHECK(r.e_value == doctest::Approx(0.4));
}

TEST_CASE("identities for a constant map and a non-fixed point") {
  const Space s(table3());
  const SelfMap T = SelfMap::table({0, 0, 0});
  const IdentityReport r = fixed_point_identities(s, T, std::size_t{0}, std::size_t{0});
  CHECK(r.all_pass());
  CHECK(r.m_equals_d.margin == 0.0);
  CHECK(r.e_value == 0.0);
  const IdentityReport q = fixed_point_identities(s, T, std::size_t{2}, std::size_t{0});
  CHECK_FALSE(q.precondition);
  CHECK_FALSE(q.all_pass());
}
