#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "pmfix/error.hpp"
#include "pmfix/random.hpp"
#include "pmfix/space.hpp"

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

// Direct transcription of the four axioms, used as the oracle.
bool brute_axioms(const FiniteSpace& s, double tol) {
  const std::size_t n = s.size();
  for (std::size_t x = 0; x < n; ++x) {
    for (std::size_t y = 0; y < n; ++y) {
      if (std::fabs(s.d(x, y) - s.d(y, x)) > tol) return false;
      if (std::max(s.d(x, x), s.d(y, y)) > s.d(x, y) + tol) return false;
      if (x != y && std::fabs(s.d(x, y) - s.d(x, x)) <= tol && std::fabs(s.d(x, y) - s.d(y, y)) <= tol) {
        return false;
      }
      for (std::size_t z = 0; z < n; ++z) {
        if (s.d(x, z) > s.d(x, y) + s.d(y, z) - s.d(y, y) + tol) return false;
      }
    }
  }
  return true;
}

}  // namespace

TEST_CASE("three-point table passes all four axioms") {
  const AxiomReport r = check_axioms(table3());
  CHECK(r.symmetry.pass);
  CHECK(r.reflexive_triangular.pass);
  CHECK(r.matthews.pass);
  CHECK(r.weak_sufficiency.pass);
  CHECK(r.all_pass());
}

TEST_CASE("standard metric is a partial metric") {
  CHECK(check_axioms(FiniteSpace::from_rows({{0, 1}, {1, 0}})).all_pass());
}

TEST_CASE("Matthews fails on [[2,1],[1,0]] at (0,1)") {
  const AxiomReport r = check_axioms(FiniteSpace::from_rows({{2, 1}, {1, 0}}));
  CHECK_FALSE(r.matthews.pass);
  CHECK(r.matthews.margin == doctest::Approx(-1.0));
  CHECK(std::min(r.matthews.witness[0], r.matthews.witness[1]) == 0);
  CHECK(std::max(r.matthews.witness[0], r.matthews.witness[1]) == 1);
  CHECK(r.symmetry.pass);
}

TEST_CASE("weak sufficiency catches indistinguishable points") {
  const AxiomReport r = check_axioms(FiniteSpace::from_rows({{1, 1}, {1, 1}}));
  CHECK_FALSE(r.weak_sufficiency.pass);
}

TEST_CASE("malformed tables") {
  CHECK(kind_of([] { FiniteSpace::from_rows({{0, 1}, {1}}); }) == ErrorKind::MalformedTable);
  CHECK(kind_of([] { FiniteSpace::from_rows({{0, -1}, {-1, 0}}); }) == ErrorKind::MalformedTable);
  CHECK(kind_of([] { FiniteSpace::from_rows({}); }) == ErrorKind::MalformedTable);
  CHECK(kind_of([] { FiniteSpace::from_rows({{NAN}}); }) == ErrorKind::MalformedTable);
  CHECK(kind_of([] { table3().index_of("p9"); }) == ErrorKind::UnknownPoint);
}

TEST_CASE("check_axioms agrees with a brute-force scan on perturbed tables") {
  Rng rng(11);
  int disagreements = 0;
  int failing = 0;
  for (int trial = 0; trial < 400; ++trial) {
    const std::size_t n = 1 + rng.index(5);
    FiniteSpace base = generate_random_space(n, rng.bits());
    std::vector<double> t = base.table();
    if (rng.chance(0.7)) {
      const std::size_t k = rng.index(n * n);
      t[k] = std::max(0.0, t[k] + rng.uniform(-1.5, 1.5));
    }
    if (rng.chance(0.2)) {
      const std::size_t i = rng.index(n);
      const std::size_t j = rng.index(n);
      t[i * n + j] = t[j * n + i] = t[i * n + i];
    }
    const FiniteSpace s(base.labels(), t);
    const bool expect = brute_axioms(s, kDefaultTol);
    failing += expect ? 0 : 1;
    disagreements += check_axioms(s).all_pass() == expect ? 0 : 1;
  }
  CHECK(disagreements == 0);
  CHECK(failing > 50);
}

TEST_CASE("derived maps") {
  const Space s(table3());
  CHECK(derive(s, Derived::E, std::size_t{0}, std::size_t{1}) == 3.0);
  CHECK(derive(s, Derived::B, std::size_t{1}, std::size_t{2}) == 1.5);
  CHECK(derive(s, Derived::C, std::size_t{1}, std::size_t{2}) == 2.0);
  for (std::size_t i = 0; i < 3; ++i) CHECK(s.e(i, i) == 0.0);

  const Space m(ContinuousSpace::max_on_rplus());
  CHECK(m.e(3.0, 1.0) == 2.0);
  const std::vector<double> e = derive_table(table3(), Derived::E);
  CHECK(e == std::vector<double>{0, 3, 4, 3, 0, 3, 4, 3, 0});
}

TEST_CASE("e is a metric on the three-point table and twice d on a metric") {
  CHECK(check_e_is_metric(table3()).all_pass());
  const FiniteSpace m = FiniteSpace::from_rows({{0, 1, 2}, {1, 0, 1.5}, {2, 1.5, 0}});
  const std::vector<double> e = derive_table(m, Derived::E);
  for (std::size_t k = 0; k < 9; ++k) CHECK(e[k] == 2.0 * m.table()[k]);
  CHECK(kind_of([] { check_e_is_metric(FiniteSpace::from_rows({{2, 1}, {1, 0}})); }) ==
        ErrorKind::InvalidSpace);
}

TEST_CASE("generator") {
  const FiniteSpace one = generate_random_space(1, 5);
  CHECK(one.size() == 1);
  CHECK(one.d(0, 0) >= 0.0);
  CHECK(one.d(0, 0) <= 2.0);
  CHECK(generate_random_space(3, 42).table() == generate_random_space(3, 42).table());
  CHECK(generate_random_space(3, 42).table() != generate_random_space(3, 43).table());
  int pass = 0;
  for (std::uint64_t seed = 0; seed < 1000; ++seed) pass += check_axioms(generate_random_space(6, seed)).all_pass();
  CHECK(pass == 1000);
}

TEST_CASE("b <= c <= d and e >= 0 on generated spaces") {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const Space s(generate_random_space(5, seed));
    for (std::size_t x = 0; x < 5; ++x) {
      for (std::size_t y = 0; y < 5; ++y) {
        CHECK(s.b(x, y) <= s.c(x, y));
        CHECK(s.c(x, y) <= s.d(x, y));
        CHECK(s.e(x, y) >= 0.0);
      }
    }
  }
}

TEST_CASE("continuous families") {
  const Space iv(ContinuousSpace::intervals());
  CHECK(iv.d(Interval{0, 1}, Interval{2, 3}) == 3.0);
  CHECK(iv.d(Interval{1, 2}, Interval{1, 2}) == 1.0);
  CHECK(kind_of([&] { iv.d(Interval{2, 1}, Interval{0, 1}); }) == ErrorKind::UnknownPoint);

  const Space w(ContinuousSpace::weighted({0.0, 1.0}, {0.0, 2.0}));
  CHECK(w.d(0.5, 0.5) == 1.0);
  CHECK(w.d(0.0, 1.0) == 3.0);
  CHECK(w.d(5.0, 5.0) == 2.0);  // constant outside the knots

  const Space m(ContinuousSpace::max_on_rplus());
  CHECK(kind_of([&] { m.d(-1.0, 1.0); }) == ErrorKind::UnknownPoint);
  CHECK(kind_of([&] { m.d(std::size_t{0}, 1.0); }) == ErrorKind::UnknownPoint);
}

TEST_CASE("open d-spheres") {
  const Space m(ContinuousSpace::max_on_rplus());
  CHECK(sphere_contains(m, 1.0, 0.5, 1.2));
  CHECK_FALSE(sphere_contains(m, 1.0, 0.5, 2.0));
  CHECK(sphere_contains(m, 1.0, 0.5, 1.0));
  CHECK(sphere_contains(Space(table3()), std::size_t{2}, 1e-9, std::size_t{2}));
  CHECK(kind_of([&] { sphere_contains(m, 1.0, 0.0, 1.0); }) == ErrorKind::NonPositiveRadius);
}
