#include <doctest.h>

#include "pmfix/error.hpp"
#include "pmfix/io.hpp"
#include "pmfix/random.hpp"

using namespace pmfix;
using io::json;

namespace {

ErrorKind kind_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  return ErrorKind::InvalidArgument;
}

json parse(const char* text) { return io::parse_json(text, "test"); }

}  // namespace

TEST_CASE("finite spaces round trip") {
  const Space s = io::space_from_json(parse(R"({"labels": ["a","b"], "d": [[0, 1.5], [1.5, 0.25]]})"));
  REQUIRE(s.is_finite());
  CHECK(s.finite().label(1) == "b");
  CHECK(s.d(std::size_t{1}, std::size_t{1}) == 0.25);
  const Space t = io::space_from_json(io::space_to_json(s));
  CHECK(t.finite().table() == s.finite().table());
  CHECK(t.finite().labels() == s.finite().labels());
  CHECK(io::space_from_json(parse(R"({"d": [[1]]})")).finite().label(0) == "p0");
}

TEST_CASE("doubles survive the JSON round trip bit for bit") {
  Rng rng(8);
  for (int i = 0; i < 200; ++i) {
    const FiniteSpace f = generate_random_space(4, rng.bits());
    const std::string text = io::dump(io::space_to_json(Space(f)));
    CHECK(io::space_from_json(io::parse_json(text, "rt")).finite().table() == f.table());
  }
}

TEST_CASE("continuous families round trip") {
  for (const char* src : {R"({"family": "max_on_rplus", "params": {"region": [0, 1]}})",
                          R"({"family": "intervals"})",
                          R"({"family": "weighted", "params": {"knots": [0, 1], "weights": [0, 2], "region": [-1, 3]}})"}) {
    CAPTURE(src);
    const Space s = io::space_from_json(parse(src));
    const Space t = io::space_from_json(io::space_to_json(s));
    CHECK(t.continuous().family() == s.continuous().family());
    CHECK(t.continuous().region() == s.continuous().region());
    CHECK(t.continuous().knots() == s.continuous().knots());
  }
}

TEST_CASE("malformed space and map files") {
  CHECK(kind_of([] { io::space_from_json(parse(R"({"d": [[0,1],[1,0]], "extra": 1})")); }) == ErrorKind::ParseError);
  CHECK(kind_of([] { io::space_from_json(parse(R"({"family": "torus"})")); }) == ErrorKind::ParseError);
  CHECK(kind_of([] { io::space_from_json(parse(R"({"d": [[0,"x"],[1,0]]})")); }) == ErrorKind::ParseError);
  CHECK(kind_of([] { io::space_from_json(parse(R"({"d": [[0,1],[1]]})")); }) == ErrorKind::MalformedTable);
  CHECK(kind_of([] { io::space_from_json(parse(R"({"family": "max_on_rplus", "params": {"region": [-1, 1]}})")); }) ==
        ErrorKind::ParseError);
  CHECK(kind_of([] { io::map_from_json(parse(R"({"family": "affine", "params": {"a": 1}})")); }) == ErrorKind::ParseError);
  CHECK(kind_of([] { io::map_from_json(parse(R"({"table": [0, -1]})")); }) == ErrorKind::ParseError);
  CHECK(kind_of([] { io::map_from_json(parse(R"({"expr": "x *"})")); }) == ErrorKind::SyntaxError);
  CHECK(kind_of([] { io::parse_json("{", "broken"); }) == ErrorKind::ParseError);
  CHECK(kind_of([] { io::read_json_file("/nonexistent/space.json"); }) == ErrorKind::ParseError);
}

TEST_CASE("maps round trip") {
  for (const char* src : {R"({"table": [1, 0, 2]})", R"({"family": "halving"})",
                          R"({"family": "affine", "params": {"a": 0.25, "b": 1}})", R"j({"expr": "max(x/2, 0)"})j"}) {
    CAPTURE(src);
    const SelfMap m = io::map_from_json(parse(src));
    CHECK(io::map_to_json(io::map_from_json(io::map_to_json(m))) == io::map_to_json(m));
  }
}

TEST_CASE("points") {
  const Space f = io::space_from_json(parse(R"({"labels": ["a","b"], "d": [[0,1],[1,0]]})"));
  CHECK(std::get<std::size_t>(io::parse_point(f, "b")) == 1);
  CHECK(std::get<std::size_t>(io::parse_point(f, "0")) == 0);
  CHECK(kind_of([&] { io::parse_point(f, "c"); }) == ErrorKind::UnknownPoint);
  const Space iv(ContinuousSpace::intervals());
  CHECK(std::get<Interval>(io::parse_point(iv, "[1, 2]")) == Interval{1, 2});
  CHECK(std::get<Interval>(io::parse_point(iv, "1:2")) == Interval{1, 2});
  CHECK(kind_of([&] { io::parse_point(iv, "[2, 1]"); }) == ErrorKind::UnknownPoint);
  const Space m(ContinuousSpace::max_on_rplus());
  CHECK(std::get<double>(io::parse_point(m, " 0.5 ")) == 0.5);
  CHECK(kind_of([&] { io::parse_point(m, "-1"); }) == ErrorKind::UnknownPoint);
  CHECK(kind_of([&] { io::parse_point(m, "1x"); }) == ErrorKind::UnknownPoint);
  CHECK(std::get<Interval>(io::point_from_json(iv, io::point_to_json(iv, Interval{0.5, 3}))) == Interval{0.5, 3});
}

TEST_CASE("certificates round trip") {
  const Space s = io::space_from_json(parse(R"({"d": [[0,2,3],[2,1,3],[3,3,2]]})"));
  const SolveResult r = solve_theorem2(s, SelfMap::table({0, 0, 0}), Gauge::linear(0.5));
  REQUIRE(r.certificate);
  const json j = io::to_json(s, *r.certificate);
  const Certificate c = io::certificate_from_json(s, j);
  CHECK(io::to_json(s, c) == j);
  CHECK(j["kind"] == "theorem2_unique");

  const Space m(ContinuousSpace::max_on_rplus(Interval{0, 1}));
  const SolveResult h = solve_theorem2(m, SelfMap::halving(), Gauge::linear(0.5));
  REQUIRE(h.certificate);
  const json hj = io::to_json(m, *h.certificate);
  CHECK(io::to_json(m, io::certificate_from_json(m, hj)) == hj);
  CHECK(hj["structure"].is_null());
}

TEST_CASE("campaign configs") {
  CHECK(kind_of([] { io::campaign_from_json(parse(R"({"count": 3})")); }) == ErrorKind::ParseError);
  CHECK(kind_of([] { io::campaign_from_json(parse(R"({"seed": 1, "count": 0})")); }) == ErrorKind::InvalidArgument);
  CHECK(kind_of([] { io::campaign_from_json(parse(R"({"seed": 1, "colour": 0})")); }) == ErrorKind::ParseError);
  const CampaignConfig c = io::campaign_from_json(
      parse(R"({"seed": 5, "count": 10, "n_max": 4, "gauge": {"family": "linear", "alpha_hi": 0.8}, "g": "c",
               "ablation": "limit_normal"})"));
  CHECK(c.base.seed == 5);
  CHECK(c.count == 10);
  CHECK(c.n_max == 4);
  CHECK(c.base.alpha_hi == 0.8);
  CHECK(c.base.g == GMap::C);
  const CampaignConfig d = io::campaign_from_json(io::campaign_to_json(c));
  CHECK(io::campaign_to_json(d) == io::campaign_to_json(c));
}

TEST_CASE("trial specs replay") {
  TrialSpec s;
  s.seed = 77;
  s.n = 3;
  s.space_override = FiniteSpace::from_rows({{2, 1}, {1, 0}});
  s.map_override = std::vector<std::size_t>{1, 1};
  s.ablation = "matthews";
  const TrialSpec t = io::trial_spec_from_json(io::trial_spec_to_json(s));
  CHECK(io::trial_spec_to_json(t) == io::trial_spec_to_json(s));
  CHECK(io::to_json(run_trial(t)) == io::to_json(run_trial(s)));
  CHECK(kind_of([] { io::trial_spec_from_json(parse(R"({"n": 3})")); }) == ErrorKind::ParseError);
}

TEST_CASE("csv") {
  const Space m(ContinuousSpace::max_on_rplus());
  const OrbitTrace t = iterate(m, SelfMap::halving(), 1.0);
  const std::string csv = io::orbit_csv(m, t);
  CHECK(csv.rfind("n,x_n,rho_n,alpha_n\n0,1,1,1\n1,0.5,0.5,0.5\n", 0) == 0);

  const auto xs = io::read_sequence_csv(m, "# comment\nx\n1\n\n0.5\n0.25\n");
  REQUIRE(xs.size() == 3);
  CHECK(std::get<double>(xs[2]) == 0.25);
  const Space iv(ContinuousSpace::intervals());
  const auto ys = io::read_sequence_csv(iv, "\"[0, 1]\"\n0:2\n");
  REQUIRE(ys.size() == 2);
  CHECK(std::get<Interval>(ys[0]) == Interval{0, 1});
  CHECK(kind_of([&] { io::read_sequence_csv(m, "x\nabc\n"); }) == ErrorKind::UnknownPoint);

  const OrbitTrace it = iterate(iv, SelfMap::halving(), Interval{1, 2});
  CHECK(io::orbit_csv(iv, it).find("\"[1, 2]\"") != std::string::npos);
}

TEST_CASE("reports carry every field") {
  const Space s = io::space_from_json(parse(R"({"d": [[0,1],[1,0]]})"));
  const ContractionReport r = verify_contractive(s, SelfMap::table({1, 0}), Gauge::linear(0.5), GMap::C);
  const json j = io::to_json(s, r);
  CHECK(j["pass"] == false);
  CHECK(j["worst_margin"] == -0.5);
  CHECK(j["witness"]["x"] == "p0");
  const json g = io::to_json(classify(Gauge::linear(0.5)));
  CHECK(g["classes"].size() == 4);
  CHECK(io::number(std::nan("")).is_null());
  CHECK(io::dump(io::number(-0.0)) == "0.0\n");
}
