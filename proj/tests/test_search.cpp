#include <doctest.h>

#include "pmfix/error.hpp"
#include "pmfix/search.hpp"

using namespace pmfix;

namespace {

TrialSpec spec_with(std::uint64_t seed, std::size_t n) {
  TrialSpec s;
  s.seed = seed;
  s.n = n;
  return s;
}

bool same(const TrialOutcome& a, const TrialOutcome& b) {
  return a.status == b.status && a.failed_hypothesis == b.failed_hypothesis && a.violation == b.violation &&
         a.gauge == b.gauge && a.map == b.map && a.hypotheses == b.hypotheses && a.assertions == b.assertions &&
         a.d_fixed == b.d_fixed && a.fixed == b.fixed && a.x_size == b.x_size;
}

bool same(const SearchReport& a, const SearchReport& b) {
  if (a.violations.size() != b.violations.size()) return false;
  for (std::size_t i = 0; i < a.violations.size(); ++i) {
    if (a.violations[i].index != b.violations[i].index || !same(a.violations[i].outcome, b.violations[i].outcome)) {
      return false;
    }
  }
  return a.trials == b.trials && a.hypotheses_passed == b.hypotheses_passed && a.passes == b.passes &&
         a.failures_by_hypothesis == b.failures_by_hypothesis && a.contractive_b == b.contractive_b &&
         a.contractive_c == b.contractive_c && a.fixed_singleton == b.fixed_singleton &&
         a.x_equals_fixed == b.x_equals_fixed && a.assertions == b.assertions;
}

}  // namespace

TEST_CASE("constant map to the argmin weight passes") {
  TrialSpec s = spec_with(7, 4);
  s.sampler = MapSampler::ConstantArgminWeight;
  s.alpha_lo = s.alpha_hi = 0.4;
  const TrialOutcome o = run_trial(s);
  CHECK(o.status == TrialStatus::Pass);
  CHECK(o.gauge == "linear:0.4");
  CHECK(o.fixed == 1);
  CHECK(o.x_equals_fixed);
  CHECK(o.assertions > 0);
}

TEST_CASE("a single point always passes") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    for (const MapSampler m : {MapSampler::Uniform, MapSampler::Biased}) {
      TrialSpec s = spec_with(seed, 1);
      s.sampler = m;
      const TrialOutcome o = run_trial(s);
      CHECK(o.status == TrialStatus::Pass);
      CHECK(o.fixed == 1);
    }
  }
}

TEST_CASE("trials are deterministic in their spec") {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const TrialSpec s = spec_with(seed, 5);
    CHECK(same(run_trial(s), run_trial(s)));
    CHECK(build_trial(s).space.table() == build_trial(s).space.table());
    CHECK(build_trial(s).map == build_trial(s).map);
  }
}

TEST_CASE("ablating Matthews on a hand-broken table") {
  TrialSpec s = spec_with(1, 2);
  s.space_override = FiniteSpace::from_rows({{2, 1}, {1, 0}});
  s.map_override = std::vector<std::size_t>{1, 1};
  const TrialOutcome enforced = run_trial(s);
  CHECK(enforced.status == TrialStatus::HypothesesFailed);
  CHECK(enforced.failed_hypothesis == "matthews");

  s.ablation = "matthews";
  const TrialOutcome ablated = run_trial(s);
  CHECK(ablated.status != TrialStatus::HypothesesFailed);
  CHECK(ablated.ablated_failed);
}

TEST_CASE("campaign: count 1 reproduces run_trial") {
  CampaignConfig c;
  c.base = spec_with(123, 4);
  c.count = 1;
  c.n_min = c.n_max = 4;
  const SearchReport r = run_campaign(c);
  const TrialOutcome o = run_trial(c.trial(0));
  CHECK(r.trials == 1);
  CHECK(r.passes == (o.status == TrialStatus::Pass ? 1u : 0u));
  CHECK(r.assertions == o.assertions);
  CHECK(c.trial(0).seed == 123);
}

TEST_CASE("campaign: serial and parallel runs agree, no violations") {
  CampaignConfig c;
  c.base = spec_with(9, 4);
  c.count = 200;
  const SearchReport serial = run_campaign(c);
  c.threads = 4;
  const SearchReport parallel = run_campaign(c);
  CHECK(same(serial, parallel));
  CHECK(serial.violations.empty());
  CHECK(serial.monotone_filter);
  CHECK(serial.contractive_b <= serial.contractive_c);
  CHECK(serial.hypotheses_passed * 5 > serial.trials);  // the biased sampler clears 20%
  CHECK(serial.fixed_singleton == serial.passes);
}

TEST_CASE("campaign: ablating semi-coercivity with an expsat gauge") {
  CampaignConfig c;
  c.base = spec_with(40, 4);
  c.base.gauge_family = "expsat";
  c.base.ablation = "semi_coercive";
  c.count = 20;
  const SearchReport r = run_campaign(c);
  CHECK(r.ablation == std::optional<std::string>("semi_coercive"));
  CHECK(r.ablated_failed == r.hypotheses_passed);
  CHECK(r.hypotheses_passed > 0);
  CHECK(r.violations.empty());  // empirical on finite spaces
}

TEST_CASE("invalid specs") {
  CampaignConfig c;
  c.count = 0;
  CHECK_THROWS_AS(run_campaign(c), Error);
  TrialSpec s;
  s.ablation = "Nope";
  CHECK_THROWS_AS(s.validate(), Error);
  TrialSpec g;
  g.gauge_family = "cubic";
  CHECK_THROWS_AS(run_trial(g), Error);
  CHECK(map_sampler_from_string("biased") == MapSampler::Biased);
  CHECK_THROWS_AS(map_sampler_from_string("greedy"), Error);
}
