#include "pmfix/search.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <map>
#include <thread>

#include "pmfix/dynamics.hpp"
#include "pmfix/error.hpp"
#include "pmfix/gauge.hpp"
#include "pmfix/random.hpp"

namespace pmfix {

const char* to_string(MapSampler s) noexcept {
  switch (s) {
    case MapSampler::Uniform: return "uniform";
    case MapSampler::Biased: return "biased";
    case MapSampler::ConstantArgminWeight: return "constant_argmin_weight";
  }
  return "?";
}

MapSampler map_sampler_from_string(const std::string& s) {
  if (s == "uniform") return MapSampler::Uniform;
  if (s == "biased") return MapSampler::Biased;
  if (s == "constant_argmin_weight") return MapSampler::ConstantArgminWeight;
  throw Error(ErrorKind::InvalidArgument, "unknown map sampler '" + s + "'");
}

const std::vector<std::string>& hypothesis_names() {
  static const std::vector<std::string> names = {
      "symmetry",    "reflexive_triangular", "matthews",     "weak_sufficiency",
      "contractive", "right_limit_normal",   "limit_normal", "semi_coercive"};
  return names;
}

const char* to_string(TrialStatus s) noexcept {
  switch (s) {
    case TrialStatus::HypothesesFailed: return "hypotheses_failed";
    case TrialStatus::Pass: return "pass";
    case TrialStatus::Violation: return "violation";
  }
  return "?";
}

namespace {

bool known_hypothesis(const std::string& name) {
  const auto& names = hypothesis_names();
  return std::find(names.begin(), names.end(), name) != names.end();
}

// Probability that the biased sampler sends a point straight to the point of
// least self-distance; the remaining points take a uniform target and are then
// pulled one step along the map towards lower self-distance.
constexpr double kPull = 0.6;

std::size_t argmin_weight(const FiniteSpace& s) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < s.size(); ++i) {
    if (s.d(i, i) < s.d(best, best)) best = i;
  }
  return best;
}

std::vector<std::size_t> sample_map(MapSampler sampler, const FiniteSpace& s, Rng& rng) {
  const std::size_t n = s.size();
  const std::size_t star = argmin_weight(s);
  std::vector<std::size_t> t(n, star);
  switch (sampler) {
    case MapSampler::ConstantArgminWeight:
      break;
    case MapSampler::Uniform:
      for (std::size_t i = 0; i < n; ++i) t[i] = rng.index(n);
      break;
    case MapSampler::Biased:
      for (std::size_t i = 0; i < n; ++i) {
        if (rng.chance(kPull)) continue;
        std::size_t j = rng.index(n);
        if (s.d(j, j) > s.d(i, i)) j = star;
        t[i] = j;
      }
      break;
  }
  return t;
}

Gauge make_gauge(const TrialSpec& spec, double alpha) {
  if (spec.gauge_family == "linear") return Gauge::linear(alpha);
  if (spec.gauge_family == "rational") return Gauge::rational();
  return Gauge::exp_saturating();
}

std::string join(const std::vector<std::size_t>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(v[i]);
  }
  return s;
}

}  // namespace

void TrialSpec::validate() const {
  if (!space_override && n == 0) throw Error(ErrorKind::InvalidArgument, "trial needs n >= 1");
  if (!(w_max >= 0.0) || !std::isfinite(w_max)) {
    throw Error(ErrorKind::InvalidArgument, "w_max must be a non-negative real");
  }
  if (gauge_family != "linear" && gauge_family != "rational" && gauge_family != "expsat") {
    throw Error(ErrorKind::InvalidArgument, "unknown gauge family '" + gauge_family + "'");
  }
  if (!(alpha_lo >= 0.0) || !(alpha_hi >= alpha_lo) || !std::isfinite(alpha_hi)) {
    throw Error(ErrorKind::InvalidArgument, "gauge parameter range must satisfy 0 <= lo <= hi");
  }
  for (const std::string& h : enforce) {
    if (!known_hypothesis(h)) throw Error(ErrorKind::InvalidArgument, "unknown hypothesis '" + h + "'");
  }
  if (ablation && !known_hypothesis(*ablation)) {
    throw Error(ErrorKind::InvalidArgument, "unknown hypothesis '" + *ablation + "'");
  }
  if (map_override) {
    const std::size_t size = space_override ? space_override->size() : n;
    if (map_override->size() != size) {
      throw Error(ErrorKind::InvalidArgument, "map override length does not match the space");
    }
    for (const std::size_t j : *map_override) {
      if (j >= size) throw Error(ErrorKind::InvalidArgument, "map override entry out of range");
    }
  }
}

TrialInstance build_trial(const TrialSpec& spec) {
  spec.validate();
  Rng rng(spec.seed);
  const std::uint64_t space_seed = rng.bits();
  GeneratorParams gp;
  gp.w_max = spec.w_max;
  FiniteSpace space = spec.space_override ? *spec.space_override
                                          : generate_random_space(spec.n, space_seed, gp);
  const double alpha = rng.uniform(spec.alpha_lo, spec.alpha_hi);
  std::vector<std::size_t> map =
      spec.map_override ? *spec.map_override : sample_map(spec.sampler, space, rng);
  return {std::move(space), std::move(map), alpha};
}

TrialOutcome run_trial(const TrialSpec& spec) {
  const TrialInstance inst = build_trial(spec);
  const FiniteSpace& fs = inst.space;
  const Space space(fs);
  const SelfMap T = SelfMap::table(inst.map);
  const Gauge gauge = make_gauge(spec, inst.alpha);
  const std::size_t n = fs.size();
  constexpr double tol = kDefaultTol;

  TrialOutcome out;
  out.gauge = gauge.spec();
  out.map = inst.map;

  const AxiomReport ax = check_axioms(fs, tol);
  ContractionOptions co;
  co.tol = tol;
  co.require_valid_space = false;
  out.contractive_b = verify_contractive(space, T, gauge, GMap::B, co).pass;
  out.contractive_c = verify_contractive(space, T, gauge, GMap::C, co).pass;
  const GaugeClassification cls = classify(gauge);

  const std::map<std::string, bool> value = {
      {"symmetry", ax.symmetry.pass},
      {"reflexive_triangular", ax.reflexive_triangular.pass},
      {"matthews", ax.matthews.pass},
      {"weak_sufficiency", ax.weak_sufficiency.pass},
      {"contractive", spec.g == GMap::B ? out.contractive_b : out.contractive_c},
      {"right_limit_normal", cls.right_limit_normal.pass},
      {"limit_normal", cls.limit_normal.pass},
      {"semi_coercive", cls.psi_semi_coercive.pass},
  };
  for (const std::string& name : hypothesis_names()) {
    out.hypotheses.emplace_back(name, value.at(name));
  }
  for (const std::string& name : hypothesis_names()) {
    const bool enforced = std::find(spec.enforce.begin(), spec.enforce.end(), name) != spec.enforce.end();
    if (!enforced || (spec.ablation && *spec.ablation == name)) continue;
    if (!value.at(name)) {
      out.status = TrialStatus::HypothesesFailed;
      out.failed_hypothesis = name;
      return out;
    }
  }
  if (spec.ablation) out.ablated_failed = !value.at(*spec.ablation);

  auto violate = [&](const std::string& what, const std::string& witness) {
    out.status = TrialStatus::Violation;
    out.violation = what;
    out.witness = witness;
    return out;
  };

  const FixedStructure st = enumerate_fixed_structure(fs, T, tol);
  out.d_fixed = st.d_fixed.size();
  out.fixed = st.fixed.size();
  out.x_size = st.x_set.size();
  out.x_equals_fixed = st.x_set == st.fixed;

  // Theorem 1 from every start.
  OrbitOptions oo;
  oo.max_iter = 4 * n + 8;
  for (std::size_t x0 = 0; x0 < n; ++x0) {
    const OrbitTrace tr = iterate(space, T, Point(x0), oo);
    ++out.assertions;
    if (tr.stop_reason != StopReason::Converged) {
      return violate("theorem1_convergence", "orbit from " + fs.label(x0) + " did not settle");
    }
    const ConclusionReport c = check_theorem1_conclusions(space, tr, tol);
    if (!c.all_pass()) return violate("theorem1_conclusions", "orbit from " + fs.label(x0) + ": " + c.first_failure);
    if (!is_d_fixed(space, T, tr.last(), tol)) {
      return violate("theorem1_limit", "orbit from " + fs.label(x0) + " ends off Fix(T;d)");
    }
  }

  // Fixed-point identities on every pair of d-fixed points.
  for (const std::size_t z : st.d_fixed) {
    for (const std::size_t w : st.d_fixed) {
      ++out.assertions;
      if (!fixed_point_identities(space, T, Point(z), Point(w), tol).all_pass()) {
        return violate("fixed_point_identities", fs.label(z) + "," + fs.label(w));
      }
    }
  }

  if (spec.g == GMap::B) {
    out.assertions += 4;
    if (!st.x_subset_fixed) return violate("x_subset_fix", "X(T;d) = {" + join(st.x_set) + "}");
    if (st.fixed.size() > 1) return violate("fix_at_most_one", "Fix(T) = {" + join(st.fixed) + "}");
    if (st.x_set.empty()) return violate("x_nonempty", "Fix(T;d) = {" + join(st.d_fixed) + "}");
    if (st.fixed.size() != 1 || !out.x_equals_fixed) {
      return violate("fix_singleton", "Fix(T) = {" + join(st.fixed) + "}");
    }
    static const double eps_grid[] = {1.0, 0.1, 0.01, 1e-3, 1e-6};
    for (const ThetaApprox& a : theta_approximation(fs, T, st, eps_grid)) {
      ++out.assertions;
      if (!a.pass) return violate("theta_approximation", "eps " + std::to_string(a.eps));
    }
  }
  out.status = TrialStatus::Pass;
  return out;
}

// ---------------------------------------------------------------------------

void CampaignConfig::validate() const {
  if (count == 0) throw Error(ErrorKind::InvalidArgument, "count must be at least 1");
  if (n_min == 0 || n_max < n_min) {
    throw Error(ErrorKind::InvalidArgument, "n range must satisfy 1 <= n_min <= n_max");
  }
  if (threads == 0) throw Error(ErrorKind::InvalidArgument, "threads must be at least 1");
  base.validate();
}

TrialSpec CampaignConfig::trial(std::size_t i) const {
  TrialSpec t = base;
  t.seed = base.seed + i;
  if (n_max > n_min) {
    Rng rng(splitmix64(t.seed) ^ 0x6E5A11CEULL);
    t.n = n_min + static_cast<std::size_t>(rng.index(n_max - n_min + 1));
  } else {
    t.n = n_min;
  }
  return t;
}

SearchReport run_campaign(const CampaignConfig& config) {
  config.validate();
  std::vector<TrialOutcome> outcomes(config.count);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < config.count; i = next++) {
      try {
        outcomes[i] = run_trial(config.trial(i));
      } catch (const std::exception& e) {
        outcomes[i].status = TrialStatus::Violation;
        outcomes[i].violation = "exception";
        outcomes[i].witness = e.what();
      }
    }
  };
  const std::size_t nthreads = std::min(config.threads, config.count);
  std::vector<std::thread> pool;
  for (std::size_t t = 1; t < nthreads; ++t) pool.emplace_back(worker);
  worker();
  for (std::thread& t : pool) t.join();

  SearchReport r;
  r.ablation = config.base.ablation;
  std::map<std::string, std::size_t> failures;
  for (const std::string& h : hypothesis_names()) failures[h] = 0;
  for (std::size_t i = 0; i < outcomes.size(); ++i) {
    const TrialOutcome& o = outcomes[i];
    ++r.trials;
    r.contractive_b += o.contractive_b;
    r.contractive_c += o.contractive_c;
    if (o.contractive_b && !o.contractive_c) r.monotone_filter = false;
    r.assertions += o.assertions;
    if (o.status == TrialStatus::HypothesesFailed) {
      ++failures[o.failed_hypothesis];
      continue;
    }
    ++r.hypotheses_passed;
    if (o.ablated_failed) ++r.ablated_failed;
    if (o.status == TrialStatus::Violation) {
      r.violations.push_back({i, config.trial(i), o});
      if (o.ablated_failed) ++r.ablated_failed_violations;
      continue;
    }
    ++r.passes;
    if (o.fixed == 1) ++r.fixed_singleton;
    if (o.x_equals_fixed) ++r.x_equals_fixed;
    if (o.x_size > 0) ++r.x_nonempty;
  }
  for (const std::string& h : hypothesis_names()) r.failures_by_hypothesis.emplace_back(h, failures[h]);
  return r;
}

}  // namespace pmfix
