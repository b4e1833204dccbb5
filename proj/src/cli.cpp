#include "pmfix/cli.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "pmfix/contraction.hpp"
#include "pmfix/dynamics.hpp"
#include "pmfix/error.hpp"
#include "pmfix/gauge.hpp"
#include "pmfix/io.hpp"
#include "pmfix/search.hpp"
#include "pmfix/space.hpp"

namespace pmfix {

namespace {

using io::json;

// Human output uses 6 significant digits; JSON keeps every bit.
std::string h(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v == 0.0 ? 0.0 : v);
  return buf;
}

std::string hl(long double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.6Lg", v == 0.0L ? 0.0L : v);
  return buf;
}

std::string hp(const Space& space, const Point& p) {
  if (space.is_finite()) return space.finite().label(std::get<std::size_t>(p));
  if (const auto* iv = std::get_if<Interval>(&p)) return "[" + h(iv->lo) + ", " + h(iv->hi) + "]";
  return h(std::get<double>(p));
}

std::string one_line(std::string s) {
  for (char& ch : s) {
    if (ch == '\n' || ch == '\r') ch = ' ';
  }
  return s;
}

const char* mark(bool pass) { return pass ? "PASS" : "FAIL"; }

struct Shared {
  bool json_out = false;
};

Space load_space(const std::string& path) { return io::space_from_json(io::read_json_file(path)); }

SelfMap load_map(const Space& space, const std::string& path) {
  SelfMap m = io::map_from_json(io::read_json_file(path));
  m.check_compatible(space);
  return m;
}

GMap parse_g(const std::string& s) {
  if (s == "b") return GMap::B;
  if (s == "c") return GMap::C;
  throw Error(ErrorKind::InvalidArgument, "--g must be b or c");
}

std::string space_summary(const Space& space) {
  if (space.is_finite()) return std::to_string(space.finite().size()) + " points";
  std::string s = to_string(space.continuous().family());
  if (const auto& r = space.continuous().region()) s += " on [" + h(r->lo) + ", " + h(r->hi) + "]";
  return s;
}

void print_check(std::ostream& out, const PropertyCheck& c) {
  out << mark(c.pass) << " " << c.name << "  margin " << h(c.margin) << "\n";
}

// ---------------------------------------------------------------------------

struct VerifyArgs {
  std::string space;
  double tol = kDefaultTol;
  std::size_t grid = 32;
};

int cmd_verify(const Shared& sh, const VerifyArgs& a, std::ostream& out) {
  const Space space = load_space(a.space);
  std::optional<FiniteSpace> table;
  bool sampled = false;
  if (space.is_finite()) {
    table = space.finite();
  } else {
    SamplerSpec sampler;
    sampler.grid_points = a.grid;
    const std::vector<Point> pts = sampler_grid(space, sampler);
    std::vector<std::string> labels;
    std::vector<double> d;
    for (const Point& p : pts) labels.push_back(space.describe(p));
    for (const Point& x : pts) {
      for (const Point& y : pts) d.push_back(space.d(x, y));
    }
    table = FiniteSpace(std::move(labels), std::move(d));
    sampled = true;
  }
  const AxiomReport ax = check_axioms(*table, a.tol);
  std::optional<MetricReport> em;
  if (ax.all_pass()) em = check_e_is_metric(*table, a.tol);
  const bool pass = ax.all_pass() && em && em->all_pass();

  if (sh.json_out) {
    json j;
    j["space"] = space_summary(space);
    j["sampled"] = sampled;
    j["points"] = table->size();
    j["axioms"] = io::to_json(ax);
    j["e_metric"] = em ? io::to_json(*em) : json(nullptr);
    j["pass"] = pass;
    out << io::dump(j);
  } else {
    out << "space: " << space_summary(space);
    if (sampled) out << " (sampled grid of " << table->size() << " points)";
    out << "\n";
    for (const PropertyCheck* c : ax.checks()) print_check(out, *c);
    if (em) {
      out << "e metric: " << (em->all_pass() ? "ok" : "broken");
      for (const PropertyCheck* c : em->checks()) out << "  " << c->name << "=" << (c->pass ? "ok" : "fail");
      out << "\n";
    } else {
      out << "e metric: not checked (axioms fail)\n";
    }
  }
  return pass ? 0 : 1;
}

// ---------------------------------------------------------------------------

struct DeriveArgs {
  std::string space;
  std::string what;
  std::string x;
  std::string y;
};

int cmd_derive(const Shared& sh, const DeriveArgs& a, std::ostream& out) {
  const Space space = load_space(a.space);
  Derived which;
  if (a.what == "b") {
    which = Derived::B;
  } else if (a.what == "c") {
    which = Derived::C;
  } else if (a.what == "e") {
    which = Derived::E;
  } else {
    throw Error(ErrorKind::InvalidArgument, "--what must be b, c or e");
  }
  if (!a.x.empty() || !a.y.empty() || !space.is_finite()) {
    if (a.x.empty() || a.y.empty()) {
      throw Error(ErrorKind::InvalidArgument, "continuous spaces need --x and --y");
    }
    const Point x = io::parse_point(space, a.x);
    const Point y = io::parse_point(space, a.y);
    const double v = derive(space, which, x, y);
    if (sh.json_out) {
      json j;
      j["what"] = a.what;
      j["x"] = io::point_to_json(space, x);
      j["y"] = io::point_to_json(space, y);
      j["value"] = io::number(v);
      out << io::dump(j);
    } else {
      out << a.what << "(" << hp(space, x) << ", " << hp(space, y) << ") = " << h(v) << "\n";
    }
    return 0;
  }
  const FiniteSpace& f = space.finite();
  const std::vector<double> t = derive_table(f, which);
  const std::size_t n = f.size();
  if (sh.json_out) {
    json rows = json::array();
    for (std::size_t i = 0; i < n; ++i) {
      json row = json::array();
      for (std::size_t k = 0; k < n; ++k) row.push_back(io::number(t[i * n + k]));
      rows.push_back(row);
    }
    json j;
    j["what"] = a.what;
    j["labels"] = f.labels();
    j["table"] = rows;
    out << io::dump(j);
    return 0;
  }
  out << a.what;
  for (std::size_t k = 0; k < n; ++k) out << "\t" << f.label(k);
  out << "\n";
  for (std::size_t i = 0; i < n; ++i) {
    out << f.label(i);
    for (std::size_t k = 0; k < n; ++k) out << "\t" << h(t[i * n + k]);
    out << "\n";
  }
  return 0;
}

// ---------------------------------------------------------------------------

struct ContractArgs {
  std::string space;
  std::string map;
  std::string gauge;
  std::string g = "c";
  double tol = kDefaultTol;
  std::size_t pairs = 10000;
  std::size_t grid = 64;
  std::uint64_t seed = 0;
};

int cmd_contract(const Shared& sh, const ContractArgs& a, std::ostream& out) {
  const Space space = load_space(a.space);
  const SelfMap T = load_map(space, a.map);
  const Gauge gauge = Gauge::from_spec(a.gauge);
  ContractionOptions opt;
  opt.tol = a.tol;
  opt.sampler.random_pairs = a.pairs;
  opt.sampler.grid_points = a.grid;
  opt.sampler.seed = a.seed;
  const ContractionReport r = verify_contractive(space, T, gauge, parse_g(a.g), opt);
  if (sh.json_out) {
    out << io::dump(io::to_json(space, r));
  } else {
    out << mark(r.pass) << " contractive g=" << to_string(r.g) << " gauge=" << r.gauge << " ("
        << r.checked << (r.sampled ? " sampled" : "") << " pairs)\n";
    out << "worst margin " << h(r.worst_margin) << " at x=" << hp(space, r.witness_x)
        << " y=" << hp(space, r.witness_y) << ": d(Tx,Ty)=" << h(r.witness_lhs)
        << " phi(M3)=" << h(r.witness_phi) << " g=" << h(r.witness_g) << "\n";
    out << "branches: phi " << r.phi_branch << ", g " << r.g_branch << "\n";
  }
  return r.pass ? 0 : 1;
}

// ---------------------------------------------------------------------------

struct SolveArgs {
  std::string space;
  std::string map;
  std::string gauge;
  std::string x0;
  int theorem = 1;
  double tol = kDefaultTol;
  std::size_t max_iter = 1'000'000;
  std::uint64_t seed = 0;
  std::string trace;
};

void print_structure(std::ostream& out, const FiniteSpace& f, const FixedStructure& fs) {
  auto list = [&](const std::vector<std::size_t>& v) {
    std::string s = "{";
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + f.label(v[i]);
    return s + "}";
  };
  out << "Fix(T;d) = " << list(fs.d_fixed) << "\n";
  out << "theta = " << (fs.theta ? h(*fs.theta) : std::string("undefined")) << "\n";
  out << "X(T;d) = " << list(fs.x_set) << "\n";
  out << "Fix(T) = " << list(fs.fixed) << "\n";
}

int cmd_solve(const Shared& sh, const SolveArgs& a, std::ostream& out) {
  const Space space = load_space(a.space);
  const SelfMap T = load_map(space, a.map);
  const Gauge gauge = Gauge::from_spec(a.gauge);
  SolveOptions opt;
  opt.tol = a.tol;
  opt.orbit.max_iter = a.max_iter;
  opt.sampler.seed = a.seed;
  std::optional<Point> x0;
  if (!a.x0.empty()) x0 = io::parse_point(space, a.x0);
  SolveResult r;
  if (a.theorem == 1) {
    if (!x0) throw Error(ErrorKind::InvalidArgument, "--theorem 1 needs --x0");
    r = solve_theorem1(space, T, gauge, *x0, opt);
  } else if (a.theorem == 2) {
    r = solve_theorem2(space, T, gauge, x0, opt);
  } else {
    throw Error(ErrorKind::InvalidArgument, "--theorem must be 1 or 2");
  }
  if (!a.trace.empty() && !r.traces.empty()) {
    io::write_text_file(a.trace, io::orbit_csv(space, r.traces.front()));
  }
  if (sh.json_out) {
    json j = io::to_json(space, r);
    j["trace"] = a.trace.empty() || r.traces.empty() ? json(nullptr) : json(a.trace);
    out << io::dump(j);
    return r.ok() ? 0 : 1;
  }
  out << "status: " << to_string(r.status) << "\n";
  if (!r.failed_hypothesis.empty()) out << "failed hypothesis: " << r.failed_hypothesis << "\n";
  if (!r.detail.empty()) out << "detail: " << r.detail << "\n";
  for (const HypothesisEntry& e : r.hypotheses) {
    out << "  " << to_string(e.state) << " " << e.name;
    if (!e.detail.empty()) out << "  (" << e.detail << ")";
    out << "\n";
  }
  if (r.certificate) {
    const Certificate& c = *r.certificate;
    out << "certificate: " << to_string(c.kind) << " at " << hp(space, c.point) << "\n";
    out << "  d(x*,x*) = " << h(c.self_distance) << "  d(x*,Tx*) = " << h(c.displacement)
        << "  e(x*,Tx*) = " << h(c.e_residual) << "\n";
    if (c.structure && space.is_finite()) print_structure(out, space.finite(), *c.structure);
  }
  for (std::size_t i = 0; i < r.traces.size(); ++i) {
    const OrbitTrace& t = r.traces[i];
    out << "orbit " << hp(space, t.points.front()) << ": " << t.steps() << " steps, "
        << to_string(t.stop_reason) << ", limit " << hp(space, t.last()) << ", gamma "
        << h(t.gamma_estimate);
    if (i < r.conclusions.size() && !r.conclusions[i].all_pass()) {
      out << ", conclusion failed: " << r.conclusions[i].first_failure;
    }
    out << "\n";
  }
  if (!a.trace.empty() && !r.traces.empty()) out << "trace: " << a.trace << "\n";
  return r.ok() ? 0 : 1;
}

// ---------------------------------------------------------------------------

struct FixedArgs {
  std::string space;
  std::string map;
  double tol = kDefaultTol;
};

int cmd_fixed(const Shared& sh, const FixedArgs& a, std::ostream& out) {
  const Space space = load_space(a.space);
  if (!space.is_finite()) {
    throw Error(ErrorKind::InvalidArgument, "fixed-points enumerates finite spaces only");
  }
  const SelfMap T = load_map(space, a.map);
  const FixedStructure fs = enumerate_fixed_structure(space.finite(), T, a.tol);
  if (sh.json_out) {
    out << io::dump(io::to_json(space.finite(), fs));
  } else {
    print_structure(out, space.finite(), fs);
    out << "X(T;d) subset of Fix(T): " << (fs.x_subset_fixed ? "yes" : "no") << "\n";
  }
  return 0;
}

// ---------------------------------------------------------------------------

struct AnalyzeArgs {
  std::string seq;
  std::string space;
  std::string mode;
  std::string x;
  double eps = 0.1;
  double tol = 1e-9;
  std::size_t window = 64;
  std::optional<double> gamma;
  std::size_t k = 0;
};

int cmd_analyze(const Shared& sh, const AnalyzeArgs& a, std::ostream& out) {
  const Space space = load_space(a.space);
  const std::vector<Point> xs = io::read_sequence_csv(space, io::read_text_file(a.seq));
  auto need_x = [&]() {
    if (a.x.empty()) throw Error(ErrorKind::InvalidArgument, "--mode " + a.mode + " needs --x");
    return io::parse_point(space, a.x);
  };
  json j;
  std::string text;
  int code = 0;
  if (a.mode == "dconv") {
    const DConvergence r = diagnose_d_convergence(space, xs, need_x(), a.tol, a.window);
    j = io::to_json(r);
    text = std::string("d-convergence: ") + (r.verdict ? "yes" : "no") + "  worst " + h(r.worst) + "\n";
  } else if (a.mode == "econv") {
    const EConvergence r = diagnose_e_convergence(space, xs, need_x(), a.tol, a.window);
    j = io::to_json(r);
    text = std::string("e-convergence: ") + (r.verdict ? "yes" : "no") + "  max e " + h(r.max_e) +
           "\ndouble limit: " + (r.double_limit ? "yes" : "no") + "  dev x " + h(r.max_dev_x) +
           "  dev delta " + h(r.max_dev_delta) + "\n";
    if (!r.agree) text += r.ambiguous ? "characterisations differ inside the tolerance band\n"
                                      : "characterisations disagree\n";
    if (!r.agree && !r.ambiguous) code = 1;
  } else if (a.mode == "ecauchy") {
    const ECauchy r = diagnose_e_cauchy(space, xs, a.tol, a.window);
    j = io::to_json(r);
    text = std::string("e-Cauchy: ") + (r.verdict ? "yes" : "no") + "  spread " + h(r.spread) +
           "  gamma " + h(r.gamma) + "\ne side: " + (r.e_side ? "yes" : "no") + "  max e " +
           h(r.max_e) + "\n";
    if (!r.agree) text += r.ambiguous ? "characterisations differ inside the tolerance band\n"
                                      : "characterisations disagree\n";
    if (!r.agree && !r.ambiguous) code = 1;
  } else if (a.mode == "semicauchy") {
    const SemiCauchy r = diagnose_semi_cauchy(space, xs, a.tol, a.window);
    j = io::to_json(r);
    text = std::string("e-semi-Cauchy: ") + (r.verdict ? "yes" : "no") + "  gamma " + h(r.gamma) +
           "  alpha dev " + h(r.alpha_dev) + "  rho dev " + h(r.rho_dev) + "  monotone from " +
           std::to_string(r.monotone_from) + "\n";
  } else if (a.mode == "ranks") {
    const double gamma = a.gamma ? *a.gamma : diagnose_semi_cauchy(space, xs, a.tol, a.window).gamma;
    const RankReport r = extract_violation_ranks(space, xs, gamma, a.eps, a.k);
    j = io::to_json(r);
    j["gamma"] = io::number(gamma);
    j["eps"] = io::number(a.eps);
    text = "gamma " + h(gamma) + "  eps " + h(a.eps) + "\n";
    text += std::string("violation: ") + (r.found ? "found" : "none in prefix") + "\n";
    text += "j(eps): " + (r.j_eps ? std::to_string(*r.j_eps) : std::string("not reached")) + "\n";
    text += "pairs: " + std::to_string(r.pairs.size());
    if (!r.pairs.empty()) {
      const RankPair& p = r.pairs.front();
      text += "  first (j,m,n) = (" + std::to_string(p.j) + "," + std::to_string(p.m) + "," +
              std::to_string(p.n) + ") d = " + h(p.value);
    }
    text += "\n";
    text += std::string("gap rule: ") + mark(r.gap_rule) + " (" + std::to_string(r.gap_checked) + " ranks)\n";
    if (!r.gap_rule) code = 1;
  } else {
    throw Error(ErrorKind::InvalidArgument, "--mode must be dconv, econv, ecauchy, semicauchy or ranks");
  }
  if (sh.json_out) {
    out << io::dump(j);
  } else {
    out << "terms: " << xs.size() << "\n" << text;
  }
  return code;
}

// ---------------------------------------------------------------------------

struct SearchArgs {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> threads;
  std::string replay_dir;
};

int cmd_search(const Shared& sh, const SearchArgs& a, std::ostream& out) {
  json cfg = io::read_json_file(a.config);
  if (a.seed) {
    if (!cfg.is_object()) throw Error(ErrorKind::ParseError, "campaign config must be a JSON object");
    cfg["seed"] = *a.seed;
  }
  CampaignConfig c = io::campaign_from_json(cfg);
  if (a.threads) c.threads = *a.threads;
  c.validate();
  const SearchReport r = run_campaign(c);
  std::vector<std::string> replays;
  if (!a.replay_dir.empty()) {
    std::filesystem::create_directories(a.replay_dir);
    for (const Violation& v : r.violations) {
      const std::string path =
          (std::filesystem::path(a.replay_dir) / ("trial-" + std::to_string(v.index) + ".json")).string();
      io::write_text_file(path, io::dump(io::trial_spec_to_json(v.spec)));
      replays.push_back(path);
    }
  }
  if (sh.json_out) {
    json j = io::to_json(r);
    j["replay_files"] = replays;
    out << io::dump(j);
  } else {
    out << "trials: " << r.trials << "\n";
    out << "hypotheses passed: " << r.hypotheses_passed << "\n";
    out << "passes: " << r.passes << "\n";
    out << "violations: " << r.violations.size() << "\n";
    for (const auto& [name, count] : r.failures_by_hypothesis) {
      if (count) out << "  failed " << name << ": " << count << "\n";
    }
    out << "Fix(T) singleton: " << r.fixed_singleton << "  X(T;d) = Fix(T): " << r.x_equals_fixed
        << "  X(T;d) nonempty: " << r.x_nonempty << "\n";
    out << "assertions: " << r.assertions << "\n";
    if (r.ablation) {
      out << "ablation " << *r.ablation << ": failed in " << r.ablated_failed << " trials, "
          << r.ablated_failed_violations << " of them violating\n";
    }
    for (const Violation& v : r.violations) {
      out << "violation in trial " << v.index << " (seed " << v.spec.seed << "): "
          << v.outcome.violation << "  " << v.outcome.witness << "\n";
    }
    for (const std::string& p : replays) out << "replay: " << p << "\n";
  }
  return r.violations.empty() ? 0 : 1;
}

struct TrialArgs {
  std::string spec;
};

int cmd_trial(const Shared& sh, const TrialArgs& a, std::ostream& out) {
  const TrialSpec spec = io::trial_spec_from_json(io::read_json_file(a.spec));
  const TrialOutcome o = run_trial(spec);
  if (sh.json_out) {
    out << io::dump(io::to_json(o));
  } else {
    out << "outcome: " << to_string(o.status) << "\n";
    out << "gauge: " << o.gauge << "\n";
    if (!o.failed_hypothesis.empty()) out << "failed hypothesis: " << o.failed_hypothesis << "\n";
    if (!o.violation.empty()) out << "violation: " << o.violation << "  " << o.witness << "\n";
    out << "|Fix(T;d)| = " << o.d_fixed << "  |Fix(T)| = " << o.fixed << "  |X(T;d)| = " << o.x_size
        << "\n";
  }
  return o.status == TrialStatus::Violation ? 1 : 0;
}

// ---------------------------------------------------------------------------

struct ClassifyArgs {
  std::string gauge;
};

int cmd_classify(const Shared& sh, const ClassifyArgs& a, std::ostream& out) {
  const GaugeClassification c = classify(Gauge::from_spec(a.gauge));
  if (sh.json_out) {
    out << io::dump(io::to_json(c));
  } else {
    out << "gauge: " << c.gauge << (c.grid_certified ? "" : "  (grid not certified)") << "\n";
    for (const ClassVerdict* v : c.verdicts()) {
      out << mark(v->pass) << " " << v->name << "  margin " << hl(v->margin)
          << " at " << h(v->witness);
      if (v->analytic) out << "  (closed form: " << (*v->analytic ? "holds" : "fails") << ")";
      out << "\n";
    }
    out << "sup Psi = " << hl(c.psi_sup) << "\n";
  }
  return 0;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Partial metric spaces and their fixed points", "pmfix"};
  app.require_subcommand(1);
  Shared sh;
  app.add_flag("--json", sh.json_out, "Emit the report as JSON");
  int code = 0;

  VerifyArgs va;
  auto* verify = app.add_subcommand("verify", "Check the partial metric axioms and the induced metric");
  verify->add_option("space", va.space)->required();
  verify->add_option("--tol", va.tol);
  verify->add_option("--grid", va.grid, "Grid size for continuous spaces");
  verify->callback([&] { code = cmd_verify(sh, va, out); });

  DeriveArgs da;
  auto* der = app.add_subcommand("derive", "Tabulate b, c or e");
  der->add_option("space", da.space)->required();
  der->add_option("--what", da.what)->required();
  der->add_option("--x", da.x);
  der->add_option("--y", da.y);
  der->callback([&] { code = cmd_derive(sh, da, out); });

  ContractArgs ca;
  auto* con = app.add_subcommand("contract", "Check d(Tx,Ty) <= max{phi(M(x,y)), g(x,y)}");
  con->add_option("space", ca.space)->required();
  con->add_option("map", ca.map)->required();
  con->add_option("--gauge", ca.gauge)->required();
  con->add_option("--g", ca.g);
  con->add_option("--tol", ca.tol);
  con->add_option("--pairs", ca.pairs, "Random pairs on continuous spaces");
  con->add_option("--grid", ca.grid, "Grid points on continuous spaces");
  con->add_option("--seed", ca.seed);
  con->callback([&] { code = cmd_contract(sh, ca, out); });

  SolveArgs sa;
  auto* sol = app.add_subcommand("solve", "Run Picard iteration and certify the limit");
  sol->add_option("space", sa.space)->required();
  sol->add_option("map", sa.map)->required();
  sol->add_option("--gauge", sa.gauge)->required();
  sol->add_option("--x0", sa.x0);
  sol->add_option("--theorem", sa.theorem);
  sol->add_option("--tol", sa.tol);
  sol->add_option("--max-iter", sa.max_iter);
  sol->add_option("--seed", sa.seed);
  sol->add_option("--trace", sa.trace, "Write the first orbit as CSV");
  sol->callback([&] { code = cmd_solve(sh, sa, out); });

  FixedArgs fa;
  auto* fix = app.add_subcommand("fixed-points", "Enumerate Fix(T;d), theta, X(T;d) and Fix(T)");
  fix->add_option("space", fa.space)->required();
  fix->add_option("map", fa.map)->required();
  fix->add_option("--tol", fa.tol);
  fix->callback([&] { code = cmd_fixed(sh, fa, out); });

  AnalyzeArgs aa;
  auto* ana = app.add_subcommand("analyze", "Diagnose a sequence prefix");
  ana->add_option("seq", aa.seq)->required();
  ana->add_option("--space", aa.space)->required();
  ana->add_option("--mode", aa.mode)->required();
  ana->add_option("--x", aa.x);
  ana->add_option("--eps", aa.eps);
  ana->add_option("--tol", aa.tol);
  ana->add_option("--window", aa.window);
  ana->add_option("--gamma", aa.gamma);
  ana->add_option("--k", aa.k);
  ana->callback([&] { code = cmd_analyze(sh, aa, out); });

  SearchArgs ra;
  auto* sea = app.add_subcommand("search", "Run a seeded validation campaign");
  sea->add_option("--config", ra.config)->required();
  sea->add_option("--seed", ra.seed, "Overrides the config seed");
  sea->add_option("--threads", ra.threads);
  sea->add_option("--replay-dir", ra.replay_dir, "Write each violating trial here");
  sea->callback([&] { code = cmd_search(sh, ra, out); });

  TrialArgs ta;
  auto* tri = app.add_subcommand("trial", "Replay one trial spec");
  tri->add_option("spec", ta.spec)->required();
  tri->callback([&] { code = cmd_trial(sh, ta, out); });

  ClassifyArgs ka;
  auto* cla = app.add_subcommand("classify", "Classify a gauge on the default grid");
  cla->add_option("--gauge", ka.gauge)->required();
  cla->callback([&] { code = cmd_classify(sh, ka, out); });

  for (CLI::App* sub : app.get_subcommands({})) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    const auto subs = app.get_subcommands();
    out << (subs.empty() ? app.help() : subs.front()->help());
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: Usage: " << one_line(e.what()) << "\n";
    return 2;
  } catch (const Error& e) {
    err << "error: " << to_string(e.kind()) << ": " << one_line(e.what()) << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: Internal: " << one_line(e.what()) << "\n";
    return 2;
  }
  return code;
}

}  // namespace pmfix
