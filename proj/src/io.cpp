#include "pmfix/io.hpp"

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "format.hpp"
#include "pmfix/error.hpp"

namespace pmfix::io {

namespace {

[[noreturn]] void parse_error(const std::string& what) { throw Error(ErrorKind::ParseError, what); }

void check_keys(const json& j, std::initializer_list<const char*> allowed, const std::string& ctx) {
  if (!j.is_object()) parse_error(ctx + " must be a JSON object");
  for (const auto& [key, _] : j.items()) {
    bool ok = false;
    for (const char* a : allowed) ok = ok || key == a;
    if (!ok) parse_error(ctx + ": unknown key '" + key + "'");
  }
}

double get_real(const json& j, const std::string& ctx) {
  if (!j.is_number()) parse_error(ctx + " must be a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) parse_error(ctx + " must be finite");
  return v;
}

std::size_t get_index(const json& j, const std::string& ctx) {
  if (j.is_number_unsigned()) return j.get<std::size_t>();
  if (j.is_number_integer() && j.get<std::int64_t>() >= 0) return j.get<std::size_t>();
  parse_error(ctx + " must be a non-negative integer");
}

std::uint64_t get_u64(const json& j, const std::string& ctx) {
  if (j.is_number_unsigned()) return j.get<std::uint64_t>();
  if (j.is_number_integer() && j.get<std::int64_t>() >= 0) return j.get<std::uint64_t>();
  parse_error(ctx + " must be a non-negative integer");
}

std::string get_string(const json& j, const std::string& ctx) {
  if (!j.is_string()) parse_error(ctx + " must be a string");
  return j.get<std::string>();
}

bool get_bool(const json& j, const std::string& ctx) {
  if (!j.is_boolean()) parse_error(ctx + " must be true or false");
  return j.get<bool>();
}

std::vector<double> get_reals(const json& j, const std::string& ctx) {
  if (!j.is_array()) parse_error(ctx + " must be an array");
  std::vector<double> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(get_real(j[i], ctx + "[" + std::to_string(i) + "]"));
  return out;
}

Interval get_region(const json& j) {
  const std::vector<double> r = get_reals(j, "params.region");
  if (r.size() != 2 || r[0] > r[1]) parse_error("params.region must be [lo, hi] with lo <= hi");
  return {r[0], r[1]};
}

json labels_of(const FiniteSpace& s, const std::vector<std::size_t>& idx) {
  json a = json::array();
  for (const std::size_t i : idx) a.push_back(s.label(i));
  return a;
}

std::vector<std::size_t> indices_of(const FiniteSpace& s, const json& j, const std::string& ctx) {
  if (!j.is_array()) parse_error(ctx + " must be an array");
  std::vector<std::size_t> out;
  for (const auto& v : j) out.push_back(s.index_of(get_string(v, ctx)));
  return out;
}

}  // namespace

json parse_json(const std::string& text, const std::string& origin) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    parse_error(origin + ": " + e.what());
  }
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) parse_error("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json read_json_file(const std::string& path) { return parse_json(read_text_file(path), path); }

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::InvalidArgument, "cannot write '" + path + "'");
  out << text;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

json number(double v) {
  if (!std::isfinite(v)) return nullptr;
  return v == 0.0 ? json(0.0) : json(v);
}

// ---------------------------------------------------------------------------
// Spaces and maps

Space space_from_json(const json& j) {
  if (!j.is_object()) parse_error("space must be a JSON object");
  if (j.contains("d")) {
    check_keys(j, {"labels", "d"}, "space");
    const json& d = j["d"];
    if (!d.is_array()) parse_error("space.d must be an array of rows");
    std::vector<std::vector<double>> rows;
    for (std::size_t i = 0; i < d.size(); ++i) rows.push_back(get_reals(d[i], "space.d[" + std::to_string(i) + "]"));
    if (!j.contains("labels")) return Space(FiniteSpace::from_rows(rows));
    const json& l = j["labels"];
    if (!l.is_array()) parse_error("space.labels must be an array");
    std::vector<std::string> labels;
    for (const auto& v : l) labels.push_back(get_string(v, "space.labels[]"));
    return Space(FiniteSpace::from_rows(std::move(labels), rows));
  }
  if (!j.contains("family")) parse_error("space needs either \"d\" or \"family\"");
  check_keys(j, {"family", "params"}, "space");
  const std::string family = get_string(j["family"], "space.family");
  const json params = j.value("params", json::object());
  std::optional<Interval> region;
  if (params.contains("region")) region = get_region(params["region"]);
  if (family == "max_on_rplus") {
    check_keys(params, {"region"}, "space.params");
    if (region && region->lo < 0.0) parse_error("max_on_rplus region must lie in [0, inf)");
    return Space(ContinuousSpace::max_on_rplus(region));
  }
  if (family == "intervals") {
    check_keys(params, {"region"}, "space.params");
    return Space(ContinuousSpace::intervals(region));
  }
  if (family == "weighted") {
    check_keys(params, {"region", "knots", "weights"}, "space.params");
    std::vector<double> knots = params.contains("knots") ? get_reals(params["knots"], "params.knots") : std::vector<double>{};
    std::vector<double> weights = params.contains("weights") ? get_reals(params["weights"], "params.weights") : std::vector<double>{};
    return Space(ContinuousSpace::weighted(std::move(knots), std::move(weights), region));
  }
  parse_error("unknown space family '" + family + "'");
}

json space_to_json(const Space& space) {
  json j;
  if (space.is_finite()) {
    const FiniteSpace& f = space.finite();
    j["labels"] = f.labels();
    json rows = json::array();
    for (std::size_t i = 0; i < f.size(); ++i) {
      json row = json::array();
      for (const double v : f.row(i)) row.push_back(v);
      rows.push_back(row);
    }
    j["d"] = rows;
    return j;
  }
  const ContinuousSpace& c = space.continuous();
  j["family"] = to_string(c.family());
  json params = json::object();
  if (c.region()) params["region"] = {c.region()->lo, c.region()->hi};
  if (c.family() == Family::WeightedMetric) {
    params["knots"] = c.knots();
    params["weights"] = c.weights();
  }
  j["params"] = params;
  return j;
}

SelfMap map_from_json(const json& j) {
  if (!j.is_object()) parse_error("map must be a JSON object");
  if (j.contains("table")) {
    check_keys(j, {"table"}, "map");
    if (!j["table"].is_array()) parse_error("map.table must be an array");
    std::vector<std::size_t> t;
    for (const auto& v : j["table"]) t.push_back(get_index(v, "map.table[]"));
    return SelfMap::table(std::move(t));
  }
  if (j.contains("expr")) {
    check_keys(j, {"expr"}, "map");
    return SelfMap::expression(Expression::parse(get_string(j["expr"], "map.expr"), "x"));
  }
  if (!j.contains("family")) parse_error("map needs \"table\", \"family\" or \"expr\"");
  check_keys(j, {"family", "params"}, "map");
  const std::string family = get_string(j["family"], "map.family");
  const json params = j.value("params", json::object());
  if (family == "halving") {
    check_keys(params, {}, "map.params");
    return SelfMap::halving();
  }
  if (family == "affine") {
    check_keys(params, {"a", "b"}, "map.params");
    if (!params.contains("a") || !params.contains("b")) parse_error("affine map needs params.a and params.b");
    return SelfMap::affine(get_real(params["a"], "map.params.a"), get_real(params["b"], "map.params.b"));
  }
  parse_error("unknown map family '" + family + "'");
}

json map_to_json(const SelfMap& map) {
  json j;
  switch (map.kind()) {
    case SelfMap::Kind::Table: j["table"] = map.targets(); break;
    case SelfMap::Kind::Halving: j["family"] = "halving"; break;
    case SelfMap::Kind::Affine:
      j["family"] = "affine";
      j["params"] = {{"a", map.a()}, {"b", map.b()}};
      break;
    case SelfMap::Kind::Expr: j["expr"] = map.expr()->source(); break;
  }
  return j;
}

// ---------------------------------------------------------------------------
// Points

namespace {

bool parse_double(const std::string& text, double& out) {
  const char* s = text.c_str();
  char* end = nullptr;
  errno = 0;
  out = std::strtod(s, &end);
  if (end == s || errno == ERANGE) return false;
  while (*end == ' ' || *end == '\t') ++end;
  return *end == '\0' && std::isfinite(out);
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

}  // namespace

Point parse_point(const Space& space, const std::string& raw) {
  const std::string text = trim(raw);
  if (space.is_finite()) {
    const FiniteSpace& f = space.finite();
    for (std::size_t i = 0; i < f.size(); ++i) {
      if (f.label(i) == text) return i;
    }
    if (!text.empty() && text.find_first_not_of("0123456789") == std::string::npos) {
      const std::size_t i = std::stoul(text);
      if (i < f.size()) return i;
    }
    throw Error(ErrorKind::UnknownPoint, "no point '" + text + "' in this space");
  }
  Point p;
  if (space.continuous().family() == Family::Intervals) {
    std::string body = text;
    char sep = ':';
    if (body.size() >= 2 && body.front() == '[' && body.back() == ']') {
      body = body.substr(1, body.size() - 2);
      sep = ',';
    }
    const auto cut = body.find(sep);
    double lo = 0.0;
    double hi = 0.0;
    if (cut == std::string::npos || !parse_double(trim(body.substr(0, cut)), lo) ||
        !parse_double(trim(body.substr(cut + 1)), hi)) {
      throw Error(ErrorKind::UnknownPoint, "'" + text + "' is not an interval [a, b]");
    }
    p = Interval{lo, hi};
  } else {
    double x = 0.0;
    if (!parse_double(text, x)) throw Error(ErrorKind::UnknownPoint, "'" + text + "' is not a real number");
    p = x;
  }
  space.validate(p);
  return p;
}

json point_to_json(const Space& space, const Point& p) {
  if (space.is_finite()) return space.describe(p);
  if (const auto* iv = std::get_if<Interval>(&p)) return json::array({iv->lo, iv->hi});
  return std::get<double>(p);
}

Point point_from_json(const Space& space, const json& j) {
  if (space.is_finite()) return space.finite().index_of(get_string(j, "point"));
  Point p;
  if (j.is_array()) {
    const std::vector<double> v = get_reals(j, "point");
    if (v.size() != 2) parse_error("interval points are [a, b]");
    p = Interval{v[0], v[1]};
  } else {
    p = get_real(j, "point");
  }
  space.validate(p);
  return p;
}

// ---------------------------------------------------------------------------
// Reports

json to_json(const PropertyCheck& c) {
  json w = json::array();
  for (std::size_t i = 0; i < c.arity; ++i) w.push_back(c.witness[i]);
  return {{"name", c.name}, {"pass", c.pass}, {"margin", number(c.margin)}, {"witness", w}};
}

json to_json(const AxiomReport& r) {
  json checks = json::array();
  for (const PropertyCheck* c : r.checks()) checks.push_back(to_json(*c));
  return {{"pass", r.all_pass()}, {"checks", checks}};
}

json to_json(const MetricReport& r) {
  json checks = json::array();
  for (const PropertyCheck* c : r.checks()) checks.push_back(to_json(*c));
  return {{"pass", r.all_pass()}, {"checks", checks}};
}

json to_json(const Space& space, const ContractionReport& r) {
  json j;
  j["pass"] = r.pass;
  j["sampled"] = r.sampled;
  j["g"] = to_string(r.g);
  j["gauge"] = r.gauge;
  j["checked"] = r.checked;
  j["worst_margin"] = number(r.worst_margin);
  j["witness"] = {{"x", point_to_json(space, r.witness_x)},
                  {"y", point_to_json(space, r.witness_y)},
                  {"lhs", number(r.witness_lhs)},
                  {"phi", number(r.witness_phi)},
                  {"g", number(r.witness_g)}};
  j["branches"] = {{"phi", r.phi_branch}, {"g", r.g_branch}};
  return j;
}

json to_json(const FiniteSpace& space, const FixedStructure& fs) {
  json j;
  j["fix_d"] = labels_of(space, fs.d_fixed);
  j["theta"] = fs.theta ? number(*fs.theta) : json(nullptr);
  j["x_set"] = labels_of(space, fs.x_set);
  j["fix"] = labels_of(space, fs.fixed);
  j["x_subset_fix"] = fs.x_subset_fixed;
  return j;
}

namespace {

json hypotheses_json(const std::vector<HypothesisEntry>& hs) {
  json a = json::array();
  for (const HypothesisEntry& h : hs) {
    a.push_back({{"name", h.name}, {"state", to_string(h.state)}, {"detail", h.detail}});
  }
  return a;
}

HypothesisState state_from_string(const std::string& s) {
  for (const HypothesisState st : {HypothesisState::Verified, HypothesisState::Sampled,
                                   HypothesisState::Assumed, HypothesisState::Failed}) {
    if (s == to_string(st)) return st;
  }
  parse_error("unknown hypothesis state '" + s + "'");
}

CertificateKind kind_from_string(const std::string& s) {
  for (const CertificateKind k : {CertificateKind::DFixedPoint, CertificateKind::TrueFixedPoint,
                                  CertificateKind::Theorem2Unique}) {
    if (s == to_string(k)) return k;
  }
  parse_error("unknown certificate kind '" + s + "'");
}

}  // namespace

json to_json(const Space& space, const Certificate& c) {
  json j;
  j["kind"] = to_string(c.kind);
  j["point"] = point_to_json(space, c.point);
  j["residuals"] = {{"self_distance", number(c.self_distance)},
                    {"displacement", number(c.displacement)},
                    {"e", number(c.e_residual)}};
  j["hypotheses"] = hypotheses_json(c.hypotheses);
  if (c.structure && space.is_finite()) {
    j["structure"] = to_json(space.finite(), *c.structure);
  } else {
    j["structure"] = nullptr;
  }
  return j;
}

Certificate certificate_from_json(const Space& space, const json& j) {
  check_keys(j, {"kind", "point", "residuals", "hypotheses", "structure"}, "certificate");
  Certificate c;
  c.kind = kind_from_string(get_string(j.at("kind"), "certificate.kind"));
  c.point = point_from_json(space, j.at("point"));
  const json& r = j.at("residuals");
  c.self_distance = get_real(r.at("self_distance"), "residuals.self_distance");
  c.displacement = get_real(r.at("displacement"), "residuals.displacement");
  c.e_residual = get_real(r.at("e"), "residuals.e");
  for (const auto& h : j.at("hypotheses")) {
    c.hypotheses.push_back({get_string(h.at("name"), "hypothesis.name"),
                            state_from_string(get_string(h.at("state"), "hypothesis.state")),
                            get_string(h.at("detail"), "hypothesis.detail")});
  }
  if (!j.at("structure").is_null()) {
    if (!space.is_finite()) parse_error("certificate structure needs a finite space");
    const json& s = j.at("structure");
    FixedStructure fs;
    fs.d_fixed = indices_of(space.finite(), s.at("fix_d"), "structure.fix_d");
    if (!s.at("theta").is_null()) fs.theta = get_real(s.at("theta"), "structure.theta");
    fs.x_set = indices_of(space.finite(), s.at("x_set"), "structure.x_set");
    fs.fixed = indices_of(space.finite(), s.at("fix"), "structure.fix");
    fs.x_subset_fixed = get_bool(s.at("x_subset_fix"), "structure.x_subset_fix");
    c.structure = fs;
  }
  return c;
}

json to_json(const Space& space, const SolveResult& r) {
  json j;
  j["status"] = to_string(r.status);
  j["failed_hypothesis"] = r.failed_hypothesis.empty() ? json(nullptr) : json(r.failed_hypothesis);
  j["detail"] = r.detail;
  j["hypotheses"] = hypotheses_json(r.hypotheses);
  j["certificate"] = r.certificate ? to_json(space, *r.certificate) : json(nullptr);
  json orbits = json::array();
  for (std::size_t i = 0; i < r.traces.size(); ++i) {
    const OrbitTrace& t = r.traces[i];
    json o;
    o["start"] = point_to_json(space, t.points.front());
    o["steps"] = t.steps();
    o["stop_reason"] = to_string(t.stop_reason);
    o["limit"] = point_to_json(space, t.last());
    o["gamma"] = number(t.gamma_estimate);
    o["e_residual"] = number(t.e_residual);
    if (i < r.conclusions.size()) {
      const ConclusionReport& c = r.conclusions[i];
      o["conclusions"] = {{"rho_descending", c.rho_descending},
                          {"alpha_below_rho", c.alpha_below_rho},
                          {"alpha_to_gamma", c.alpha_to_gamma},
                          {"delta_to_gamma", c.delta_to_gamma},
                          {"settle_index", c.settle_index}};
    }
    orbits.push_back(o);
  }
  j["orbits"] = orbits;
  return j;
}

namespace {

json verdict_json(const ClassVerdict& v) {
  json j;
  j["name"] = v.name;
  j["pass"] = v.pass;
  j["witness"] = number(v.witness);
  j["margin"] = number(static_cast<double>(v.margin));
  j["checked"] = v.checked;
  j["analytic"] = v.analytic ? json(*v.analytic) : json(nullptr);
  return j;
}

}  // namespace

json to_json(const GaugeClassification& c) {
  json classes = json::array();
  for (const ClassVerdict* v : c.verdicts()) classes.push_back(verdict_json(*v));
  json trace = json::array();
  for (std::size_t i = 0; i < c.alphas.size(); ++i) {
    trace.push_back({{"alpha", number(c.alphas[i])}, {"psi", number(static_cast<double>(c.psi_trace[i]))}});
  }
  return {{"gauge", c.gauge},
          {"grid_certified", c.grid_certified},
          {"classes", classes},
          {"psi_sup", number(static_cast<double>(c.psi_sup))},
          {"psi_trace", trace}};
}

json to_json(const DConvergence& r) {
  return {{"mode", "dconv"}, {"verdict", r.verdict}, {"worst", number(r.worst)}, {"window", r.window}};
}

json to_json(const EConvergence& r) {
  return {{"mode", "econv"},
          {"verdict", r.verdict},
          {"double_limit", r.double_limit},
          {"agree", r.agree},
          {"ambiguous", r.ambiguous},
          {"max_e", number(r.max_e)},
          {"max_dev_x", number(r.max_dev_x)},
          {"max_dev_delta", number(r.max_dev_delta)},
          {"window", r.window}};
}

json to_json(const ECauchy& r) {
  return {{"mode", "ecauchy"},
          {"verdict", r.verdict},
          {"e_side", r.e_side},
          {"agree", r.agree},
          {"ambiguous", r.ambiguous},
          {"spread", number(r.spread)},
          {"max_e", number(r.max_e)},
          {"gamma", number(r.gamma)},
          {"window", r.window}};
}

json to_json(const SemiCauchy& r) {
  return {{"mode", "semicauchy"},
          {"verdict", r.verdict},
          {"gamma", number(r.gamma)},
          {"alpha_dev", number(r.alpha_dev)},
          {"rho_dev", number(r.rho_dev)},
          {"monotone_from", r.monotone_from},
          {"window", r.window}};
}

json to_json(const RankReport& r) {
  json pairs = json::array();
  for (const RankPair& p : r.pairs) pairs.push_back({p.j, p.m, p.n, number(p.value)});
  json j;
  j["mode"] = "ranks";
  j["found"] = r.found;
  j["j_eps"] = r.j_eps ? json(*r.j_eps) : json(nullptr);
  j["gap_rule"] = r.gap_rule;
  j["gap_checked"] = r.gap_checked;
  j["descent"] = r.descent;
  j["shifted"] = r.shifted;
  j["tail_checked"] = r.tail_checked;
  j["tail_min"] = r.pairs.empty() ? json(nullptr) : number(r.tail_min);
  j["tail_max"] = r.pairs.empty() ? json(nullptr) : number(r.tail_max);
  j["pairs"] = pairs;
  return j;
}

// ---------------------------------------------------------------------------
// Search

json trial_spec_to_json(const TrialSpec& s) {
  json j;
  j["seed"] = s.seed;
  j["n"] = s.n;
  j["w_max"] = s.w_max;
  j["sampler"] = to_string(s.sampler);
  j["gauge"] = {{"family", s.gauge_family}, {"alpha_lo", s.alpha_lo}, {"alpha_hi", s.alpha_hi}};
  j["g"] = to_string(s.g);
  j["enforce"] = s.enforce;
  j["ablation"] = s.ablation ? json(*s.ablation) : json(nullptr);
  j["space_override"] = s.space_override ? space_to_json(Space(*s.space_override)) : json(nullptr);
  j["map_override"] = s.map_override ? json(*s.map_override) : json(nullptr);
  return j;
}

namespace {

GMap gmap_from_string(const std::string& s) {
  if (s == "b") return GMap::B;
  if (s == "c") return GMap::C;
  parse_error("g must be \"b\" or \"c\"");
}

// Fields shared by trial specs and campaign configs.
void read_trial_fields(const json& j, TrialSpec& s) {
  if (j.contains("seed")) s.seed = get_u64(j["seed"], "seed");
  if (j.contains("n")) s.n = get_index(j["n"], "n");
  if (j.contains("w_max")) s.w_max = get_real(j["w_max"], "w_max");
  if (j.contains("sampler")) s.sampler = map_sampler_from_string(get_string(j["sampler"], "sampler"));
  if (j.contains("gauge")) {
    const json& g = j["gauge"];
    check_keys(g, {"family", "alpha_lo", "alpha_hi"}, "gauge");
    if (g.contains("family")) s.gauge_family = get_string(g["family"], "gauge.family");
    if (g.contains("alpha_lo")) s.alpha_lo = get_real(g["alpha_lo"], "gauge.alpha_lo");
    if (g.contains("alpha_hi")) s.alpha_hi = get_real(g["alpha_hi"], "gauge.alpha_hi");
  }
  if (j.contains("g")) s.g = gmap_from_string(get_string(j["g"], "g"));
  if (j.contains("enforce")) {
    if (!j["enforce"].is_array()) parse_error("enforce must be an array");
    s.enforce.clear();
    for (const auto& h : j["enforce"]) s.enforce.push_back(get_string(h, "enforce[]"));
  }
  if (j.contains("ablation") && !j["ablation"].is_null()) s.ablation = get_string(j["ablation"], "ablation");
  if (j.contains("space_override") && !j["space_override"].is_null()) {
    const Space sp = space_from_json(j["space_override"]);
    if (!sp.is_finite()) parse_error("space_override must be a finite space");
    s.space_override = sp.finite();
  }
  if (j.contains("map_override") && !j["map_override"].is_null()) {
    if (!j["map_override"].is_array()) parse_error("map_override must be an array");
    std::vector<std::size_t> t;
    for (const auto& v : j["map_override"]) t.push_back(get_index(v, "map_override[]"));
    s.map_override = std::move(t);
  }
}

}  // namespace

TrialSpec trial_spec_from_json(const json& j) {
  check_keys(j, {"seed", "n", "w_max", "sampler", "gauge", "g", "enforce", "ablation",
                 "space_override", "map_override"},
             "trial spec");
  if (!j.contains("seed")) parse_error("trial spec needs a seed");
  TrialSpec s;
  read_trial_fields(j, s);
  s.validate();
  return s;
}

json to_json(const TrialOutcome& o) {
  json hyp = json::object();
  for (const auto& [name, pass] : o.hypotheses) hyp[name] = pass;
  json j;
  j["status"] = to_string(o.status);
  j["failed_hypothesis"] = o.failed_hypothesis.empty() ? json(nullptr) : json(o.failed_hypothesis);
  j["violation"] = o.violation.empty() ? json(nullptr) : json(o.violation);
  j["witness"] = o.witness;
  j["gauge"] = o.gauge;
  j["map"] = o.map;
  j["hypotheses"] = hyp;
  j["contractive_b"] = o.contractive_b;
  j["contractive_c"] = o.contractive_c;
  j["fix_d_size"] = o.d_fixed;
  j["fix_size"] = o.fixed;
  j["x_size"] = o.x_size;
  j["x_equals_fix"] = o.x_equals_fixed;
  return j;
}

CampaignConfig campaign_from_json(const json& j) {
  check_keys(j, {"seed", "count", "n_min", "n_max", "threads", "w_max", "sampler", "gauge", "g",
                 "enforce", "ablation", "space_override", "map_override"},
             "campaign config");
  if (!j.contains("seed")) parse_error("campaign config needs a seed (no wall-clock seeding)");
  CampaignConfig c;
  read_trial_fields(j, c.base);
  if (j.contains("count")) c.count = get_index(j["count"], "count");
  if (j.contains("n_min")) c.n_min = get_index(j["n_min"], "n_min");
  if (j.contains("n_max")) c.n_max = get_index(j["n_max"], "n_max");
  if (j.contains("threads")) c.threads = get_index(j["threads"], "threads");
  c.validate();
  return c;
}

json campaign_to_json(const CampaignConfig& c) {
  json j = trial_spec_to_json(c.base);
  j.erase("n");
  j["count"] = c.count;
  j["n_min"] = c.n_min;
  j["n_max"] = c.n_max;
  j["threads"] = c.threads;
  return j;
}

json to_json(const SearchReport& r) {
  json j;
  j["trials"] = r.trials;
  j["hypotheses_passed"] = r.hypotheses_passed;
  j["passes"] = r.passes;
  j["violation_count"] = r.violations.size();
  json fails = json::object();
  for (const auto& [name, count] : r.failures_by_hypothesis) fails[name] = count;
  j["hypothesis_failures"] = fails;
  j["contractive_b"] = r.contractive_b;
  j["contractive_c"] = r.contractive_c;
  j["monotone_filter"] = r.monotone_filter;
  j["fix_singleton"] = r.fixed_singleton;
  j["x_equals_fix"] = r.x_equals_fixed;
  j["x_nonempty"] = r.x_nonempty;
  j["assertions"] = r.assertions;
  j["ablation"] = r.ablation ? json({{"hypothesis", *r.ablation},
                                     {"failed_but_ran", r.ablated_failed},
                                     {"violations_when_failed", r.ablated_failed_violations}})
                             : json(nullptr);
  json viol = json::array();
  for (const Violation& v : r.violations) {
    viol.push_back({{"index", v.index}, {"spec", trial_spec_to_json(v.spec)}, {"outcome", to_json(v.outcome)}});
  }
  j["violations"] = viol;
  return j;
}

// ---------------------------------------------------------------------------
// CSV

std::string orbit_csv(const Space& space, const OrbitTrace& trace) {
  std::string out = "n,x_n,rho_n,alpha_n\n";
  for (std::size_t n = 0; n < trace.points.size(); ++n) {
    std::string x = space.describe(trace.points[n]);
    if (x.find(',') != std::string::npos) x = "\"" + x + "\"";
    out += std::to_string(n) + "," + x + ",";
    if (n < trace.rho.size()) out += format_real(trace.rho[n]);
    out += "," + format_real(trace.alpha[n]) + "\n";
  }
  return out;
}

std::vector<Point> read_sequence_csv(const Space& space, const std::string& text) {
  std::vector<Point> out;
  std::istringstream in(text);
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    if (first && (t == "x" || t == "x_n")) {
      first = false;
      continue;
    }
    first = false;
    if (t.size() >= 2 && t.front() == '"' && t.back() == '"') t = t.substr(1, t.size() - 2);
    out.push_back(parse_point(space, t));
  }
  return out;
}

}  // namespace pmfix::io
