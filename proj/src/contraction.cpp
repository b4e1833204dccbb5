#include "pmfix/contraction.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "format.hpp"
#include "pmfix/error.hpp"
#include "pmfix/random.hpp"

namespace pmfix {

// ---------------------------------------------------------------------------
// SelfMap

SelfMap SelfMap::table(std::vector<std::size_t> targets) {
  SelfMap m(Kind::Table);
  m.targets_ = std::move(targets);
  return m;
}

SelfMap SelfMap::halving() { return SelfMap(Kind::Halving); }

SelfMap SelfMap::affine(double a, double b) {
  if (!std::isfinite(a) || !std::isfinite(b)) {
    throw Error(ErrorKind::InvalidArgument, "affine map coefficients must be finite");
  }
  SelfMap m(Kind::Affine);
  m.a_ = a;
  m.b_ = b;
  return m;
}

SelfMap SelfMap::expression(Expression expr) {
  if (expr.variable() != "x") {
    throw Error(ErrorKind::InvalidArgument, "map expressions use the variable x");
  }
  SelfMap m(Kind::Expr);
  m.expr_ = std::move(expr);
  return m;
}

std::string SelfMap::describe() const {
  switch (kind_) {
    case Kind::Table: {
      std::string s = "table[";
      for (std::size_t i = 0; i < targets_.size(); ++i) {
        if (i) s += ",";
        s += std::to_string(targets_[i]);
      }
      return s + "]";
    }
    case Kind::Halving: return "halving";
    case Kind::Affine: return "affine(" + format_real(a_) + ", " + format_real(b_) + ")";
    case Kind::Expr: return "expr:" + expr_->source();
  }
  return "?";
}

void SelfMap::check_compatible(const Space& space) const {
  if (space.is_finite()) {
    if (kind_ != Kind::Table) {
      throw Error(ErrorKind::InvalidArgument, "finite spaces need a table map");
    }
    const std::size_t n = space.finite().size();
    if (targets_.size() != n) {
      throw Error(ErrorKind::InvalidArgument, "map table has " + std::to_string(targets_.size()) +
                                                  " entries for " + std::to_string(n) +
                                                  " points");
    }
    for (const std::size_t t : targets_) {
      if (t >= n) throw Error(ErrorKind::InvalidArgument, "map table entry out of range");
    }
    return;
  }
  if (kind_ == Kind::Table) {
    throw Error(ErrorKind::InvalidArgument, "table maps apply to finite spaces only");
  }
  if (kind_ == Kind::Expr && space.continuous().family() == Family::Intervals) {
    throw Error(ErrorKind::InvalidArgument, "expression maps apply to real-valued spaces only");
  }
}

Point SelfMap::apply(const Space& space, const Point& x) const {
  space.validate(x);
  Point out;
  switch (kind_) {
    case Kind::Table: {
      const std::size_t i = std::get<std::size_t>(x);
      if (i >= targets_.size()) throw Error(ErrorKind::UnknownPoint, "map table too short");
      out = targets_[i];
      break;
    }
    case Kind::Halving:
      if (const auto* iv = std::get_if<Interval>(&x)) {
        out = Interval{iv->lo / 2.0, iv->hi / 2.0};
      } else {
        out = std::get<double>(x) / 2.0;
      }
      break;
    case Kind::Affine:
      if (const auto* iv = std::get_if<Interval>(&x)) {
        const double p = a_ * iv->lo + b_;
        const double q = a_ * iv->hi + b_;
        out = Interval{std::min(p, q), std::max(p, q)};
      } else {
        out = a_ * std::get<double>(x) + b_;
      }
      break;
    case Kind::Expr: {
      const double* v = std::get_if<double>(&x);
      if (v == nullptr) throw Error(ErrorKind::UnknownPoint, "expression maps take real points");
      out = static_cast<double>(expr_->evaluate(*v));
      break;
    }
  }
  space.validate(out);
  return out;
}

// ---------------------------------------------------------------------------

MQuantities m_quantities(const Space& space, const SelfMap& T, const Point& x, const Point& y) {
  const Point tx = T.apply(space, x);
  const Point ty = T.apply(space, y);
  MQuantities q{};
  q.m1 = std::max({space.d(x, y), space.d(x, tx), space.d(y, ty)});
  q.m2 = 0.5 * (space.d(x, ty) + space.d(tx, y));
  q.m3 = std::max(q.m1, q.m2);
  return q;
}

const char* to_string(GMap g) noexcept { return g == GMap::B ? "b" : "c"; }

std::vector<Point> sampler_grid(const Space& space, const SamplerSpec& sampler) {
  std::vector<Point> out;
  if (space.is_finite()) {
    for (std::size_t i = 0; i < space.finite().size(); ++i) out.emplace_back(i);
    return out;
  }
  const ContinuousSpace& cs = space.continuous();
  const std::optional<Interval> region = sampler.region ? sampler.region : cs.region();
  if (!region) {
    throw Error(ErrorKind::SamplerExhausted,
                "continuous space has no bounded region to sample; declare params.region");
  }
  if (sampler.grid_points == 0 && sampler.random_pairs == 0) {
    throw Error(ErrorKind::SamplerExhausted, "sampler requests no points");
  }
  const double lo = region->lo;
  const double hi = region->hi;
  const std::size_t k = sampler.grid_points;
  if (cs.family() == Family::Intervals) {
    std::size_t side = 1;
    while (side * (side + 1) / 2 < k) ++side;
    for (std::size_t i = 0; i < side && out.size() < k; ++i) {
      for (std::size_t j = i; j < side && out.size() < k; ++j) {
        const double step = side > 1 ? (hi - lo) / static_cast<double>(side - 1) : 0.0;
        out.emplace_back(Interval{lo + step * static_cast<double>(i),
                                  lo + step * static_cast<double>(j)});
      }
    }
  } else {
    for (std::size_t i = 0; i < k; ++i) {
      const double u = k > 1 ? static_cast<double>(i) / static_cast<double>(k - 1) : 0.0;
      out.emplace_back(lo + (hi - lo) * u);
    }
  }
  for (const Point& p : out) space.validate(p);
  return out;
}

namespace {

Point random_point(const Space& space, const Interval& region, Rng& rng) {
  if (space.continuous().family() == Family::Intervals) {
    const double a = rng.uniform(region.lo, region.hi);
    const double b = rng.uniform(region.lo, region.hi);
    return Interval{std::min(a, b), std::max(a, b)};
  }
  return rng.uniform(region.lo, region.hi);
}

}  // namespace

ContractionReport verify_contractive(const Space& space, const SelfMap& T, const Gauge& gauge,
                                     GMap g, const ContractionOptions& options) {
  T.check_compatible(space);
  if (space.is_finite() && options.require_valid_space &&
      !check_axioms(space.finite(), options.tol).all_pass()) {
    throw Error(ErrorKind::InvalidSpace, "space fails the partial metric axioms");
  }

  ContractionReport r;
  r.g = g;
  r.gauge = gauge.spec();
  r.sampled = !space.is_finite();
  r.worst_margin = std::numeric_limits<double>::infinity();

  auto check_pair = [&](const Point& x, const Point& y) {
    const Point tx = T.apply(space, x);
    const Point ty = T.apply(space, y);
    const double m1 = std::max({space.d(x, y), space.d(x, tx), space.d(y, ty)});
    const double m2 = 0.5 * (space.d(x, ty) + space.d(tx, y));
    const double phi = gauge.eval(std::max(m1, m2));
    const double gv = g == GMap::B ? space.b(x, y) : space.c(x, y);
    const double lhs = space.d(tx, ty);
    const double margin = std::max(phi, gv) - lhs;
    ++r.checked;
    if (phi >= gv) {
      ++r.phi_branch;
    } else {
      ++r.g_branch;
    }
    if (margin < r.worst_margin) {
      r.worst_margin = margin;
      r.witness_x = x;
      r.witness_y = y;
      r.witness_lhs = lhs;
      r.witness_phi = phi;
      r.witness_g = gv;
    }
  };

  const std::vector<Point> grid = sampler_grid(space, options.sampler);
  for (const Point& x : grid) {
    for (const Point& y : grid) check_pair(x, y);
  }
  if (!space.is_finite()) {
    const Interval region =
        options.sampler.region ? *options.sampler.region : *space.continuous().region();
    Rng rng(options.sampler.seed);
    for (std::size_t k = 0; k < options.sampler.random_pairs; ++k) {
      const Point x = random_point(space, region, rng);
      const Point y = random_point(space, region, rng);
      check_pair(x, y);
    }
  }
  if (r.checked == 0) throw Error(ErrorKind::SamplerExhausted, "no pairs were checked");
  r.pass = r.worst_margin >= -options.tol;
  return r;
}

// ---------------------------------------------------------------------------

bool is_d_fixed(const Space& space, const SelfMap& T, const Point& z, double tol) {
  return std::fabs(space.d(z, T.apply(space, z)) - space.d(z, z)) <= tol;
}

bool IdentityReport::all_pass() const noexcept {
  return precondition && self_distance_drop.pass && probe_drop.pass && e_displacement.pass &&
         m_equals_d.pass;
}

IdentityReport fixed_point_identities(const Space& space, const SelfMap& T, const Point& z,
                                      const Point& w, double tol,
                                      std::span<const Point> probes) {
  T.check_compatible(space);
  IdentityReport r;
  r.z_d_fixed = is_d_fixed(space, T, z, tol);
  r.w_d_fixed = is_d_fixed(space, T, w, tol);
  r.precondition = r.z_d_fixed && r.w_d_fixed;
  if (!r.precondition) return r;

  const Point tz = T.apply(space, z);
  const Point tw = T.apply(space, w);

  r.self_distance_drop.margin =
      std::min(space.d(z, z) - space.d(tz, tz), space.d(w, w) - space.d(tw, tw));
  r.self_distance_drop.pass = r.self_distance_drop.margin >= -tol;

  std::vector<Point> ys;
  if (space.is_finite()) {
    for (std::size_t i = 0; i < space.finite().size(); ++i) ys.emplace_back(i);
  } else {
    ys.assign(probes.begin(), probes.end());
    ys.insert(ys.end(), {z, w, tz, tw});
  }
  r.probes = ys.size();
  r.probe_drop.margin = std::numeric_limits<double>::infinity();
  for (const Point& y : ys) {
    const double m = std::min(space.d(y, z) - space.d(y, tz), space.d(y, w) - space.d(y, tw));
    if (m < r.probe_drop.margin) {
      r.probe_drop.margin = m;
      r.probe_witness = y;
    }
  }
  r.probe_drop.pass = r.probe_drop.margin >= -tol;

  r.e_value = space.e(z, tz);
  r.e_displacement.margin =
      std::max(std::fabs(r.e_value - (space.d(z, z) - space.d(tz, tz))),
               std::fabs(space.e(w, tw) - (space.d(w, w) - space.d(tw, tw))));
  r.e_displacement.pass = r.e_displacement.margin <= tol;

  r.m_equals_d.margin = std::fabs(m_quantities(space, T, z, w).m3 - space.d(z, w));
  r.m_equals_d.pass = r.m_equals_d.margin <= tol;
  return r;
}

}  // namespace pmfix
