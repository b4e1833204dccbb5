#pragma once

// Self-maps, the comparison quantities M₁, M₂, M₃, and the (M; g; φ)
// contractivity check d(Tx,Ty) ≤ max{φ(M(x,y)), g(x,y)} with M = M₃.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pmfix/expression.hpp"
#include "pmfix/gauge.hpp"
#include "pmfix/space.hpp"

namespace pmfix {

class SelfMap {
 public:
  enum class Kind { Table, Halving, Affine, Expr };

  /// i ↦ targets[i] on a finite space.
  static SelfMap table(std::vector<std::size_t> targets);
  /// x ↦ x/2 (intervals: both endpoints).
  static SelfMap halving();
  /// x ↦ a·x + b (intervals: image of the endpoints, reordered when a < 0).
  static SelfMap affine(double a, double b);
  /// x ↦ expr(x) on real-valued spaces.
  static SelfMap expression(Expression expr);

  Kind kind() const noexcept { return kind_; }
  const std::vector<std::size_t>& targets() const noexcept { return targets_; }
  double a() const noexcept { return a_; }
  double b() const noexcept { return b_; }
  const std::optional<Expression>& expr() const noexcept { return expr_; }
  std::string describe() const;

  /// Throws InvalidArgument if the map is not a total self-map of the space
  /// (table length or range, or a continuous map on a finite space).
  void check_compatible(const Space& space) const;

  /// T(x); throws UnknownPoint when the image leaves the space.
  Point apply(const Space& space, const Point& x) const;

 private:
  explicit SelfMap(Kind kind) : kind_(kind) {}

  Kind kind_;
  std::vector<std::size_t> targets_;
  double a_ = 0.5;
  double b_ = 0.0;
  std::optional<Expression> expr_;
};

struct MQuantities {
  double m1;  // max{d(x,y), d(x,Tx), d(y,Ty)}
  double m2;  // (d(x,Ty) + d(Tx,y)) / 2
  double m3;  // max{M₁, M₂}
};

MQuantities m_quantities(const Space& space, const SelfMap& T, const Point& x, const Point& y);

enum class GMap { B, C };

const char* to_string(GMap g) noexcept;

/// Pair source for continuous spaces: every pair of a deterministic grid over
/// the region plus uniformly drawn pairs.
struct SamplerSpec {
  std::size_t random_pairs = 10000;
  std::size_t grid_points = 64;
  std::uint64_t seed = 0;
  /// Overrides the space's declared region.
  std::optional<Interval> region;
};

/// Deterministic probe points over the region (64 by default).
std::vector<Point> sampler_grid(const Space& space, const SamplerSpec& sampler);

struct ContractionReport {
  bool pass = true;
  bool sampled = false;        // continuous verdicts are sample-based
  GMap g = GMap::C;
  std::string gauge;
  std::size_t checked = 0;
  double worst_margin = 0.0;   // min of max{φ(M₃), g} − d(Tx,Ty)
  Point witness_x = std::size_t{0};
  Point witness_y = std::size_t{0};
  double witness_lhs = 0.0;    // d(Tx,Ty)
  double witness_phi = 0.0;    // φ(M₃(x,y))
  double witness_g = 0.0;      // g(x,y)
  std::size_t phi_branch = 0;  // pairs where φ(M₃) ≥ g
  std::size_t g_branch = 0;    // pairs where g > φ(M₃)
};

struct ContractionOptions {
  double tol = kDefaultTol;
  SamplerSpec sampler{};
  /// Finite spaces: refuse to check maps on tables that fail the axioms.
  bool require_valid_space = true;
};

/// Exhaustive over ordered pairs on finite spaces, sampled on continuous ones.
/// Throws InvalidSpace, or SamplerExhausted when a continuous space has no
/// bounded region to sample.
ContractionReport verify_contractive(const Space& space, const SelfMap& T, const Gauge& gauge,
                                     GMap g, const ContractionOptions& options = {});

struct IdentityCheck {
  bool pass = true;
  double margin = 0.0;  // worst slack (inequalities) or |residual| (equalities)
};

/// Fixed-point identities for z, w ∈ Fix(T;d):
///   d(Tz,Tz) ≤ d(z,z);  d(y,Tz) ≤ d(y,z) ∀y;  e(z,Tz) = d(z,z) − d(Tz,Tz);
///   M₃(z,w) = d(z,w).
struct IdentityReport {
  bool z_d_fixed = false;
  bool w_d_fixed = false;
  /// False when z or w is not d-fixed: the identities are then not asserted.
  bool precondition = false;
  IdentityCheck self_distance_drop;  // d(Tz,Tz) ≤ d(z,z)
  IdentityCheck probe_drop;          // d(y,Tz) ≤ d(y,z)
  Point probe_witness = std::size_t{0};
  IdentityCheck e_displacement;      // e(z,Tz) = d(z,z) − d(Tz,Tz)
  double e_value = 0.0;
  IdentityCheck m_equals_d;          // M₃(z,w) = d(z,w)
  std::size_t probes = 0;
  bool all_pass() const noexcept;
};

/// Probes y range over the whole finite space, or over `probes` plus z, w,
/// Tz, Tw on continuous spaces.
IdentityReport fixed_point_identities(const Space& space, const SelfMap& T, const Point& z,
                                      const Point& w, double tol = kDefaultTol,
                                      std::span<const Point> probes = {});

bool is_d_fixed(const Space& space, const SelfMap& T, const Point& z, double tol);

}  // namespace pmfix
