#pragma once

// Randomised validation of the fixed-point theorems on generated finite
// spaces: draw (space, map, gauge), filter on machine-checked hypotheses,
// then assert the conclusions.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pmfix/contraction.hpp"
#include "pmfix/space.hpp"

namespace pmfix {

enum class MapSampler { Uniform, Biased, ConstantArgminWeight };

const char* to_string(MapSampler s) noexcept;
/// Throws InvalidArgument.
MapSampler map_sampler_from_string(const std::string& s);

/// Hypothesis names in check order.
const std::vector<std::string>& hypothesis_names();

struct TrialSpec {
  std::uint64_t seed = 0;
  std::size_t n = 4;
  double w_max = 2.0;
  MapSampler sampler = MapSampler::Biased;
  std::string gauge_family = "linear";  // linear | rational | expsat
  double alpha_lo = 0.0;                // linear only
  double alpha_hi = 0.9;
  GMap g = GMap::B;
  std::vector<std::string> enforce = hypothesis_names();
  std::optional<std::string> ablation;
  std::optional<FiniteSpace> space_override;
  std::optional<std::vector<std::size_t>> map_override;

  /// Throws InvalidArgument.
  void validate() const;
};

enum class TrialStatus { HypothesesFailed, Pass, Violation };

const char* to_string(TrialStatus s) noexcept;

struct TrialOutcome {
  TrialStatus status = TrialStatus::Pass;
  std::string failed_hypothesis;  // first enforced hypothesis that failed
  std::string violation;          // name of the violated conclusion
  std::string witness;
  std::string gauge;
  std::vector<std::size_t> map;
  std::vector<std::pair<std::string, bool>> hypotheses;
  bool ablated_failed = false;  // the dropped hypothesis does fail here
  bool contractive_b = false;
  bool contractive_c = false;
  std::size_t d_fixed = 0;
  std::size_t fixed = 0;
  std::size_t x_size = 0;
  bool x_equals_fixed = false;
  std::size_t assertions = 0;
};

/// The generated space, map and gauge of a trial, without any checks.
struct TrialInstance {
  FiniteSpace space;
  std::vector<std::size_t> map;
  double alpha;
};

TrialInstance build_trial(const TrialSpec& spec);

/// Deterministic in spec; abnormal paths are outcomes, not exceptions
/// (invalid specs still throw InvalidArgument).
TrialOutcome run_trial(const TrialSpec& spec);

struct CampaignConfig {
  TrialSpec base;
  std::size_t count = 1;
  std::size_t n_min = 1;
  std::size_t n_max = 6;
  std::size_t threads = 1;

  void validate() const;
  /// The spec of trial i: seed base.seed + i, n drawn from [n_min, n_max].
  TrialSpec trial(std::size_t i) const;
};

struct Violation {
  std::size_t index;
  TrialSpec spec;
  TrialOutcome outcome;
};

struct SearchReport {
  std::size_t trials = 0;
  std::size_t hypotheses_passed = 0;
  std::size_t passes = 0;
  std::vector<Violation> violations;
  std::vector<std::pair<std::string, std::size_t>> failures_by_hypothesis;
  std::size_t contractive_b = 0;
  std::size_t contractive_c = 0;
  bool monotone_filter = true;  // no trial passes g=b while failing g=c
  std::size_t fixed_singleton = 0;
  std::size_t x_equals_fixed = 0;
  std::size_t x_nonempty = 0;
  std::size_t assertions = 0;
  std::optional<std::string> ablation;
  std::size_t ablated_failed = 0;            // ablated hypothesis failed but trial ran
  std::size_t ablated_failed_violations = 0;
};

SearchReport run_campaign(const CampaignConfig& config);

}  // namespace pmfix
