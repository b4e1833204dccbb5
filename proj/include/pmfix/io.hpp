#pragma once

// File formats: JSON for spaces, maps, campaign configs and every report;
// CSV for orbit traces and imported sequences.
//
// Space:    {"labels": [...], "d": [[...], ...]}
//           {"family": "max_on_rplus" | "intervals" | "weighted",
//            "params": {"region": [lo, hi], "knots": [...], "weights": [...]}}
// Map:      {"table": [j0, j1, ...]}
//           {"family": "halving"} | {"family": "affine", "params": {"a": A, "b": B}}
//           {"expr": "<expression in x>"}
// Campaign: {"seed": S, "count": N, "n_min", "n_max", "threads", "w_max",
//            "sampler", "gauge": {"family", "alpha_lo", "alpha_hi"}, "g",
//            "enforce": [...], "ablation", "space_override", "map_override"}

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "pmfix/contraction.hpp"
#include "pmfix/dynamics.hpp"
#include "pmfix/gauge.hpp"
#include "pmfix/search.hpp"
#include "pmfix/space.hpp"

namespace pmfix::io {

using json = nlohmann::ordered_json;

/// Parses text; throws ParseError with the parser's message.
json parse_json(const std::string& text, const std::string& origin);
json read_json_file(const std::string& path);
std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

/// JSON text with two-space indent and a trailing newline.
std::string dump(const json& j);

Space space_from_json(const json& j);
json space_to_json(const Space& space);

SelfMap map_from_json(const json& j);
json map_to_json(const SelfMap& map);

/// Finite spaces: a label, or a decimal index when no label matches.
/// Real families: a decimal. Intervals: "[a, b]" or "a:b". Throws UnknownPoint.
Point parse_point(const Space& space, const std::string& text);
json point_to_json(const Space& space, const Point& p);
Point point_from_json(const Space& space, const json& j);

/// Non-finite values become null.
json number(double v);

json to_json(const PropertyCheck& c);
json to_json(const AxiomReport& r);
json to_json(const MetricReport& r);
json to_json(const Space& space, const ContractionReport& r);
json to_json(const FiniteSpace& space, const FixedStructure& fs);
json to_json(const Space& space, const Certificate& c);
Certificate certificate_from_json(const Space& space, const json& j);
json to_json(const Space& space, const SolveResult& r);
json to_json(const GaugeClassification& c);
json to_json(const DConvergence& r);
json to_json(const EConvergence& r);
json to_json(const ECauchy& r);
json to_json(const SemiCauchy& r);
json to_json(const RankReport& r);

json trial_spec_to_json(const TrialSpec& spec);
TrialSpec trial_spec_from_json(const json& j);
json to_json(const TrialOutcome& o);
/// `seed` is mandatory (no wall-clock seeding).
CampaignConfig campaign_from_json(const json& j);
json campaign_to_json(const CampaignConfig& c);
json to_json(const SearchReport& r);

/// Columns n, x_n, rho_n, alpha_n; rho_n is empty on the last row.
std::string orbit_csv(const Space& space, const OrbitTrace& trace);
/// One point per line; blank lines and lines starting with '#' are skipped,
/// as is a first line reading "x" or "x_n".
std::vector<Point> read_sequence_csv(const Space& space, const std::string& text);

}  // namespace pmfix::io
