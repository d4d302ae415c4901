#pragma once

// Machine-readable reports and SpaceSpec documents (JSON).
//
// Report envelope, schema "alexprobe-report/1":
//   schema, tool, version, command[], seed (integer or null), rng,
//   tolerances{tol, eps, slack}, wall_time_seconds, payload{kind, ...}
// Payload kinds: classification, census, search, embed_check, invalid_metric.
// docs/report-schema.md and docs/report.schema.json carry the full layout.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "alexprobe/classify.hpp"
#include "alexprobe/search.hpp"
#include "alexprobe/spaces.hpp"

namespace alexprobe {

using json = nlohmann::ordered_json;

inline constexpr const char* kReportSchema = "alexprobe-report/1";

const char* version() noexcept;

json to_json(const DistanceMatrix& d);
json to_json(const SpaceSpec& spec);
json to_json(const MetricViolation& v);
json to_json(const Classification& c, const DistanceMatrix& d);
json to_json(const Census& c);
json to_json(const SearchResult& r, const SpaceSpec& spec);

/// Embeddability verdict, spectrum and (optionally) realized coordinates.
json embed_check_payload(const DistanceMatrix& d, double tol, bool with_coordinates);
/// Classification payload for a 3-point array: validity already implies PSD.
json triangle_payload(const DistanceMatrix& d, double tol);
json invalid_metric_payload(const std::vector<MetricViolation>& violations);

/// Parses a SpaceSpec document, e.g.
///   {"space": "sphere", "r": 1}
///   {"space": "graph", "vertices": 4, "edges": [[0, 1, 1.0], [0, 2, 1.0]]}
/// Throws Error(Spec) naming the offending key.
SpaceSpec space_from_json(const json& doc);

/// Inline grammar "name key=value ...", same keys as the document:
///   euclidean dim=3 | sphere r=1 | hyperbolic rmax=3 | normed p=1.5 (or p=inf)
/// Text starting with '{' is parsed as a document. Graph and explicit spaces
/// need a document.
SpaceSpec parse_space(std::string_view text);

struct ReportMeta {
  std::vector<std::string> command;
  std::optional<std::uint64_t> seed;
  double tol = kDefaultTol;
  double eps = kDefaultEps;
  double slack = kDefaultSlack;
  double wall_time_seconds = 0.0;
};

json make_report(const ReportMeta& meta, json payload);

/// Structural check of a report against the published schema; empty when valid.
std::vector<std::string> validate_report(const json& report);

}  // namespace alexprobe
