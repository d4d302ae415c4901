#include "alexprobe/report.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>

#include "alexprobe/error.hpp"

namespace alexprobe {

const char* version() noexcept { return ALEXPROBE_VERSION; }

namespace {

json number_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json points_json(const std::vector<Point>& pts) {
  json out = json::array();
  for (const auto& p : pts) out.push_back(p);
  return out;
}

}  // namespace

json to_json(const DistanceMatrix& d) {
  json rows = json::array();
  for (std::size_t i = 0; i < d.size(); ++i) {
    json row = json::array();
    for (std::size_t j = 0; j < d.size(); ++j) row.push_back(d(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

json to_json(const SpaceSpec& spec) {
  json j;
  j["space"] = space_name(spec);
  if (const auto* s = std::get_if<EuclideanSpace>(&spec)) j["dim"] = s->dim;
  if (const auto* s = std::get_if<SphereSpace>(&spec)) j["r"] = s->radius;
  if (const auto* s = std::get_if<HyperbolicSpace>(&spec)) j["rmax"] = s->r_max;
  if (const auto* s = std::get_if<NormedPlane>(&spec)) {
    j["p"] = std::isinf(s->p) ? json("inf") : json(s->p);
  }
  if (const auto* s = std::get_if<GraphSpace>(&spec)) {
    j["vertices"] = s->vertices;
    json edges = json::array();
    for (const auto& e : s->edges) edges.push_back(json::array({e.u, e.v, e.weight}));
    j["edges"] = std::move(edges);
  }
  if (const auto* s = std::get_if<ExplicitSpace>(&spec)) j["matrix"] = to_json(s->matrix);
  return j;
}

json to_json(const MetricViolation& v) {
  return json{{"kind", to_string(v.kind)}, {"indices", v.indices}, {"magnitude", v.magnitude}};
}

json to_json(const Classification& c, const DistanceMatrix& d) {
  json j;
  j["kind"] = "classification";
  j["arity"] = c.arity;
  j["type"] = to_string(c.type.tag);
  j["degenerate_reason"] =
      c.type.tag == TypeTag::Degenerate ? json(to_string(c.type.reason)) : json(nullptr);
  j["eigenvalues"] = c.spectrum.eigenvalues;
  j["negative_count"] = c.index.count;
  j["marginal"] = c.index.marginal;
  if (c.projection) {
    json pts = json::array();
    for (const auto& p : c.projection->points) pts.push_back(json::array({p.x, p.y}));
    j["projection"] = std::move(pts);
    j["hull_order"] = c.projection->hull_indices.empty() ? json(nullptr)
                                                         : json(c.projection->hull_indices);
  } else {
    j["projection"] = nullptr;
    j["hull_order"] = nullptr;
  }
  j["matrix"] = to_json(d);
  return j;
}

json to_json(const Census& c) {
  json j;
  j["kind"] = "census";
  j["space"] = to_json(c.spec);
  j["arity"] = c.arity;
  j["samples"] = c.samples;
  j["seed"] = c.seed;
  j["tol"] = c.tol;
  j["eps"] = c.eps;
  json counts = json::object();
  for (TypeTag t : kAllTags) {
    if (t == TypeTag::Degenerate) continue;
    if (tag_arity(t) != 0 && tag_arity(t) != c.arity) continue;
    counts[to_string(t)] = c.count(t);
  }
  j["counts"] = std::move(counts);
  json degenerate = json::object();
  for (DegenerateReason r : kAllReasons) {
    auto it = c.degenerate_reasons.find(r);
    degenerate[to_string(r)] = it == c.degenerate_reasons.end() ? 0 : it->second;
  }
  j["degenerate"] = std::move(degenerate);
  j["negative_index_counts"] = c.negative_index_counts;
  json witnesses = json::object();
  for (const auto& [tag, list] : c.witnesses) {
    json arr = json::array();
    for (const auto& w : list) {
      arr.push_back(json{{"index", w.index}, {"matrix", to_json(w.metric)}, {"points", points_json(w.points)}});
    }
    witnesses[to_string(tag)] = std::move(arr);
  }
  j["witnesses"] = std::move(witnesses);
  return j;
}

json to_json(const SearchResult& r, const SpaceSpec& spec) {
  json j;
  j["kind"] = "search";
  j["space"] = to_json(spec);
  j["target"] = to_string(r.target);
  j["found"] = r.found;
  j["verdict"] = r.found ? std::string("found")
                         : "not found within budget of " + std::to_string(r.budget) + " evaluations";
  j["budget"] = r.budget;
  j["evaluations"] = r.evaluations;
  j["restarts"] = r.restarts;
  j["seed"] = r.seed;
  j["margin"] = number_or_null(r.margin);
  j["array"] = r.array ? to_json(*r.array) : json(nullptr);
  j["points"] = r.found ? points_json(r.points) : json(nullptr);
  return j;
}

namespace {

[[noreturn]] void spec_error(const std::string& msg) {
  throw Error(ErrorCode::Spec, msg + " (see docs/report-schema.md, section SpaceSpec)");
}

double number_field(const json& doc, const char* key, double fallback) {
  if (!doc.contains(key)) return fallback;
  const auto& v = doc.at(key);
  if (v.is_number()) return v.get<double>();
  if (v.is_string()) {
    const auto s = v.get<std::string>();
    if (s == "inf" || s == "infinity" || s == "Infinity") return std::numeric_limits<double>::infinity();
  }
  spec_error(std::string("key '") + key + "' must be a number");
}

}  // namespace

SpaceSpec space_from_json(const json& doc) {
  if (!doc.is_object() || !doc.contains("space") || !doc.at("space").is_string()) {
    spec_error("SpaceSpec document needs a string key 'space'");
  }
  const std::string name = doc.at("space").get<std::string>();
  SpaceSpec spec;
  if (name == "euclidean") {
    const double dim = number_field(doc, "dim", 3);
    if (dim < 1 || dim != std::floor(dim) || dim > 64) spec_error("euclidean: 'dim' must be an integer in [1, 64]");
    spec = EuclideanSpace{static_cast<std::size_t>(dim)};
  } else if (name == "sphere") {
    spec = SphereSpace{number_field(doc, "r", 1.0)};
  } else if (name == "hyperbolic") {
    spec = HyperbolicSpace{number_field(doc, "rmax", 3.0)};
  } else if (name == "normed") {
    spec = NormedPlane{number_field(doc, "p", 2.0)};
  } else if (name == "graph") {
    if (!doc.contains("vertices") || !doc.at("vertices").is_number_unsigned())
      spec_error("graph: 'vertices' must be a nonnegative integer");
    if (!doc.contains("edges") || !doc.at("edges").is_array()) spec_error("graph: 'edges' must be an array");
    std::vector<WeightedEdge> edges;
    for (const auto& e : doc.at("edges")) {
      if (!e.is_array() || e.size() < 2 || e.size() > 3 || !e[0].is_number_unsigned() ||
          !e[1].is_number_unsigned() || (e.size() == 3 && !e[2].is_number())) {
        spec_error("graph: each edge is [u, v] or [u, v, weight]");
      }
      edges.push_back({e[0].get<std::size_t>(), e[1].get<std::size_t>(),
                       e.size() == 3 ? e[2].get<double>() : 1.0});
    }
    spec = make_graph(doc.at("vertices").get<std::size_t>(), std::move(edges));
  } else if (name == "explicit") {
    if (!doc.contains("matrix") || !doc.at("matrix").is_array()) spec_error("explicit: 'matrix' must be an array of rows");
    const auto& rows = doc.at("matrix");
    RawMatrix raw(rows.size(), rows.empty() ? 0 : rows[0].size());
    for (std::size_t r = 0; r < rows.size(); ++r) {
      if (!rows[r].is_array() || rows[r].size() != raw.cols) spec_error("explicit: ragged matrix");
      for (std::size_t c = 0; c < raw.cols; ++c) {
        if (!rows[r][c].is_number()) spec_error("explicit: non-numeric entry");
        raw(r, c) = rows[r][c].get<double>();
      }
    }
    auto checked = validate_metric(raw, kDefaultSlack);
    if (!checked) spec_error("explicit: matrix is not a metric: " + describe(checked.violations.front()));
    spec = ExplicitSpace{std::move(*checked.metric)};
  } else {
    spec_error("unknown space '" + name + "'; expected euclidean, sphere, hyperbolic, normed, graph, explicit");
  }
  validate_space(spec);
  return spec;
}

SpaceSpec parse_space(std::string_view text) {
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) spec_error("empty space description");
  if (text[first] == '{') {
    json doc;
    try {
      doc = json::parse(text);
    } catch (const json::parse_error& e) {
      throw Error(ErrorCode::Spec, std::string("SpaceSpec document: ") + e.what());
    }
    return space_from_json(doc);
  }

  std::istringstream in{std::string(text)};
  std::string name;
  in >> name;
  if (name == "graph" || name == "explicit") {
    spec_error(name + " spaces require a SpaceSpec document file");
  }
  json doc;
  doc["space"] = name;
  std::string token;
  while (in >> token) {
    const auto eq = token.find('=');
    if (eq == std::string::npos || eq == 0) spec_error("expected key=value, got '" + token + "'");
    const std::string key = token.substr(0, eq);
    const std::string value = token.substr(eq + 1);
    if (value == "inf" || value == "infinity") {
      doc[key] = "inf";
      continue;
    }
    try {
      std::size_t used = 0;
      const double v = std::stod(value, &used);
      if (used != value.size()) throw std::invalid_argument(value);
      doc[key] = v;
    } catch (const std::exception&) {
      spec_error("value for '" + key + "' is not a number: '" + value + "'");
    }
  }
  static const std::map<std::string, std::vector<std::string>> kKeys = {
      {"euclidean", {"dim"}}, {"sphere", {"r"}}, {"hyperbolic", {"rmax"}}, {"normed", {"p"}}};
  if (auto it = kKeys.find(name); it != kKeys.end()) {
    for (const auto& [key, value] : doc.items()) {
      if (key == "space") continue;
      if (std::find(it->second.begin(), it->second.end(), key) == it->second.end())
        spec_error(name + ": unknown key '" + key + "'");
    }
  }
  return space_from_json(doc);
}

json embed_check_payload(const DistanceMatrix& d, double tol, bool with_coordinates) {
  const Spectrum s = spectrum(associated_form(d).m, tol);
  const bool embeddable = negative_index(s).count == 0;
  json j;
  j["kind"] = "embed_check";
  j["n"] = d.size();
  j["embeddable"] = embeddable;
  j["eigenvalues"] = s.eigenvalues;
  j["most_negative_eigenvalue"] = s.eigenvalues.front();
  j["coordinates"] = with_coordinates && embeddable ? points_json(realize_points(d, tol)) : json(nullptr);
  return j;
}

json triangle_payload(const DistanceMatrix& d, double tol) {
  if (d.size() != 3) throw Error(ErrorCode::Shape, "triangle_payload: expected 3 points");
  Classification c;
  c.arity = 3;
  c.spectrum = spectrum(associated_form(d).m, tol);
  c.index = negative_index(c.spectrum);
  c.type = c.index.count == 0 ? ComparisonType{TypeTag::PSD, DegenerateReason::None}
                              : ComparisonType{TypeTag::Degenerate, DegenerateReason::MarginalEigenvalue};
  return to_json(c, d);
}

json invalid_metric_payload(const std::vector<MetricViolation>& violations) {
  json list = json::array();
  for (const auto& v : violations) list.push_back(to_json(v));
  return json{{"kind", "invalid_metric"}, {"violations", std::move(list)}};
}

json make_report(const ReportMeta& meta, json payload) {
  json j;
  j["schema"] = kReportSchema;
  j["tool"] = "alexprobe";
  j["version"] = version();
  j["command"] = meta.command;
  j["seed"] = meta.seed ? json(*meta.seed) : json(nullptr);
  j["rng"] = kRngDescription;
  j["tolerances"] = json{{"tol", meta.tol}, {"eps", meta.eps}, {"slack", meta.slack}};
  j["wall_time_seconds"] = meta.wall_time_seconds;
  j["payload"] = std::move(payload);
  return j;
}

namespace {

class Checker {
 public:
  std::vector<std::string> errors;

  bool has(const json& obj, const std::string& path, const char* key) {
    if (!obj.is_object() || !obj.contains(key)) {
      errors.push_back(path + "." + key + ": missing");
      return false;
    }
    return true;
  }

  template <class Pred>
  void field(const json& obj, const std::string& path, const char* key, Pred ok, const char* what) {
    if (has(obj, path, key) && !ok(obj.at(key))) errors.push_back(path + "." + key + ": expected " + what);
  }

  void matrix(const json& m, const std::string& path) {
    if (!m.is_array() || m.empty()) {
      errors.push_back(path + ": expected a non-empty square matrix");
      return;
    }
    for (const auto& row : m) {
      if (!row.is_array() || row.size() != m.size()) {
        errors.push_back(path + ": rows must be arrays of length " + std::to_string(m.size()));
        return;
      }
      for (const auto& v : row)
        if (!v.is_number()) {
          errors.push_back(path + ": entries must be numbers");
          return;
        }
    }
  }
};

bool is_count(const json& v) {
  return v.is_number_unsigned() || (v.is_number_integer() && v.get<std::int64_t>() >= 0);
}
bool is_real(const json& v) { return v.is_number(); }
bool is_real_array(const json& v) {
  return v.is_array() && std::all_of(v.begin(), v.end(), [](const json& x) { return x.is_number(); });
}

}  // namespace

std::vector<std::string> validate_report(const json& report) {
  Checker ck;
  const std::string root = "$";
  if (!report.is_object()) return {"$: report must be an object"};
  ck.field(report, root, "schema", [](const json& v) { return v == kReportSchema; }, kReportSchema);
  ck.field(report, root, "tool", [](const json& v) { return v == "alexprobe"; }, "\"alexprobe\"");
  ck.field(report, root, "version", [](const json& v) { return v.is_string(); }, "string");
  ck.field(report, root, "command",
           [](const json& v) {
             return v.is_array() && !v.empty() &&
                    std::all_of(v.begin(), v.end(), [](const json& x) { return x.is_string(); });
           },
           "non-empty array of strings");
  ck.field(report, root, "seed", [](const json& v) { return v.is_null() || is_count(v); }, "integer or null");
  ck.field(report, root, "rng", [](const json& v) { return v.is_string(); }, "string");
  if (ck.has(report, root, "tolerances")) {
    const auto& t = report.at("tolerances");
    for (const char* k : {"tol", "eps", "slack"}) ck.field(t, root + ".tolerances", k, is_real, "number");
  }
  ck.field(report, root, "wall_time_seconds", [](const json& v) { return v.is_number() && v.get<double>() >= 0; },
           "nonnegative number");
  if (!ck.has(report, root, "payload")) return ck.errors;

  const json& p = report.at("payload");
  const std::string pp = root + ".payload";
  if (!p.is_object() || !p.contains("kind") || !p.at("kind").is_string()) {
    ck.errors.push_back(pp + ".kind: missing");
    return ck.errors;
  }
  const std::string kind = p.at("kind").get<std::string>();
  auto is_tag = [](const json& v) { return v.is_string() && parse_tag(v.get<std::string>()).has_value(); };

  if (kind == "classification") {
    ck.field(p, pp, "arity", [](const json& v) { return v == 3 || v == 4 || v == 5; }, "3, 4 or 5");
    ck.field(p, pp, "type", is_tag, "type tag");
    ck.field(p, pp, "degenerate_reason",
             [](const json& v) { return v.is_null() || (v.is_string() && parse_reason(v.get<std::string>())); },
             "reason or null");
    ck.field(p, pp, "eigenvalues", is_real_array, "array of numbers");
    ck.field(p, pp, "negative_count", is_count, "integer");
    ck.field(p, pp, "marginal", [](const json& v) { return v.is_boolean(); }, "boolean");
    ck.field(p, pp, "hull_order", [](const json& v) { return v.is_null() || v.is_array(); }, "array or null");
    ck.field(p, pp, "projection", [](const json& v) { return v.is_null() || v.is_array(); }, "array or null");
    if (ck.has(p, pp, "matrix")) ck.matrix(p.at("matrix"), pp + ".matrix");
  } else if (kind == "census") {
    ck.field(p, pp, "space", [](const json& v) { return v.is_object() && v.contains("space"); }, "SpaceSpec");
    ck.field(p, pp, "arity", [](const json& v) { return v == 4 || v == 5; }, "4 or 5");
    ck.field(p, pp, "samples", is_count, "integer");
    ck.field(p, pp, "seed", is_count, "integer");
    ck.field(p, pp, "negative_index_counts",
             [](const json& v) { return v.is_array() && std::all_of(v.begin(), v.end(), is_count); },
             "array of integers");
    std::size_t total = 0;
    bool sums = ck.has(p, pp, "counts") && ck.has(p, pp, "degenerate");
    if (sums) {
      for (const auto& [k, v] : p.at("counts").items()) {
        if (!parse_tag(k) || k == "Degenerate" || !is_count(v)) ck.errors.push_back(pp + ".counts." + k + ": invalid");
        else total += v.get<std::size_t>();
      }
      for (const auto& [k, v] : p.at("degenerate").items()) {
        if (!parse_reason(k) || !is_count(v)) ck.errors.push_back(pp + ".degenerate." + k + ": invalid");
        else total += v.get<std::size_t>();
      }
      if (p.contains("samples") && is_count(p.at("samples")) && total != p.at("samples").get<std::size_t>())
        ck.errors.push_back(pp + ": counts and degenerate do not sum to samples");
    }
    if (ck.has(p, pp, "witnesses")) {
      for (const auto& [k, list] : p.at("witnesses").items()) {
        if (!parse_tag(k) || !list.is_array()) {
          ck.errors.push_back(pp + ".witnesses." + k + ": invalid");
          continue;
        }
        for (std::size_t i = 0; i < list.size(); ++i) {
          const std::string wp = pp + ".witnesses." + k + "[" + std::to_string(i) + "]";
          ck.field(list[i], wp, "index", is_count, "integer");
          if (ck.has(list[i], wp, "matrix")) ck.matrix(list[i].at("matrix"), wp + ".matrix");
        }
      }
    }
  } else if (kind == "search") {
    ck.field(p, pp, "space", [](const json& v) { return v.is_object() && v.contains("space"); }, "SpaceSpec");
    ck.field(p, pp, "target", is_tag, "type tag");
    ck.field(p, pp, "found", [](const json& v) { return v.is_boolean(); }, "boolean");
    ck.field(p, pp, "verdict", [](const json& v) { return v.is_string(); }, "string");
    ck.field(p, pp, "budget", is_count, "integer");
    ck.field(p, pp, "evaluations", is_count, "integer");
    ck.field(p, pp, "seed", is_count, "integer");
    ck.field(p, pp, "margin", [](const json& v) { return v.is_null() || v.is_number(); }, "number or null");
    if (ck.has(p, pp, "array") && p.contains("found") && p.at("found") == true) ck.matrix(p.at("array"), pp + ".array");
  } else if (kind == "embed_check") {
    ck.field(p, pp, "n", is_count, "integer");
    ck.field(p, pp, "embeddable", [](const json& v) { return v.is_boolean(); }, "boolean");
    ck.field(p, pp, "eigenvalues", is_real_array, "array of numbers");
    ck.field(p, pp, "most_negative_eigenvalue", is_real, "number");
    ck.field(p, pp, "coordinates", [](const json& v) { return v.is_null() || v.is_array(); }, "array or null");
  } else if (kind == "invalid_metric") {
    ck.field(p, pp, "violations",
             [](const json& v) {
               return v.is_array() && !v.empty() && std::all_of(v.begin(), v.end(), [](const json& x) {
                 return x.is_object() && x.contains("kind") && x.contains("indices") && x.contains("magnitude") &&
                        x.at("magnitude").is_number() && x.at("magnitude").get<double>() > 0;
               });
             },
             "non-empty array of violations with positive magnitude");
  } else {
    ck.errors.push_back(pp + ".kind: unknown kind '" + kind + "'");
  }
  return ck.errors;
}

}  // namespace alexprobe
