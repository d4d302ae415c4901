#include "alexprobe/alexprobe.h"

#include <cstdlib>
#include <cstring>
#include <fstream>
#include <sstream>
#include <string>

#include "alexprobe/error.hpp"
#include "alexprobe/report.hpp"

using namespace alexprobe;

struct alexprobe_matrix {
  RawMatrix raw;
};
struct alexprobe_metric {
  DistanceMatrix d;
};
struct alexprobe_space {
  SpaceSpec spec;
};
struct alexprobe_census {
  Census census;
};
struct alexprobe_search {
  SearchResult result;
  SpaceSpec spec;
};

namespace {

thread_local std::string g_last_error;

alexprobe_status status_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::Shape: return ALEXPROBE_E_SHAPE;
    case ErrorCode::Value: return ALEXPROBE_E_VALUE;
    case ErrorCode::Parse: return ALEXPROBE_E_PARSE;
    case ErrorCode::Domain: return ALEXPROBE_E_DOMAIN;
    case ErrorCode::Index: return ALEXPROBE_E_INDEX;
    case ErrorCode::Precondition: return ALEXPROBE_E_PRECONDITION;
    case ErrorCode::Spec: return ALEXPROBE_E_SPEC;
    case ErrorCode::Unsupported: return ALEXPROBE_E_UNSUPPORTED;
    case ErrorCode::Internal: return ALEXPROBE_E_INTERNAL;
    case ErrorCode::Io: return ALEXPROBE_E_IO;
  }
  return ALEXPROBE_E_INTERNAL;
}

alexprobe_status fail(alexprobe_status s, std::string msg) {
  g_last_error = std::move(msg);
  return s;
}

// Runs `fn`, translating exceptions into status codes.
template <class Fn>
alexprobe_status guarded(Fn&& fn) {
  try {
    g_last_error.clear();
    return fn();
  } catch (const Error& e) {
    return fail(status_for(e.code()), e.what());
  } catch (const std::bad_alloc&) {
    return fail(ALEXPROBE_E_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(ALEXPROBE_E_INTERNAL, e.what());
  }
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

alexprobe_status emit_json(const json& j, char** out) {
  *out = dup_string(j.dump());
  return ALEXPROBE_OK;
}

std::string read_file(const char* path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, std::string("cannot open '") + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

TypeTag to_tag(alexprobe_tag t) { return static_cast<TypeTag>(t); }
alexprobe_tag from_tag(TypeTag t) { return static_cast<alexprobe_tag>(t); }
DegenerateReason to_reason(alexprobe_reason r) { return static_cast<DegenerateReason>(r); }

}  // namespace

#define ALEXPROBE_REQUIRE(ptr)                                      \
  do {                                                              \
    if (!(ptr)) return fail(ALEXPROBE_E_NULL, #ptr " is NULL");     \
  } while (0)

extern "C" {

const char* alexprobe_version(void) { return alexprobe::version(); }
const char* alexprobe_last_error(void) { return g_last_error.c_str(); }
void alexprobe_string_free(char* s) { std::free(s); }

const char* alexprobe_tag_name(alexprobe_tag tag) {
  if (tag < ALEXPROBE_PSD || tag > ALEXPROBE_DEGENERATE) return "?";
  return to_string(to_tag(tag));
}

const char* alexprobe_reason_name(alexprobe_reason reason) {
  if (reason < ALEXPROBE_REASON_NONE || reason > ALEXPROBE_REASON_COINCIDENT_PROJECTION) return "?";
  return to_string(to_reason(reason));
}

alexprobe_status alexprobe_tag_parse(const char* name, alexprobe_tag* out) {
  ALEXPROBE_REQUIRE(name);
  ALEXPROBE_REQUIRE(out);
  const auto tag = parse_tag(name);
  if (!tag) return fail(ALEXPROBE_E_PARSE, std::string("unknown type tag '") + name + "'");
  *out = from_tag(*tag);
  return ALEXPROBE_OK;
}

alexprobe_status alexprobe_matrix_parse(const char* text, alexprobe_matrix** out) {
  ALEXPROBE_REQUIRE(text);
  ALEXPROBE_REQUIRE(out);
  return guarded([&] {
    *out = new alexprobe_matrix{parse_matrix(text)};
    return ALEXPROBE_OK;
  });
}

alexprobe_status alexprobe_matrix_load(const char* path, alexprobe_matrix** out) {
  ALEXPROBE_REQUIRE(path);
  ALEXPROBE_REQUIRE(out);
  return guarded([&] {
    *out = new alexprobe_matrix{parse_matrix(read_file(path))};
    return ALEXPROBE_OK;
  });
}

alexprobe_status alexprobe_matrix_from_array(size_t rows, size_t cols, const double* row_major,
                                             alexprobe_matrix** out) {
  ALEXPROBE_REQUIRE(row_major);
  ALEXPROBE_REQUIRE(out);
  return guarded([&] {
    RawMatrix m(rows, cols);
    std::copy(row_major, row_major + rows * cols, m.values.begin());
    *out = new alexprobe_matrix{std::move(m)};
    return ALEXPROBE_OK;
  });
}

size_t alexprobe_matrix_rows(const alexprobe_matrix* m) { return m ? m->raw.rows : 0; }
size_t alexprobe_matrix_cols(const alexprobe_matrix* m) { return m ? m->raw.cols : 0; }
double alexprobe_matrix_get(const alexprobe_matrix* m, size_t r, size_t c) {
  return m && r < m->raw.rows && c < m->raw.cols ? m->raw(r, c) : 0.0;
}
void alexprobe_matrix_free(alexprobe_matrix* m) { delete m; }

alexprobe_status alexprobe_metric_validate(const alexprobe_matrix* m, double slack, alexprobe_metric** out,
                                           alexprobe_violation* violations, size_t capacity,
                                           size_t* violation_count) {
  ALEXPROBE_REQUIRE(m);
  ALEXPROBE_REQUIRE(out);
  if (capacity > 0) ALEXPROBE_REQUIRE(violations);
  return guarded([&] {
    *out = nullptr;
    auto result = validate_metric(m->raw, slack);
    if (violation_count) *violation_count = result.violations.size();
    if (!result) {
      for (size_t i = 0; i < result.violations.size() && i < capacity; ++i) {
        const auto& v = result.violations[i];
        alexprobe_violation& dst = violations[i];
        dst.kind = static_cast<alexprobe_violation_kind>(v.kind);
        dst.index_count = v.indices.size();
        for (size_t k = 0; k < 3; ++k) dst.indices[k] = k < v.indices.size() ? v.indices[k] : 0;
        dst.magnitude = v.magnitude;
      }
      return fail(ALEXPROBE_E_METRIC, "matrix violates the metric axioms (" +
                                          std::to_string(result.violations.size()) + " violations)");
    }
    *out = new alexprobe_metric{std::move(*result.metric)};
    return ALEXPROBE_OK;
  });
}

size_t alexprobe_metric_size(const alexprobe_metric* d) { return d ? d->d.size() : 0; }
double alexprobe_metric_get(const alexprobe_metric* d, size_t i, size_t j) {
  return d && i < d->d.size() && j < d->d.size() ? d->d(i, j) : 0.0;
}

alexprobe_status alexprobe_metric_scale(const alexprobe_metric* d, double lambda, alexprobe_metric** out) {
  ALEXPROBE_REQUIRE(d);
  ALEXPROBE_REQUIRE(out);
  return guarded([&] {
    *out = new alexprobe_metric{scale(d->d, lambda)};
    return ALEXPROBE_OK;
  });
}

void alexprobe_metric_free(alexprobe_metric* d) { delete d; }

alexprobe_status alexprobe_classify(const alexprobe_metric* d, double tol, double eps,
                                    alexprobe_classification* out) {
  ALEXPROBE_REQUIRE(d);
  ALEXPROBE_REQUIRE(out);
  return guarded([&] {
    const Classification c = classify(d->d, {tol, eps, std::nullopt});
    *out = alexprobe_classification{};
    out->tag = from_tag(c.type.tag);
    out->reason = static_cast<alexprobe_reason>(c.type.reason);
    out->arity = c.arity;
    out->negative_count = c.index.count;
    out->marginal = c.index.marginal ? 1 : 0;
    out->eigen_count = c.spectrum.eigenvalues.size();
    std::copy(c.spectrum.eigenvalues.begin(), c.spectrum.eigenvalues.end(), out->eigenvalues);
    if (c.projection && !c.projection->hull_indices.empty()) {
      out->hull_count = static_cast<int>(c.projection->hull_indices.size());
      std::copy(c.projection->hull_indices.begin(), c.projection->hull_indices.end(), out->hull_order);
    }
    return ALEXPROBE_OK;
  });
}

alexprobe_status alexprobe_classify_json(const alexprobe_metric* d, double tol, double eps, char** json_out) {
  ALEXPROBE_REQUIRE(d);
  ALEXPROBE_REQUIRE(json_out);
  return guarded([&] {
    if (d->d.size() == 3) return emit_json(triangle_payload(d->d, tol), json_out);
    return emit_json(to_json(classify(d->d, {tol, eps, std::nullopt}), d->d), json_out);
  });
}

alexprobe_status alexprobe_embed_check(const alexprobe_metric* d, double tol, int* embeddable,
                                       double* eigenvalues, size_t* eigen_count) {
  ALEXPROBE_REQUIRE(d);
  ALEXPROBE_REQUIRE(embeddable);
  return guarded([&] {
    const Spectrum s = spectrum(associated_form(d->d).m, tol);
    *embeddable = negative_index(s).count == 0 ? 1 : 0;
    if (eigen_count) *eigen_count = s.eigenvalues.size();
    if (eigenvalues) std::copy(s.eigenvalues.begin(), s.eigenvalues.end(), eigenvalues);
    return ALEXPROBE_OK;
  });
}

alexprobe_status alexprobe_realize(const alexprobe_metric* d, double tol, double* coords, size_t capacity) {
  ALEXPROBE_REQUIRE(d);
  ALEXPROBE_REQUIRE(coords);
  return guarded([&] {
    const size_t n = d->d.size();
    if (capacity < n * (n - 1)) {
      return fail(ALEXPROBE_E_BUFFER, "coordinate buffer needs " + std::to_string(n * (n - 1)) + " doubles");
    }
    const auto pts = realize_points(d->d, tol);
    for (size_t i = 0; i < n; ++i) std::copy(pts[i].begin(), pts[i].end(), coords + i * (n - 1));
    return ALEXPROBE_OK;
  });
}

alexprobe_status alexprobe_embed_check_json(const alexprobe_metric* d, double tol, int with_coordinates,
                                            char** json_out) {
  ALEXPROBE_REQUIRE(d);
  ALEXPROBE_REQUIRE(json_out);
  return guarded([&] { return emit_json(embed_check_payload(d->d, tol, with_coordinates != 0), json_out); });
}

alexprobe_status alexprobe_violations_json(const alexprobe_matrix* m, double slack, char** json_out) {
  ALEXPROBE_REQUIRE(m);
  ALEXPROBE_REQUIRE(json_out);
  return guarded([&] { return emit_json(invalid_metric_payload(validate_metric(m->raw, slack).violations), json_out); });
}

alexprobe_status alexprobe_space_parse(const char* text, alexprobe_space** out) {
  ALEXPROBE_REQUIRE(text);
  ALEXPROBE_REQUIRE(out);
  return guarded([&] {
    *out = new alexprobe_space{parse_space(text)};
    return ALEXPROBE_OK;
  });
}

alexprobe_status alexprobe_space_load(const char* path, alexprobe_space** out) {
  ALEXPROBE_REQUIRE(path);
  ALEXPROBE_REQUIRE(out);
  return guarded([&] {
    *out = new alexprobe_space{parse_space(read_file(path))};
    return ALEXPROBE_OK;
  });
}

alexprobe_status alexprobe_space_json(const alexprobe_space* s, char** json_out) {
  ALEXPROBE_REQUIRE(s);
  ALEXPROBE_REQUIRE(json_out);
  return guarded([&] { return emit_json(to_json(s->spec), json_out); });
}

void alexprobe_space_free(alexprobe_space* s) { delete s; }

alexprobe_status alexprobe_census_run(const alexprobe_space* s, size_t arity, size_t samples, uint64_t seed,
                                      double tol, double eps, unsigned threads, alexprobe_census** out) {
  ALEXPROBE_REQUIRE(s);
  ALEXPROBE_REQUIRE(out);
  return guarded([&] {
    CensusOptions opt;
    opt.tol = tol;
    opt.eps = eps;
    opt.threads = threads;
    *out = new alexprobe_census{census(s->spec, arity, samples, seed, opt)};
    return ALEXPROBE_OK;
  });
}

size_t alexprobe_census_count(const alexprobe_census* c, alexprobe_tag tag) {
  return c ? c->census.count(to_tag(tag)) : 0;
}

size_t alexprobe_census_degenerate(const alexprobe_census* c, alexprobe_reason reason) {
  if (!c) return 0;
  if (reason == ALEXPROBE_REASON_NONE) return c->census.degenerate();
  auto it = c->census.degenerate_reasons.find(to_reason(reason));
  return it == c->census.degenerate_reasons.end() ? 0 : it->second;
}

size_t alexprobe_census_samples(const alexprobe_census* c) { return c ? c->census.samples : 0; }

alexprobe_status alexprobe_census_json(const alexprobe_census* c, char** json_out) {
  ALEXPROBE_REQUIRE(c);
  ALEXPROBE_REQUIRE(json_out);
  return guarded([&] { return emit_json(to_json(c->census), json_out); });
}

void alexprobe_census_free(alexprobe_census* c) { delete c; }

alexprobe_status alexprobe_search_run(const alexprobe_space* s, alexprobe_tag target, size_t budget,
                                      uint64_t seed, double step, double tol, double eps,
                                      alexprobe_search** out) {
  ALEXPROBE_REQUIRE(s);
  ALEXPROBE_REQUIRE(out);
  return guarded([&] {
    SearchOptions opt{budget, seed, step, tol, eps};
    *out = new alexprobe_search{find_type(s->spec, to_tag(target), opt), s->spec};
    return ALEXPROBE_OK;
  });
}

int alexprobe_search_found(const alexprobe_search* r) { return r && r->result.found ? 1 : 0; }
size_t alexprobe_search_evaluations(const alexprobe_search* r) { return r ? r->result.evaluations : 0; }
double alexprobe_search_margin(const alexprobe_search* r) { return r ? r->result.margin : 0.0; }

alexprobe_status alexprobe_search_json(const alexprobe_search* r, char** json_out) {
  ALEXPROBE_REQUIRE(r);
  ALEXPROBE_REQUIRE(json_out);
  return guarded([&] { return emit_json(to_json(r->result, r->spec), json_out); });
}

void alexprobe_search_free(alexprobe_search* r) { delete r; }

alexprobe_status alexprobe_report_build(const alexprobe_report_meta* meta, const char* payload_json,
                                        char** json_out) {
  ALEXPROBE_REQUIRE(meta);
  ALEXPROBE_REQUIRE(payload_json);
  ALEXPROBE_REQUIRE(json_out);
  return guarded([&] {
    ReportMeta m;
    for (size_t i = 0; i < meta->argc; ++i) m.command.emplace_back(meta->argv[i] ? meta->argv[i] : "");
    if (meta->has_seed) m.seed = meta->seed;
    m.tol = meta->tol;
    m.eps = meta->eps;
    m.slack = meta->slack;
    m.wall_time_seconds = meta->wall_time_seconds;
    json payload;
    try {
      payload = json::parse(payload_json);
    } catch (const json::parse_error& e) {
      return fail(ALEXPROBE_E_PARSE, std::string("payload is not JSON: ") + e.what());
    }
    return emit_json(make_report(m, std::move(payload)), json_out);
  });
}

alexprobe_status alexprobe_report_validate(const char* report_json) {
  ALEXPROBE_REQUIRE(report_json);
  return guarded([&] {
    json doc;
    try {
      doc = json::parse(report_json);
    } catch (const json::parse_error& e) {
      return fail(ALEXPROBE_E_PARSE, std::string("report is not JSON: ") + e.what());
    }
    const auto errors = validate_report(doc);
    if (errors.empty()) return ALEXPROBE_OK;
    std::string msg;
    for (const auto& e : errors) msg += e + "\n";
    return fail(ALEXPROBE_E_PARSE, msg);
  });
}

}  // extern "C"
