/*
 * alexprobe C API.
 *
 * Opaque handles own their data and are released with the matching
 * *_free function. Every fallible call returns an alexprobe_status; on
 * failure alexprobe_last_error() describes the problem (thread-local, valid
 * until the next call on the same thread). Strings returned through char**
 * are heap-allocated and released with alexprobe_string_free().
 */
#ifndef ALEXPROBE_ALEXPROBE_H
#define ALEXPROBE_ALEXPROBE_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(ALEXPROBE_BUILDING_LIBRARY)
#    define ALEXPROBE_API __declspec(dllexport)
#  else
#    define ALEXPROBE_API __declspec(dllimport)
#  endif
#else
#  define ALEXPROBE_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum alexprobe_status {
  ALEXPROBE_OK = 0,
  ALEXPROBE_E_NULL = 1,          /* required pointer argument was NULL */
  ALEXPROBE_E_IO = 2,
  ALEXPROBE_E_PARSE = 3,
  ALEXPROBE_E_SHAPE = 4,
  ALEXPROBE_E_VALUE = 5,         /* NaN or infinite entries */
  ALEXPROBE_E_METRIC = 6,        /* matrix fails the metric axioms */
  ALEXPROBE_E_DOMAIN = 7,
  ALEXPROBE_E_INDEX = 8,
  ALEXPROBE_E_PRECONDITION = 9,
  ALEXPROBE_E_SPEC = 10,         /* invalid space description */
  ALEXPROBE_E_UNSUPPORTED = 11,
  ALEXPROBE_E_INTERNAL = 12,
  ALEXPROBE_E_BUFFER = 13        /* caller buffer too small; required size reported */
} alexprobe_status;

typedef enum alexprobe_tag {
  ALEXPROBE_PSD = 0,
  ALEXPROBE_QUADRA3 = 1,
  ALEXPROBE_QUADRA4 = 2,
  ALEXPROBE_ONE_NEGATIVE5 = 3,
  ALEXPROBE_PENTA3 = 4,
  ALEXPROBE_PENTA4 = 5,
  ALEXPROBE_PENTA5 = 6,
  ALEXPROBE_DEGENERATE = 7
} alexprobe_tag;

typedef enum alexprobe_reason {
  ALEXPROBE_REASON_NONE = 0,
  ALEXPROBE_REASON_MARGINAL_EIGENVALUE = 1,
  ALEXPROBE_REASON_COLLINEAR_PROJECTION = 2,
  ALEXPROBE_REASON_COINCIDENT_PROJECTION = 3
} alexprobe_reason;

typedef enum alexprobe_violation_kind {
  ALEXPROBE_NEGATIVE_ENTRY = 0,
  ALEXPROBE_ASYMMETRY = 1,
  ALEXPROBE_NONZERO_DIAGONAL = 2,
  ALEXPROBE_TRIANGLE_VIOLATION = 3
} alexprobe_violation_kind;

typedef struct alexprobe_violation {
  alexprobe_violation_kind kind;
  size_t index_count; /* 2, or 3 for triangle violations (i, k, via j) */
  size_t indices[3];
  double magnitude;
} alexprobe_violation;

#define ALEXPROBE_MAX_EIGEN 15

typedef struct alexprobe_classification {
  alexprobe_tag tag;
  alexprobe_reason reason;
  size_t arity;
  int negative_count;
  int marginal;
  size_t eigen_count;
  double eigenvalues[ALEXPROBE_MAX_EIGEN]; /* ascending */
  int hull_count;                          /* 0 when no projection was read */
  size_t hull_order[5];                    /* counter-clockwise point labels */
} alexprobe_classification;

typedef struct alexprobe_matrix alexprobe_matrix; /* raw rectangular array */
typedef struct alexprobe_metric alexprobe_metric; /* validated distance matrix */
typedef struct alexprobe_space alexprobe_space;
typedef struct alexprobe_census alexprobe_census;
typedef struct alexprobe_search alexprobe_search;

ALEXPROBE_API const char* alexprobe_version(void);
ALEXPROBE_API const char* alexprobe_last_error(void);
ALEXPROBE_API void alexprobe_string_free(char* s);

ALEXPROBE_API const char* alexprobe_tag_name(alexprobe_tag tag);
ALEXPROBE_API const char* alexprobe_reason_name(alexprobe_reason reason);
/* Case-insensitive ("quadra4", "Penta5", ...). */
ALEXPROBE_API alexprobe_status alexprobe_tag_parse(const char* name, alexprobe_tag* out);

/* ---- matrices ---------------------------------------------------------- */

ALEXPROBE_API alexprobe_status alexprobe_matrix_parse(const char* text, alexprobe_matrix** out);
ALEXPROBE_API alexprobe_status alexprobe_matrix_load(const char* path, alexprobe_matrix** out);
ALEXPROBE_API alexprobe_status alexprobe_matrix_from_array(size_t rows, size_t cols,
                                                           const double* row_major,
                                                           alexprobe_matrix** out);
ALEXPROBE_API size_t alexprobe_matrix_rows(const alexprobe_matrix* m);
ALEXPROBE_API size_t alexprobe_matrix_cols(const alexprobe_matrix* m);
ALEXPROBE_API double alexprobe_matrix_get(const alexprobe_matrix* m, size_t r, size_t c);
ALEXPROBE_API void alexprobe_matrix_free(alexprobe_matrix* m);

/*
 * Validates a raw matrix. On ALEXPROBE_E_METRIC, *violation_count holds the
 * total number of violations and up to `capacity` of them are copied into
 * `violations` (which may be NULL when capacity is 0).
 */
ALEXPROBE_API alexprobe_status alexprobe_metric_validate(const alexprobe_matrix* m, double slack,
                                                         alexprobe_metric** out,
                                                         alexprobe_violation* violations,
                                                         size_t capacity, size_t* violation_count);
ALEXPROBE_API size_t alexprobe_metric_size(const alexprobe_metric* d);
ALEXPROBE_API double alexprobe_metric_get(const alexprobe_metric* d, size_t i, size_t j);
ALEXPROBE_API alexprobe_status alexprobe_metric_scale(const alexprobe_metric* d, double lambda,
                                                      alexprobe_metric** out);
ALEXPROBE_API void alexprobe_metric_free(alexprobe_metric* d);

/* ---- classification and embedding -------------------------------------- */

/* 4- or 5-point arrays; other sizes give ALEXPROBE_E_UNSUPPORTED. */
ALEXPROBE_API alexprobe_status alexprobe_classify(const alexprobe_metric* d, double tol, double eps,
                                                  alexprobe_classification* out);
/* JSON classification payload; 3-point arrays report validity/PSD only. */
ALEXPROBE_API alexprobe_status alexprobe_classify_json(const alexprobe_metric* d, double tol,
                                                       double eps, char** json_out);

/* eigenvalues receives n-1 ascending values (capacity ALEXPROBE_MAX_EIGEN suffices). */
ALEXPROBE_API alexprobe_status alexprobe_embed_check(const alexprobe_metric* d, double tol,
                                                     int* embeddable, double* eigenvalues,
                                                     size_t* eigen_count);
/* coords receives n rows of n-1 doubles; ALEXPROBE_E_PRECONDITION if not embeddable. */
ALEXPROBE_API alexprobe_status alexprobe_realize(const alexprobe_metric* d, double tol, double* coords,
                                                 size_t capacity);
ALEXPROBE_API alexprobe_status alexprobe_embed_check_json(const alexprobe_metric* d, double tol,
                                                          int with_coordinates, char** json_out);

ALEXPROBE_API alexprobe_status alexprobe_violations_json(const alexprobe_matrix* m, double slack,
                                                         char** json_out);

/* ---- spaces, censuses, searches ---------------------------------------- */

/* Inline "name key=value ..." or a JSON SpaceSpec document. */
ALEXPROBE_API alexprobe_status alexprobe_space_parse(const char* text, alexprobe_space** out);
ALEXPROBE_API alexprobe_status alexprobe_space_load(const char* path, alexprobe_space** out);
ALEXPROBE_API alexprobe_status alexprobe_space_json(const alexprobe_space* s, char** json_out);
ALEXPROBE_API void alexprobe_space_free(alexprobe_space* s);

/* threads = 0 uses the hardware concurrency. Counts do not depend on it. */
ALEXPROBE_API alexprobe_status alexprobe_census_run(const alexprobe_space* s, size_t arity,
                                                    size_t samples, uint64_t seed, double tol,
                                                    double eps, unsigned threads,
                                                    alexprobe_census** out);
ALEXPROBE_API size_t alexprobe_census_count(const alexprobe_census* c, alexprobe_tag tag);
ALEXPROBE_API size_t alexprobe_census_degenerate(const alexprobe_census* c, alexprobe_reason reason);
ALEXPROBE_API size_t alexprobe_census_samples(const alexprobe_census* c);
ALEXPROBE_API alexprobe_status alexprobe_census_json(const alexprobe_census* c, char** json_out);
ALEXPROBE_API void alexprobe_census_free(alexprobe_census* c);

ALEXPROBE_API alexprobe_status alexprobe_search_run(const alexprobe_space* s, alexprobe_tag target,
                                                    size_t budget, uint64_t seed, double step,
                                                    double tol, double eps, alexprobe_search** out);
ALEXPROBE_API int alexprobe_search_found(const alexprobe_search* r);
ALEXPROBE_API size_t alexprobe_search_evaluations(const alexprobe_search* r);
ALEXPROBE_API double alexprobe_search_margin(const alexprobe_search* r);
ALEXPROBE_API alexprobe_status alexprobe_search_json(const alexprobe_search* r, char** json_out);
ALEXPROBE_API void alexprobe_search_free(alexprobe_search* r);

/* ---- reports ------------------------------------------------------------ */

typedef struct alexprobe_report_meta {
  const char* const* argv; /* command echo */
  size_t argc;
  int has_seed;
  uint64_t seed;
  double tol;
  double eps;
  double slack;
  double wall_time_seconds;
} alexprobe_report_meta;

/* Wraps a payload (as produced by the *_json calls) in the report envelope. */
ALEXPROBE_API alexprobe_status alexprobe_report_build(const alexprobe_report_meta* meta,
                                                      const char* payload_json, char** json_out);
/* ALEXPROBE_OK when the report matches the schema; otherwise
   ALEXPROBE_E_PARSE and alexprobe_last_error() lists the problems. */
ALEXPROBE_API alexprobe_status alexprobe_report_validate(const char* report_json);

#ifdef __cplusplus
}
#endif

#endif /* ALEXPROBE_ALEXPROBE_H */
