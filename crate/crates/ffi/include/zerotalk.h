#ifndef ZEROTALK_H
#define ZEROTALK_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Status codes. Values 0–5 match the command-line exit codes.
typedef enum ZtStatus {
  ZT_STATUS_OK = 0,
  // A verification check failed.
  ZT_STATUS_MISMATCH = 1,
  ZT_STATUS_PARSE = 2,
  ZT_STATUS_MODEL = 3,
  ZT_STATUS_UNSUPPORTED = 4,
  ZT_STATUS_RESOURCE_LIMIT = 5,
  ZT_STATUS_NULL_ARGUMENT = 6,
  // The library panicked; the handle involved should be considered lost.
  ZT_STATUS_PANIC = 7,
} ZtStatus;

// Which report `zt_report_json` renders.
typedef enum ZtReportKind {
  ZT_REPORT_KIND_JGK = 0,
  ZT_REPORT_KIND_ORACLE = 1,
  ZT_REPORT_KIND_VERIFY = 2,
} ZtReportKind;

// Opaque source handle.
typedef struct ZtSource ZtSource;

typedef struct ZtJgk {
  double bits;
  // True when the value is the capacity, false when only a lower bound.
  bool proven;
} ZtJgk;

typedef struct ZtOracle {
  double bits;
  size_t components;
  size_t support;
} ZtOracle;

// Lamination bound for one partition. `slope` and `bound_at_zero` are NaN
// and `bound_at_rate` is +inf (or NaN at rate 0) when `vacuous` is set.
typedef struct ZtLamination {
  uint64_t alpha_numer;
  uint64_t alpha_denom;
  double h_g_bits;
  double slope;
  double bound_at_zero;
  double bound_at_rate;
  bool vacuous;
  // Set when a two-user finite linear source was converted first.
  bool converted;
} ZtLamination;

typedef struct ZtSimulation {
  size_t n;
  uint64_t seed;
  bool agreement;
  double empirical_rate_bits;
  double h_g_bits;
  double tolerance_bits;
  bool within_tolerance;
  uint64_t discussion_bits;
} ZtSimulation;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Parses a JSON spec document into a new handle stored in `*out`.
//
// # Safety
// `json` must be a NUL-terminated string and `out` a valid pointer.
enum ZtStatus zt_source_from_json(const char *json, struct ZtSource **out);

// Releases a handle. Null is ignored.
//
// # Safety
// `source` must come from this library and not be used afterwards.
void zt_source_free(struct ZtSource *source);

// Number of users, or 0 for a null handle.
//
// # Safety
// `source` must be null or a live handle.
size_t zt_source_user_count(const struct ZtSource *source);

// Serializes the source back to a JSON spec document.
//
// # Safety
// `source` must be a live handle and `out` a valid pointer.
enum ZtStatus zt_source_to_json(const struct ZtSource *source, char **out);

// Closed-form common information.
//
// # Safety
// `source` must be a live handle and `out` a valid pointer.
enum ZtStatus zt_jgk(const struct ZtSource *source, struct ZtJgk *out);

// Brute-force common information over the expanded joint support.
//
// # Safety
// `source` must be a live handle and `out` a valid pointer.
enum ZtStatus zt_oracle(const struct ZtSource *source, struct ZtOracle *out);

// Lamination bound for `partition` (e.g. `"1,2|3"`; null means singletons)
// evaluated at `rate`.
//
// # Safety
// `source` must be a live handle, `partition` null or NUL-terminated, and
// `out` a valid pointer.
enum ZtStatus zt_lamination(const struct ZtSource *source,
                            const char *partition,
                            double rate,
                            struct ZtLamination *out);

// Chain bound for a user ordering of 0-based ids. A null `ordering`
// means the identity order.
//
// # Safety
// `ordering` must be null or point to `len` values; `out` must be valid.
enum ZtStatus zt_chain_bound(const struct ZtSource *source,
                             const size_t *ordering,
                             size_t len,
                             double *out);

// Runs the zero-discussion key agreement simulation.
//
// # Safety
// `source` must be a live handle and `out` a valid pointer.
enum ZtStatus zt_simulate(const struct ZtSource *source,
                          size_t n,
                          uint64_t seed,
                          struct ZtSimulation *out);

// Converts a two-user finite linear source into a new hypergraphical handle.
//
// # Safety
// `source` must be a live handle and `out` a valid pointer.
enum ZtStatus zt_convert_to_hypergraphical(const struct ZtSource *source, struct ZtSource **out);

// Renders the JSON report the command line prints with `--json`. A
// failing verification still writes the report and returns `Mismatch`.
//
// # Safety
// `source` must be a live handle and `out` a valid pointer.
enum ZtStatus zt_report_json(const struct ZtSource *source, enum ZtReportKind kind, char **out);

// Releases a string returned by this library. Null is ignored.
//
// # Safety
// `s` must come from this library and not be used afterwards.
void zt_string_free(char *s);

// Message for the last failed call on this thread, or null. The pointer
// stays valid until the next library call on the same thread.
const char *zt_last_error(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* ZEROTALK_H */
