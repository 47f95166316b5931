#ifndef KWIDTH_H
#define KWIDTH_H

/* Generated by cbindgen. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/*
 Status codes returned by every fallible function.
 */
typedef enum KwStatus {
  KW_STATUS_OK = 0,
  KW_STATUS_NULL_POINTER = 1,
  KW_STATUS_INVALID_UTF8 = 2,
  KW_STATUS_PARSE = 3,
  KW_STATUS_INVALID_CURVE = 4,
  KW_STATUS_DEGENERATE = 5,
  KW_STATUS_NOT_GENERIC = 6,
  KW_STATUS_PERTURBATION_FAILED = 7,
  KW_STATUS_INCONSISTENT = 8,
  KW_STATUS_LOW_CONFIDENCE = 9,
  KW_STATUS_FLAG_VIOLATION = 10,
  KW_STATUS_IO = 11,
  KW_STATUS_PANIC = 12,
} KwStatus;

/*
 Opaque curve handle.
 */
typedef struct KwCurve KwCurve;

/*
 Planar feature counts of the xy-projection.
 */
typedef struct KwFeatureCounts {
  uint64_t crossings;
  uint64_t inflections;
  uint64_t bitangents;
  uint64_t interior_bitangents;
  double total_curvature;
  /*
   Residual numerator; denominator is `fb_denominator`.
   */
  int64_t fb_numerator;
  int64_t fb_denominator;
} KwFeatureCounts;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/*
 Parses a curve from its JSON file contents.

 # Safety
 `json` must be a NUL-terminated string; `out` must be writable.
 */
enum KwStatus kw_curve_from_json(const char *json, struct KwCurve **out);

/*
 Builds a curve from a generator spec such as `{"kind":"torus_2braid","q":3}`.

 # Safety
 `spec_json` must be a NUL-terminated string; `out` must be writable.
 */
enum KwStatus kw_curve_generate(const char *spec_json, struct KwCurve **out);

/*
 Releases a curve. Null is ignored.

 # Safety
 `curve` must come from this library and not be freed twice.
 */
void kw_curve_free(struct KwCurve *curve);

/*
 Number of components, or 0 for a null handle.

 # Safety
 `curve` must be null or a live handle.
 */
uintptr_t kw_curve_component_count(const struct KwCurve *curve);

/*
 Serializes a curve to JSON.

 # Safety
 `curve` must be a live handle; `out` must be writable.
 */
enum KwStatus kw_curve_to_json(const struct KwCurve *curve, char **out);

/*
 Second width of the xy-projection.

 # Safety
 `curve` must be a live handle; `out` must be writable.
 */
enum KwStatus kw_width2(const struct KwCurve *curve, uint64_t *out);

/*
 Height-function width (twice the number of maxima).

 # Safety
 `curve` must be a live handle; `out` must be writable.
 */
enum KwStatus kw_width1(const struct KwCurve *curve, uint64_t *out);

/*
 Crossing, inflection and bitangent counts of the xy-projection.

 # Safety
 `curve` must be a live handle; `out` must be writable.
 */
enum KwStatus kw_features(const struct KwCurve *curve, struct KwFeatureCounts *out);

/*
 Grid estimate of the second width on an `nt × nd` grid.

 # Safety
 `curve` must be a live handle; `out` must be writable.
 */
enum KwStatus kw_grid_width2(const struct KwCurve *curve,
                             uint32_t nt,
                             uint32_t nd,
                             uint32_t refine_rounds,
                             uint64_t *out);

/*
 Full analysis as JSON. A nonzero `use_seed` enables perturbation with `seed`.

 # Safety
 `curve` must be a live handle; `out` must be writable.
 */
enum KwStatus kw_analyze(const struct KwCurve *curve, int32_t use_seed, uint64_t seed, char **out);

/*
 Releases a string returned by this library. Null is ignored.

 # Safety
 `s` must come from this library and not be freed twice.
 */
void kw_string_free(char *s);

/*
 Message for the last failed call on this thread, or null.
 Valid until the next call into the library from the same thread.
 */
const char *kw_last_error_message(void);

/*
 Library version string.
 */
const char *kw_version(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* KWIDTH_H */
