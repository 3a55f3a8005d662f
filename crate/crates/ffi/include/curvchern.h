#ifndef CURVCHERN_H
#define CURVCHERN_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum CurvchernMethod {
  CURVCHERN_METHOD_DIRECT = 0,
  CURVCHERN_METHOD_ORACLE = 1,
  CURVCHERN_METHOD_FINITE = 2,
} CurvchernMethod;

/**
 * Result codes. The first four match the command-line exit codes.
 */
typedef enum CurvchernStatus {
  CURVCHERN_STATUS_OK = 0,
  /**
   * a conclusive identity check failed (output is still produced)
   */
  CURVCHERN_STATUS_CHECK_FAILED = 1,
  CURVCHERN_STATUS_PARSE_ERROR = 2,
  CURVCHERN_STATUS_PRECONDITION_FAILED = 3,
  CURVCHERN_STATUS_NULL_ARGUMENT = 4,
  CURVCHERN_STATUS_INVALID_UTF8 = 5,
  /**
   * the engine panicked; the handle should not be reused
   */
  CURVCHERN_STATUS_INTERNAL = 6,
} CurvchernStatus;

/**
 * Opaque validated input `(A, N, α, π)` with truncation caps.
 */
typedef struct CurvchernInput CurvchernInput;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or null. The pointer is
 * valid until the next call into the library on the same thread.
 */
const char *curvchern_last_error(void);

/**
 * Library version as a static string.
 */
const char *curvchern_version(void);

/**
 * Parses and validates a JSON manifest into a new handle.
 *
 * # Safety
 * `json` must be a NUL-terminated string; `out` must be valid for a write.
 */
enum CurvchernStatus curvchern_input_from_json(const char *json, struct CurvchernInput **out);

/**
 * Releases a handle. Null is ignored.
 *
 * # Safety
 * `input` must be null or a handle not yet freed.
 */
void curvchern_input_free(struct CurvchernInput *input);

/**
 * Replaces the truncation caps of a handle.
 *
 * # Safety
 * `input` must be a live handle.
 */
enum CurvchernStatus curvchern_input_set_caps(struct CurvchernInput *input,
                                              uint32_t u_order,
                                              size_t max_length);

/**
 * Rank of the free module `N`.
 *
 * # Safety
 * `input` must be a live handle.
 */
size_t curvchern_input_rank(const struct CurvchernInput *input);

/**
 * Checks a manifest; on `CHECK_FAILED` the violations (with witnesses) are
 * written to `out`, on `OK` a one-line summary.
 *
 * # Safety
 * `json` must be a NUL-terminated string; `out` must be valid for a write.
 */
enum CurvchernStatus curvchern_validate_json(const char *json, char **out);

/**
 * Computes the Chern character and writes its JSON report document to
 * `out`. With `verify` false the certification report is omitted.
 *
 * # Safety
 * `input` must be a live handle; `out` must be valid for a write.
 */
enum CurvchernStatus curvchern_chern_json(const struct CurvchernInput *input,
                                          enum CurvchernMethod method,
                                          bool verify,
                                          char **out);

/**
 * Compares the closed formula with the categorical oracle. Returns
 * `CHECK_FAILED` with the first differing stratum as the last error.
 * `checked` (optional) receives the number of conclusive strata.
 *
 * # Safety
 * `input` must be a live handle; `checked` must be null or valid for a write.
 */
enum CurvchernStatus curvchern_compare(const struct CurvchernInput *input, size_t *checked);

/**
 * Releases a string returned by the library. Null is ignored.
 *
 * # Safety
 * `s` must be null or a string from this library not yet freed.
 */
void curvchern_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* CURVCHERN_H */
