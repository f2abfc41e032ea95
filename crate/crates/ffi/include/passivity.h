#ifndef PASSIVITY_H
#define PASSIVITY_H

/* Generated by cbindgen; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status codes. The first five match the command-line exit codes.
 */
typedef enum PvStatus {
  PV_STATUS_OK = 0,
  PV_STATUS_INVALID_INPUT = 1,
  PV_STATUS_NOT_PASSIVE = 2,
  PV_STATUS_INCONSISTENT = 3,
  PV_STATUS_STEP_LIMIT = 4,
  PV_STATUS_NULL_POINTER = 10,
  PV_STATUS_INVALID_UTF8 = 11,
  PV_STATUS_PANIC = 12,
} PvStatus;

/**
 * Opaque problem handle.
 */
typedef struct PvProblem PvProblem;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version as a static NUL-terminated string.
 */
const char *pv_version(void);

/**
 * Message for the last failed call on this thread, or null. Valid until the
 * next call into the library from the same thread.
 */
const char *pv_last_error(void);

/**
 * Parses a problem document into a new handle stored in `*out`.
 *
 * # Safety
 * `json` must be null or a NUL-terminated string; `out` must be null or
 * writable.
 */
enum PvStatus pv_problem_parse(const char *json, struct PvProblem **out);

/**
 * # Safety
 * `handle` must be null or come from `pv_problem_parse`, and not be freed twice.
 */
void pv_problem_free(struct PvProblem *handle);

/**
 * # Safety
 * `s` must be null or a string returned by this library, freed once.
 */
void pv_string_free(char *s);

/**
 * Passivity report. Returns Ok, NotPassive or Inconsistent per the verdict.
 *
 * # Safety
 * `handle` must be a live handle or null; `out` must be writable or null.
 */
enum PvStatus pv_check(const struct PvProblem *handle, char **out);

/**
 * Reduces the polynomial given as JSON modulo the system.
 *
 * # Safety
 * As for `pv_check`; `target` must be null or NUL-terminated.
 */
enum PvStatus pv_reduce(const struct PvProblem *handle, const char *target, char **out);

/**
 * Cross-derivative syzygy generators of the leads.
 *
 * # Safety
 * As for `pv_check`.
 */
enum PvStatus pv_syzygies(const struct PvProblem *handle, char **out);

/**
 * Quotient census up to `order`; a negative order keeps the problem's bound.
 *
 * # Safety
 * As for `pv_check`.
 */
enum PvStatus pv_quotient(const struct PvProblem *handle, int32_t order, char **out);

/**
 * Ranking axiom audit with `samples` random checks. Returns NotPassive when
 * counterexamples were found.
 *
 * # Safety
 * As for `pv_check`.
 */
enum PvStatus pv_ranking_audit(const struct PvProblem *handle, size_t samples, char **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* PASSIVITY_H */
