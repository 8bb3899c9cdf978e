#ifndef TWORAY_H
#define TWORAY_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result of every fallible call.
 */
typedef enum TworayStatus {
  TWORAY_STATUS_OK = 0,
  TWORAY_STATUS_NULL_POINTER = 1,
  TWORAY_STATUS_INVALID_UTF8 = 2,
  /**
   * Malformed JSON, a malformed system shape, or bad index syntax.
   */
  TWORAY_STATUS_PARSE = 3,
  /**
   * The system violates a defining-system constraint.
   */
  TWORAY_STATUS_INVALID = 4,
  TWORAY_STATUS_DOMAIN = 5,
  TWORAY_STATUS_INADMISSIBLE = 6,
  TWORAY_STATUS_PRECONDITION = 7,
  /**
   * A check ran and found a mismatch, or was skipped over budget.
   */
  TWORAY_STATUS_VERIFICATION_FAILED = 8,
  TWORAY_STATUS_INTERNAL = 9,
  TWORAY_STATUS_PANIC = 10,
} TworayStatus;

/**
 * A validated defining system.
 */
typedef struct TworaySystem TworaySystem;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version, a static string.
 */
const char *tworay_version(void);

/**
 * Message for the last failed call on this thread, or NULL after a success.
 * Valid until the next call into the library from the same thread.
 */
const char *tworay_last_error(void);

/**
 * # Safety
 * `s` must be NULL or a string returned by this library, not yet freed.
 */
void tworay_string_free(char *s);

/**
 * Parses and validates `{"p": .., "q": .., "S": .., "T": ..}`.
 *
 * # Safety
 * `json` must be NULL or NUL-terminated; `out` must be NULL or writable.
 */
enum TworayStatus tworay_system_from_json(const char *json, struct TworaySystem **out);

/**
 * # Safety
 * `sys` must be NULL or a handle from this library, not yet freed.
 */
void tworay_system_free(struct TworaySystem *sys);

/**
 * # Safety
 * `sys` must be a live handle; `out` must be writable.
 */
enum TworayStatus tworay_system_to_json(const struct TworaySystem *sys, char **out);

/**
 * Writes the validation report for `json` to `out`. Returns `Invalid` when
 * a constraint fails; the report is written either way.
 *
 * # Safety
 * `json` must be NUL-terminated; `out` must be writable.
 */
enum TworayStatus tworay_validate_json(const char *json, char **out);

/**
 * # Safety
 * `sys` must be a live handle; each count pointer must be writable.
 */
enum TworayStatus tworay_quiver_counts(const struct TworaySystem *sys,
                                       uintptr_t *vertices,
                                       uintptr_t *arrows,
                                       uintptr_t *relations);

/**
 * # Safety
 * `sys` must be a live handle; `out` must be writable.
 */
enum TworayStatus tworay_quiver_json(const struct TworaySystem *sys, char **out);

/**
 * The derived structure and its axiom report. Returns `VerificationFailed`
 * if an axiom fails; the JSON is written either way.
 *
 * # Safety
 * `sys` must be a live handle; `out` must be writable.
 */
enum TworayStatus tworay_structure_json(const struct TworaySystem *sys, char **out);

/**
 * Admissible indices as a JSON array of `x:i:j` / `z:i:j` names.
 *
 * # Safety
 * `sys` must be a live handle; `out` must be writable.
 */
enum TworayStatus tworay_admissible_json(const struct TworaySystem *sys, char **out);

/**
 * Extends by the admissible index `index` into a new handle.
 *
 * # Safety
 * `sys` must be a live handle; `index` NUL-terminated; `out` writable.
 */
enum TworayStatus tworay_extend(const struct TworaySystem *sys,
                                const char *index,
                                struct TworaySystem **out);

/**
 * # Safety
 * `sys` must be a live handle; `out` must be writable.
 */
enum TworayStatus tworay_census_json(const struct TworaySystem *sys, char **out);

/**
 * Runs every homological check up to algebra dimension `budget`. Returns
 * `VerificationFailed` on a mismatch or when the system is over budget; the
 * report is written either way.
 *
 * # Safety
 * `sys` must be a live handle; `out` must be writable.
 */
enum TworayStatus tworay_verify_json(const struct TworaySystem *sys, uintptr_t budget, char **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* TWORAY_H */
