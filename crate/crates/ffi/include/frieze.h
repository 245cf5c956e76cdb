#ifndef FRIEZE_H
#define FRIEZE_H

/* Generated by cbindgen from src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum FriezeStatus {
  FRIEZE_STATUS_OK = 0,
  FRIEZE_STATUS_NULL_POINTER = 1,
  FRIEZE_STATUS_INVALID_ARGUMENT = 2,
  FRIEZE_STATUS_OUT_OF_RANGE = 3,
  /**
   * A relation forced a value outside the ring.
   */
  FRIEZE_STATUS_NOT_INTEGRAL = 4,
  /**
   * A relation forced a zero label.
   */
  FRIEZE_STATUS_ZERO_LABEL = 5,
  /**
   * The input contradicts a relation.
   */
  FRIEZE_STATUS_INCONSISTENT = 6,
  FRIEZE_STATUS_INTERNAL = 7,
} FriezeStatus;

/**
 * Enumerated friezes, each held as its JSON text.
 */
typedef struct FriezeSet FriezeSet;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread, or null. Valid until
 * the next call into the library.
 */
const char *frieze_last_error(void);

/**
 * Library version, a static string.
 */
const char *frieze_version(void);

/**
 * Enumerates every non-zero integral frieze of `kind` ("A", "B", "C", "D"
 * or "G2") and `rank` over the integers.
 *
 * # Safety
 * `kind` must be a NUL-terminated string and `out` a valid pointer.
 */
enum FriezeStatus frieze_enumerate(const char *kind, uint32_t rank, struct FriezeSet **out);

/**
 * Number of friezes in `set` (0 for null).
 *
 * # Safety
 * `set` must be null or come from [`frieze_enumerate`].
 */
size_t frieze_set_len(const struct FriezeSet *set);

/**
 * Number of entrywise positive friezes in `set` (0 for null).
 *
 * # Safety
 * `set` must be null or come from [`frieze_enumerate`].
 */
size_t frieze_set_positive_count(const struct FriezeSet *set);

/**
 * Copies frieze `index` as JSON into a new string for the caller, to be
 * released with [`frieze_string_free`].
 *
 * # Safety
 * `set` must come from [`frieze_enumerate`]; `out` must be valid.
 */
enum FriezeStatus frieze_set_item_json(const struct FriezeSet *set, size_t index, char **out);

/**
 * # Safety
 * `set` must be null or come from [`frieze_enumerate`], and not be used again.
 */
void frieze_set_free(struct FriezeSet *set);

/**
 * # Safety
 * `s` must be null or come from this library, and not be used again.
 */
void frieze_string_free(char *s);

/**
 * Closed-form count of non-zero integral friezes of `kind` and `rank`.
 *
 * # Safety
 * `kind` must be a NUL-terminated string and `out` a valid pointer.
 */
enum FriezeStatus frieze_count_formula(const char *kind, uint32_t rank, uint64_t *out);

/**
 * Checks a type A or D frieze given as JSON: `*valid` is set to whether
 * every relation holds with no zero label.
 *
 * # Safety
 * `json` must be a NUL-terminated string and `valid` a valid pointer.
 */
enum FriezeStatus frieze_check_json(const char *json, bool *valid);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* FRIEZE_H */
