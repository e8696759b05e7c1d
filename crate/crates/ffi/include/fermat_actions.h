#ifndef FERMAT_ACTIONS_H
#define FERMAT_ACTIONS_H

/* Generated by cbindgen. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status codes returned by every fallible function.
 */
typedef enum FaStatus {
  FA_STATUS_OK = 0,
  FA_STATUS_NULL_POINTER = 1,
  FA_STATUS_INVALID_ARGUMENT = 2,
  FA_STATUS_SCALE_CAP = 3,
  FA_STATUS_OUT_OF_RANGE = 4,
  FA_STATUS_UNSUPPORTED = 5,
  FA_STATUS_PANIC = 6,
} FaStatus;

/**
 * A sorted set of admissible subgroup keys with common parameters.
 */
typedef struct FaKeySet FaKeySet;

/**
 * A permutation group on {1..degree}.
 */
typedef struct FaPermGroup FaPermGroup;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version as a static NUL-terminated string.
 */
const char *fa_version(void);

/**
 * Message for the last failure on this thread; empty after a success.
 *
 * The pointer stays valid until the next library call on the same thread.
 */
const char *fa_last_error_message(void);

/**
 * Genus of the curve with an action of Z_k^m of signature (0; k^(n+1)).
 *
 * # Safety
 * `out` must be valid for writes.
 */
enum FaStatus fa_total_genus(uint64_t k, uint64_t n, uint64_t m, uint64_t *out);

/**
 * Builds the group generated by permutations in cycle notation.
 *
 * # Safety
 * `generators` must point to `count` NUL-terminated strings (or be null when
 * `count` is 0), and `out` must be valid for writes.
 */
enum FaStatus fa_group_new(uint32_t degree,
                           const char *const *generators,
                           size_t count,
                           struct FaPermGroup **out);

/**
 * The group of a named case such as "N5_D3".
 *
 * # Safety
 * `name` must be a NUL-terminated string and `out` valid for writes.
 */
enum FaStatus fa_group_from_case(const char *name, struct FaPermGroup **out);

/**
 * # Safety
 * `group` must be a live handle and `out` valid for writes.
 */
enum FaStatus fa_group_order(const struct FaPermGroup *group, size_t *out);

/**
 * The normalizer of `group` in the symmetric group of its degree.
 *
 * # Safety
 * `group` must be a live handle and `out` valid for writes.
 */
enum FaStatus fa_group_normalizer(const struct FaPermGroup *group, struct FaPermGroup **out);

/**
 * # Safety
 * `group` must be null or a handle not yet freed.
 */
void fa_group_free(struct FaPermGroup *group);

/**
 * All admissible keys for (p, n, m).
 *
 * # Safety
 * `out` must be valid for writes.
 */
enum FaStatus fa_enumerate(uint64_t p, uint32_t n, uint32_t m, struct FaKeySet **out);

/**
 * # Safety
 * `set` must be a live handle and `out` valid for writes.
 */
enum FaStatus fa_keyset_len(const struct FaKeySet *set, size_t *out);

/**
 * Text form "p/n/m:rows" of key `index`; free it with [`fa_string_free`].
 *
 * # Safety
 * `set` must be a live handle and `out` valid for writes.
 */
enum FaStatus fa_keyset_key_string(const struct FaKeySet *set, size_t index, char **out);

/**
 * # Safety
 * `set` must be null or a handle not yet freed.
 */
void fa_keyset_free(struct FaKeySet *set);

/**
 * # Safety
 * `s` must be null or a string returned by this library and not yet freed.
 */
void fa_string_free(char *s);

/**
 * Number of orbits of `group` on `set`.
 *
 * # Safety
 * Both handles must be live and `out` valid for writes.
 */
enum FaStatus fa_count_orbits(const struct FaKeySet *set,
                              const struct FaPermGroup *group,
                              size_t *out);

/**
 * The keys of `set` fixed by every element of `group`.
 *
 * # Safety
 * Both handles must be live and `out` valid for writes.
 */
enum FaStatus fa_invariant_set(const struct FaKeySet *set,
                               const struct FaPermGroup *group,
                               struct FaKeySet **out);

/**
 * Number of inequivalent triples for `q` at (p, n, 2); `predicted` selects
 * the closed-form family instead of the full enumeration.
 *
 * # Safety
 * `q` must be a live handle and `out` valid for writes.
 */
enum FaStatus fa_classify_triples(uint64_t p,
                                  uint32_t n,
                                  const struct FaPermGroup *q,
                                  int predicted,
                                  size_t *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* FERMAT_ACTIONS_H */
