#ifndef XLEGENDRE_H
#define XLEGENDRE_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum XlStatus {
  XL_STATUS_OK = 0,
  XL_STATUS_NULL_POINTER = 1,
  XL_STATUS_INVALID_ARGUMENT = 2,
  XL_STATUS_INADMISSIBLE = 3,
  XL_STATUS_INTERNAL = 4,
  XL_STATUS_PANIC = 5,
} XlStatus;

/**
 * Opaque family handle.
 */
typedef struct XlFamily XlFamily;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Builds a family from `n` levels and `n` rational literals such as
 * `"7/2"` or `"-3"`. Repeated levels are merged as usual. On success
 * `*out` owns a handle to be released with `xl_family_free`.
 *
 * # Safety
 * `m` and `t` must point to `n` readable elements (either may be null when
 * `n` is 0), each `t[k]` a NUL-terminated string, and `out` a writable
 * pointer.
 */
enum XlStatus xl_family_new(const uint32_t *m,
                            const char *const *t,
                            size_t n,
                            struct XlFamily **out);

/**
 * # Safety
 * `family` must be null or a handle from `xl_family_new` not yet freed.
 */
void xl_family_free(struct XlFamily *family);

/**
 * Number of deformed levels after merging duplicates.
 *
 * # Safety
 * `family` must be a live handle and `out` writable.
 */
enum XlStatus xl_family_len(const struct XlFamily *family, size_t *out);

/**
 * `tau` as a JSON array of rational strings, lowest power first.
 *
 * # Safety
 * `family` must be a live handle and `out` writable.
 */
enum XlStatus xl_family_tau_json(const struct XlFamily *family, char **out);

/**
 * `P_{m;i}` as a JSON array of rational strings, lowest power first.
 *
 * # Safety
 * `family` must be a live handle and `out` writable.
 */
enum XlStatus xl_family_poly_json(const struct XlFamily *family, uint32_t i, char **out);

/**
 * # Safety
 * `family` must be a live handle and `out` writable.
 */
enum XlStatus xl_family_is_admissible(const struct XlFamily *family, bool *out);

/**
 * Squared norm of `P_{m;i}` as an exact rational string. Fails with
 * `XL_STATUS_INADMISSIBLE` when the weight is singular.
 *
 * # Safety
 * `family` must be a live handle and `out` writable.
 */
enum XlStatus xl_family_norm(const struct XlFamily *family, uint32_t i, char **out);

/**
 * Exact check of `T P_{m;i} = -i(i+1) P_{m;i}`.
 *
 * # Safety
 * `family` must be a live handle and `out` writable.
 */
enum XlStatus xl_family_verify_eigen(const struct XlFamily *family, uint32_t i, bool *out);

/**
 * # Safety
 * `s` must be null or a string returned by this library, not yet freed.
 */
void xl_string_free(char *s);

/**
 * Message for the last failure on this thread, or null. The pointer stays
 * valid until the next failing call on the same thread.
 */
const char *xl_last_error(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* XLEGENDRE_H */
