#ifndef ATLAS_H
#define ATLAS_H

/* Generated by cbindgen from the atlas-ffi crate. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum AtlasStatus {
  ATLAS_STATUS_OK = 0,
  ATLAS_STATUS_INVALID_ARGUMENT = 1,
  ATLAS_STATUS_NULL_POINTER = 2,
  ATLAS_STATUS_INTERNAL = 3,
  ATLAS_STATUS_PANIC = 4,
} AtlasStatus;

/**
 * Opaque handle to a GSp(2g) context.
 */
typedef struct AtlasSiegel AtlasSiegel;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Builds the context for genus `g ≥ 1`.
 *
 * # Safety
 * `out` must be null or valid for writes.
 */
enum AtlasStatus atlas_siegel_new(uint32_t g, struct AtlasSiegel **out);

/**
 * # Safety
 * `h` must be null or a handle from [`atlas_siegel_new`] not yet freed.
 */
void atlas_siegel_free(struct AtlasSiegel *h);

/**
 * # Safety
 * `h` must be a live handle; `out` must be valid for writes.
 */
enum AtlasStatus atlas_siegel_genus(const struct AtlasSiegel *h, uint32_t *out);

/**
 * Bitmask of the hyperspecial level `{s_1, …, s_g}`.
 *
 * # Safety
 * `h` must be a live handle; `out` must be valid for writes.
 */
enum AtlasStatus atlas_hyperspecial_mask(const struct AtlasSiegel *h, uint64_t *out);

/**
 * # Safety
 * `h` must be a live handle; `out` must be valid for writes.
 */
enum AtlasStatus atlas_adm_size(const struct AtlasSiegel *h, size_t *out);

/**
 * `Adm(μ)` as a JSON array.
 *
 * # Safety
 * `h` must be a live handle; `out` must be valid for writes.
 */
enum AtlasStatus atlas_adm_json(const struct AtlasSiegel *h, char **out);

/**
 * Stratum records at the level whose nodes are the set bits of `level_mask`.
 *
 * # Safety
 * `h` must be a live handle; `out` must be valid for writes.
 */
enum AtlasStatus atlas_classify_json(const struct AtlasSiegel *h, uint64_t level_mask, char **out);

/**
 * Number of basic strata at the level `level_mask`.
 *
 * # Safety
 * `h` must be a live handle; `out` must be valid for writes.
 */
enum AtlasStatus atlas_count_basic(const struct AtlasSiegel *h, uint64_t level_mask, size_t *out);

/**
 * Both comparison tables as JSON; `mismatches` receives the number of EO
 * rows where the generic data differ from the closed forms.
 *
 * # Safety
 * `h` must be a live handle; `out` and `mismatches` must be valid for writes.
 */
enum AtlasStatus atlas_compare_json(const struct AtlasSiegel *h, char **out, size_t *mismatches);

/**
 * Message for the last failure on this thread, or null. Valid until the
 * next call into the library from the same thread.
 */
const char *atlas_last_error(void);

/**
 * # Safety
 * `s` must be null or a string returned by this library, not yet freed.
 */
void atlas_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* ATLAS_H */
