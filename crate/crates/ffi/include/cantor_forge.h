#ifndef CANTOR_FORGE_H
#define CANTOR_FORGE_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum CfStatus {
  CF_STATUS_OK = 0,
  CF_STATUS_NULL_POINTER = 1,
  CF_STATUS_INVALID_ARGUMENT = 2,
  CF_STATUS_VERIFICATION_FAILED = 3,
  CF_STATUS_BUFFER_TOO_SMALL = 4,
  CF_STATUS_PANIC = 5,
} CfStatus;

/**
 * Opaque point set.
 */
typedef struct CfPointSet CfPointSet;

/**
 * Opaque spanner graph.
 */
typedef struct CfSpanner CfSpanner;

/**
 * Opaque compiled Exact Cover → TSP instance.
 */
typedef struct CfTspInstance CfTspInstance;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failure on this thread, or NULL. Valid until the next failing call.
 */
const char *cf_last_error(void);

/**
 * Static version string.
 */
const char *cf_version(void);

/**
 * Frees a string returned by this library. NULL is ignored.
 *
 * # Safety
 * `s` must come from a `*_to_json` call and not have been freed.
 */
void cf_string_free(char *s);

/**
 * f^{l,v,d}(k).
 *
 * # Safety
 * `out` must be a valid pointer to writable storage for one handle.
 */
enum CfStatus cf_pointset_crossbar(uint32_t l,
                                   uint32_t v,
                                   uint32_t d,
                                   uint32_t k,
                                   struct CfPointSet **out);

/**
 * Discrete Sierpiński carpet of depth k.
 *
 * # Safety
 * `out` must be a valid pointer to writable storage for one handle.
 */
enum CfStatus cf_pointset_carpet(uint32_t k, bool box_points, struct CfPointSet **out);

/**
 * {0..n-1}^d as generated by the library.
 *
 * # Safety
 * `out` must be a valid pointer to writable storage for one handle.
 */
enum CfStatus cf_pointset_grid(uint32_t n, uint32_t d, struct CfPointSet **out);

/**
 * Parses point-set JSON.
 *
 * # Safety
 * `json` must be a NUL-terminated string; `out` writable.
 */
enum CfStatus cf_pointset_from_json(const char *json, struct CfPointSet **out);

/**
 * # Safety
 * `p` must be a live handle; `len` and `dim` writable (either may be NULL).
 */
enum CfStatus cf_pointset_shape(const struct CfPointSet *p, size_t *len, size_t *dim);

/**
 * Writes len·dim coordinates, row-major, rounded to double.
 *
 * # Safety
 * `buf` must hold `cap` doubles.
 */
enum CfStatus cf_pointset_coords(const struct CfPointSet *p, double *buf, size_t cap);

/**
 * Exact JSON. Free the result with `cf_string_free`.
 *
 * # Safety
 * `p` live, `out` writable.
 */
enum CfStatus cf_pointset_to_json(const struct CfPointSet *p, char **out);

/**
 * # Safety
 * `p` must be NULL or a handle not yet freed.
 */
void cf_pointset_free(struct CfPointSet *p);

/**
 * Greedy spanner with stretch c = c_num / c_den.
 *
 * # Safety
 * `p` live, `out` writable.
 */
enum CfStatus cf_spanner_greedy(const struct CfPointSet *p,
                                int64_t c_num,
                                int64_t c_den,
                                struct CfSpanner **out);

/**
 * # Safety
 * `out` writable.
 */
enum CfStatus cf_spanner_carpet(uint32_t k, struct CfSpanner **out);

/**
 * # Safety
 * `g` live; `vertices`, `edges` writable or NULL.
 */
enum CfStatus cf_spanner_shape(const struct CfSpanner *g, size_t *vertices, size_t *edges);

/**
 * Checks stretch ≤ c_num / c_den. Returns `VerificationFailed` when it does not hold;
 * `max_stretch` gets the measured value (infinity if disconnected) either way.
 *
 * # Safety
 * `g` live, `max_stretch` writable or NULL.
 */
enum CfStatus cf_spanner_verify(const struct CfSpanner *g,
                                int64_t c_num,
                                int64_t c_den,
                                double *max_stretch);

/**
 * # Safety
 * `g` live, `out` writable.
 */
enum CfStatus cf_spanner_to_json(const struct CfSpanner *g, char **out);

/**
 * # Safety
 * `g` must be NULL or a handle not yet freed.
 */
void cf_spanner_free(struct CfSpanner *g);

/**
 * Compiles `{"m": .., "sets": [[..], ..]}` and runs the structural checks.
 *
 * # Safety
 * `xc_json` NUL-terminated, `out` writable.
 */
enum CfStatus cf_tsp_reduce(const char *xc_json,
                            uint32_t l,
                            uint32_t v,
                            struct CfTspInstance **out);

/**
 * # Safety
 * `t` live; outputs writable or NULL.
 */
enum CfStatus cf_tsp_summary(const struct CfTspInstance *t,
                             size_t *points,
                             size_t *components,
                             double *alpha);

/**
 * Re-runs the structural checks.
 *
 * # Safety
 * `t` live.
 */
enum CfStatus cf_tsp_check(const struct CfTspInstance *t);

/**
 * Witness path length for the cover given as `count` set indices.
 *
 * # Safety
 * `t` live, `cover` holds `count` entries (may be NULL when `count` is 0), `length` writable.
 */
enum CfStatus cf_tsp_witness_length(const struct CfTspInstance *t,
                                    const size_t *cover,
                                    size_t count,
                                    double *length);

/**
 * # Safety
 * `t` live, `out` writable.
 */
enum CfStatus cf_tsp_to_json(const struct CfTspInstance *t, char **out);

/**
 * # Safety
 * `t` must be NULL or a handle not yet freed.
 */
void cf_tsp_free(struct CfTspInstance *t);

/**
 * Runs `count` seeded ≤-CSP instances (d = 2) through the ball compiler and the oracles.
 * `agreed` gets the number of instances on which all three answers match.
 *
 * # Safety
 * `agreed` writable.
 */
enum CfStatus cf_csp_equivalence(uint64_t seed,
                                 size_t count,
                                 uint32_t n_max,
                                 uint32_t delta_max,
                                 uint64_t budget,
                                 size_t *agreed);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* CANTOR_FORGE_H */
