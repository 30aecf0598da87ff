#ifndef KCONE_H
#define KCONE_H

/* Generated by cbindgen from src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result codes.
 */
typedef enum KcStatus {
  KC_STATUS_OK = 0,
  KC_STATUS_NULL_POINTER = 1,
  KC_STATUS_INVALID_ARGUMENT = 2,
  KC_STATUS_SCHEMA = 3,
  KC_STATUS_UNSUPPORTED = 4,
  KC_STATUS_INFEASIBLE = 5,
  KC_STATUS_INTERNAL = 6,
} KcStatus;

/**
 * A parsed space. Opaque to C.
 */
typedef struct KcSpace KcSpace;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failure on this thread; empty after a success. The
 * pointer stays valid until the next call into this library on the same
 * thread.
 */
const char *kc_last_error_message(void);

/**
 * `sn_κ(t)`.
 *
 * # Safety
 * `out` must be valid for writes.
 */
enum KcStatus kc_sn(double kappa, double t, double *out);

/**
 * Third side of the model triangle with sides `s`, `t` and included angle
 * `theta`.
 *
 * # Safety
 * `out` must be valid for writes.
 */
enum KcStatus kc_cosine_law_side(double kappa, double s, double t, double theta, double *out);

/**
 * Parses a space document (`{"schema": 1, "space": {...}}`). On success
 * `*out` owns a new handle.
 *
 * # Safety
 * `json` must be a NUL-terminated string, `out` valid for writes.
 */
enum KcStatus kc_space_from_json(const char *json, struct KcSpace **out);

/**
 * Releases a handle. Null is ignored.
 *
 * # Safety
 * `space` must come from `kc_space_from_json` and not be used afterwards.
 */
void kc_space_free(struct KcSpace *space);

/**
 * Distance between two points given as text: `apex` or `t,direction` on
 * cones and glued cones, `x:y` on polygons, a direction on direction spaces.
 * Glued spaces and polygons use a boundary net of spacing `eps`; `error`
 * (may be null) receives the graph error bound, 0 for exact distances.
 *
 * # Safety
 * `space` must be a live handle, `from` and `to` NUL-terminated strings,
 * `out` valid for writes, `error` null or valid for writes.
 */
enum KcStatus kc_space_distance(const struct KcSpace *space,
                                const char *from,
                                const char *to,
                                double eps,
                                double *out,
                                double *error);

/**
 * Volume of the ball of radius `r` about the base point. With
 * `samples == 0` the value is deterministic and `error` is its tolerance;
 * otherwise it is a Monte-Carlo estimate and `error` its standard error.
 *
 * # Safety
 * `space` must be a live handle, `out` valid for writes, `error` null or
 * valid for writes.
 */
enum KcStatus kc_space_ball_volume(const struct KcSpace *space,
                                   double r,
                                   uint64_t samples,
                                   uint64_t seed,
                                   double *out,
                                   double *error);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* KCONE_H */
