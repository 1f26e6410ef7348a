/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#ifndef PQ_H
#define PQ_H

#include <stddef.h>
#include <stdint.h>

/**
 * Kind of a period group, as returned by [`pq_detect_periods`].
 */
typedef enum PqGroupKind {
  PQ_GROUP_KIND_ZERO = 0,
  PQ_GROUP_KIND_CYCLIC = 1,
  PQ_GROUP_KIND_GENERATED = 2,
} PqGroupKind;

/**
 * Result of every fallible call. Non-zero values leave a message for
 * [`pq_last_error`].
 */
typedef enum PqStatus {
  PQ_STATUS_OK = 0,
  PQ_STATUS_NULL_POINTER = 1,
  PQ_STATUS_INVALID_UTF8 = 2,
  PQ_STATUS_INVALID_INPUT = 3,
  PQ_STATUS_GEOMETRY = 4,
  PQ_STATUS_INVALID_CONFIG = 5,
  PQ_STATUS_PARSE = 6,
  PQ_STATUS_IO = 7,
  PQ_STATUS_NUMERIC = 8,
  PQ_STATUS_PANIC = 9,
} PqStatus;

typedef struct PqContext PqContext;

typedef struct PqPath PqPath;

typedef struct PqSpace PqSpace;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or null. Valid until the
 * next call into the library on this thread.
 */
const char *pq_last_error(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *pq_version(void);

/**
 * # Safety
 * `out` must be a valid pointer to writable storage for one handle.
 */
enum PqStatus pq_space_euclidean(size_t n, struct PqSpace **out_space);

/**
 * # Safety
 * As [`pq_space_euclidean`].
 */
enum PqStatus pq_space_sphere2(struct PqSpace **out_space);

/**
 * # Safety
 * As [`pq_space_euclidean`].
 */
enum PqStatus pq_space_cone(uint32_t m, struct PqSpace **out_space);

/**
 * Ambient coordinate count of points in the space.
 *
 * # Safety
 * `space` must be a live handle or null.
 */
enum PqStatus pq_space_dim(const struct PqSpace *space, size_t *out_dim);

/**
 * # Safety
 * `space` must come from this library and not be used afterwards.
 */
void pq_space_free(struct PqSpace *space);

/**
 * Path from `n_knots` strictly increasing times in `[0, 1]` (first 0, last
 * 1) and row-major coordinates of length `n_knots * dim`.
 *
 * # Safety
 * `times` and `coords` must point to arrays of the stated lengths.
 */
enum PqStatus pq_path_new(const struct PqSpace *space,
                          const double *times,
                          const double *coords,
                          size_t n_knots,
                          struct PqPath **out_path);

/**
 * Path from its JSON form (`{"space": …, "knots": [[t, [x…]], …]}`).
 *
 * # Safety
 * `json` must be a NUL-terminated string.
 */
enum PqStatus pq_path_from_json(const char *json, struct PqPath **out_path);

/**
 * # Safety
 * `path` must be a live handle or null.
 */
enum PqStatus pq_path_knot_count(const struct PqPath *path, size_t *out_n);

/**
 * # Safety
 * `path` must come from this library and not be used afterwards.
 */
void pq_path_free(struct PqPath *path);

/**
 * Context with the exact period group of `space` and default quadrature.
 *
 * # Safety
 * `space` must be a live handle or null.
 */
enum PqStatus pq_context_new(const struct PqSpace *space, struct PqContext **out_ctx);

/**
 * Replaces the quadrature settings; `tol_report` is the threshold used for
 * reported error-bound checks.
 *
 * # Safety
 * `ctx` must be a live handle or null.
 */
enum PqStatus pq_context_set_quadrature(struct PqContext *ctx,
                                        size_t refine,
                                        size_t rows,
                                        double tol_report);

/**
 * # Safety
 * `ctx` must come from this library and not be used afterwards.
 */
void pq_context_free(struct PqContext *ctx);

/**
 * Raw pairing over the linear homotopy from `a` to `b` and its phase.
 * Either output may be null.
 *
 * # Safety
 * Handles must be live; outputs must be writable or null.
 */
enum PqStatus pq_cocycle(const struct PqContext *ctx,
                         const struct PqPath *a,
                         const struct PqPath *b,
                         double *out_raw,
                         double *out_phase);

/**
 * Pairing of a loop over its default contraction, and its phase.
 *
 * # Safety
 * As [`pq_cocycle`].
 */
enum PqStatus pq_isotropy(const struct PqContext *ctx,
                          const struct PqPath *loop_path,
                          double *out_raw,
                          double *out_phase);

/**
 * Phase of the morphism class of `path` in the reference gauge.
 *
 * # Safety
 * As [`pq_cocycle`].
 */
enum PqStatus pq_class_phase(const struct PqContext *ctx,
                             const struct PqPath *path,
                             double *out_phase);

/**
 * Detects the period group by sweeping `s_steps × t_steps` cells. For a
 * cyclic group the generator is written to `out_generator`; otherwise 0.
 *
 * # Safety
 * `space` must be live; outputs must be writable.
 */
enum PqStatus pq_detect_periods(const struct PqSpace *space,
                                size_t s_steps,
                                size_t t_steps,
                                enum PqGroupKind *out_kind,
                                double *out_generator);

/**
 * Runs a CLI command on an inline JSON job. Relative file inputs resolve
 * against `base_dir` (may be null for the current directory). The report
 * is written to `out_report` as a JSON string to release with
 * [`pq_string_free`], and `out_exit` receives the CLI exit code (0, or 1 if
 * a verify check failed).
 *
 * # Safety
 * String arguments must be NUL-terminated; outputs must be writable.
 */
enum PqStatus pq_run_job(const char *command,
                         const char *job_json,
                         const char *base_dir,
                         char **out_report,
                         int *out_exit);

/**
 * # Safety
 * `s` must come from this library and not be used afterwards.
 */
void pq_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* PQ_H */
