#ifndef SUBQUBO_H
#define SUBQUBO_H

#pragma once

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum SqStatus {
  SQ_STATUS_OK = 0,
  SQ_STATUS_NULL_POINTER = 1,
  SQ_STATUS_DIMENSION = 2,
  SQ_STATUS_INDEX = 3,
  SQ_STATUS_DOMAIN = 4,
  SQ_STATUS_CAPACITY = 5,
  SQ_STATUS_CONFIG = 6,
  SQ_STATUS_PARSE = 7,
  SQ_STATUS_VALIDATION = 8,
  SQ_STATUS_IO = 9,
  SQ_STATUS_BUFFER_TOO_SMALL = 10,
  SQ_STATUS_PANIC = 11,
} SqStatus;

typedef enum SqSolverKind {
  SQ_SOLVER_KIND_BRUTE_FORCE = 0,
  SQ_SOLVER_KIND_ANNEAL = 1,
} SqSolverKind;

/**
 * Opaque upper-triangular QUBO matrix.
 */
typedef struct SqQubo SqQubo;

/**
 * Opaque sweep report.
 */
typedef struct SqReport SqReport;

/**
 * Opaque sampler output.
 */
typedef struct SqSampleSet SqSampleSet;

/**
 * Opaque linear system `A x = b`.
 */
typedef struct SqSystem SqSystem;

/**
 * Annealing parameters. Zeroed fields are not replaced by defaults; use
 * [`sq_anneal_defaults`] to start from the library defaults.
 */
typedef struct SqAnnealSchedule {
  uint64_t num_reads;
  uint64_t sweeps_per_read;
  double beta_initial;
  double beta_final;
  uint64_t seed;
} SqAnnealSchedule;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or NULL. Valid until the
 * next call into this library from the same thread.
 */
const char *sq_last_error_message(void);

struct SqAnnealSchedule sq_anneal_defaults(void);

/**
 * Creates a system from a row-major `n * n` matrix and a length-`n` RHS.
 *
 * # Safety
 * `a` must point to `n * n` doubles, `b` to `n` doubles, `out` to writable
 * storage for one pointer.
 */
enum SqStatus sq_system_new(size_t n, const double *a, const double *b, struct SqSystem **out);

/**
 * # Safety
 * `system` must come from [`sq_system_new`] and not be freed twice.
 */
void sq_system_free(struct SqSystem *system);

/**
 * # Safety
 * `system` must be a live handle or NULL.
 */
size_t sq_system_dim(const struct SqSystem *system);

/**
 * Residual `||A x - b||^2`.
 *
 * # Safety
 * `x` must point to `len` doubles; `out` must be writable.
 */
enum SqStatus sq_verify_solution(const struct SqSystem *system,
                                 const double *x,
                                 size_t len,
                                 double *out);

/**
 * Builds the QUBO of the window translated by `t` (`t_len == n`), or of the
 * untranslated problem when `t` is NULL. `lo`/`hi` are the bit exponents.
 * The window's target energy `-c^T c` goes to `target_energy` when it is
 * not NULL.
 *
 * # Safety
 * Pointers must be valid for the stated lengths; `out` must be writable.
 */
enum SqStatus sq_qubo_build(const struct SqSystem *system,
                            int32_t lo,
                            int32_t hi,
                            const int64_t *t,
                            size_t t_len,
                            double *target_energy,
                            struct SqQubo **out);

/**
 * Wraps a row-major `dim * dim` upper-triangular matrix.
 *
 * # Safety
 * `entries` must point to `dim * dim` doubles; `out` must be writable.
 */
enum SqStatus sq_qubo_from_dense(size_t dim, const double *entries, struct SqQubo **out);

/**
 * # Safety
 * `q` must come from this library and not be freed twice.
 */
void sq_qubo_free(struct SqQubo *q);

/**
 * # Safety
 * `q` must be a live handle or NULL.
 */
size_t sq_qubo_dim(const struct SqQubo *q);

/**
 * # Safety
 * `q` must be a live handle; `out` must be writable.
 */
enum SqStatus sq_qubo_get(const struct SqQubo *q, size_t i, size_t j, double *out);

/**
 * Copies the row-major matrix into `buf` (at least `dim * dim` doubles).
 *
 * # Safety
 * `buf` must point to `len` writable doubles.
 */
enum SqStatus sq_qubo_copy_dense(const struct SqQubo *q, double *buf, size_t len);

/**
 * # Safety
 * `bits` must point to `len` bytes; `out` must be writable.
 */
enum SqStatus sq_qubo_energy(const struct SqQubo *q, const uint8_t *bits, size_t len, double *out);

/**
 * Exhaustive minimum. Writes the energy, the number of minimizers, and
 * the first minimizer (lexicographically) into `bits`.
 *
 * # Safety
 * `bits` must point to `len >= dim` writable bytes; outputs must be writable.
 */
enum SqStatus sq_brute_force(const struct SqQubo *q,
                             size_t cap,
                             double *min_energy,
                             size_t *num_minimizers,
                             uint8_t *bits,
                             size_t len);

/**
 * # Safety
 * `q` must be a live handle; `out` must be writable.
 */
enum SqStatus sq_anneal(const struct SqQubo *q,
                        struct SqAnnealSchedule schedule,
                        struct SqSampleSet **out);

/**
 * # Safety
 * `set` must come from [`sq_anneal`] and not be freed twice.
 */
void sq_sample_set_free(struct SqSampleSet *set);

/**
 * # Safety
 * `set` must be a live handle or NULL.
 */
size_t sq_sample_set_len(const struct SqSampleSet *set);

/**
 * Record `index` (0 is lowest energy): energy, occurrences and bits.
 *
 * # Safety
 * `bits` must point to `len` writable bytes; outputs must be writable.
 */
enum SqStatus sq_sample_set_record(const struct SqSampleSet *set,
                                   size_t index,
                                   double *energy,
                                   uint64_t *occurrences,
                                   uint8_t *bits,
                                   size_t len);

/**
 * Sweeps all `(2s)^n` windows of an integer encoding with `bits_per_var`
 * qubits per variable. `schedule` is read only for the annealing solver.
 *
 * # Safety
 * `system` must be a live handle; `schedule` may be NULL for brute force;
 * `out` must be writable.
 */
enum SqStatus sq_sweep(const struct SqSystem *system,
                       uint32_t bits_per_var,
                       uint64_t bound,
                       enum SqSolverKind solver,
                       size_t brute_force_cap,
                       const struct SqAnnealSchedule *schedule,
                       bool stop_on_hit,
                       struct SqReport **out);

/**
 * # Safety
 * `report` must come from [`sq_sweep`] and not be freed twice.
 */
void sq_report_free(struct SqReport *report);

/**
 * # Safety
 * `report` must be a live handle or NULL.
 */
size_t sq_report_hit_count(const struct SqReport *report);

/**
 * # Safety
 * `report` must be a live handle or NULL.
 */
size_t sq_report_window_count(const struct SqReport *report);

/**
 * Translation, best energy, target energy and first decoded solution of
 * hit `hit`. `translation` and `x` must each hold at least `n` elements.
 *
 * # Safety
 * Buffers must be valid for `len` elements; outputs must be writable.
 */
enum SqStatus sq_report_hit(const struct SqReport *report,
                            size_t hit,
                            int64_t *translation,
                            double *x,
                            size_t len,
                            double *best_energy,
                            double *target_energy);

/**
 * Report as JSON. Release with [`sq_string_free`].
 *
 * # Safety
 * `report` must be a live handle; `out` must be writable.
 */
enum SqStatus sq_report_to_json(const struct SqReport *report, char **out);

/**
 * D-Wave sampler script for `q`. Release with [`sq_string_free`].
 *
 * # Safety
 * `q` must be a live handle; `out` must be writable.
 */
enum SqStatus sq_export_script(const struct SqQubo *q, uint64_t num_reads, char **out);

/**
 * # Safety
 * `s` must come from this library and not be freed twice.
 */
void sq_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SUBQUBO_H */
