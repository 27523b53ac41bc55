/*
 * spcecon - economic design toolkit for memory-type (EWMA/MEWMA) control
 * charts. C interface over the C++ core: opaque handles, status codes, and
 * JSON documents for structured results.
 *
 * Conventions:
 *   - Every function returns SPCECON_OK on success; on failure the return
 *     value names the error class and spcecon_last_error() carries a
 *     thread-local human-readable message.
 *   - Strings returned through char** are heap-allocated; release them with
 *     spcecon_string_free().
 *   - workers <= 0 selects a hardware-dependent default. Results never depend
 *     on the worker count: every simulation run owns a substream keyed by
 *     (seed, run index).
 */
#ifndef SPCECON_H
#define SPCECON_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum spcecon_status {
  SPCECON_OK = 0,
  SPCECON_ERROR_INVALID_ARGUMENT = 1,
  SPCECON_ERROR_UNKNOWN_INSTANCE = 2,
  SPCECON_ERROR_SINGULAR_MATRIX = 3,
  SPCECON_ERROR_RUN_CAP_EXCEEDED = 4,
  SPCECON_ERROR_IO = 5,
  SPCECON_ERROR_BAD_JSON = 6,
  SPCECON_ERROR_INTERNAL = 7
} spcecon_status;

/* Opaque benchmark/problem instance. */
typedef struct spcecon_instance spcecon_instance;

typedef struct spcecon_estimate {
  double value;
  double std_error;
  uint64_t n_runs;
} spcecon_estimate;

const char* spcecon_version(void);

/* Thread-local message for the most recent failure in this thread. */
const char* spcecon_last_error(void);

void spcecon_string_free(char* s);

/* ---- instances ---------------------------------------------------------- */

/* Load a built-in benchmark instance (U1..U18 univariate, M1..M18 trivariate). */
spcecon_status spcecon_instance_load(const char* id, spcecon_instance** out);

/* Parse one instance from its JSON document. */
spcecon_status spcecon_instance_from_json(const char* json_text, spcecon_instance** out);

spcecon_status spcecon_instance_to_json(const spcecon_instance* inst, char** out_json);

/* JSON array with every built-in instance. */
spcecon_status spcecon_catalog_json(char** out_json);

void spcecon_instance_free(spcecon_instance* inst);

/* ---- simulation estimates ------------------------------------------------ */

/* Long-run expected average cost by renewal-cycle simulation at exponential
 * weight r. */
spcecon_status spcecon_estimate_cost(const spcecon_instance* inst, double r,
                                     uint64_t n_cycles, uint64_t seed, int workers,
                                     spcecon_estimate* out);

/* Zero-state in-control average run length. */
spcecon_status spcecon_estimate_arl0(const spcecon_instance* inst, double r,
                                     uint64_t n_runs, uint64_t seed, int workers,
                                     spcecon_estimate* out);

/* Out-of-control average run length after warmup_m in-control samples. */
spcecon_status spcecon_estimate_arl1(const spcecon_instance* inst, double r,
                                     uint64_t warmup_m, uint64_t n_runs, uint64_t seed,
                                     int workers, spcecon_estimate* out);

/* Average number of false alarms per quality-control cycle. */
spcecon_status spcecon_estimate_anfa(const spcecon_instance* inst, double r,
                                     uint64_t n_runs, uint64_t seed, int workers,
                                     spcecon_estimate* out);

/* ---- cost formulas ------------------------------------------------------- */

/* Run-length form of the long-run average cost formula. */
spcecon_status spcecon_cost_formula_arl(const spcecon_instance* inst, double r,
                                        double arl0, double arl1, double* out);

/* Corrected form for memory-type charts (false alarms by ANFA, detection by
 * the shift-interval average AARL1). */
spcecon_status spcecon_cost_formula_corrected(const spcecon_instance* inst, double r,
                                              double anfa, double aarl1, double arl0,
                                              double* out);

/* Exact value at r = 1 from analytic per-sample error rates. */
spcecon_status spcecon_cost_formula_exact_shewhart(const spcecon_instance* inst,
                                                   double* out);

/* ---- structured jobs (JSON results) -------------------------------------- */

/* Conditional run-length profile: series of ARL1^m with shift-interval
 * probabilities, AARL1, ANFA, ARL0, and the truncation index k. */
spcecon_status spcecon_arl_profile(const spcecon_instance* inst, double r,
                                   double epsilon, uint64_t runs_per_m, uint64_t seed,
                                   int workers, char** out_json);

/* Simulation vs cost-formula comparison rows for each weight in r_values. */
spcecon_status spcecon_compare(const spcecon_instance* inst, const double* r_values,
                               size_t n_r, uint64_t n_small, uint64_t n_large,
                               uint64_t arl_runs, uint64_t seed, int workers,
                               char** out_json);

/* Benchmark sweep over several instances with shared run-length estimates;
 * rows carry timing and, at r = 1, errors against the exact value. */
spcecon_status spcecon_bench(const spcecon_instance* const* instances, size_t n_instances,
                             const double* r_values, size_t n_r, uint64_t n_small,
                             uint64_t n_large, uint64_t arl_runs, uint64_t seed,
                             int workers, char** out_json);

/* Direct search over a weight grid; method is "simulation", "lorenzen-vance",
 * or "modified". */
spcecon_status spcecon_optimize(const spcecon_instance* inst, const char* method,
                                const double* grid, size_t n_grid, uint64_t budget,
                                uint64_t seed, int workers, char** out_json);

/* Simulation and formula optima side by side plus the cost-increment
 * percentage of running at the formula optimum. */
spcecon_status spcecon_optimize_report(const spcecon_instance* inst, const double* grid,
                                       size_t n_grid, uint64_t sim_budget,
                                       uint64_t arl_runs, uint64_t profile_runs,
                                       double epsilon, int with_modified, uint64_t seed,
                                       int workers, char** out_json);

/* Relative errors (percent) of the run-length formula and of the simulation
 * against the exact value at r = 1. */
spcecon_status spcecon_error_vs_exact(const spcecon_instance* inst, uint64_t n_cycles,
                                      uint64_t arl_runs, uint64_t seed, int workers,
                                      double* out_err_formula, double* out_err_sim);

#ifdef __cplusplus
}
#endif

#endif /* SPCECON_H */
