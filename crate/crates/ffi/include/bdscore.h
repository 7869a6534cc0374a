#ifndef BDSCORE_H
#define BDSCORE_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Result code of every fallible call.
typedef enum BdStatus {
  BD_STATUS_OK = 0,
  BD_STATUS_NULL_POINTER = 1,
  BD_STATUS_INVALID_UTF8 = 2,
  BD_STATUS_INVALID_ARGUMENT = 3,
  BD_STATUS_UNKNOWN_VARIABLE = 4,
  BD_STATUS_DOMAIN = 5,
  BD_STATUS_PARSE = 6,
  BD_STATUS_IO = 7,
  BD_STATUS_CAPACITY = 8,
  BD_STATUS_UNSUPPORTED = 9,
  BD_STATUS_BUFFER_TOO_SMALL = 10,
  BD_STATUS_PANIC = 11,
} BdStatus;

typedef enum BdPriorKind {
  BD_PRIOR_KIND_JEFFREYS = 0,
  BD_PRIOR_KIND_BDEU = 1,
  // The same `cell_weight` on every cell.
  BD_PRIOR_KIND_CUSTOM = 2,
} BdPriorKind;

// Opaque dataset handle.
typedef struct BdDataset BdDataset;

// Opaque network handle.
typedef struct BdNetwork BdNetwork;

typedef struct BdPrior {
  enum BdPriorKind kind;
  // Equivalent sample size, read for `BDEU`.
  double ess;
  // Read for `CUSTOM`.
  double cell_weight;
} BdPrior;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message for the last failed call on this thread, or an empty string.
// The pointer stays valid until the next call on the same thread.
const char *bd_last_error_message(void);

// Library version as a static NUL-terminated string.
const char *bd_version(void);

// Loads a `name:arity` headed CSV file.
//
// # Safety
// `path` must be a NUL-terminated string and `out` a valid pointer.
enum BdStatus bd_dataset_load_path(const char *path, struct BdDataset **out);

// Loads a CSV document from `len` bytes at `data`.
//
// # Safety
// `data` must point to `len` readable bytes and `out` be a valid pointer.
enum BdStatus bd_dataset_load_bytes(const uint8_t *data, size_t len, struct BdDataset **out);

// Releases a dataset. Null is ignored.
//
// # Safety
// `ds` must come from a `bd_dataset_load_*` call and not be freed twice.
void bd_dataset_free(struct BdDataset *ds);

// # Safety
// `ds` must be a live dataset handle and `out` a valid pointer.
enum BdStatus bd_dataset_num_rows(const struct BdDataset *ds, size_t *out);

// # Safety
// `ds` must be a live dataset handle and `out` a valid pointer.
enum BdStatus bd_dataset_num_vars(const struct BdDataset *ds, size_t *out);

// # Safety
// `ds` must be a live dataset handle and `out` a valid pointer.
enum BdStatus bd_dataset_arity(const struct BdDataset *ds, size_t var, uint32_t *out);

// Column index of the variable called `name`.
//
// # Safety
// `ds` must be a live dataset handle, `name` NUL-terminated and `out` valid.
enum BdStatus bd_dataset_index_of(const struct BdDataset *ds, const char *name, size_t *out);

// Natural-log marginal score of the variables `vars[0..len]`.
//
// # Safety
// Pointers must be valid; `vars` may be null only when `len` is 0.
enum BdStatus bd_marginal_score(const struct BdDataset *ds,
                                const size_t *vars,
                                size_t len,
                                const struct BdPrior *prior_spec,
                                double *out);

// Natural-log ratio-form conditional score of `child` given the parents.
//
// # Safety
// Pointers must be valid; `parents` may be null only when `len` is 0.
enum BdStatus bd_conditional_score(const struct BdDataset *ds,
                                   size_t child,
                                   const size_t *parents,
                                   size_t len,
                                   const struct BdPrior *prior_spec,
                                   double *out);

// Local-form conditional score. A nonzero `independent` weights parent
// configurations by the prior on the parents alone.
//
// # Safety
// Pointers must be valid; `parents` may be null only when `len` is 0.
enum BdStatus bd_conditional_score_local(const struct BdDataset *ds,
                                         size_t child,
                                         const size_t *parents,
                                         size_t len,
                                         const struct BdPrior *prior_spec,
                                         bool independent,
                                         double *out);

// Empirical `H(child | parents)`, in bits when `base_two` is set.
//
// # Safety
// Pointers must be valid; `parents` may be null only when `len` is 0.
enum BdStatus bd_cond_entropy(const struct BdDataset *ds,
                              size_t child,
                              const size_t *parents,
                              size_t len,
                              bool base_two,
                              double *out);

// `J(n)` in nats for single variables `x`, `y` given `z[0..z_len]`.
//
// # Safety
// Pointers must be valid; `z` may be null only when `z_len` is 0.
enum BdStatus bd_j_statistic(const struct BdDataset *ds,
                             size_t x,
                             size_t y,
                             const size_t *z,
                             size_t z_len,
                             const struct BdPrior *prior_spec,
                             double *out);

// Score-based test of `x ⊥ y | z` with prior independence probability `p`.
//
// # Safety
// Pointers must be valid; `z` may be null only when `z_len` is 0.
enum BdStatus bd_ci_decide(const struct BdDataset *ds,
                           size_t x,
                           size_t y,
                           const size_t *z,
                           size_t z_len,
                           const struct BdPrior *prior_spec,
                           double p,
                           bool *out_independent);

// Exact highest-scoring DAG with at most `max_parents` parents per node
// (clamped to N-1). The log score goes to `out_score` when it is not null.
//
// # Safety
// `ds` and `prior_spec` must be valid, `out` a valid pointer.
enum BdStatus bd_learn_exact(const struct BdDataset *ds,
                             const struct BdPrior *prior_spec,
                             size_t max_parents,
                             struct BdNetwork **out,
                             double *out_score);

// Releases a network. Null is ignored.
//
// # Safety
// `net` must come from `bd_learn_exact` and not be freed twice.
void bd_network_free(struct BdNetwork *net);

// # Safety
// `net` must be a live network handle and `out` a valid pointer.
enum BdStatus bd_network_num_vars(const struct BdNetwork *net, size_t *out);

// Copies the parents of `var` into `buf`, ascending. `out_len` always
// receives the parent count; `BUFFER_TOO_SMALL` is returned when it
// exceeds `cap`.
//
// # Safety
// `net` must be live, `buf` writable for `cap` entries (or null when `cap`
// is 0), and `out_len` valid.
enum BdStatus bd_network_parents(const struct BdNetwork *net,
                                 size_t var,
                                 size_t *buf,
                                 size_t cap,
                                 size_t *out_len);

// `ln Γ(z)` for `z > 0`.
//
// # Safety
// `out` must be a valid pointer.
enum BdStatus bd_log_gamma(double z, double *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* BDSCORE_H */
