#ifndef TRICORR_H
#define TRICORR_H

/* Generated by cbindgen from src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result code of every fallible call.
 */
typedef enum TcStatus {
  TC_STATUS_OK = 0,
  TC_STATUS_NULL_POINTER = 1,
  TC_STATUS_INVALID_ARGUMENT = 2,
  TC_STATUS_INVALID_STATE = 3,
  TC_STATUS_NUMERICAL = 4,
  TC_STATUS_PANIC = 5,
} TcStatus;

/**
 * Opaque three-qubit state.
 */
typedef struct TcState TcState;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread, or NULL. The pointer is
 * valid until the next call into this library from the same thread.
 */
const char *tc_last_error_message(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *tc_version(void);

/**
 * `a|000⟩ + b|111⟩`.
 */
enum TcStatus tc_state_ghz(double a, double b, struct TcState **out);

/**
 * `cosθ|100⟩ + (sinθ/√2)(|010⟩ + |001⟩)`.
 */
enum TcStatus tc_state_w(double theta, struct TcState **out);

enum TcStatus tc_state_x_family(double a, struct TcState **out);

/**
 * `√(1−y)|000⟩ + √y|111⟩`.
 */
enum TcStatus tc_state_ghz_y(double y, struct TcState **out);

/**
 * `p|GHZ⟩⟨GHZ| + (1−p)|W⟩⟨W|`.
 */
enum TcStatus tc_state_mix_ghz_w(double p, struct TcState **out);

/**
 * Pure state from 8 amplitudes stored as interleaved `re, im` (`len` = 16).
 * The norm must already be 1 within 1e-12.
 */
enum TcStatus tc_state_from_amplitudes(const double *re_im, size_t len, struct TcState **out);

/**
 * Density matrix from 64 row-major entries as interleaved `re, im`
 * (`len` = 128).
 */
enum TcStatus tc_state_from_density(const double *re_im, size_t len, struct TcState **out);

/**
 * New state after local amplitude damping for `t_over_tau`.
 */
enum TcStatus tc_state_damp(const struct TcState *state, double t_over_tau, struct TcState **out);

/**
 * Releases a state. NULL is ignored.
 */
void tc_state_free(struct TcState *state);

enum TcStatus tc_state_is_pure(const struct TcState *state, bool *out);

/**
 * Copies the density matrix as 128 interleaved doubles, row-major.
 */
enum TcStatus tc_state_density(const struct TcState *state, double *out, size_t len);

/**
 * Squared triangle edges `[D²_1, D²_2, D²_3]`; `out` must hold 3 doubles.
 */
enum TcStatus tc_triangle_edges(const struct TcState *state, double *out);

enum TcStatus tc_concurrence_fill(const struct TcState *state, double *out);

enum TcStatus tc_gmc(const struct TcState *state, double *out);

enum TcStatus tc_global_measure(const struct TcState *state, double *out);

/**
 * Tripartite PCC for a named observable (`X`, `Y`, `Z`, `P0`, `P1`,
 * `Pplus`). `per_cut` may be NULL; otherwise it receives 3 doubles.
 */
enum TcStatus tc_pcc_tripartite(const struct TcState *state,
                                const char *observable,
                                double *out,
                                double *per_cut);

/**
 * Tripartite mutual information (bits) in a named basis (`X`, `Y`, `Z`).
 */
enum TcStatus tc_mi_tripartite(const struct TcState *state, const char *basis, double *out);

enum TcStatus tc_mp_tripartite(const struct TcState *state, const char *basis, double *out);

/**
 * Sum of the tripartite PCCs of two named observables. Cuts with zero
 * variance count as zero.
 */
enum TcStatus tc_maccone_sum(const struct TcState *state,
                             const char *obs1,
                             const char *obs2,
                             double *out);

/**
 * Finite-shot PCC estimate with a bootstrap standard error.
 */
enum TcStatus tc_sample_pcc(const struct TcState *state,
                            const char *observable,
                            uint64_t shots,
                            uint64_t seed,
                            double *estimate,
                            double *std_error);

/**
 * Sudden-death time for `√(1−y)|000⟩ + √y|111⟩`. When there is none,
 * `has_root` is false and `out` is left untouched.
 */
enum TcStatus tc_esd_time(double y, double *out, bool *has_root);

enum TcStatus tc_gmc_damped_closed(double y, double t_over_tau, double *out);

enum TcStatus tc_pcc_damped_closed(double y, double t_over_tau, double *out);

enum TcStatus tc_gmc_from_pcc(double c_plus, double y, double *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* TRICORR_H */
