#ifndef CHO_H
#define CHO_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Result code of every fallible call.
enum ChoStatus
#if defined(__cplusplus) || __STDC_VERSION__ >= 202311L
  : int32_t
#endif // defined(__cplusplus) || __STDC_VERSION__ >= 202311L
 {
  CHO_STATUS_OK = 0,
  // A required pointer argument was null.
  CHO_STATUS_NULL_POINTER = 1,
  // An enum or size argument was out of range.
  CHO_STATUS_INVALID_ARGUMENT = 2,
  // Physical parameters or truncation rejected.
  CHO_STATUS_INVALID_PARAMS = 3,
  // Quadrature order out of range or unstable under refinement.
  CHO_STATUS_QUADRATURE = 4,
  // The guidance field is singular at the requested point or along the path.
  CHO_STATUS_SINGULARITY = 5,
  // Integrator failure other than a singularity.
  CHO_STATUS_NUMERICAL = 6,
  // Rust panic caught at the boundary; the library state is still valid.
  CHO_STATUS_PANIC = 7,
};
#ifndef __cplusplus
#if __STDC_VERSION__ >= 202311L
typedef enum ChoStatus ChoStatus;
#else
typedef int32_t ChoStatus;
#endif // __STDC_VERSION__ >= 202311L
#endif // __cplusplus

// Particle selector for marginals.
enum ChoParticle
#if defined(__cplusplus) || __STDC_VERSION__ >= 202311L
  : int32_t
#endif // defined(__cplusplus) || __STDC_VERSION__ >= 202311L
 {
  CHO_PARTICLE_ONE = 1,
  CHO_PARTICLE_TWO = 2,
};
#ifndef __cplusplus
#if __STDC_VERSION__ >= 202311L
typedef enum ChoParticle ChoParticle;
#else
typedef int32_t ChoParticle;
#endif // __STDC_VERSION__ >= 202311L
#endif // __cplusplus

// Sign convention of the first-order closed form.
enum ChoForm
#if defined(__cplusplus) || __STDC_VERSION__ >= 202311L
  : int32_t
#endif // defined(__cplusplus) || __STDC_VERSION__ >= 202311L
 {
  CHO_FORM_CORRECTED = 0,
  CHO_FORM_FLIPPED = 1,
};
#ifndef __cplusplus
#if __STDC_VERSION__ >= 202311L
typedef enum ChoForm ChoForm;
#else
typedef int32_t ChoForm;
#endif // __STDC_VERSION__ >= 202311L
#endif // __cplusplus

// Oscillator parameters.
typedef struct ChoParams ChoParams;

// Truncated eigenmode expansion of the evolving state.
typedef struct ChoState ChoState;

// Integrated Bohmian trajectory with dense output.
typedef struct ChoTrajectory ChoTrajectory;

// Normal-mode and beat frequencies (fs⁻¹) and the coupling ratio `2λ/k`.
typedef struct ChoFrequencies {
  double omega;
  double omega_prime;
  double delta_omega;
  double omega_bar;
  double epsilon;
} ChoFrequencies;

typedef struct ChoEnergies {
  double t;
  double e1;
  double e2;
  double e_interaction;
  double e_total;
} ChoEnergies;

typedef struct ChoPoint {
  double t;
  double x1;
  double x2;
} ChoPoint;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Library version, a static NUL-terminated string.
const char *cho_version(void);

// Message of the last failed call on this thread, or null if none.
//
// The pointer stays valid until the next failing call on the same thread.
const char *cho_last_error_message(void);

// Creates parameters from `m`, `k`, `λ` and `ħ` (mₑ, Å, fs units).
//
// # Safety
// `out` must be a valid pointer to writable storage for one handle pointer.
ChoStatus cho_params_new(double m, double k, double lambda, double hbar, struct ChoParams **out);

// Creates parameters from `m`, `ω̄`, `δω/ω̄` and `ħ`.
//
// # Safety
// As for [`cho_params_new`].
ChoStatus cho_params_from_beat(double m,
                               double omega_bar,
                               double delta_ratio,
                               double hbar,
                               struct ChoParams **out);

// # Safety
// `params` must be null or a handle from this library not yet freed.
void cho_params_free(struct ChoParams *params);

// # Safety
// `params` must be a live handle and `out` writable.
ChoStatus cho_params_frequencies(const struct ChoParams *params, struct ChoFrequencies *out);

// Projects the initial state onto modes `n ≤ n_max`, `n′ ≤ n_prime_max`.
//
// # Safety
// `params` must be a live handle and `out` writable.
ChoStatus cho_state_project(const struct ChoParams *params,
                            uint32_t n_max,
                            uint32_t n_prime_max,
                            struct ChoState **out);

// # Safety
// `state` must be null or a handle from this library not yet freed.
void cho_state_free(struct ChoState *state);

// `C_{n,n′}`; zero outside the truncation.
//
// # Safety
// `state` must be a live handle and `out` writable.
ChoStatus cho_state_coefficient(const struct ChoState *state,
                                uint32_t n,
                                uint32_t n_prime,
                                double *out);

// Estimated norm outside the truncation.
//
// # Safety
// `state` must be a live handle and `out` writable.
ChoStatus cho_state_tail_bound(const struct ChoState *state, double *out);

// `ψ(x₁, x₂, t)` as real and imaginary parts.
//
// # Safety
// `state` must be a live handle; `re` and `im` writable.
ChoStatus cho_state_eval(const struct ChoState *state,
                         double x1,
                         double x2,
                         double t,
                         double *re,
                         double *im);

// Quadrature energy expectations of the state at time `t`.
//
// # Safety
// `state` must be a live handle and `out` writable.
ChoStatus cho_state_energies(const struct ChoState *state, double t, struct ChoEnergies *out);

// Closed-form first-order marginal density `P(x, t)` of one particle.
//
// `particle` is a [`ChoParticle`] value and `form` a [`ChoForm`] value.
//
// # Safety
// `params` must be a live handle and `out` writable.
ChoStatus cho_marginal_closed_form(const struct ChoParams *params,
                                   int32_t particle,
                                   int32_t form,
                                   double x,
                                   double t,
                                   double *out);

// Reduced Bohmian velocity at `(x₁, x₂, t)`.
//
// # Safety
// `params` must be a live handle; `v1` and `v2` writable.
ChoStatus cho_guidance_velocity(const struct ChoParams *params,
                                double x1,
                                double x2,
                                double t,
                                double *v1,
                                double *v2);

// Integrates the reduced guidance equations from `(x1, x2)` at `t = 0` to
// `t_end`.
//
// On [`ChoStatus::Singularity`], `last_good_t` (if non-null) receives the
// last time the path was well defined.
//
// # Safety
// `params` must be a live handle, `out` writable, `last_good_t` null or
// writable.
ChoStatus cho_trajectory_integrate(const struct ChoParams *params,
                                   double x1,
                                   double x2,
                                   double t_end,
                                   double rtol,
                                   double atol,
                                   struct ChoTrajectory **out,
                                   double *last_good_t);

// # Safety
// `traj` must be null or a handle from this library not yet freed.
void cho_trajectory_free(struct ChoTrajectory *traj);

// Dense-output position at time `t` inside the integrated span.
//
// # Safety
// `traj` must be a live handle and `out` writable.
ChoStatus cho_trajectory_eval(const struct ChoTrajectory *traj, double t, struct ChoPoint *out);

// Number of accepted integrator states, including the start.
//
// # Safety
// `traj` must be a live handle and `out` writable.
ChoStatus cho_trajectory_len(const struct ChoTrajectory *traj, size_t *out);

// Copies up to `capacity` accepted states into `buf`; `written` receives
// the count copied.
//
// # Safety
// `traj` must be a live handle, `buf` valid for `capacity` writes and
// `written` writable.
ChoStatus cho_trajectory_states(const struct ChoTrajectory *traj,
                                struct ChoPoint *buf,
                                size_t capacity,
                                size_t *written);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* CHO_H */
