#ifndef EMDYN_H
#define EMDYN_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdbool.h>
#include <stddef.h>

/*
 Status code returned by every fallible call.
 */
typedef enum EmdynStatus {
  EMDYN_STATUS_OK = 0,
  EMDYN_STATUS_NULL_POINTER = 1,
  /*
   A parameter is out of range.
   */
  EMDYN_STATUS_INVALID_ARGUMENT = 2,
  /*
   The matrix is not a valid density matrix.
   */
  EMDYN_STATUS_INVALID_STATE = 3,
  /*
   Malformed JSON or text input.
   */
  EMDYN_STATUS_PARSE_ERROR = 4,
  EMDYN_STATUS_NUMERIC_ERROR = 5,
  /*
   An internal panic was caught at the boundary.
   */
  EMDYN_STATUS_PANIC = 6,
} EmdynStatus;

typedef enum EmdynFamily {
  EMDYN_FAMILY_PURE_PHI = 0,
  EMDYN_FAMILY_PURE_PSI = 1,
  EMDYN_FAMILY_WERNER_PHI = 2,
  EMDYN_FAMILY_WERNER_PSI = 3,
} EmdynFamily;

typedef enum EmdynTimeKind {
  EMDYN_TIME_KIND_FINITE = 0,
  EMDYN_TIME_KIND_ASYMPTOTIC = 1,
  EMDYN_TIME_KIND_IMMEDIATE = 2,
} EmdynTimeKind;

/*
 Opaque two-qubit density matrix.
 */
typedef struct EmdynState EmdynState;

/*
 Opaque sampled trajectory.
 */
typedef struct EmdynTrajectory EmdynTrajectory;

/*
 A critical time; `tau` is NaN unless `kind` is finite.
 */
typedef struct EmdynCriticalTime {
  enum EmdynTimeKind kind;
  double tau;
} EmdynCriticalTime;

/*
 One trajectory sample. `c1`, `c2`, `u1`, `u2` are NaN when
 `has_x_terms` is false.
 */
typedef struct EmdynRow {
  double tau;
  double concurrence;
  double m;
  double c1;
  double c2;
  double u1;
  double u2;
  bool has_x_terms;
  bool entangled;
  bool violates;
} EmdynRow;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/*
 Message describing the last failure on this thread, or null if the last
 call succeeded. The pointer stays valid until the next call into this
 library on the same thread.
 */
const char *emdyn_last_error_message(void);

/*
 Library version as a static string.
 */
const char *emdyn_version(void);

/*
 Initial state of a family. `sign_minus` selects the minus Bell state for
 Werner families and is ignored for pure ones.

 # Safety
 `out` must be null or valid for writing a pointer.
 */
enum EmdynStatus emdyn_state_from_family(enum EmdynFamily family,
                                         double param,
                                         bool sign_minus,
                                         struct EmdynState **out);

/*
 State from 32 doubles (see the crate conventions), validated.

 # Safety
 `re_im` must be null or point to 32 readable doubles; `out` must be null
 or valid for writing a pointer.
 */
enum EmdynStatus emdyn_state_from_matrix(const double *re_im, struct EmdynState **out);

/*
 State from the JSON format `{"matrix": [[[re, im], ...], ...]}`.

 # Safety
 `json` must be null or a nul-terminated string; `out` must be null or
 valid for writing a pointer.
 */
enum EmdynStatus emdyn_state_from_json(const char *json, struct EmdynState **out);

/*
 Serializes a state to JSON; free the result with [`emdyn_string_free`].

 # Safety
 `state` must be null or a live handle; `out` must be null or valid for
 writing a pointer.
 */
enum EmdynStatus emdyn_state_to_json(const struct EmdynState *state, char **out);

/*
 Copies the matrix into 32 doubles.

 # Safety
 `state` must be null or a live handle; `re_im` must be null or point to
 32 writable doubles.
 */
enum EmdynStatus emdyn_state_get_matrix(const struct EmdynState *state, double *re_im);

/*
 # Safety
 `state` must be null or a handle from this library not yet freed.
 */
void emdyn_state_free(struct EmdynState *state);

/*
 Closed-form propagation of identical atoms to dimensionless time `tau`.

 # Safety
 `state` must be null or a live handle; `out` must be null or valid for
 writing a pointer.
 */
enum EmdynStatus emdyn_state_propagate(const struct EmdynState *state,
                                       double tau,
                                       struct EmdynState **out);

/*
 RK4 integration with per-atom emission rates.

 # Safety
 `state` must be null or a live handle; `out` must be null or valid for
 writing a pointer.
 */
enum EmdynStatus emdyn_state_rk4(const struct EmdynState *state,
                                 double tau,
                                 double step,
                                 double gamma_a,
                                 double gamma_b,
                                 struct EmdynState **out);

/*
 Wootters concurrence.

 # Safety
 `state` must be null or a live handle; `out` must be null or writable.
 */
enum EmdynStatus emdyn_concurrence(const struct EmdynState *state, double *out);

/*
 CHSH quantity `m`; the state violates some CHSH inequality iff `m > 1`.

 # Safety
 `state` must be null or a live handle; `out` must be null or writable.
 */
enum EmdynStatus emdyn_m_value(const struct EmdynState *state, double *out);

/*
 Numeric disentanglement time of an arbitrary initial state.

 # Safety
 `state` must be null or a live handle; `out` must be null or writable.
 */
enum EmdynStatus emdyn_disentanglement_time(const struct EmdynState *state,
                                            struct EmdynCriticalTime *out);

/*
 Numeric locality time of an arbitrary initial state.

 # Safety
 `state` must be null or a live handle; `out` must be null or writable.
 */
enum EmdynStatus emdyn_locality_time(const struct EmdynState *state, struct EmdynCriticalTime *out);

/*
 Closed-form disentanglement time of a family member.

 # Safety
 `out` must be null or writable.
 */
enum EmdynStatus emdyn_family_disentanglement_time(enum EmdynFamily family,
                                                   double param,
                                                   struct EmdynCriticalTime *out);

/*
 Closed-form locality time of a family member.

 # Safety
 `out` must be null or writable.
 */
enum EmdynStatus emdyn_family_locality_time(enum EmdynFamily family,
                                            double param,
                                            struct EmdynCriticalTime *out);

/*
 Samples `τ = 0, step, …, ≤ tau_max`.

 # Safety
 `state` must be null or a live handle; `out` must be null or valid for
 writing a pointer.
 */
enum EmdynStatus emdyn_trajectory_sample(const struct EmdynState *state,
                                         double tau_max,
                                         double step,
                                         struct EmdynTrajectory **out);

/*
 Number of rows, or 0 for a null handle.

 # Safety
 `traj` must be null or a live handle.
 */
size_t emdyn_trajectory_len(const struct EmdynTrajectory *traj);

/*
 # Safety
 `traj` must be null or a live handle; `out` must be null or writable.
 */
enum EmdynStatus emdyn_trajectory_row(const struct EmdynTrajectory *traj,
                                      size_t index,
                                      struct EmdynRow *out);

/*
 CSV rendering; pass `gamma0 <= 0` for dimensionless time. Free the result
 with [`emdyn_string_free`].

 # Safety
 `traj` must be null or a live handle; `out` must be null or valid for
 writing a pointer.
 */
enum EmdynStatus emdyn_trajectory_to_csv(const struct EmdynTrajectory *traj,
                                         double gamma0,
                                         char **out);

/*
 # Safety
 `traj` must be null or a handle from this library not yet freed.
 */
void emdyn_trajectory_free(struct EmdynTrajectory *traj);

/*
 # Safety
 `s` must be null or a string returned by this library not yet freed.
 */
void emdyn_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* EMDYN_H */
