#ifndef ISOKAPPA_H
#define ISOKAPPA_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum IsoStatus {
  ISO_STATUS_OK = 0,
  ISO_STATUS_NULL_POINTER = 1,
  ISO_STATUS_INVALID_PARAMETER = 2,
  ISO_STATUS_DOMAIN_VIOLATION = 3,
  // The requested level is not square integrable.
  ISO_STATUS_NORMALIZABILITY = 4,
  ISO_STATUS_DIVERGENT = 5,
  ISO_STATUS_NON_CONVERGENT = 6,
  // A Rust panic was caught at the boundary.
  ISO_STATUS_PANIC = 7,
} IsoStatus;

// Classical trajectory family.
typedef enum IsoFamily {
  ISO_FAMILY_TRIG = 0,
  ISO_FAMILY_HYPERBOLIC = 1,
  ISO_FAMILY_BORDER = 2,
} IsoFamily;

// One normalized eigenstate.
typedef struct IsoBoundState IsoBoundState;

// Lowest levels of a system.
typedef struct IsoSpectrum IsoSpectrum;

// Physical parameters `(m, α, κ, k_g, ħ)`.
typedef struct IsoSystem IsoSystem;

// Closed-form classical trajectory.
typedef struct IsoTrajectory IsoTrajectory;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Copies the last error message of this thread into `buf` (NUL terminated,
// truncated to `len - 1` bytes) and returns the full message length.
// With `buf` null or `len` 0 only the length is returned.
//
// # Safety
// `buf` must be null or valid for `len` bytes.
size_t iso_last_error_message(char *buf, size_t len);

// Crate version as a static NUL-terminated string.
const char *iso_version(void);

// # Safety
// `out` must be valid for one pointer write.
enum IsoStatus iso_system_new(double mass,
                              double alpha,
                              double kappa,
                              double k_g,
                              double hbar,
                              struct IsoSystem **out);

// # Safety
// `system` must be null or come from `iso_system_new` and not be freed twice.
void iso_system_free(struct IsoSystem *system);

// Dimensionless scale `μ`, deformation `κ'` and isotonic index `g`.
//
// # Safety
// Pointers must be valid.
enum IsoStatus iso_system_dimensionless(const struct IsoSystem *system,
                                        double *mu,
                                        double *kappa_prime,
                                        double *g);

// `V(x)`; `DomainViolation` outside `x² < 1/κ` or at the core singularity.
//
// # Safety
// Pointers must be valid.
enum IsoStatus iso_system_potential(const struct IsoSystem *system, double x, double *out);

// Physical energy `E_n` without normalizing the state.
//
// # Safety
// Pointers must be valid.
enum IsoStatus iso_system_energy(const struct IsoSystem *system, size_t n, double *out);

// Number of bound states. For an unbounded spectrum `*finite` is 0 and
// `*count` is `SIZE_MAX`.
//
// # Safety
// Pointers must be valid.
enum IsoStatus iso_system_bound_state_count(const struct IsoSystem *system,
                                            size_t *count,
                                            bool *finite);

// Up to `n_request` lowest normalized levels.
//
// # Safety
// Pointers must be valid.
enum IsoStatus iso_spectrum_new(const struct IsoSystem *system,
                                size_t n_request,
                                struct IsoSpectrum **out);

// # Safety
// `spectrum` must be null or come from `iso_spectrum_new`.
void iso_spectrum_free(struct IsoSpectrum *spectrum);

// # Safety
// Pointers must be valid.
enum IsoStatus iso_spectrum_len(const struct IsoSpectrum *spectrum, size_t *out);

// Physical energy of level `i`.
//
// # Safety
// Pointers must be valid.
enum IsoStatus iso_spectrum_energy(const struct IsoSpectrum *spectrum, size_t i, double *out);

// Copies up to `len` energies into `buf`; `*written` receives the count.
//
// # Safety
// `buf` must be valid for `len` doubles.
enum IsoStatus iso_spectrum_energies(const struct IsoSpectrum *spectrum,
                                     double *buf,
                                     size_t len,
                                     size_t *written);

// Copies level `i` out as an independent state.
//
// # Safety
// Pointers must be valid.
enum IsoStatus iso_spectrum_state(const struct IsoSpectrum *spectrum,
                                  size_t i,
                                  struct IsoBoundState **out);

// Normalized level `n`; `Normalizability` when it is not square integrable.
//
// # Safety
// Pointers must be valid.
enum IsoStatus iso_bound_state_new(const struct IsoSystem *system,
                                   size_t n,
                                   struct IsoBoundState **out);

// # Safety
// `state` must be null or come from this library.
void iso_bound_state_free(struct IsoBoundState *state);

// # Safety
// Pointers must be valid.
enum IsoStatus iso_bound_state_energy(const struct IsoBoundState *state, double *out);

// Normalization constant `N_n`.
//
// # Safety
// Pointers must be valid.
enum IsoStatus iso_bound_state_norm(const struct IsoBoundState *state, double *out);

// `Ψ_n(x)`.
//
// # Safety
// Pointers must be valid.
enum IsoStatus iso_bound_state_wavefunction(const struct IsoBoundState *state,
                                            double x,
                                            double *out);

// Closed-form trajectory. `parameter` is the amplitude `A` for the trig
// and hyperbolic families and the linear coefficient `B` for the border;
// `phase` is ignored for the border.
//
// # Safety
// Pointers must be valid.
enum IsoStatus iso_trajectory_new(const struct IsoSystem *system,
                                  enum IsoFamily family,
                                  double parameter,
                                  double phase,
                                  struct IsoTrajectory **out);

// # Safety
// `trajectory` must be null or come from `iso_trajectory_new`.
void iso_trajectory_free(struct IsoTrajectory *trajectory);

// Position and velocity at time `t`.
//
// # Safety
// Pointers must be valid.
enum IsoStatus iso_trajectory_state(const struct IsoTrajectory *trajectory,
                                    double t,
                                    double *x,
                                    double *v);

// # Safety
// Pointers must be valid.
enum IsoStatus iso_trajectory_energy(const struct IsoTrajectory *trajectory, double *out);

// Frequency `ω` (trig) or `Ω` (hyperbolic) and the kinematic period of
// `x(t)`; both are NaN where undefined.
//
// # Safety
// Pointers must be valid.
enum IsoStatus iso_trajectory_frequency(const struct IsoTrajectory *trajectory,
                                        double *omega,
                                        double *period);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* ISOKAPPA_H */
