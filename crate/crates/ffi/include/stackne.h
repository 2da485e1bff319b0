#ifndef STACKNE_H
#define STACKNE_H

/* Generated by cbindgen; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum StackneStatus {
  STACKNE_STATUS_OK = 0,
  STACKNE_STATUS_NULL_POINTER = 1,
  STACKNE_STATUS_INVALID_PARAMS = 2,
  STACKNE_STATUS_DOMAIN = 3,
  STACKNE_STATUS_NUMERIC = 4,
  STACKNE_STATUS_PRECONDITION = 5,
  STACKNE_STATUS_OUT_OF_RANGE = 6,
  STACKNE_STATUS_PANIC = 7,
} StackneStatus;

/**
 * Opaque game handle.
 */
typedef struct StackneGame StackneGame;

/**
 * Opaque equilibrium-set handle.
 */
typedef struct StackneSet StackneSet;

/**
 * Solver knobs; get the defaults from [`stackne_solver_config_default`].
 */
typedef struct StackneSolverConfig {
  uintptr_t grid_points_per_axis;
  uintptr_t refine_iterations;
  double value_tol;
  double arg_tol;
  double tie_tol;
  double fd_step;
  double eps_equilibrium;
} StackneSolverConfig;

typedef struct StackneProfile {
  double x;
  double y;
  double z;
} StackneProfile;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failure on this thread, or null. Valid until the next
 * failing call on the same thread.
 */
const char *stackne_last_error(void);

/**
 * # Safety
 * `out` must be null or point to writable memory.
 */
enum StackneStatus stackne_solver_config_default(struct StackneSolverConfig *out);

/**
 * APT game on the default box `x∈[0.05,1], y∈[0,rho], z∈[0.2,2]`.
 *
 * # Safety
 * `out` must be null or point to writable memory.
 */
enum StackneStatus stackne_game_apt(double c_a, double c_d, double rho, struct StackneGame **out);

/**
 * Relay/eavesdropper game with the default preset and the given relay gain.
 *
 * # Safety
 * `out` must be null or point to writable memory.
 */
enum StackneStatus stackne_game_eavesdrop(double h_rd_sq, struct StackneGame **out);

/**
 * Heterogeneous-network game with the default preset.
 *
 * # Safety
 * `out` must be null or point to writable memory.
 */
enum StackneStatus stackne_game_hetnet(double lambda_j, double p_m_dbm, struct StackneGame **out);

/**
 * Quadratic strongly concave test game on the unit box.
 *
 * # Safety
 * `out` must be null or point to writable memory.
 */
enum StackneStatus stackne_game_synthetic(double a,
                                          double b,
                                          double c,
                                          double d,
                                          struct StackneGame **out);

/**
 * # Safety
 * `game` must be null or a handle from a `stackne_game_*` constructor, freed once.
 */
void stackne_game_free(struct StackneGame *game);

/**
 * Utilities `[U_X, U_Y, U_Z]` at a profile.
 *
 * # Safety
 * `game` must be a live handle; `out` must hold three doubles.
 */
enum StackneStatus stackne_game_evaluate(const struct StackneGame *game,
                                         struct StackneProfile p,
                                         double *out);

/**
 * # Safety
 * `game` must be a live handle; `cfg` null (defaults) or valid; `out` writable.
 */
enum StackneStatus stackne_solve_se(const struct StackneGame *game,
                                    const struct StackneSolverConfig *cfg,
                                    struct StackneSet **out);

/**
 * # Safety
 * `game` must be a live handle; `cfg` null (defaults) or valid; `out` writable.
 */
enum StackneStatus stackne_solve_ne(const struct StackneGame *game,
                                    const struct StackneSolverConfig *cfg,
                                    struct StackneSet **out);

/**
 * # Safety
 * `set` must be null or a handle from a solver, freed once.
 */
void stackne_set_free(struct StackneSet *set);

/**
 * Number of clustered profiles; 0 for a null handle.
 *
 * # Safety
 * `set` must be null or a live handle.
 */
uintptr_t stackne_set_len(const struct StackneSet *set);

/**
 * # Safety
 * `set` must be a live handle; `out` writable.
 */
enum StackneStatus stackne_set_profile(const struct StackneSet *set,
                                       uintptr_t index,
                                       struct StackneProfile *out);

/**
 * Whether every SE in `se` is an NE, with the default neighborhood search.
 *
 * # Safety
 * Handles must be live, `se` from [`stackne_solve_se`] on `game`; `out` writable.
 */
enum StackneStatus stackne_check_thm1(const struct StackneGame *game,
                                      const struct StackneSet *se,
                                      const struct StackneSolverConfig *cfg,
                                      bool *out);

/**
 * Whether some SE in `se` is an NE.
 *
 * # Safety
 * Handles must be live, `se` from [`stackne_solve_se`] on `game`; `out` writable.
 */
enum StackneStatus stackne_check_thm2(const struct StackneGame *game,
                                      const struct StackneSet *se,
                                      const struct StackneSolverConfig *cfg,
                                      bool *out);

/**
 * Hausdorff distance between two equilibrium sets.
 *
 * # Safety
 * Handles must be live; `out` writable.
 */
enum StackneStatus stackne_hausdorff(const struct StackneSet *a,
                                     const struct StackneSet *b,
                                     double *out);

/**
 * The closed-form APT coincidence condition on the default box.
 *
 * # Safety
 * `out` must be writable.
 */
enum StackneStatus stackne_apt_condition(double c_a, double c_d, double rho, bool *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* STACKNE_H */
