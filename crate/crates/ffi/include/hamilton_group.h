#ifndef HAMILTON_GROUP_H
#define HAMILTON_GROUP_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum HgFormRole {
  HG_FORM_ROLE_TIME = 0,
  HG_FORM_ROLE_LENGTH = 1,
  HG_FORM_ROLE_SYMPLECTIC = 2,
  /**
   * `ζ°` on `(p, q)` only; the matrix is `2n x 2n`.
   */
  HG_FORM_ROLE_SYMPLECTIC_CORE = 3,
} HgFormRole;

typedef enum HgStatus {
  HG_STATUS_OK = 0,
  HG_STATUS_NULL_POINTER = 1,
  HG_STATUS_INVALID_ARGUMENT = 2,
  HG_STATUS_DIMENSION_MISMATCH = 3,
  HG_STATUS_NOT_A_MEMBER = 4,
  HG_STATUS_SINGULAR = 5,
  HG_STATUS_PANIC = 99,
} HgStatus;

typedef enum HgVerdict {
  HG_VERDICT_HAMILTON = 0,
  HG_VERDICT_HSP = 1,
  HG_VERDICT_INHOM_GL = 2,
  HG_VERDICT_GENERAL_LINEAR = 3,
  HG_VERDICT_NOT_A_GROUP_ELEMENT = 4,
} HgVerdict;

/**
 * Opaque handle to a Hamilton group element.
 */
typedef struct HgHamilton HgHamilton;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Builds `Φ(ε, R, f, v, r)`. `rot` holds `n*n` values, `f` and `v` hold `n`.
 *
 * # Safety
 * Pointers must reference arrays of the stated lengths; `out` must be writable.
 */
enum HgStatus hg_hamilton_new(size_t n,
                              int32_t epsilon,
                              const double *rot,
                              const double *f,
                              const double *v,
                              double r,
                              struct HgHamilton **out);

/**
 * # Safety
 * `out` must be writable.
 */
enum HgStatus hg_hamilton_identity(size_t n, struct HgHamilton **out);

/**
 * `lhs · rhs`.
 *
 * # Safety
 * Handles must be live; `out` must be writable.
 */
enum HgStatus hg_hamilton_compose(const struct HgHamilton *lhs,
                                  const struct HgHamilton *rhs,
                                  struct HgHamilton **out);

/**
 * # Safety
 * `g` must be live; `out` must be writable.
 */
enum HgStatus hg_hamilton_inverse(const struct HgHamilton *g, struct HgHamilton **out);

/**
 * Spatial dimension `n`, or 0 for a null handle.
 *
 * # Safety
 * `g` must be null or live.
 */
size_t hg_hamilton_dim(const struct HgHamilton *g);

/**
 * Writes the `(2n+2) x (2n+2)` matrix; `len` must equal `(2n+2)^2`.
 *
 * # Safety
 * `out` must hold `len` doubles.
 */
enum HgStatus hg_hamilton_to_matrix(const struct HgHamilton *g, double *out, size_t len);

/**
 * Parses a `size x size` row-major matrix as a Hamilton element.
 *
 * # Safety
 * `data` must hold `size*size` doubles; `out` must be writable.
 */
enum HgStatus hg_hamilton_from_matrix(const double *data,
                                      size_t size,
                                      double tol,
                                      struct HgHamilton **out);

/**
 * Copies the parameters out. Any output pointer may be null to skip it;
 * `rot` takes `n*n` values, `f` and `v` take `n`.
 *
 * # Safety
 * Non-null outputs must be writable for their lengths.
 */
enum HgStatus hg_hamilton_params(const struct HgHamilton *g,
                                 int32_t *epsilon,
                                 double *rot,
                                 double *f,
                                 double *v,
                                 double *r);

/**
 * Releases a handle; null is ignored.
 *
 * # Safety
 * `g` must be null or a handle not yet freed.
 */
void hg_hamilton_free(struct HgHamilton *g);

/**
 * Classifies a `size x size` row-major matrix, `size = 2n + 2`.
 *
 * # Safety
 * `data` must hold `size*size` doubles; `verdict` must be writable.
 */
enum HgStatus hg_classify(const double *data, size_t size, double tol, enum HgVerdict *verdict);

/**
 * `max |ᵗM·G·M - G|` for the phase-space form `role`.
 *
 * # Safety
 * `data` must hold `size*size` doubles; `residual` must be writable.
 */
enum HgStatus hg_form_residual(const double *data,
                               size_t size,
                               enum HgFormRole role,
                               double *residual);

/**
 * Message for the most recent failure on this thread; empty after a
 * success. The pointer stays valid until the next call on this thread.
 */
const char *hg_last_error_message(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* HAMILTON_GROUP_H */
