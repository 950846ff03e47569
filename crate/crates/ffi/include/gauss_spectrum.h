#ifndef GAUSS_SPECTRUM_H
#define GAUSS_SPECTRUM_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Result codes shared by all fallible functions.
typedef enum GsStatus {
  GS_STATUS_OK = 0,
  GS_STATUS_NULL_POINTER = 1,
  GS_STATUS_INVALID_INPUT = 2,
  GS_STATUS_DEGENERATE_GEOMETRY = 3,
  GS_STATUS_OUTSIDE_VALIDITY = 4,
  GS_STATUS_NOT_APPLICABLE = 5,
  GS_STATUS_SINGULAR = 6,
  GS_STATUS_NO_CONVERGENCE = 7,
  GS_STATUS_PARSE = 8,
  GS_STATUS_INDEX_OUT_OF_RANGE = 9,
  GS_STATUS_PANIC = 10,
} GsStatus;

// A convex domain.
typedef struct GsDomain GsDomain;

// A conforming interval or triangle mesh.
typedef struct GsMesh GsMesh;

// Eigenvalues, eigenvectors and residual norms of one solve.
typedef struct GsSpectrum GsSpectrum;

// Assembled Gaussian-weighted stiffness and mass matrices.
typedef struct GsSystem GsSystem;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message of the last failure on this thread, or null. Owned by the library.
const char *gs_last_error_message(void);

// Parses a domain from JSON such as `{"kind":"disk","center":[0,0],"radius":1}`.
//
// # Safety
// `json` must be a NUL-terminated string and `out` a valid pointer.
enum GsStatus gs_domain_from_json(const char *json, struct GsDomain **out);

// # Safety
// `domain` must come from `gs_domain_from_json` or be null.
void gs_domain_free(struct GsDomain *domain);

// Unsigned distance from `(x, y)` to the boundary.
//
// # Safety
// Pointers must be valid.
enum GsStatus gs_domain_distance(const struct GsDomain *domain, double x, double y, double *out);

// Reflects an interior point near the boundary; writes the image to
// `out_point[0..2]` and the Jacobian determinant to `out_jacobian`.
//
// # Safety
// `out_point` must have room for two doubles.
enum GsStatus gs_domain_reflect(const struct GsDomain *domain,
                                double x,
                                double y,
                                double *out_point,
                                double *out_jacobian);

// Uniform mesh of `(a, b)` with `n` cells.
//
// # Safety
// `out` must be a valid pointer.
enum GsStatus gs_mesh_interval(double a, double b, size_t n, struct GsMesh **out);

// Meshes a bounded domain with target size `h`.
//
// # Safety
// Pointers must be valid.
enum GsStatus gs_mesh_domain(const struct GsDomain *domain, double h, struct GsMesh **out);

// Number of vertices, or 0 for a null handle.
//
// # Safety
// `mesh` must be valid or null.
size_t gs_mesh_vertex_count(const struct GsMesh *mesh);

// Number of cells, or 0 for a null handle.
//
// # Safety
// `mesh` must be valid or null.
size_t gs_mesh_cell_count(const struct GsMesh *mesh);

// # Safety
// `mesh` must come from a `gs_mesh_*` constructor or be null.
void gs_mesh_free(struct GsMesh *mesh);

// Assembles the weighted P1 stiffness and mass matrices of a mesh.
//
// # Safety
// Pointers must be valid.
enum GsStatus gs_assemble(const struct GsMesh *mesh, struct GsSystem **out);

// # Safety
// `system` must be valid or null.
size_t gs_system_dof_count(const struct GsSystem *system);

// Gaussian measure of the meshed region (sum of the mass matrix), NaN for null.
//
// # Safety
// `system` must be valid or null.
double gs_system_gaussian_mass(const struct GsSystem *system);

// # Safety
// `system` must come from `gs_assemble` or be null.
void gs_system_free(struct GsSystem *system);

// Lowest `count` nonzero Neumann eigenpairs.
//
// # Safety
// Pointers must be valid.
enum GsStatus gs_solve_neumann(const struct GsSystem *system,
                               size_t count,
                               struct GsSpectrum **out);

// Lowest `count` Dirichlet eigenpairs, with the mesh boundary vertices fixed.
//
// # Safety
// Pointers must be valid.
enum GsStatus gs_solve_dirichlet(const struct GsSystem *system,
                                 size_t count,
                                 struct GsSpectrum **out);

// Number of eigenpairs, or 0 for null.
//
// # Safety
// `spectrum` must be valid or null.
size_t gs_spectrum_len(const struct GsSpectrum *spectrum);

// # Safety
// Pointers must be valid.
enum GsStatus gs_spectrum_eigenvalue(const struct GsSpectrum *spectrum, size_t i, double *out);

// # Safety
// Pointers must be valid.
enum GsStatus gs_spectrum_residual(const struct GsSpectrum *spectrum, size_t i, double *out);

// Copies eigenvector `i` (nodal values, M-normalized) into `buffer`, which
// must hold exactly the system's dof count.
//
// # Safety
// `buffer` must point to `len` writable doubles.
enum GsStatus gs_spectrum_eigenvector(const struct GsSpectrum *spectrum,
                                      size_t i,
                                      double *buffer,
                                      size_t len);

// # Safety
// `spectrum` must come from a `gs_solve_*` call or be null.
void gs_spectrum_free(struct GsSpectrum *spectrum);

// Probabilists' Hermite polynomial `He_n(t)`.
double gs_hermite_eval(uint32_t n, double t);

// Spectral eigenvalues of the one-dimensional operator on the real line in
// the Hermite basis up to degree `n_max`; `out` must hold `n_max + 1` values.
//
// # Safety
// `out` must point to `len` writable doubles.
enum GsStatus gs_spectral_real_line(size_t n_max, double *out, size_t len);

// Runs a named scenario. `params_json` is null or an object of parameters
// (`h`, `tail_tol` and `seed` are recognized specially). The report JSON is
// returned in `out_report` and must be released with `gs_string_free`;
// `out_passed` receives 1 if every enforced check passed.
//
// # Safety
// `name` must be NUL-terminated; `params_json` NUL-terminated or null.
enum GsStatus gs_run_scenario(const char *name,
                              const char *params_json,
                              char **out_report,
                              int *out_passed);

// # Safety
// `s` must come from this library or be null.
void gs_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* GAUSS_SPECTRUM_H */
