#include <math.h>
#include <stdio.h>
#include "gauss_spectrum.h"

int main(void) {
    GsMesh *mesh = NULL;
    GsSystem *sys = NULL;
    GsSpectrum *spec = NULL;
    double mu = 0.0;
    if (gs_mesh_interval(-1.0, 1.0, 200, &mesh) != GS_STATUS_OK) return 1;
    if (gs_assemble(mesh, &sys) != GS_STATUS_OK) return 2;
    if (gs_solve_neumann(sys, 1, &spec) != GS_STATUS_OK) return 3;
    if (gs_spectrum_eigenvalue(spec, 0, &mu) != GS_STATUS_OK) return 4;
    if (gs_mesh_interval(1.0, 0.0, 4, &mesh) != GS_STATUS_INVALID_INPUT) return 5;
    if (gs_last_error_message() == NULL) return 6;
    printf("%.6f\n", mu);
    gs_spectrum_free(spec);
    gs_system_free(sys);
    return fabs(mu - 3.0) < 1e-3 ? 0 : 7;
}
