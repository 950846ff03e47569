use crate::discretize::AssembledSystem;
use crate::error::{invalid, Result};
use crate::factor::EnvelopeLdl;
use crate::sparse::norm;
use serde::{Deserialize, Serialize};

/// Mean-zero solution of `K u = M (f − c)` with `c` the `dγ`-mean of `f`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SourceSolution {
    pub u: Vec<f64>,
    pub c_k: f64,
    /// `‖K u − M (f − c)‖ / ‖M (f − c)‖`, or the absolute residual when the
    /// datum vanishes.
    pub flux_residual: f64,
}

/// Solves the Neumann problem with datum `f − c` (nodal values of `f`).
///
/// The constant kernel is removed by pinning one unknown; the solution is
/// then shifted to have zero `dγ`-mean. A further null direction (for
/// example a disconnected mesh) surfaces as [`crate::Error::Singular`].
pub fn solve_neumann_source(system: &AssembledSystem, f: &[f64]) -> Result<SourceSolution> {
    let n = system.dof_count;
    if f.len() != n {
        return Err(invalid("datum length does not match the system"));
    }
    if n < 2 {
        return Err(invalid("source solve needs at least two dofs"));
    }
    let c_k = system.mean(f);
    let g: Vec<f64> = f.iter().map(|v| v - c_k).collect();
    let rhs = system.mass.mul_vec(&g);
    let rhs_norm = norm(&rhs);
    let scale = norm(&system.mass.mul_vec(f)).max(f64::MIN_POSITIVE);
    if rhs_norm <= 1e-13 * scale {
        return Ok(SourceSolution { u: vec![0.0; n], c_k, flux_residual: rhs_norm });
    }
    let diag = system.mass.diagonal();
    let pin = (0..n).max_by(|&a, &b| diag[a].total_cmp(&diag[b])).expect("nonempty");
    let keep: Vec<usize> = (0..n).filter(|&i| i != pin).collect();
    let k_red = system.stiffness.principal_submatrix(&keep);
    let factor = EnvelopeLdl::factor(&k_red, 1e-12)?;
    let b: Vec<f64> = keep.iter().map(|&i| rhs[i]).collect();
    let x = factor.solve(&b);
    let mut u = vec![0.0; n];
    for (&i, v) in keep.iter().zip(x) {
        u[i] = v;
    }
    let mean = system.mean(&u);
    for v in u.iter_mut() {
        *v -= mean;
    }
    let ku = system.stiffness.mul_vec(&u);
    let r: Vec<f64> = ku.iter().zip(&rhs).map(|(a, b)| a - b).collect();
    Ok(SourceSolution { u, c_k, flux_residual: norm(&r) / rhs_norm })
}
