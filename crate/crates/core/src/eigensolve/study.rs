use super::source::solve_neumann_source;
use crate::discretize::{assemble, mesh_domain, truncate_unbounded, PointLocator};
use crate::error::{Error, Result};
use crate::extension::Extension;
use crate::geometry::vec2::Point;
use crate::geometry::{invading_complement_measure, invading_sequence, ConvexDomain};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StudyOptions {
    pub h: f64,
    pub tail_tol: f64,
}

impl Default for StudyOptions {
    fn default() -> Self {
        Self { h: 0.05, tail_tol: 1e-10 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceRow {
    pub k: usize,
    /// `dγ`-mean of the datum on `Ω_k`.
    pub c_k: f64,
    /// `‖ũ_k − u‖` in `L²(Ω, dγ)`.
    pub error: f64,
    /// `γ(Ω ∖ Ω_k)`.
    pub complement_measure: f64,
    pub dofs: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceTable {
    pub rows: Vec<ConvergenceRow>,
    pub truncation_radius: f64,
    pub reference_dofs: usize,
    /// `‖A f‖` in `L²(Ω, dγ)`.
    pub reference_norm: f64,
}

/// `‖A_k f − A f‖` along the invading sequence of an unbounded domain.
///
/// `A f` is the mean-zero Neumann solution on the truncated domain; `A_k f`
/// solves on the `k`-th bounded truncation with datum `f − c_k` and is then
/// extended to the truncated domain by reflection and cut-off.
pub fn operator_convergence_study(
    domain: &ConvexDomain,
    f: &dyn Fn(Point) -> f64,
    k_values: &[usize],
    options: &StudyOptions,
) -> Result<ConvergenceTable> {
    if domain.is_bounded() {
        return Err(Error::NotApplicable("operator study needs an unbounded domain".into()));
    }
    let trunc = truncate_unbounded(domain, options.tail_tol)?;
    let mesh = mesh_domain(&trunc.domain, options.h)?;
    let system = assemble(&mesh)?;
    let raw = mesh.interpolate(f);
    let mean = system.mean(&raw);
    let datum = |x: Point| f(x) - mean;
    let fv: Vec<f64> = raw.iter().map(|v| v - mean).collect();
    let reference = solve_neumann_source(&system, &fv)?;
    let reference_norm = system.mass.quad_form(&reference.u).sqrt();

    let mut rows = Vec::with_capacity(k_values.len());
    for &k in k_values {
        let omega_k = invading_sequence(domain, k)?.domain;
        if (k as f64) >= trunc.radius {
            return Err(Error::OutsideValidity(format!("k = {k} reaches the truncation radius {}", trunc.radius)));
        }
        let mesh_k = mesh_domain(&omega_k, options.h)?;
        let system_k = assemble(&mesh_k)?;
        let sol = solve_neumann_source(&system_k, &mesh_k.interpolate(datum))?;
        let locator = PointLocator::new(&mesh_k);
        let uk = |y: Point| locator.evaluate(&sol.u, y).unwrap_or(f64::NAN);
        let ext = Extension::new(&omega_k)?;
        let diff = mesh
            .vertices()
            .iter()
            .zip(&reference.u)
            .map(|(&x, &u)| ext.evaluate(x, &uk).map(|(v, _)| v - u))
            .collect::<Result<Vec<f64>>>()?;
        if diff.iter().any(|v| v.is_nan()) {
            return Err(Error::OutsideValidity("extension sampled outside the truncated mesh".into()));
        }
        rows.push(ConvergenceRow {
            k,
            c_k: sol.c_k,
            error: system.mass.quad_form(&diff).max(0.0).sqrt(),
            complement_measure: invading_complement_measure(domain, k)?,
            dofs: system_k.dof_count,
        });
    }
    Ok(ConvergenceTable { rows, truncation_radius: trunc.radius, reference_dofs: system.dof_count, reference_norm })
}
