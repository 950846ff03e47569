//! Generalized symmetric eigenproblems `K u = μ M u` for Neumann and
//! Dirichlet pencils, Rayleigh quotients, and the Neumann source solve.

mod dense;
mod iterative;
mod source;
mod study;

use crate::discretize::AssembledSystem;
use crate::error::{invalid, Error, Result};
use crate::sparse::{dot, norm, CsrMatrix};
use serde::{Deserialize, Serialize};

pub use source::{solve_neumann_source, SourceSolution};
pub use study::{operator_convergence_study, ConvergenceRow, ConvergenceTable, StudyOptions};

/// Default number of unknowns below which [`Method::Auto`] solves densely.
pub const DENSE_THRESHOLD: usize = 2000;

/// Ascending eigenpairs of a pencil with `M`-orthonormal eigenvectors.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectralResult {
    pub eigenvalues: Vec<f64>,
    /// One vector per eigenvalue, in the same order.
    pub eigenvectors: Vec<Vec<f64>>,
    /// `‖K u − μ M u‖ / ‖M u‖` per pair.
    pub residual_norms: Vec<f64>,
    /// Whether the constant mode was projected out.
    pub deflated_constant: bool,
}

impl SpectralResult {
    /// First nonzero eigenvalue. For deflated results this is the first entry;
    /// otherwise the first entry above `1e-8` relative to the largest.
    pub fn mu1(&self) -> Option<f64> {
        if self.deflated_constant {
            return self.eigenvalues.first().copied();
        }
        let top = self.eigenvalues.iter().fold(1.0f64, |m, v| m.max(v.abs()));
        self.eigenvalues.iter().copied().find(|&v| v > 1e-8 * top)
    }

    /// Smallest eigenvalue.
    pub fn lambda1(&self) -> Option<f64> {
        self.eigenvalues.first().copied()
    }

    pub fn len(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigenvalues.is_empty()
    }

    pub fn max_residual(&self) -> f64 {
        self.residual_norms.iter().fold(0.0, |m, &r| m.max(r))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    /// Dense below [`SolverOptions::dense_threshold`] unknowns, iterative above.
    Auto,
    Dense,
    Iterative,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolverOptions {
    pub method: Method,
    /// Spectral shift; `None` picks 0.5 for Neumann and 0 for Dirichlet pencils.
    pub shift: Option<f64>,
    pub max_iterations: usize,
    /// Target relative residual for the iterative solver.
    pub tolerance: f64,
    /// Residual accepted when iteration stagnates before `tolerance`.
    pub acceptance: f64,
    pub dense_threshold: usize,
    pub seed: u64,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self {
            method: Method::Auto,
            shift: None,
            max_iterations: 500,
            tolerance: 1e-10,
            acceptance: 1e-8,
            dense_threshold: DENSE_THRESHOLD,
            seed: 0x5eed,
        }
    }
}

impl SolverOptions {
    pub fn with_method(method: Method) -> Self {
        Self { method, ..Self::default() }
    }

    fn use_dense(&self, n: usize) -> bool {
        match self.method {
            Method::Dense => true,
            Method::Iterative => false,
            Method::Auto => n < self.dense_threshold,
        }
    }
}

/// Smallest `count` nonzero Neumann eigenvalues, constant mode deflated.
pub fn solve_neumann_mu1(system: &AssembledSystem, count: usize) -> Result<SpectralResult> {
    solve_neumann_mu1_with(system, count, &SolverOptions::default())
}

pub fn solve_neumann_mu1_with(system: &AssembledSystem, count: usize, options: &SolverOptions) -> Result<SpectralResult> {
    let n = system.dof_count;
    if count == 0 || count >= n {
        return Err(invalid(format!("requested {count} eigenpairs from a {n}-dof system")));
    }
    let pencil = Pencil { k: &system.stiffness, m: &system.mass, deflate: true };
    if options.use_dense(n) {
        dense::solve(&pencil, count)
    } else {
        iterative::solve(&pencil, count, options.shift.unwrap_or(0.5), options)
    }
}

/// Smallest `count` eigenvalues with the listed dofs eliminated.
pub fn solve_dirichlet_lambda1(system: &AssembledSystem, boundary_dofs: &[usize], count: usize) -> Result<SpectralResult> {
    solve_dirichlet_lambda1_with(system, boundary_dofs, count, &SolverOptions::default())
}

pub fn solve_dirichlet_lambda1_with(
    system: &AssembledSystem,
    boundary_dofs: &[usize],
    count: usize,
    options: &SolverOptions,
) -> Result<SpectralResult> {
    let n = system.dof_count;
    if boundary_dofs.is_empty() {
        return Err(invalid("Dirichlet solve needs at least one boundary dof"));
    }
    let mut is_bc = vec![false; n];
    for &b in boundary_dofs {
        if b >= n {
            return Err(invalid(format!("boundary dof {b} out of range")));
        }
        is_bc[b] = true;
    }
    let interior: Vec<usize> = (0..n).filter(|&i| !is_bc[i]).collect();
    if interior.is_empty() {
        return Err(invalid("every dof lies on the boundary"));
    }
    if count == 0 || count > interior.len() {
        return Err(invalid(format!("requested {count} eigenpairs from {} interior dofs", interior.len())));
    }
    let k = system.stiffness.principal_submatrix(&interior);
    let m = system.mass.principal_submatrix(&interior);
    let pencil = Pencil { k: &k, m: &m, deflate: false };
    let reduced = if options.use_dense(interior.len()) {
        dense::solve(&pencil, count)?
    } else {
        iterative::solve(&pencil, count, options.shift.unwrap_or(0.0), options)?
    };
    let eigenvectors = reduced
        .eigenvectors
        .iter()
        .map(|v| {
            let mut full = vec![0.0; n];
            for (&i, &x) in interior.iter().zip(v) {
                full[i] = x;
            }
            full
        })
        .collect();
    Ok(SpectralResult { eigenvectors, ..reduced })
}

/// `wᵀKw / wᵀMw` with `w = v − (∫ v dγ / γ(Ω_h))`.
pub fn rayleigh_quotient(system: &AssembledSystem, v: &[f64]) -> Result<f64> {
    if v.len() != system.dof_count {
        return Err(invalid("vector length does not match the system"));
    }
    let mean = system.mean(v);
    let w: Vec<f64> = v.iter().map(|x| x - mean).collect();
    let den = system.mass.quad_form(&w);
    let scale = system.mass.quad_form(v);
    if !(den > 1e-24 * scale.max(f64::MIN_POSITIVE)) || scale == 0.0 {
        return Err(invalid("vector vanishes after mean removal"));
    }
    Ok(system.stiffness.quad_form(&w) / den)
}

struct Pencil<'a> {
    k: &'a CsrMatrix,
    m: &'a CsrMatrix,
    deflate: bool,
}

impl Pencil<'_> {
    fn len(&self) -> usize {
        self.k.nrows()
    }

    /// `v ← v − 1 (1ᵀMv)/(1ᵀM1)`, the `M`-orthogonal projection off constants.
    fn project(&self, v: &mut [f64], m_ones: &[f64], ones_mass: f64) {
        if !self.deflate {
            return;
        }
        let c = dot(m_ones, v) / ones_mass;
        for x in v.iter_mut() {
            *x -= c;
        }
    }

    fn residual(&self, mu: f64, v: &[f64]) -> f64 {
        let kv = self.k.mul_vec(v);
        let mv = self.m.mul_vec(v);
        let r: Vec<f64> = kv.iter().zip(&mv).map(|(a, b)| a - mu * b).collect();
        norm(&r) / norm(&mv).max(f64::MIN_POSITIVE)
    }
}

pub(crate) fn check_mass(m: &CsrMatrix) -> Result<()> {
    if m.diagonal().iter().any(|&d| !(d > 0.0)) {
        return Err(Error::InvalidInput("mass matrix is not positive definite".into()));
    }
    Ok(())
}

#[cfg(test)]
mod tests;
