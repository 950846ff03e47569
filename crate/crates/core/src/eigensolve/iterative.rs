//! Shift-invert subspace iteration with Rayleigh–Ritz on each sweep.

use super::{check_mass, Pencil, SolverOptions, SpectralResult};
use crate::error::{Error, Result};
use crate::factor::EnvelopeLdl;
use crate::sparse::dot;
use nalgebra::{DMatrix, SymmetricEigen};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const PIVOT_TOL: f64 = 1e-13;

pub(super) fn solve(p: &Pencil, count: usize, shift: f64, options: &SolverOptions) -> Result<SpectralResult> {
    check_mass(p.m)?;
    let n = p.len();
    let available = n - usize::from(p.deflate);
    let block = (2 * count).max(count + 8).min(available);
    let factor = factor_shifted(p, shift)?;
    let m_ones = p.m.mul_vec(&vec![1.0; n]);
    let ones_mass: f64 = m_ones.iter().sum();

    let mut rng = ChaCha8Rng::seed_from_u64(options.seed);
    let mut x: Vec<Vec<f64>> = (0..block)
        .map(|_| {
            let mut v: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
            p.project(&mut v, &m_ones, ones_mass);
            v
        })
        .collect();
    let mut best: Option<(f64, SpectralResult)> = None;
    let mut last = f64::INFINITY;
    for _ in 0..options.max_iterations {
        let mut y: Vec<Vec<f64>> = x
            .iter()
            .map(|v| {
                let mut w = factor.solve(&p.m.mul_vec(v));
                p.project(&mut w, &m_ones, ones_mass);
                w
            })
            .collect();
        m_orthonormalize(p, &mut y, &mut rng, &m_ones, ones_mass);
        let (theta, ritz) = rayleigh_ritz(p, &y);
        x = ritz;
        let residuals: Vec<f64> = (0..count).map(|i| p.residual(theta[i], &x[i])).collect();
        last = residuals.iter().fold(0.0, |m, &r| m.max(r));
        let snapshot = || SpectralResult {
            eigenvalues: theta[..count].to_vec(),
            eigenvectors: x[..count].to_vec(),
            residual_norms: residuals.clone(),
            deflated_constant: p.deflate,
        };
        if last <= options.tolerance {
            return Ok(snapshot());
        }
        if best.as_ref().is_none_or(|(r, _)| last < *r) {
            best = Some((last, snapshot()));
        }
    }
    match best {
        Some((r, result)) if r <= options.acceptance => Ok(result),
        Some((r, _)) => Err(Error::NoConvergence { iterations: options.max_iterations, residual: r }),
        None => Err(Error::NoConvergence { iterations: 0, residual: last }),
    }
}

/// Factors `K − σM`, nudging σ downward if it hits an eigenvalue.
fn factor_shifted(p: &Pencil, shift: f64) -> Result<EnvelopeLdl> {
    let mut sigma = shift;
    let mut last_err = None;
    for attempt in 0..4 {
        let a = p.k.combine(1.0, p.m, -sigma);
        match EnvelopeLdl::factor(&a, PIVOT_TOL) {
            Ok(f) => return Ok(f),
            Err(e @ Error::Singular { .. }) => {
                last_err = Some(e);
                sigma = shift * (1.0 - 0.05 * (attempt + 1) as f64) - 1e-3 * (attempt + 1) as f64;
            }
            Err(e) => return Err(e),
        }
    }
    Err(last_err.expect("at least one attempt"))
}

/// Modified Gram–Schmidt in the `M` inner product, run twice. Columns that
/// collapse are replaced by fresh random directions.
fn m_orthonormalize(p: &Pencil, y: &mut [Vec<f64>], rng: &mut ChaCha8Rng, m_ones: &[f64], ones_mass: f64) {
    let n = p.len();
    let mut my: Vec<Vec<f64>> = Vec::with_capacity(y.len());
    for j in 0..y.len() {
        let original = p.m.quad_form(&y[j]).max(0.0).sqrt();
        for _pass in 0..2 {
            for (i, mi) in my.iter().enumerate() {
                let c = dot(mi, &y[j]);
                let (head, tail) = y.split_at_mut(j);
                for (t, s) in tail[0].iter_mut().zip(&head[i]) {
                    *t -= c * s;
                }
            }
        }
        let mut nrm = p.m.quad_form(&y[j]).max(0.0).sqrt();
        if !(nrm > 1e-10 * original) || nrm == 0.0 {
            let mut v: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
            p.project(&mut v, m_ones, ones_mass);
            for (i, mi) in my.iter().enumerate() {
                let c = dot(mi, &v);
                for (t, s) in v.iter_mut().zip(&y[i]) {
                    *t -= c * s;
                }
            }
            y[j] = v;
            nrm = p.m.quad_form(&y[j]).sqrt();
        }
        for t in y[j].iter_mut() {
            *t /= nrm;
        }
        my.push(p.m.mul_vec(&y[j]));
    }
}

/// Ritz pairs of `K` on the span of `M`-orthonormal columns, ascending.
fn rayleigh_ritz(p: &Pencil, y: &[Vec<f64>]) -> (Vec<f64>, Vec<Vec<f64>>) {
    let b = y.len();
    let ky: Vec<Vec<f64>> = y.iter().map(|v| p.k.mul_vec(v)).collect();
    let mut small = DMatrix::zeros(b, b);
    for i in 0..b {
        for j in 0..=i {
            let v = 0.5 * (dot(&y[i], &ky[j]) + dot(&y[j], &ky[i]));
            small[(i, j)] = v;
            small[(j, i)] = v;
        }
    }
    let eig = SymmetricEigen::new(small);
    let mut order: Vec<usize> = (0..b).collect();
    order.sort_by(|&a, &c| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[c]));
    let n = p.len();
    let theta = order.iter().map(|&j| eig.eigenvalues[j]).collect();
    let vectors = order
        .iter()
        .map(|&j| {
            let mut v = vec![0.0; n];
            for (i, yi) in y.iter().enumerate() {
                let c = eig.eigenvectors[(i, j)];
                for (t, s) in v.iter_mut().zip(yi) {
                    *t += c * s;
                }
            }
            v
        })
        .collect();
    (theta, vectors)
}
