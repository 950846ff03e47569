//! Dense reference path: Cholesky reduction of the pencil to a standard
//! symmetric problem followed by a full symmetric eigendecomposition.

use super::{check_mass, Pencil, SpectralResult};
use crate::error::{Error, Result};
use crate::sparse::dot;
use nalgebra::{DMatrix, SymmetricEigen};

pub(super) fn solve(p: &Pencil, count: usize) -> Result<SpectralResult> {
    check_mass(p.m)?;
    let n = p.len();
    let k = p.k.to_dense();
    let m = p.m.to_dense();
    let chol = m
        .cholesky()
        .ok_or_else(|| Error::InvalidInput("mass matrix is not positive definite".into()))?;
    let l = chol.l();
    let lk = l.solve_lower_triangular(&k).expect("triangular solve");
    let c = l.solve_lower_triangular(&lk.transpose()).expect("triangular solve");
    let c = (&c + c.transpose()) * 0.5;
    let eig = SymmetricEigen::new(c);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let lt = l.transpose();
    let vector = |j: usize| -> Vec<f64> {
        let y = DMatrix::from_column_slice(n, 1, eig.eigenvectors.column(j).as_slice());
        lt.solve_upper_triangular(&y).expect("triangular solve").column(0).iter().copied().collect()
    };

    let mut skip = None;
    if p.deflate {
        // drop the pair most aligned with the constants in the M inner product
        let m_ones = p.m.mul_vec(&vec![1.0; n]);
        let ones_mass: f64 = m_ones.iter().sum();
        let mut best = (0.0, 0);
        for (rank, &j) in order.iter().take(3.min(n)).enumerate() {
            let align = dot(&m_ones, &vector(j)).abs() / ones_mass.sqrt();
            if align > best.0 {
                best = (align, rank);
            }
        }
        skip = Some(best.1);
    }
    let mut out = SpectralResult {
        eigenvalues: Vec::with_capacity(count),
        eigenvectors: Vec::with_capacity(count),
        residual_norms: Vec::with_capacity(count),
        deflated_constant: p.deflate,
    };
    for (rank, &j) in order.iter().enumerate() {
        if Some(rank) == skip {
            continue;
        }
        if out.eigenvalues.len() == count {
            break;
        }
        let mu = eig.eigenvalues[j];
        let v = vector(j);
        out.residual_norms.push(p.residual(mu, &v));
        out.eigenvalues.push(mu);
        out.eigenvectors.push(v);
    }
    Ok(out)
}
