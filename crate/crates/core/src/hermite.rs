//! Probabilists' Hermite polynomials, Gauss quadrature rules and the spectral
//! solver for the Hermite operator on the whole real line.
//!
//! Polynomials are monic by default: `H₀ = 1`, `H₁ = t`,
//! `H_{n+1}(t) = t H_n(t) − n H_{n−1}(t)`. They are orthogonal for the
//! standard Gaussian measure with `∫ H_n² dγ₁ = n!`.

use crate::eigensolve::SpectralResult;
use crate::error::{invalid, Error, Result};
use crate::measure;
use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Normalization {
    /// Leading coefficient one.
    Monic,
    /// Unit norm in `L²(dγ₁)`.
    Orthonormal,
}

/// Hermite polynomials `H_0 .. H_{max_order}` in a fixed normalization.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct HermiteBasis {
    pub max_order: usize,
    pub normalization: Normalization,
}

impl HermiteBasis {
    pub fn new(max_order: usize, normalization: Normalization) -> Self {
        Self { max_order, normalization }
    }

    /// Values of every basis function at `t`.
    pub fn values(&self, t: f64) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.max_order + 1);
        match self.normalization {
            Normalization::Monic => {
                let (mut prev, mut cur) = (0.0, 1.0);
                for n in 0..=self.max_order {
                    out.push(cur);
                    let next = t * cur - n as f64 * prev;
                    prev = cur;
                    cur = next;
                }
            }
            Normalization::Orthonormal => {
                let (mut prev, mut cur) = (0.0, 1.0);
                for n in 0..=self.max_order {
                    out.push(cur);
                    let next = (t * cur - (n as f64).sqrt() * prev) / ((n + 1) as f64).sqrt();
                    prev = cur;
                    cur = next;
                }
            }
        }
        out
    }

    /// Derivatives of every basis function at `t`, using `H_n' = n H_{n−1}`.
    pub fn derivatives(&self, t: f64) -> Vec<f64> {
        let vals = self.values(t);
        (0..=self.max_order)
            .map(|n| match (n, self.normalization) {
                (0, _) => 0.0,
                (_, Normalization::Monic) => n as f64 * vals[n - 1],
                (_, Normalization::Orthonormal) => (n as f64).sqrt() * vals[n - 1],
            })
            .collect()
    }

    pub fn eval(&self, n: usize, t: f64) -> f64 {
        assert!(n <= self.max_order, "order {n} exceeds basis size");
        self.values(t)[n]
    }
}

/// Monic probabilists' Hermite polynomial `H_n(t)`.
pub fn hermite_eval(n: usize, t: f64) -> f64 {
    let (mut prev, mut cur) = (0.0, 1.0);
    for k in 0..n {
        let next = t * cur - k as f64 * prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// Pointwise residual of `−(e^{−t²/2} H_n')' = n e^{−t²/2} H_n`, with the
/// flux differenced on a three-point conservative stencil of step `h`.
pub fn hermite_ode_residual(n: usize, t: f64, h: f64) -> f64 {
    assert!(h > 0.0, "step must be positive");
    let w = |s: f64| (-0.5 * s * s).exp();
    let hn = |s: f64| hermite_eval(n, s);
    let flux_right = w(t + 0.5 * h) * (hn(t + h) - hn(t)) / h;
    let flux_left = w(t - 0.5 * h) * (hn(t) - hn(t - h)) / h;
    let lhs = -(flux_right - flux_left) / h;
    (lhs - n as f64 * w(t) * hn(t)).abs()
}

/// Nodes and weights of a one-dimensional quadrature rule.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuadratureRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl QuadratureRule {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn integrate(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.nodes.iter().zip(&self.weights).map(|(&x, &w)| w * f(x)).sum()
    }

    /// Affine image of a rule on `[-1, 1]` onto `[a, b]`.
    pub fn mapped(&self, a: f64, b: f64) -> QuadratureRule {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        QuadratureRule {
            nodes: self.nodes.iter().map(|&x| mid + half * x).collect(),
            weights: self.weights.iter().map(|&w| w * half).collect(),
        }
    }
}

const NEWTON_MAX: usize = 100;

/// `m`-point Gauss rule for the standard Gaussian measure `dγ₁`: nodes are the
/// roots of `H_m`, weights sum to one.
pub fn gauss_hermite_rule(m: usize) -> Result<QuadratureRule> {
    if m == 0 {
        return Err(invalid("Gauss-Hermite rule needs at least one node"));
    }
    // Roots are computed for the physicists' weight e^{-x²} with orthonormal
    // recurrences, then rescaled by √2.
    let mut roots = vec![0.0; m];
    let mut weights = vec![0.0; m];
    let half = m.div_ceil(2);
    let nf = m as f64;
    let pim4 = PI.powf(-0.25);
    // Starting values from the eigenvalues of the Jacobi matrix (Golub-Welsch),
    // largest first; Newton on the recurrence then polishes each root and
    // yields the weight through the derivative.
    let jacobi = DMatrix::from_fn(m, m, |i, j| if i.abs_diff(j) == 1 { (i.max(j) as f64 / 2.0).sqrt() } else { 0.0 });
    let mut guesses: Vec<f64> = jacobi.symmetric_eigenvalues().iter().copied().collect();
    guesses.sort_by(|a, b| b.total_cmp(a));
    for i in 0..half {
        let mut z = guesses[i];
        let mut converged = false;
        let mut pp = 0.0;
        for _ in 0..NEWTON_MAX {
            let (mut p1, mut p2) = (pim4, 0.0);
            for j in 1..=m {
                let p3 = p2;
                p2 = p1;
                let jf = j as f64;
                p1 = z * (2.0 / jf).sqrt() * p2 - ((jf - 1.0) / jf).sqrt() * p3;
            }
            pp = (2.0 * nf).sqrt() * p2;
            let z1 = z;
            z = z1 - p1 / pp;
            if (z - z1).abs() <= 1e-15 * z.abs().max(1.0) {
                converged = true;
                break;
            }
        }
        if !converged {
            return Err(Error::NoConvergence { iterations: NEWTON_MAX, residual: f64::NAN });
        }
        roots[i] = z;
        weights[i] = 2.0 / (pp * pp);
    }
    let mut nodes = vec![0.0; m];
    let mut w = vec![0.0; m];
    for i in 0..half {
        let x = std::f64::consts::SQRT_2 * roots[i];
        let wi = weights[i] / PI.sqrt();
        nodes[i] = -x;
        nodes[m - 1 - i] = x;
        w[i] = wi;
        w[m - 1 - i] = wi;
    }
    if m % 2 == 1 {
        nodes[m / 2] = 0.0;
    }
    Ok(QuadratureRule { nodes, weights: w })
}

/// `m`-point Gauss–Legendre rule on `[-1, 1]`.
pub fn gauss_legendre_rule(m: usize) -> Result<QuadratureRule> {
    if m == 0 {
        return Err(invalid("Gauss-Legendre rule needs at least one node"));
    }
    let mut nodes = vec![0.0; m];
    let mut weights = vec![0.0; m];
    let nf = m as f64;
    for i in 0..m.div_ceil(2) {
        let mut z = (PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut pp = 0.0;
        let mut converged = false;
        for _ in 0..NEWTON_MAX {
            let (mut p1, mut p2) = (1.0, 0.0);
            for j in 1..=m {
                let p3 = p2;
                p2 = p1;
                let jf = j as f64;
                p1 = ((2.0 * jf - 1.0) * z * p2 - (jf - 1.0) * p3) / jf;
            }
            pp = nf * (z * p1 - p2) / (z * z - 1.0);
            let z1 = z;
            z = z1 - p1 / pp;
            if (z - z1).abs() <= 1e-15 {
                converged = true;
                break;
            }
        }
        if !converged {
            return Err(Error::NoConvergence { iterations: NEWTON_MAX, residual: f64::NAN });
        }
        let w = 2.0 / ((1.0 - z * z) * pp * pp);
        nodes[i] = -z;
        nodes[m - 1 - i] = z;
        weights[i] = w;
        weights[m - 1 - i] = w;
    }
    if m % 2 == 1 {
        nodes[m / 2] = 0.0;
    }
    Ok(QuadratureRule { nodes, weights })
}

/// Galerkin matrices `(∫ h_i' h_j' dγ₁, ∫ h_i h_j dγ₁)` of the orthonormal
/// Hermite basis up to order `n_max`, integrated with `n_max + 1` nodes.
pub fn real_line_operator(n_max: usize) -> Result<(DMatrix<f64>, DMatrix<f64>)> {
    let basis = HermiteBasis::new(n_max, Normalization::Orthonormal);
    let rule = gauss_hermite_rule(n_max + 1)?;
    let size = n_max + 1;
    let mut stiff = DMatrix::zeros(size, size);
    let mut mass = DMatrix::zeros(size, size);
    for (&x, &w) in rule.nodes.iter().zip(&rule.weights) {
        let v = basis.values(x);
        let d = basis.derivatives(x);
        for i in 0..size {
            for j in 0..size {
                stiff[(i, j)] += w * d[i] * d[j];
                mass[(i, j)] += w * v[i] * v[j];
            }
        }
    }
    Ok((stiff, mass))
}

/// Neumann spectrum of the Hermite operator on ℝ in the truncated Hermite basis.
///
/// The Galerkin pencil is diagonal in this basis; the eigenvalues are the
/// integers `0..=n_max` and `H_1` spans the first nontrivial eigenspace.
pub fn spectral_solve_real_line(n_max: usize) -> Result<SpectralResult> {
    if n_max == 0 {
        return Err(invalid("spectral basis needs n_max >= 1"));
    }
    let (stiff, mass) = real_line_operator(n_max)?;
    let size = n_max + 1;
    // Both matrices are diagonal to rounding; the pencil is read off directly
    // and the off-diagonal defect reported as the residual.
    let mut pairs: Vec<(f64, usize)> =
        (0..size).map(|i| (stiff[(i, i)] / mass[(i, i)], i)).collect();
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut eigenvalues = Vec::with_capacity(size);
    let mut eigenvectors = Vec::with_capacity(size);
    let mut residual_norms = Vec::with_capacity(size);
    for (mu, i) in pairs {
        let scale = mass[(i, i)].sqrt();
        let mut v = vec![0.0; size];
        v[i] = 1.0 / scale;
        let mut r2 = 0.0;
        let mut m2 = 0.0;
        for row in 0..size {
            let r = (stiff[(row, i)] - mu * mass[(row, i)]) / scale;
            r2 += r * r;
            m2 += (mass[(row, i)] / scale).powi(2);
        }
        eigenvalues.push(mu);
        eigenvectors.push(v);
        residual_norms.push((r2 / m2).sqrt());
    }
    Ok(SpectralResult { eigenvalues, eigenvectors, residual_norms, deflated_constant: false })
}

/// `∫ f dγ₁` over an interval with composite Gauss–Legendre panels.
pub fn gaussian_integral(a: f64, b: f64, panels: usize, f: impl Fn(f64) -> f64) -> f64 {
    let rule = gauss_legendre_rule(10).expect("10-point rule");
    let width = (b - a) / panels as f64;
    (0..panels)
        .map(|k| {
            let lo = a + k as f64 * width;
            rule.mapped(lo, lo + width).integrate(|t| f(t) * measure::density_1d(t))
        })
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Rodrigues evaluation by symbolic differentiation: if
    /// dⁿ/dtⁿ e^{−t²/2} = q_n(t) e^{−t²/2}, then q_{n+1} = q_n' − t q_n and
    /// H_n = (−1)ⁿ q_n.
    fn rodrigues_symbolic(n: usize, t: f64) -> f64 {
        let mut q = vec![1.0];
        for _ in 0..n {
            let mut next = vec![0.0; q.len() + 1];
            for (k, &c) in q.iter().enumerate() {
                if k > 0 {
                    next[k - 1] += k as f64 * c;
                }
                next[k + 1] -= c;
            }
            q = next;
        }
        let val: f64 = q.iter().rev().fold(0.0, |acc, &c| acc * t + c);
        if n.is_multiple_of(2) {
            val
        } else {
            -val
        }
    }

    /// Rodrigues evaluation with Richardson-extrapolated central differences.
    fn rodrigues_fd(n: usize, t: f64) -> f64 {
        fn binom(n: usize, k: usize) -> f64 {
            (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
        }
        let g = |s: f64| (-0.5 * s * s).exp();
        let deriv = |h: f64| {
            let mut s = 0.0;
            for k in 0..=n {
                let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
                s += sign * binom(n, k) * g(t + (n as f64 / 2.0 - k as f64) * h);
            }
            s / h.powi(n as i32)
        };
        let h = 0.02;
        let d = (4.0 * deriv(h / 2.0) - deriv(h)) / 3.0;
        let sign = if n.is_multiple_of(2) { 1.0 } else { -1.0 };
        sign * d / g(t)
    }

    #[test]
    fn low_orders() {
        assert_eq!(hermite_eval(1, 0.7), 0.7);
        for t in [-3.0, 0.0, 0.25, 9.0] {
            assert_eq!(hermite_eval(0, t), 1.0);
        }
        assert!((hermite_eval(2, 2.0) - 3.0).abs() < 1e-15);
        assert!((rodrigues_fd(2, 2.0) - 3.0).abs() < 1e-6);
    }

    #[test]
    fn recurrence_matches_rodrigues() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..100 {
            let t: f64 = rng.random_range(-4.0..4.0);
            for n in 0..=8 {
                let exact = rodrigues_symbolic(n, t);
                let rec = hermite_eval(n, t);
                assert!(
                    (rec - exact).abs() <= 1e-6 * exact.abs().max(1.0),
                    "n={n} t={t}: {rec} vs {exact}"
                );
            }
            for n in 0..=3 {
                let fd = rodrigues_fd(n, t);
                let rec = hermite_eval(n, t);
                assert!((rec - fd).abs() <= 1e-6 * rec.abs().max(1.0), "n={n} t={t}: {rec} vs {fd}");
            }
        }
    }

    #[test]
    fn ode_residuals() {
        assert!(hermite_ode_residual(0, 1.3, 1e-4) <= 1e-6);
        assert!(hermite_ode_residual(1, 0.5, 1e-4) <= 1e-6);
        assert!(hermite_ode_residual(4, 1.1, 1e-4) <= 1e-5);
        for n in 0..8 {
            assert!(hermite_ode_residual(n, -0.8, 1e-4) <= 1e-4, "n={n}");
        }
    }

    #[test]
    fn basis_normalizations_agree() {
        let monic = HermiteBasis::new(6, Normalization::Monic);
        let ortho = HermiteBasis::new(6, Normalization::Orthonormal);
        let t = 1.37;
        let (m, o) = (monic.values(t), ortho.values(t));
        let mut fact = 1.0;
        for n in 0..=6 {
            if n > 0 {
                fact *= n as f64;
            }
            assert!((m[n] / fact.sqrt() - o[n]).abs() < 1e-12);
        }
        assert_eq!(monic.eval(1, t), t);
        assert_eq!(monic.derivatives(t)[3], 3.0 * m[2]);
    }

    #[test]
    fn gauss_hermite_moments() {
        let r2 = gauss_hermite_rule(2).unwrap();
        assert!((r2.integrate(|t| t * t) - 1.0).abs() < 1e-14);
        let r3 = gauss_hermite_rule(3).unwrap();
        assert!((r3.integrate(|t| t.powi(4)) - 3.0).abs() < 1e-13);
        for m in [1, 2, 5, 17, 64, 200] {
            let r = gauss_hermite_rule(m).unwrap();
            assert_eq!(r.len(), m);
            assert!(r.weights.iter().all(|&w| w > 0.0), "m={m}");
            assert!((r.integrate(|_| 1.0) - 1.0).abs() < 1e-12, "m={m}");
            for i in 0..m {
                let h = hermite_eval(m, r.nodes[i]).abs();
                let scale = hermite_eval(m - 1, r.nodes[i]).abs().max(1.0) * r.nodes[i].abs().max(1.0);
                assert!(h <= 1e-9 * scale, "m={m} node {i}");
            }
        }
    }

    #[test]
    fn gauss_hermite_exactness() {
        // E[X^{2k}] = (2k-1)!!
        for m in 1..=12 {
            let r = gauss_hermite_rule(m).unwrap();
            for deg in 0..2 * m {
                let exact = if deg % 2 == 1 { 0.0 } else { (1..deg).step_by(2).map(|v| v as f64).product() };
                // odd moments cancel between symmetric nodes; compare against the neighbouring even moment
                let scale: f64 = (1..=deg).step_by(2).map(|v| v as f64).product();
                let got = r.integrate(|t| t.powi(deg as i32));
                assert!((got - exact).abs() <= 1e-12 * scale.max(1.0), "m={m} deg={deg}");
            }
        }
    }

    #[test]
    fn gauss_legendre_exactness() {
        let r = gauss_legendre_rule(5).unwrap();
        for deg in 0..10 {
            let exact = if deg % 2 == 1 { 0.0 } else { 2.0 / (deg as f64 + 1.0) };
            assert!((r.integrate(|t| t.powi(deg)) - exact).abs() < 1e-14);
        }
        let q = r.mapped(0.0, 2.0);
        assert!((q.integrate(|t| t * t) - 8.0 / 3.0).abs() < 1e-14);
    }

    #[test]
    fn orthonormal_gram_is_identity() {
        let n_max = 12;
        let (_, mass) = real_line_operator(n_max).unwrap();
        for i in 0..=n_max {
            for j in 0..=n_max {
                let expect = if i == j { 1.0 } else { 0.0 };
                assert!((mass[(i, j)] - expect).abs() < 1e-10, "({i},{j})");
            }
        }
    }

    #[test]
    fn real_line_operator_is_diagonal() {
        let (stiff, _) = real_line_operator(10).unwrap();
        for i in 0..=10 {
            for j in 0..=10 {
                if i != j {
                    assert!(stiff[(i, j)].abs() < 1e-12, "({i},{j}) = {}", stiff[(i, j)]);
                }
            }
        }
    }

    #[test]
    fn real_line_spectrum_is_the_integers() {
        let res = spectral_solve_real_line(5).unwrap();
        assert_eq!(res.eigenvalues.len(), 6);
        for (k, mu) in res.eigenvalues.iter().enumerate() {
            assert!((mu - k as f64).abs() < 1e-12, "{mu}");
        }
        let res1 = spectral_solve_real_line(1).unwrap();
        assert!((res1.eigenvalues[0]).abs() < 1e-14 && (res1.eigenvalues[1] - 1.0).abs() < 1e-14);
        let res10 = spectral_solve_real_line(10).unwrap();
        assert!((res10.mu1().unwrap() - 1.0).abs() < 1e-12);
        // the first nontrivial eigenvector is H₁
        assert!((res10.eigenvectors[1][1].abs() - 1.0).abs() < 1e-12);
        assert!(spectral_solve_real_line(0).is_err());
    }
}
