use super::field::Extension;
use crate::error::{invalid, Result};
use crate::geometry::vec2::Point;
use crate::geometry::ConvexDomain;
use crate::hermite::gaussian_integral;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, Normal};

/// Central-difference step for gradients of the extension.
const GRAD_STEP: f64 = 1e-6;

/// Weighted norms of `u` on Ω and of its extension on the whole space.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NormRatio {
    /// `‖ũ‖_{H¹(dγ)} / ‖u‖_{H¹(Ω, dγ)}`.
    pub ratio: f64,
    /// `‖ũ‖_{L²(dγ)} / ‖u‖_{L²(Ω, dγ)}`.
    pub l2_ratio: f64,
    pub inner_l2_sq: f64,
    pub inner_h1_sq: f64,
    pub extended_l2_sq: f64,
    pub extended_h1_sq: f64,
    /// Quadrature or sample count used.
    pub samples: usize,
}

/// Compares weighted norms of `u` and its extension.
///
/// One-dimensional domains use composite Gauss–Legendre quadrature; planar
/// domains use `samples` randomized Halton points pushed through the normal
/// quantile, so that plain averages estimate `∫ · dγ₂`.
pub fn extension_norm_ratio(domain: &ConvexDomain, u: &dyn Fn(Point) -> f64, samples: usize, seed: u64) -> Result<NormRatio> {
    let ext = Extension::for_domain(domain)?;
    let value = |x: Point| ext.evaluate(x, u).map(|(v, _)| v);
    let sums = if domain.dimension() == 1 { quadrature_1d(domain, &ext, u)? } else { qmc_2d(domain, &value, u, samples, seed)? };
    let [il2, ih1, el2, eh1] = sums;
    if !(il2 > 0.0) {
        return Err(invalid("input function vanishes on the domain"));
    }
    Ok(NormRatio {
        ratio: (eh1 / ih1).sqrt(),
        l2_ratio: (el2 / il2).sqrt(),
        inner_l2_sq: il2,
        inner_h1_sq: ih1,
        extended_l2_sq: el2,
        extended_h1_sq: eh1,
        samples: if domain.dimension() == 1 { 0 } else { samples },
    })
}

fn quadrature_1d(domain: &ConvexDomain, ext: &Extension, u: &dyn Fn(Point) -> f64) -> Result<[f64; 4]> {
    let ConvexDomain::Interval { a, b } = *domain else {
        return Err(invalid("one-dimensional norms need an interval"));
    };
    let r = ext.cutoff().r_tilde;
    let panels = 64;
    let f = |t: f64| ext.evaluate([t, 0.0], u).map(|(v, _)| v).unwrap_or(f64::NAN);
    let df = |t: f64| (f(t + GRAD_STEP) - f(t - GRAD_STEP)) / (2.0 * GRAD_STEP);
    let inner_l2 = gaussian_integral(a, b, panels, |t| u([t, 0.0]).powi(2));
    let du = |t: f64| (u([t + GRAD_STEP, 0.0]) - u([t - GRAD_STEP, 0.0])) / (2.0 * GRAD_STEP);
    let inner_grad = gaussian_integral(a, b, panels, |t| du(t).powi(2));
    let mut ext_l2 = inner_l2;
    let mut ext_grad = inner_grad;
    for (lo, hi) in [(a - r, a), (b, b + r)] {
        ext_l2 += gaussian_integral(lo, hi, panels, |t| f(t).powi(2));
        ext_grad += gaussian_integral(lo, hi, panels, |t| df(t).powi(2));
    }
    if ext_l2.is_nan() || ext_grad.is_nan() {
        return Err(invalid("extension could not be evaluated on the collar"));
    }
    Ok([inner_l2, inner_l2 + inner_grad, ext_l2, ext_l2 + ext_grad])
}

fn qmc_2d(
    domain: &ConvexDomain,
    value: &dyn Fn(Point) -> Result<f64>,
    u: &dyn Fn(Point) -> f64,
    samples: usize,
    seed: u64,
) -> Result<[f64; 4]> {
    if samples == 0 {
        return Err(invalid("sample count must be positive"));
    }
    let normal = Normal::standard();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let shift: [f64; 2] = [rng.random(), rng.random()];
    let mut sums = [0.0f64; 4];
    let h = GRAD_STEP;
    for i in 1..=samples {
        let q = [radical_inverse(i, 2), radical_inverse(i, 3)];
        let x: Point = std::array::from_fn(|k| {
            let s = (q[k] + shift[k]).fract().clamp(1e-16, 1.0 - 1e-16);
            normal.inverse_cdf(s)
        });
        let v = value(x)?;
        let gx = (value([x[0] + h, x[1]])? - value([x[0] - h, x[1]])?) / (2.0 * h);
        let gy = (value([x[0], x[1] + h])? - value([x[0], x[1] - h])?) / (2.0 * h);
        let ext_h1 = v * v + gx * gx + gy * gy;
        sums[2] += v * v;
        sums[3] += ext_h1;
        if domain.contains(x) {
            let w = u(x);
            let ux = (u([x[0] + h, x[1]]) - u([x[0] - h, x[1]])) / (2.0 * h);
            let uy = (u([x[0], x[1] + h]) - u([x[0], x[1] - h])) / (2.0 * h);
            sums[0] += w * w;
            sums[1] += w * w + ux * ux + uy * uy;
        }
    }
    Ok(sums.map(|s| s / samples as f64))
}

/// Van der Corput radical inverse of `i` in `base`.
pub(crate) fn radical_inverse(mut i: usize, base: usize) -> f64 {
    let inv = 1.0 / base as f64;
    let mut f = inv;
    let mut out = 0.0;
    while i > 0 {
        out += f * (i % base) as f64;
        i /= base;
        f *= inv;
    }
    out
}
