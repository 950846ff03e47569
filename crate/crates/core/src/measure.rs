//! The standard Gaussian measure and its one-dimensional tails.

use libm::erfc;
use std::f64::consts::{PI, SQRT_2};

/// Density of the standard Gaussian measure on ℝ^dim at a point with squared norm `r2`.
#[inline]
pub fn density(dim: usize, r2: f64) -> f64 {
    (-0.5 * r2).exp() / (2.0 * PI).powf(dim as f64 / 2.0)
}

#[inline]
pub fn density_1d(t: f64) -> f64 {
    density(1, t * t)
}

#[inline]
pub fn density_2d(x: f64, y: f64) -> f64 {
    density(2, x * x + y * y)
}

/// Upper Gaussian tail `P(X > x)` for a standard normal `X`.
pub fn upper_tail(x: f64) -> f64 {
    0.5 * erfc(x / SQRT_2)
}

/// `γ₁((a, b))`.
pub fn interval_measure(a: f64, b: f64) -> f64 {
    if b <= a {
        return 0.0;
    }
    // Differences of tails on the side away from the mode stay accurate.
    if a >= 0.0 {
        upper_tail(a) - upper_tail(b)
    } else if b <= 0.0 {
        upper_tail(-b) - upper_tail(-a)
    } else {
        1.0 - upper_tail(-a) - upper_tail(b)
    }
}

/// `γ₂` of an axis-aligned box.
pub fn box_measure(x0: f64, x1: f64, y0: f64, y1: f64) -> f64 {
    interval_measure(x0, x1) * interval_measure(y0, y1)
}
