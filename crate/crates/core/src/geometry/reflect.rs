//! Normal reflection `Φ(x) = x − 2 d(x) Dd(x)` across the boundary of a convex
//! domain, its Jacobian and the Gaussian weight ratio it induces.

use super::domain::{ConvexDomain, Feature};
use super::vec2::{self, Point};
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// Step used for the finite-difference Jacobian of `Φ`.
pub const JACOBIAN_FD_STEP: f64 = 1e-5;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReflectionData {
    pub x: Point,
    pub d: f64,
    pub grad_d: Point,
    pub p: Point,
    pub phi: Point,
    /// Principal curvatures at `p` (one in 2D, none in 1D).
    pub curvatures: Vec<f64>,
    pub jac_analytic: f64,
    pub jac_fd: f64,
}

/// Width `r̃ = r̄ / 2` of the reflection ring.
pub fn ring_width(domain: &ConvexDomain) -> Result<f64> {
    domain
        .interior_sphere_radius()
        .map(|r| 0.5 * r)
        .ok_or_else(|| Error::NotApplicable("interior sphere radius unavailable".into()))
}

/// `|J_Φ| = Π (1 + 2dκᵢ / (1 − dκᵢ))`.
pub fn jacobian_product(d: f64, curvatures: &[f64]) -> f64 {
    curvatures.iter().map(|&k| 1.0 + 2.0 * d * k / (1.0 - d * k)).product()
}

/// `Φ(x) = 2 p(x) − x`; also valid for exterior points, where it is the inverse map.
pub fn reflected_point(domain: &ConvexDomain, x: Point) -> Result<Point> {
    let bp = domain.project(x)?;
    Ok(vec2::sub(vec2::scale(2.0, bp.p), x))
}

/// Reflection data at an interior point within `r̃` of the boundary.
pub fn reflect(domain: &ConvexDomain, x: Point) -> Result<ReflectionData> {
    let r_tilde = ring_width(domain)?;
    let bp = domain.project(x)?;
    if !bp.inside {
        return Err(Error::OutsideValidity(format!("({}, {}) is not in the domain", x[0], x[1])));
    }
    if bp.d >= r_tilde {
        return Err(Error::OutsideValidity(format!("d = {} is not below r̄/2 = {r_tilde}", bp.d)));
    }
    if let Feature::Vertex { vertex } = bp.feature {
        return Err(Error::DegenerateQuery {
            x: x[0],
            y: x[1],
            reason: format!("projection onto polygon vertex {vertex}"),
        });
    }
    let phi = vec2::sub(vec2::scale(2.0, bp.p), x);
    let curvatures = if domain.dimension() == 1 { vec![] } else { vec![bp.curvature] };
    let jac_analytic = jacobian_product(bp.d, &curvatures);
    let jac_fd = if domain.dimension() == 1 {
        let h = JACOBIAN_FD_STEP;
        let f = |s: f64| reflected_point(domain, [s, 0.0]).map(|p| p[0]);
        ((f(x[0] + h)? - f(x[0] - h)?) / (2.0 * h)).abs()
    } else {
        fd_jacobian(domain, x)?
    };
    Ok(ReflectionData { x, d: bp.d, grad_d: bp.grad, p: bp.p, phi, curvatures, jac_analytic, jac_fd })
}

fn fd_jacobian(domain: &ConvexDomain, x: Point) -> Result<f64> {
    let h = JACOBIAN_FD_STEP;
    let col = |e: Point| -> Result<Point> {
        let plus = reflected_point(domain, vec2::add(x, vec2::scale(h, e)))?;
        let minus = reflected_point(domain, vec2::sub(x, vec2::scale(h, e)))?;
        Ok(vec2::scale(0.5 / h, vec2::sub(plus, minus)))
    };
    let (c0, c1) = (col([1.0, 0.0])?, col([0.0, 1.0])?);
    Ok(vec2::cross(c0, c1).abs())
}

/// `exp(−|Φ(x)|²/2 + |x|²/2)`, the ratio of Gaussian densities at `Φ(x)` and `x`.
/// Bounded by one when the domain contains the origin.
pub fn exp_factor(domain: &ConvexDomain, x: Point) -> Result<f64> {
    if !domain.contains_origin() {
        return Err(Error::NotApplicable("domain does not contain the origin; translate first".into()));
    }
    let data = reflect(domain, x)?;
    Ok(gaussian_ratio(x, data.phi))
}

#[inline]
pub fn gaussian_ratio(x: Point, phi: Point) -> f64 {
    (0.5 * (vec2::norm2(x) - vec2::norm2(phi))).exp()
}
