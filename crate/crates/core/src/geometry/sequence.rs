//! Bounded invading sequences, origin-containing translates and Gaussian
//! measures of domains.

use super::domain::ConvexDomain;
use super::vec2::{self, Point};
use crate::error::{invalid, Error, Result};
use crate::hermite::gauss_legendre_rule;
use crate::measure;
use serde::{Deserialize, Serialize};
use std::f64::consts::TAU;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InvadingStep {
    pub domain: ConvexDomain,
    /// Set when the input was already bounded and is returned unchanged.
    pub warning: bool,
}

/// The `k`-th bounded truncation of an unbounded convex domain.
///
/// Strips become boxes `(−a, a) × (−k, k)`; half-planes become squares of
/// side `2k` resting on the boundary line; ℝᴺ becomes `(−k, k)ᴺ`.
pub fn invading_sequence(domain: &ConvexDomain, k: usize) -> Result<InvadingStep> {
    if k == 0 {
        return Err(invalid("invading index starts at 1"));
    }
    let kf = k as f64;
    let step = |domain| Ok(InvadingStep { domain, warning: false });
    match domain {
        ConvexDomain::Strip { a } => step(ConvexDomain::rect(-a, *a, -kf, kf)),
        ConvexDomain::WholeSpace { dim: 1 } => step(ConvexDomain::interval(-kf, kf)),
        ConvexDomain::WholeSpace { .. } => step(ConvexDomain::square(kf)),
        ConvexDomain::HalfPlane { normal, offset } => {
            let t = vec2::perp(*normal);
            let base = vec2::scale(*offset, *normal);
            let corner = |s: f64, u: f64| vec2::add(base, vec2::add(vec2::scale(s, *normal), vec2::scale(u, t)));
            // counterclockwise: outward normal n, tangent t = perp(n)
            step(ConvexDomain::polygon(vec![
                corner(-2.0 * kf, -kf),
                corner(0.0, -kf),
                corner(0.0, kf),
                corner(-2.0 * kf, kf),
            ]))
        }
        bounded => Ok(InvadingStep { domain: bounded.clone(), warning: true }),
    }
}

/// Result of moving a domain so that it contains the origin.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Translation {
    /// `T(Ω) = Ω − δ e`.
    pub domain: ConvexDomain,
    pub delta: f64,
    /// Unit vector `e` from the origin toward the nearest boundary point.
    pub direction: Point,
    /// `dist(0, ∂Ω)`.
    pub d0: f64,
}

/// Shifts a domain not containing the origin by `δ = d₀ + inradius` along the
/// direction of its nearest boundary point.
pub fn translate_to_contain_origin(domain: &ConvexDomain) -> Result<Translation> {
    if domain.contains_origin() {
        return Err(Error::NotApplicable("domain already contains the origin".into()));
    }
    if let ConvexDomain::Interval { a, b } = domain {
        let mid = 0.5 * (a + b);
        let d0 = a.abs().min(b.abs());
        let direction = [mid.signum(), 0.0];
        let delta = mid.abs();
        return Ok(Translation { domain: domain.translated([-mid, 0.0])?, delta, direction, d0 });
    }
    let bp = domain.project([0.0, 0.0])?;
    let d0 = bp.d;
    let direction = if d0 > 0.0 { vec2::normalize(bp.p) } else { bp.grad };
    let mut delta = d0 + domain.inradius().min(1e6);
    let mut shifted = domain.translated(vec2::scale(-delta, direction))?;
    if !shifted.contains_origin() {
        // fall back to moving the inscribed-disk center onto the origin
        let c = domain.center();
        delta = vec2::norm(c);
        let dir = vec2::normalize(c);
        shifted = domain.translated(vec2::scale(-delta, dir))?;
        return Ok(Translation { domain: shifted, delta, direction: dir, d0 });
    }
    Ok(Translation { domain: shifted, delta, direction, d0 })
}

/// `γ_N(Ω)`; closed form where available, polar Gauss–Legendre otherwise.
pub fn gaussian_measure(domain: &ConvexDomain) -> f64 {
    match domain {
        ConvexDomain::Interval { a, b } => measure::interval_measure(*a, *b),
        ConvexDomain::Strip { a } => measure::interval_measure(-a, *a),
        ConvexDomain::WholeSpace { .. } => 1.0,
        ConvexDomain::HalfPlane { offset, .. } => 1.0 - measure::upper_tail(*offset),
        ConvexDomain::Box { min, max } => measure::box_measure(min[0], max[0], min[1], max[1]),
        ConvexDomain::Disk { .. } | ConvexDomain::SmoothOval { .. } | ConvexDomain::ConvexPolygon { .. } => {
            star_shaped_integral(domain, 64, 256, |x| measure::density_2d(x[0], x[1]))
        }
    }
}

/// `γ_N(Ω ∖ Ω_k)` for the `k`-th invading truncation.
pub fn invading_complement_measure(domain: &ConvexDomain, k: usize) -> Result<f64> {
    let step = invading_sequence(domain, k)?;
    if step.warning {
        return Ok(0.0);
    }
    match (domain, &step.domain) {
        (ConvexDomain::Strip { a }, ConvexDomain::Box { .. }) => {
            Ok(measure::interval_measure(-a, *a) * 2.0 * measure::upper_tail(k as f64))
        }
        _ => Ok(gaussian_measure(domain) - gaussian_measure(&step.domain)),
    }
}

/// `∫_Ω f dx` over a bounded domain star-shaped about its center, in polar
/// coordinates with Gauss–Legendre in radius. Smooth boundaries use the
/// periodic trapezoid rule in angle; polygons use Gauss–Legendre in angle on
/// each edge's sector so that the corners do not spoil convergence.
pub fn star_shaped_integral(domain: &ConvexDomain, n_radial: usize, n_angular: usize, f: impl Fn(Point) -> f64) -> f64 {
    let c = domain.center();
    let rule = gauss_legendre_rule(n_radial).expect("Gauss-Legendre rule");
    let ray = |t: f64| {
        let dir = [t.cos(), t.sin()];
        let q = rule.mapped(0.0, ray_exit(domain, c, dir));
        q.integrate(|r| f(vec2::add(c, vec2::scale(r, dir))) * r)
    };
    if let Some(verts) = domain.polygon_vertices() {
        let n = verts.len();
        let per_edge = gauss_legendre_rule((n_angular / n).max(16)).expect("Gauss-Legendre rule");
        let mut total = 0.0;
        for i in 0..n {
            let (a, b) = (vec2::sub(verts[i], c), vec2::sub(verts[(i + 1) % n], c));
            let t0 = a[1].atan2(a[0]);
            let span = vec2::cross(a, b).atan2(vec2::dot(a, b));
            total += per_edge.mapped(t0, t0 + span).integrate(ray);
        }
        return total;
    }
    let mut total = 0.0;
    for j in 0..n_angular {
        total += ray(TAU * (j as f64 + 0.5) / n_angular as f64);
    }
    total * TAU / n_angular as f64
}

/// Distance from an interior point `c` to the boundary along direction `dir`.
pub(crate) fn ray_exit(domain: &ConvexDomain, c: Point, dir: Point) -> f64 {
    match domain {
        ConvexDomain::Disk { center, radius } => {
            let w = vec2::sub(c, *center);
            let b = vec2::dot(w, dir);
            -b + (b * b - vec2::norm2(w) + radius * radius).sqrt()
        }
        ConvexDomain::SmoothOval { center, semi_axes } => {
            let w = vec2::sub(c, *center);
            let (a, b) = (semi_axes[0], semi_axes[1]);
            let qa = (dir[0] / a).powi(2) + (dir[1] / b).powi(2);
            let qb = 2.0 * (w[0] * dir[0] / (a * a) + w[1] * dir[1] / (b * b));
            let qc = (w[0] / a).powi(2) + (w[1] / b).powi(2) - 1.0;
            (-qb + (qb * qb - 4.0 * qa * qc).sqrt()) / (2.0 * qa)
        }
        other => {
            let verts = other.polygon_vertices().expect("bounded polygonal domain");
            let n = verts.len();
            let mut best = f64::INFINITY;
            for i in 0..n {
                let (a, b) = (verts[i], verts[(i + 1) % n]);
                let e = vec2::sub(b, a);
                let denom = vec2::cross(dir, e);
                if denom.abs() < 1e-300 {
                    continue;
                }
                let w = vec2::sub(a, c);
                let s = vec2::cross(w, e) / denom;
                let u = vec2::cross(w, dir) / denom;
                if s > 0.0 && (-1e-12..=1.0 + 1e-12).contains(&u) {
                    best = best.min(s);
                }
            }
            best
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hermite::gaussian_integral;

    #[test]
    fn strip_truncations() {
        let s = ConvexDomain::strip(1.0);
        assert_eq!(invading_sequence(&s, 3).unwrap().domain, ConvexDomain::rect(-1.0, 1.0, -3.0, 3.0));
        for k in 1..=10 {
            let a = invading_sequence(&s, k).unwrap().domain;
            let b = invading_sequence(&s, k + 1).unwrap().domain;
            for v in a.polygon_vertices().unwrap() {
                assert!(b.contains(v));
            }
        }
        let bounded = invading_sequence(&ConvexDomain::disk([0.0, 0.0], 1.0), 2).unwrap();
        assert!(bounded.warning);
    }

    #[test]
    fn half_plane_truncations_are_nested_convex_subsets() {
        let n = vec2::normalize([1.0, 1.0]);
        let hp = ConvexDomain::HalfPlane { normal: n, offset: 0.5 };
        for k in 1..5 {
            let a = invading_sequence(&hp, k).unwrap().domain;
            a.validate().unwrap();
            let b = invading_sequence(&hp, k + 1).unwrap().domain;
            for v in a.polygon_vertices().unwrap() {
                assert!(hp.contains(v) || hp.distance(v) < 1e-12);
                assert!(b.contains(v) || b.distance(v) < 1e-12);
            }
        }
    }

    #[test]
    fn strip_tail_measure_matches_quadrature() {
        let tail = invading_complement_measure(&ConvexDomain::strip(1.0), 4).unwrap();
        // oracle: 1D quadratures of the product measure
        let g1 = gaussian_integral(-1.0, 1.0, 20, |_| 1.0);
        let upper = gaussian_integral(4.0, 14.0, 200, |_| 1.0);
        assert!((tail - 2.0 * upper * g1).abs() < 1e-14, "{tail}");
    }

    #[test]
    fn translations() {
        let t = translate_to_contain_origin(&ConvexDomain::disk([5.0, 0.0], 1.0)).unwrap();
        assert_eq!(t.delta, 5.0);
        assert_eq!(t.direction, [1.0, 0.0]);
        assert!((t.d0 - 4.0).abs() < 1e-15);
        assert_eq!(t.domain, ConvexDomain::disk([0.0, 0.0], 1.0));
        let i = translate_to_contain_origin(&ConvexDomain::interval(2.0, 4.0)).unwrap();
        assert_eq!(i.domain, ConvexDomain::interval(-1.0, 1.0));
        assert_eq!(i.delta, 3.0);
        assert!(translate_to_contain_origin(&ConvexDomain::disk([0.0, 0.0], 1.0)).is_err());
        let b = translate_to_contain_origin(&ConvexDomain::rect(2.0, 3.0, 1.0, 4.0)).unwrap();
        assert!(b.domain.contains_origin() && b.delta > b.d0);
    }

    #[test]
    fn disk_measure_matches_closed_form() {
        // γ₂(B_R) = 1 − e^{−R²/2} for a centred disk
        let g = gaussian_measure(&ConvexDomain::disk([0.0, 0.0], 1.3));
        assert!((g - (1.0 - (-0.5f64 * 1.69).exp())).abs() < 1e-13);
        let sq = gaussian_measure(&ConvexDomain::square(1.0));
        let poly = gaussian_measure(&ConvexDomain::polygon(ConvexDomain::square(1.0).polygon_vertices().unwrap()));
        assert!((sq - poly).abs() < 1e-6, "{sq} {poly}");
    }
}
