//! Numerical checks of the reflection construction: Jacobian and weight
//! surveys over the inner collar, the change of variables between the two
//! collars, and the measure identity behind the conjugation.

use super::field::Extension;
use crate::error::{invalid, Error, Result};
use crate::geometry::vec2::{self, Point};
use crate::geometry::{gaussian_ratio, reflect, ring_width, star_shaped_integral, translate_to_contain_origin, ConvexDomain, Feature};
use crate::hermite::gauss_legendre_rule;
use crate::measure::density_2d;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::f64::consts::TAU;

/// Uniform samples of the inner collar `{x ∈ Ω : d(x) < r̃}`, excluding
/// points whose projection is a polygon vertex.
pub fn sample_collar(domain: &ConvexDomain, n: usize, seed: u64) -> Result<Vec<Point>> {
    let r_tilde = ring_width(domain)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (lo, hi) = sampling_window(domain, r_tilde)?;
    let mut out = Vec::with_capacity(n);
    let mut attempts = 0usize;
    while out.len() < n {
        attempts += 1;
        if attempts > 1000 * n.max(1) {
            return Err(invalid("collar sampling did not terminate"));
        }
        let x = [rng.random_range(lo[0]..hi[0]), if domain.dimension() == 1 { 0.0 } else { rng.random_range(lo[1]..hi[1]) }];
        let Ok(bp) = domain.project(x) else { continue };
        if bp.inside && bp.d > 0.0 && bp.d < r_tilde && !matches!(bp.feature, Feature::Vertex { .. }) {
            out.push(x);
        }
    }
    Ok(out)
}

fn sampling_window(domain: &ConvexDomain, r_tilde: f64) -> Result<(Point, Point)> {
    Ok(match domain {
        ConvexDomain::Interval { a, b } => ([*a, 0.0], [*b, 0.0]),
        ConvexDomain::Strip { a } => ([-a, -4.0], [*a, 4.0]),
        ConvexDomain::Disk { center, radius } => (vec2::sub(*center, [*radius; 2]), vec2::add(*center, [*radius; 2])),
        ConvexDomain::SmoothOval { center, semi_axes } => (vec2::sub(*center, *semi_axes), vec2::add(*center, *semi_axes)),
        ConvexDomain::Box { min, max } => (*min, *max),
        ConvexDomain::ConvexPolygon { vertices } => {
            let lo = vertices.iter().fold([f64::INFINITY; 2], |m, v| [m[0].min(v[0]), m[1].min(v[1])]);
            let hi = vertices.iter().fold([f64::NEG_INFINITY; 2], |m, v| [m[0].max(v[0]), m[1].max(v[1])]);
            (lo, hi)
        }
        ConvexDomain::HalfPlane { .. } | ConvexDomain::WholeSpace { .. } => {
            let _ = r_tilde;
            return Err(Error::NotApplicable("no bounded collar to sample".into()));
        }
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JacobianSurvey {
    pub samples: usize,
    /// Largest `|J_analytic − J_fd|`.
    pub max_abs_diff: f64,
    pub min_jacobian: f64,
    pub max_jacobian: f64,
}

impl JacobianSurvey {
    /// Whether every analytic value lies in `[1, 3]` (up to `tol`).
    pub fn within_bounds(&self, tol: f64) -> bool {
        self.min_jacobian >= 1.0 - tol && self.max_jacobian <= 3.0 + tol
    }
}

/// Analytic against finite-difference Jacobians of the reflection over
/// random collar points.
pub fn jacobian_survey(domain: &ConvexDomain, n: usize, seed: u64) -> Result<JacobianSurvey> {
    let pts = sample_collar(domain, n, seed)?;
    let mut s = JacobianSurvey { samples: 0, max_abs_diff: 0.0, min_jacobian: f64::INFINITY, max_jacobian: f64::NEG_INFINITY };
    for x in pts {
        let r = reflect(domain, x)?;
        s.samples += 1;
        s.max_abs_diff = s.max_abs_diff.max((r.jac_analytic - r.jac_fd).abs());
        s.min_jacobian = s.min_jacobian.min(r.jac_analytic);
        s.max_jacobian = s.max_jacobian.max(r.jac_analytic);
    }
    Ok(s)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExpFactorSurvey {
    pub samples: usize,
    pub max_factor: f64,
    pub min_factor: f64,
}

/// `exp(−|Φ|²/2 + |x|²/2)` over random collar points of an origin-containing domain.
pub fn exp_factor_survey(domain: &ConvexDomain, n: usize, seed: u64) -> Result<ExpFactorSurvey> {
    if !domain.contains_origin() {
        return Err(Error::NotApplicable("domain does not contain the origin".into()));
    }
    let pts = sample_collar(domain, n, seed)?;
    let mut s = ExpFactorSurvey { samples: 0, max_factor: f64::NEG_INFINITY, min_factor: f64::INFINITY };
    for x in pts {
        let r = reflect(domain, x)?;
        let f = gaussian_ratio(x, r.phi);
        s.samples += 1;
        s.max_factor = s.max_factor.max(f);
        s.min_factor = s.min_factor.min(f);
    }
    Ok(s)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RingMassCheck {
    /// `∫_{outer collar} ũ² dγ`, evaluated through the extension.
    pub direct: f64,
    /// `∫_{inner collar} θ(Φ)² u² exp(−|Φ|²/2 + |x|²/2) |J_Φ| dγ`.
    pub pulled_back: f64,
    pub relative_difference: f64,
}

/// Exterior collar mass of the extension against its pull-back through Φ,
/// for a disk containing the origin. Polar Gauss–Legendre in radius and the
/// periodic trapezoid rule in angle on both sides.
pub fn ring_mass_check(domain: &ConvexDomain, u: &dyn Fn(Point) -> f64, n_radial: usize, n_angular: usize) -> Result<RingMassCheck> {
    let ConvexDomain::Disk { center, radius } = *domain else {
        return Err(Error::NotApplicable("collar mass check is implemented for disks".into()));
    };
    let ext = Extension::new(domain)?;
    let r_tilde = ext.cutoff().r_tilde;
    let rule = gauss_legendre_rule(n_radial)?;
    let polar = |r0: f64, r1: f64, g: &dyn Fn(Point) -> Result<f64>| -> Result<f64> {
        let q = rule.mapped(r0, r1);
        let mut total = 0.0;
        for j in 0..n_angular {
            let t = TAU * (j as f64 + 0.5) / n_angular as f64;
            let dir = [t.cos(), t.sin()];
            for (&r, &w) in q.nodes.iter().zip(&q.weights) {
                total += w * r * g(vec2::add(center, vec2::scale(r, dir)))?;
            }
        }
        Ok(total * TAU / n_angular as f64)
    };
    let direct = polar(radius, radius + r_tilde, &|x| {
        let (v, _) = ext.evaluate(x, u)?;
        Ok(v * v * density_2d(x[0], x[1]))
    })?;
    let cutoff = ext.cutoff();
    let pulled_back = polar(radius - r_tilde, radius, &|x| {
        let r = reflect(domain, x)?;
        let theta = cutoff.at_distance(r.d);
        Ok(theta * theta * u(x).powi(2) * gaussian_ratio(x, r.phi) * r.jac_analytic * density_2d(x[0], x[1]))
    })?;
    let relative_difference = (direct - pulled_back).abs() / direct.abs().max(pulled_back.abs()).max(f64::MIN_POSITIVE);
    Ok(RingMassCheck { direct, pulled_back, relative_difference })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConjugationIdentity {
    /// `∫_Ω u² dγ`.
    pub original: f64,
    /// `∫_{T(Ω)} v² dγ` with `v(y) = u(y + δe) exp(−δ e·y/2 − δ²/4)`.
    pub translated: f64,
    pub delta: f64,
}

/// Both sides of the measure identity behind the conjugation, each by its
/// own polar quadrature.
pub fn conjugation_identity(domain: &ConvexDomain, u: &dyn Fn(Point) -> f64) -> Result<ConjugationIdentity> {
    let t = translate_to_contain_origin(domain)?;
    let (delta, e) = (t.delta, t.direction);
    let original = star_shaped_integral(domain, 64, 256, |x| u(x).powi(2) * density_2d(x[0], x[1]));
    let v = |y: Point| u(vec2::add(y, vec2::scale(delta, e))) * (-0.5 * delta * vec2::dot(e, y) - 0.25 * delta * delta).exp();
    let translated = star_shaped_integral(&t.domain, 48, 200, |y| v(y).powi(2) * density_2d(y[0], y[1]));
    Ok(ConjugationIdentity { original, translated, delta })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hermite::hermite_eval;

    #[test]
    fn disk_collar_mass_matches_pullback() {
        let disk = ConvexDomain::disk([0.0, 0.0], 1.0);
        let funcs: [&dyn Fn(Point) -> f64; 3] = [&|_| 1.0, &|x| x[0], &|x| hermite_eval(2, x[0])];
        for u in funcs {
            let c = ring_mass_check(&disk, u, 40, 200).unwrap();
            assert!(c.relative_difference < 1e-8, "{c:?}");
        }
    }

    #[test]
    fn conjugation_identity_on_shifted_disk() {
        let c = conjugation_identity(&ConvexDomain::disk([3.0, 0.0], 1.0), &|_| 1.0).unwrap();
        assert_eq!(c.delta, 3.0);
        assert!((c.original - c.translated).abs() < 1e-10, "{c:?}");
    }

    #[test]
    fn surveys() {
        let s = jacobian_survey(&ConvexDomain::disk([0.0, 0.0], 2.0), 200, 1).unwrap();
        assert!(s.max_abs_diff < 1e-6 && s.within_bounds(0.0));
        let e = exp_factor_survey(&ConvexDomain::regular_polygon(5, 1.0), 300, 2).unwrap();
        assert!(e.max_factor <= 1.0 + 1e-12 && e.samples == 300);
        assert!(exp_factor_survey(&ConvexDomain::disk([3.0, 0.0], 1.0), 10, 0).is_err());
    }
}
