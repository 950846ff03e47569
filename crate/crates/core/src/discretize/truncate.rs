use crate::error::{invalid, Result};
use crate::geometry::vec2;
use crate::geometry::ConvexDomain;
use crate::measure::upper_tail;
use serde::{Deserialize, Serialize};

/// Tail tolerances above this are flagged as low accuracy.
pub const LOW_ACCURACY_TAIL: f64 = 1e-4;

/// A bounded stand-in for an unbounded domain. The cut faces are artificial
/// and carry the same natural (Neumann) condition as the true boundary.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Truncation {
    pub domain: ConvexDomain,
    pub radius: f64,
    pub artificial_boundary: bool,
    pub low_accuracy: bool,
    /// Gaussian measure of the discarded region.
    pub discarded_measure: f64,
}

/// Smallest multiple of 1/2 with `2Φ̄(R) < tail_tol`.
pub fn truncation_radius(tail_tol: f64) -> f64 {
    let mut r = 0.5;
    while 2.0 * upper_tail(r) >= tail_tol {
        r += 0.5;
    }
    r
}

/// Cuts an unbounded domain down to a box (or interval) whose complement has
/// Gaussian measure below `tail_tol`. Bounded domains pass through unchanged.
pub fn truncate_unbounded(domain: &ConvexDomain, tail_tol: f64) -> Result<Truncation> {
    if !(tail_tol > 0.0 && tail_tol < 1.0) {
        return Err(invalid(format!("tail tolerance must lie in (0, 1), got {tail_tol}")));
    }
    let low_accuracy = tail_tol > LOW_ACCURACY_TAIL;
    match domain {
        ConvexDomain::WholeSpace { dim: 1 } => {
            let r = truncation_radius(tail_tol);
            Ok(Truncation {
                domain: ConvexDomain::interval(-r, r),
                radius: r,
                artificial_boundary: true,
                low_accuracy,
                discarded_measure: 2.0 * upper_tail(r),
            })
        }
        ConvexDomain::WholeSpace { .. } => {
            let mut r = truncation_radius(tail_tol);
            let lost = |r: f64| 1.0 - (1.0 - 2.0 * upper_tail(r)).powi(2);
            while lost(r) >= tail_tol {
                r += 0.5;
            }
            Ok(Truncation {
                domain: ConvexDomain::square(r),
                radius: r,
                artificial_boundary: true,
                low_accuracy,
                discarded_measure: lost(r),
            })
        }
        ConvexDomain::Strip { a } => {
            let r = truncation_radius(tail_tol);
            let width = crate::measure::interval_measure(-a, *a);
            Ok(Truncation {
                domain: ConvexDomain::rect(-a, *a, -r, r),
                radius: r,
                artificial_boundary: true,
                low_accuracy,
                discarded_measure: width * 2.0 * upper_tail(r),
            })
        }
        ConvexDomain::HalfPlane { normal, offset } => {
            // depth L below the boundary line and half-width R along it
            let mut r = truncation_radius(0.5 * tail_tol);
            let mut depth = offset + r;
            let lost = |r: f64, depth: f64| upper_tail(depth - offset) + 2.0 * upper_tail(r);
            while lost(r, depth) >= tail_tol {
                r += 0.5;
                depth = offset + r;
            }
            let t = vec2::perp(*normal);
            let base = vec2::scale(*offset, *normal);
            let corner = |s: f64, u: f64| vec2::add(base, vec2::add(vec2::scale(s, *normal), vec2::scale(u, t)));
            let domain = ConvexDomain::polygon(vec![corner(-depth, -r), corner(0.0, -r), corner(0.0, r), corner(-depth, r)]);
            Ok(Truncation { domain, radius: r, artificial_boundary: true, low_accuracy, discarded_measure: lost(r, depth) })
        }
        bounded => Ok(Truncation {
            domain: bounded.clone(),
            radius: f64::INFINITY,
            artificial_boundary: false,
            low_accuracy: false,
            discarded_measure: 0.0,
        }),
    }
}
