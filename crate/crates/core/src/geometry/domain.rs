use super::vec2::{self, Point};
use crate::error::{invalid, Error, Result};
use serde::{Deserialize, Serialize};
use std::f64::consts::{PI, TAU};

/// A convex domain in one or two dimensions.
///
/// One-dimensional domains take points as `[x, _]`; the second coordinate is
/// ignored.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ConvexDomain {
    /// `(a, b)` on the real line.
    Interval { a: f64, b: f64 },
    /// `{x : normal · x < offset}` with a unit outward normal.
    HalfPlane { normal: Point, offset: f64 },
    /// `{x : −a < x₁ < a}`.
    Strip { a: f64 },
    /// Axis-aligned rectangle.
    Box { min: Point, max: Point },
    Disk { center: Point, radius: f64 },
    /// Axis-aligned ellipse `center + (a cos t, b sin t)`.
    SmoothOval { center: Point, semi_axes: [f64; 2] },
    /// Vertices in counterclockwise order.
    ConvexPolygon { vertices: Vec<Point> },
    /// ℝ or ℝ².
    WholeSpace { dim: usize },
}

/// Which part of the boundary a projection landed on.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Feature {
    Smooth,
    /// Interior of polygon edge `edge`.
    Edge { edge: usize },
    Vertex { vertex: usize },
}

/// Distance, gradient of the distance and projection onto `∂Ω`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundaryProjection {
    pub d: f64,
    /// Unit gradient of the unsigned distance, `(x − p) / d`. Points into Ω
    /// for interior `x`; for `x` on `∂Ω` it is the inward normal.
    pub grad: Point,
    pub p: Point,
    pub inside: bool,
    /// Boundary curvature at `p` (zero on flat pieces).
    pub curvature: f64,
    pub feature: Feature,
}

const TIE_TOL: f64 = 1e-12;

impl ConvexDomain {
    pub fn interval(a: f64, b: f64) -> Self {
        ConvexDomain::Interval { a, b }
    }

    pub fn strip(a: f64) -> Self {
        ConvexDomain::Strip { a }
    }

    pub fn disk(center: Point, radius: f64) -> Self {
        ConvexDomain::Disk { center, radius }
    }

    pub fn square(a: f64) -> Self {
        ConvexDomain::Box { min: [-a, -a], max: [a, a] }
    }

    pub fn rect(x0: f64, x1: f64, y0: f64, y1: f64) -> Self {
        ConvexDomain::Box { min: [x0, y0], max: [x1, y1] }
    }

    pub fn ellipse(center: Point, a: f64, b: f64) -> Self {
        ConvexDomain::SmoothOval { center, semi_axes: [a, b] }
    }

    pub fn polygon(vertices: Vec<Point>) -> Self {
        ConvexDomain::ConvexPolygon { vertices }
    }

    pub fn regular_polygon(n: usize, radius: f64) -> Self {
        let vertices = (0..n)
            .map(|k| {
                let t = PI / 2.0 + TAU * k as f64 / n as f64;
                [radius * t.cos(), radius * t.sin()]
            })
            .collect();
        ConvexDomain::ConvexPolygon { vertices }
    }

    pub fn dimension(&self) -> usize {
        match self {
            ConvexDomain::Interval { .. } => 1,
            ConvexDomain::WholeSpace { dim } => *dim,
            _ => 2,
        }
    }

    pub fn is_bounded(&self) -> bool {
        !matches!(
            self,
            ConvexDomain::HalfPlane { .. } | ConvexDomain::Strip { .. } | ConvexDomain::WholeSpace { .. }
        )
    }

    /// Checks parameters and convexity.
    pub fn validate(&self) -> Result<()> {
        let finite = |v: f64| v.is_finite();
        match self {
            ConvexDomain::Interval { a, b } if !(finite(*a) && finite(*b) && a < b) => {
                Err(invalid(format!("interval needs a < b, got ({a}, {b})")))
            }
            ConvexDomain::HalfPlane { normal, offset } => {
                if (vec2::norm(*normal) - 1.0).abs() > 1e-12 || !finite(*offset) {
                    Err(invalid("half-plane normal must be a unit vector"))
                } else {
                    Ok(())
                }
            }
            ConvexDomain::Strip { a } if !(finite(*a) && *a > 0.0) => Err(invalid("strip half-width must be positive")),
            ConvexDomain::Box { min, max } if !(min[0] < max[0] && min[1] < max[1]) => {
                Err(invalid("box needs min < max componentwise"))
            }
            ConvexDomain::Disk { radius, center } if !(*radius > 0.0 && finite(center[0]) && finite(center[1])) => {
                Err(invalid("disk radius must be positive"))
            }
            ConvexDomain::SmoothOval { semi_axes, .. } if !(semi_axes[0] > 0.0 && semi_axes[1] > 0.0) => {
                Err(invalid("oval semi-axes must be positive"))
            }
            ConvexDomain::ConvexPolygon { vertices } => check_convex_ccw(vertices),
            ConvexDomain::WholeSpace { dim } if !(1..=2).contains(dim) => Err(invalid("only ℝ¹ and ℝ² are supported")),
            _ => Ok(()),
        }
    }

    /// Closed membership test.
    pub fn contains(&self, x: Point) -> bool {
        match self {
            ConvexDomain::Interval { a, b } => *a <= x[0] && x[0] <= *b,
            ConvexDomain::HalfPlane { normal, offset } => vec2::dot(*normal, x) <= *offset,
            ConvexDomain::Strip { a } => x[0].abs() <= *a,
            ConvexDomain::Box { min, max } => min[0] <= x[0] && x[0] <= max[0] && min[1] <= x[1] && x[1] <= max[1],
            ConvexDomain::Disk { center, radius } => vec2::dist(x, *center) <= *radius,
            ConvexDomain::SmoothOval { center, semi_axes } => {
                let u = (x[0] - center[0]) / semi_axes[0];
                let v = (x[1] - center[1]) / semi_axes[1];
                u * u + v * v <= 1.0
            }
            ConvexDomain::ConvexPolygon { vertices } => {
                let n = vertices.len();
                (0..n).all(|i| vec2::cross(vec2::sub(vertices[(i + 1) % n], vertices[i]), vec2::sub(x, vertices[i])) >= 0.0)
            }
            ConvexDomain::WholeSpace { .. } => true,
        }
    }

    /// Strict interior membership.
    pub fn contains_strictly(&self, x: Point) -> bool {
        self.contains(x) && self.distance(x) > 0.0
    }

    pub fn contains_origin(&self) -> bool {
        self.contains_strictly([0.0, 0.0])
    }

    /// Radius of the uniform interior sphere condition, when available.
    pub fn interior_sphere_radius(&self) -> Option<f64> {
        match self {
            ConvexDomain::Interval { a, b } => Some(0.5 * (b - a)),
            ConvexDomain::Strip { a } => Some(*a),
            ConvexDomain::Disk { radius, .. } => Some(*radius),
            ConvexDomain::SmoothOval { semi_axes: [a, b], .. } => {
                let (lo, hi) = if a < b { (*a, *b) } else { (*b, *a) };
                Some(lo * lo / hi)
            }
            ConvexDomain::Box { min, max } => Some(0.5 * (max[0] - min[0]).min(max[1] - min[1])),
            ConvexDomain::ConvexPolygon { .. } => Some(self.inradius()),
            ConvexDomain::HalfPlane { .. } | ConvexDomain::WholeSpace { .. } => None,
        }
    }

    /// Radius of a disk contained in Ω (exact for disks, boxes, intervals and
    /// regular polygons; a lower bound otherwise).
    pub fn inradius(&self) -> f64 {
        match self {
            ConvexDomain::Interval { a, b } => 0.5 * (b - a),
            ConvexDomain::Strip { a } => *a,
            ConvexDomain::Disk { radius, .. } => *radius,
            ConvexDomain::SmoothOval { semi_axes, .. } => semi_axes[0].min(semi_axes[1]),
            ConvexDomain::Box { min, max } => 0.5 * (max[0] - min[0]).min(max[1] - min[1]),
            ConvexDomain::ConvexPolygon { vertices } => {
                let c = centroid(vertices);
                let n = vertices.len();
                (0..n)
                    .map(|i| segment_closest(c, vertices[i], vertices[(i + 1) % n]).1)
                    .fold(f64::INFINITY, f64::min)
            }
            ConvexDomain::HalfPlane { .. } | ConvexDomain::WholeSpace { .. } => f64::INFINITY,
        }
    }

    pub fn diameter(&self) -> Option<f64> {
        match self {
            ConvexDomain::Interval { a, b } => Some(b - a),
            ConvexDomain::Disk { radius, .. } => Some(2.0 * radius),
            ConvexDomain::SmoothOval { semi_axes, .. } => Some(2.0 * semi_axes[0].max(semi_axes[1])),
            ConvexDomain::Box { min, max } => Some(vec2::dist(*min, *max)),
            ConvexDomain::ConvexPolygon { vertices } => {
                let mut best = 0.0f64;
                for (i, &p) in vertices.iter().enumerate() {
                    for &q in &vertices[i + 1..] {
                        best = best.max(vec2::dist(p, q));
                    }
                }
                Some(best)
            }
            _ => None,
        }
    }

    /// A point in the interior (center of the inscribed disk when known).
    pub fn center(&self) -> Point {
        match self {
            ConvexDomain::Interval { a, b } => [0.5 * (a + b), 0.0],
            ConvexDomain::Disk { center, .. } | ConvexDomain::SmoothOval { center, .. } => *center,
            ConvexDomain::Box { min, max } => [0.5 * (min[0] + max[0]), 0.5 * (min[1] + max[1])],
            ConvexDomain::ConvexPolygon { vertices } => centroid(vertices),
            ConvexDomain::HalfPlane { normal, offset } => vec2::scale(offset - 1.0, *normal),
            ConvexDomain::Strip { .. } | ConvexDomain::WholeSpace { .. } => [0.0, 0.0],
        }
    }

    /// Rigid translation by `shift`. Strips can only move along their axis.
    pub fn translated(&self, shift: Point) -> Result<ConvexDomain> {
        Ok(match self {
            ConvexDomain::Interval { a, b } => ConvexDomain::Interval { a: a + shift[0], b: b + shift[0] },
            ConvexDomain::HalfPlane { normal, offset } => {
                ConvexDomain::HalfPlane { normal: *normal, offset: offset + vec2::dot(*normal, shift) }
            }
            ConvexDomain::Strip { a } if shift[0] == 0.0 => ConvexDomain::Strip { a: *a },
            ConvexDomain::Strip { .. } => return Err(invalid("strips are centred; cannot shift across the axis")),
            ConvexDomain::Box { min, max } => ConvexDomain::Box { min: vec2::add(*min, shift), max: vec2::add(*max, shift) },
            ConvexDomain::Disk { center, radius } => ConvexDomain::Disk { center: vec2::add(*center, shift), radius: *radius },
            ConvexDomain::SmoothOval { center, semi_axes } => {
                ConvexDomain::SmoothOval { center: vec2::add(*center, shift), semi_axes: *semi_axes }
            }
            ConvexDomain::ConvexPolygon { vertices } => {
                ConvexDomain::ConvexPolygon { vertices: vertices.iter().map(|&v| vec2::add(v, shift)).collect() }
            }
            ConvexDomain::WholeSpace { dim } => ConvexDomain::WholeSpace { dim: *dim },
        })
    }

    /// Unsigned distance to the boundary (infinite for ℝᴺ).
    pub fn distance(&self, x: Point) -> f64 {
        match self.project(x) {
            Ok(bp) => bp.d,
            Err(_) => match self {
                // ties only occur on the medial axis, where any candidate gives the distance
                ConvexDomain::Interval { a, b } => (x[0] - a).abs().min((b - x[0]).abs()),
                ConvexDomain::Strip { a } => a - x[0].abs(),
                ConvexDomain::Disk { radius, center } => (radius - vec2::dist(x, *center)).abs(),
                ConvexDomain::ConvexPolygon { vertices } => polygon_candidates(vertices, x)[0].1,
                ConvexDomain::Box { .. } => polygon_candidates(&self.polygon_vertices().unwrap(), x)[0].1,
                ConvexDomain::SmoothOval { center, semi_axes } => oval_candidates(*center, *semi_axes, x)[0].1,
                ConvexDomain::WholeSpace { .. } => f64::INFINITY,
                ConvexDomain::HalfPlane { normal, offset } => (offset - vec2::dot(*normal, x)).abs(),
            },
        }
    }

    /// Distance, gradient and boundary projection of `x`.
    ///
    /// Fails with [`Error::DegenerateQuery`] when the nearest boundary point is
    /// not unique (medial axis of the domain).
    pub fn project(&self, x: Point) -> Result<BoundaryProjection> {
        let inside = self.contains(x);
        let degenerate = |reason: &str| Error::DegenerateQuery { x: x[0], y: x[1], reason: reason.into() };
        let finish = |p: Point, curvature: f64, feature: Feature, inward_normal: Point| {
            let diff = vec2::sub(x, p);
            let d = vec2::norm(diff);
            let grad = if d > 0.0 { vec2::scale(1.0 / d, diff) } else { inward_normal };
            BoundaryProjection { d, grad, p, inside, curvature, feature }
        };
        match self {
            ConvexDomain::WholeSpace { .. } => Err(Error::NotApplicable("ℝᴺ has no boundary".into())),
            ConvexDomain::Interval { a, b } => {
                let (da, db) = ((x[0] - a).abs(), (b - x[0]).abs());
                if inside && (da - db).abs() <= TIE_TOL * (b - a) {
                    return Err(degenerate("midpoint of the interval"));
                }
                let (p, n) = if da < db || x[0] < *a { (*a, 1.0) } else { (*b, -1.0) };
                Ok(finish([p, x[1]], 0.0, Feature::Smooth, [n, 0.0]))
            }
            ConvexDomain::HalfPlane { normal, offset } => {
                let s = offset - vec2::dot(*normal, x);
                let p = vec2::add(x, vec2::scale(s, *normal));
                Ok(finish(p, 0.0, Feature::Smooth, vec2::scale(-1.0, *normal)))
            }
            ConvexDomain::Strip { a } => {
                if inside && x[0].abs() <= TIE_TOL * a {
                    return Err(degenerate("midline of the strip"));
                }
                let side = x[0].signum();
                Ok(finish([side * a, x[1]], 0.0, Feature::Smooth, [-side, 0.0]))
            }
            ConvexDomain::Disk { center, radius } => {
                let r = vec2::dist(x, *center);
                if r <= TIE_TOL * radius {
                    return Err(degenerate("center of the disk"));
                }
                let u = vec2::scale(1.0 / r, vec2::sub(x, *center));
                let p = vec2::add(*center, vec2::scale(*radius, u));
                Ok(finish(p, 1.0 / radius, Feature::Smooth, vec2::scale(-1.0, u)))
            }
            ConvexDomain::SmoothOval { center, semi_axes } => {
                let cands = oval_candidates(*center, *semi_axes, x);
                let (t, d) = cands[0];
                if let Some(&(t2, d2)) = cands.get(1) {
                    let p1 = oval_point(*center, *semi_axes, t);
                    let p2 = oval_point(*center, *semi_axes, t2);
                    if (d2 - d).abs() <= 1e-10 * d.max(1.0) && vec2::dist(p1, p2) > 1e-8 {
                        return Err(degenerate("equidistant boundary points on the oval"));
                    }
                }
                let p = oval_point(*center, *semi_axes, t);
                let outward = oval_normal(*semi_axes, t);
                Ok(finish(p, oval_curvature(*semi_axes, t), Feature::Smooth, vec2::scale(-1.0, outward)))
            }
            ConvexDomain::Box { .. } | ConvexDomain::ConvexPolygon { .. } => {
                let verts = self.polygon_vertices().expect("polygonal domain");
                let cands = polygon_candidates(&verts, x);
                let (best, d, feature) = (cands[0].0, cands[0].1, cands[0].2);
                for &(q, d2, _) in &cands[1..] {
                    if (d2 - d).abs() <= TIE_TOL * d.max(1.0) && vec2::dist(q, best) > 1e-12 {
                        return Err(degenerate("equidistant polygon edges"));
                    }
                }
                let n = verts.len();
                let inward = match feature {
                    Feature::Edge { edge } => {
                        vec2::perp(vec2::normalize(vec2::sub(verts[(edge + 1) % n], verts[edge])))
                    }
                    Feature::Vertex { vertex } => {
                        let prev = vec2::normalize(vec2::sub(verts[vertex], verts[(vertex + n - 1) % n]));
                        let next = vec2::normalize(vec2::sub(verts[(vertex + 1) % n], verts[vertex]));
                        vec2::normalize(vec2::add(vec2::perp(prev), vec2::perp(next)))
                    }
                    Feature::Smooth => unreachable!(),
                };
                Ok(finish(best, 0.0, feature, inward))
            }
        }
    }

    /// Vertices of a box or polygon in counterclockwise order.
    pub fn polygon_vertices(&self) -> Option<Vec<Point>> {
        match self {
            ConvexDomain::Box { min, max } => {
                Some(vec![[min[0], min[1]], [max[0], min[1]], [max[0], max[1]], [min[0], max[1]]])
            }
            ConvexDomain::ConvexPolygon { vertices } => Some(vertices.clone()),
            _ => None,
        }
    }

    /// Boundary curvature at parameter samples, for domains with a smooth
    /// parametrized boundary.
    pub fn sample_boundary_curvature(&self, samples: usize) -> Vec<f64> {
        match self {
            ConvexDomain::Disk { radius, .. } => vec![1.0 / radius; samples],
            ConvexDomain::SmoothOval { semi_axes, .. } => {
                (0..samples).map(|k| oval_curvature(*semi_axes, TAU * k as f64 / samples as f64)).collect()
            }
            _ => vec![0.0; samples],
        }
    }
}

fn check_convex_ccw(vertices: &[Point]) -> Result<()> {
    let n = vertices.len();
    if n < 3 {
        return Err(invalid("polygon needs at least three vertices"));
    }
    for i in 0..n {
        let e1 = vec2::sub(vertices[(i + 1) % n], vertices[i]);
        let e2 = vec2::sub(vertices[(i + 2) % n], vertices[(i + 1) % n]);
        let c = vec2::cross(e1, e2);
        if !(c > 0.0) {
            return Err(invalid(format!("polygon is not strictly convex and counterclockwise at vertex {}", (i + 1) % n)));
        }
    }
    Ok(())
}

pub(crate) fn centroid(vertices: &[Point]) -> Point {
    let n = vertices.len();
    let (mut area, mut cx, mut cy) = (0.0, 0.0, 0.0);
    for i in 0..n {
        let (p, q) = (vertices[i], vertices[(i + 1) % n]);
        let c = vec2::cross(p, q);
        area += c;
        cx += (p[0] + q[0]) * c;
        cy += (p[1] + q[1]) * c;
    }
    [cx / (3.0 * area), cy / (3.0 * area)]
}

/// Closest point on segment `[a, b]`, its distance and the parameter in `[0, 1]`.
pub(crate) fn segment_closest(x: Point, a: Point, b: Point) -> (Point, f64, f64) {
    let e = vec2::sub(b, a);
    let t = (vec2::dot(vec2::sub(x, a), e) / vec2::norm2(e)).clamp(0.0, 1.0);
    let p = vec2::add(a, vec2::scale(t, e));
    (p, vec2::dist(x, p), t)
}

/// Closest point on every edge, sorted by distance.
fn polygon_candidates(vertices: &[Point], x: Point) -> Vec<(Point, f64, Feature)> {
    let n = vertices.len();
    let mut out: Vec<(Point, f64, Feature)> = (0..n)
        .map(|i| {
            let (p, d, t) = segment_closest(x, vertices[i], vertices[(i + 1) % n]);
            let feature = if t <= 0.0 {
                Feature::Vertex { vertex: i }
            } else if t >= 1.0 {
                Feature::Vertex { vertex: (i + 1) % n }
            } else {
                Feature::Edge { edge: i }
            };
            (p, d, feature)
        })
        .collect();
    out.sort_by(|a, b| a.1.total_cmp(&b.1));
    out
}

pub(crate) fn oval_point(center: Point, [a, b]: [f64; 2], t: f64) -> Point {
    [center[0] + a * t.cos(), center[1] + b * t.sin()]
}

pub(crate) fn oval_normal([a, b]: [f64; 2], t: f64) -> Point {
    vec2::normalize([b * t.cos(), a * t.sin()])
}

pub(crate) fn oval_curvature([a, b]: [f64; 2], t: f64) -> f64 {
    let (s, c) = t.sin_cos();
    a * b / (a * a * s * s + b * b * c * c).powf(1.5)
}

/// Local minimizers of the distance from `x` to the ellipse, sorted by distance,
/// as `(parameter, distance)`.
fn oval_candidates(center: Point, axes: [f64; 2], x: Point) -> Vec<(f64, f64)> {
    const SAMPLES: usize = 256;
    let [a, b] = axes;
    let q = vec2::sub(x, center);
    let f = |t: f64| vec2::dist(oval_point([0.0, 0.0], axes, t), q);
    let vals: Vec<f64> = (0..SAMPLES).map(|k| f(TAU * k as f64 / SAMPLES as f64)).collect();
    let mut out = Vec::new();
    for k in 0..SAMPLES {
        let (prev, next) = (vals[(k + SAMPLES - 1) % SAMPLES], vals[(k + 1) % SAMPLES]);
        if vals[k] <= prev && vals[k] <= next {
            // Newton on g(t) = ½ d/dt |c(t) − q|², safeguarded to the sample bracket.
            let h = TAU / SAMPLES as f64;
            let (lo, hi) = (TAU * k as f64 / SAMPLES as f64 - h, TAU * k as f64 / SAMPLES as f64 + h);
            let mut t = TAU * k as f64 / SAMPLES as f64;
            for _ in 0..60 {
                let (s, c) = t.sin_cos();
                let g = (b * b - a * a) * s * c + a * q[0] * s - b * q[1] * c;
                let dg = (b * b - a * a) * (c * c - s * s) + a * q[0] * c + b * q[1] * s;
                let mut step = if dg > 0.0 { g / dg } else { 0.0 };
                if dg <= 0.0 || !(lo..=hi).contains(&(t - step)) {
                    step = if g > 0.0 { 0.25 * (t - lo) } else { -0.25 * (hi - t) };
                }
                t -= step;
                if step.abs() < 1e-15 {
                    break;
                }
            }
            out.push((t.rem_euclid(TAU), f(t)));
        }
    }
    out.sort_by(|a, b| a.1.total_cmp(&b.1));
    out.dedup_by(|p, q| {
        let dt = (p.0 - q.0).abs();
        dt.min(TAU - dt) < 1e-9
    });
    out
}
