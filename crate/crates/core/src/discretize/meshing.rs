//! Mesh generators for intervals, boxes, disks, ellipses, convex polygons
//! and axis-aligned unions of rectangles.

use super::mesh::Mesh;
use crate::error::{invalid, Result};
use crate::geometry::vec2::{self, Point};
use crate::geometry::{ConvexDomain, NonconvexDumbbell};
use std::collections::HashMap;
use std::f64::consts::TAU;

/// Uniform mesh of `[a, b]` with `n ≥ 2` cells.
pub fn mesh_interval(a: f64, b: f64, n: usize) -> Result<Mesh> {
    if !(a.is_finite() && b.is_finite() && a < b) {
        return Err(invalid(format!("interval bounds must satisfy a < b, got ({a}, {b})")));
    }
    if n < 2 {
        return Err(invalid(format!("an interval mesh needs at least 2 cells, got {n}")));
    }
    let vertices = (0..=n).map(|i| [a + (b - a) * i as f64 / n as f64, 0.0]).collect();
    let cells = (0..n).map(|i| vec![i, i + 1]).collect();
    Mesh::new(1, vertices, cells)
}

/// Interval mesh with cell size at most `h`.
pub fn mesh_interval_h(a: f64, b: f64, h: f64) -> Result<Mesh> {
    if !(h > 0.0) {
        return Err(invalid("mesh size must be positive"));
    }
    mesh_interval(a, b, (((b - a) / h) - 1e-9).ceil().max(2.0) as usize)
}

/// Triangulates a bounded 2D convex domain with cells of diameter at most `2h`.
///
/// Boxes get a structured grid split along one diagonal, disks and ellipses
/// get concentric rings with `6j` nodes on ring `j`, and general polygons are
/// fanned from the centroid with each fan triangle refined uniformly.
pub fn mesh_convex_2d(domain: &ConvexDomain, h: f64) -> Result<Mesh> {
    domain.validate()?;
    if !domain.is_bounded() || domain.dimension() != 2 {
        return Err(invalid("mesh_convex_2d needs a bounded planar domain"));
    }
    if !(h > 0.0) {
        return Err(invalid("mesh size must be positive"));
    }
    let inradius = domain.inradius();
    if h > inradius * (1.0 + 1e-12) {
        return Err(invalid(format!("mesh size {h} exceeds the inradius {inradius}")));
    }
    match domain {
        ConvexDomain::Box { min, max } => {
            let nx = cells_for(max[0] - min[0], h);
            let ny = cells_for(max[1] - min[1], h);
            mesh_rect(min[0], max[0], min[1], max[1], nx, ny)
        }
        ConvexDomain::Disk { center, radius } => {
            let rings = cells_for(*radius, h);
            let map = |p: Point| vec2::add(*center, vec2::scale(*radius, p));
            ring_mesh(rings, map)
        }
        ConvexDomain::SmoothOval { center, semi_axes } => {
            let rings = cells_for(semi_axes[0].max(semi_axes[1]), h);
            let map = |p: Point| vec2::add(*center, [semi_axes[0] * p[0], semi_axes[1] * p[1]]);
            ring_mesh(rings, map)
        }
        ConvexDomain::ConvexPolygon { vertices } => fan_mesh(vertices, h),
        _ => Err(invalid("unsupported domain for mesh_convex_2d")),
    }
}

/// Meshes any bounded domain: intervals in 1D, [`mesh_convex_2d`] in 2D.
pub fn mesh_domain(domain: &ConvexDomain, h: f64) -> Result<Mesh> {
    match domain {
        ConvexDomain::Interval { a, b } => mesh_interval_h(*a, *b, h),
        other => mesh_convex_2d(other, h),
    }
}

fn cells_for(length: f64, h: f64) -> usize {
    ((length / h) - 1e-9).ceil().max(1.0) as usize
}

/// Structured `nx × ny` grid of the rectangle, each square split along the
/// diagonal from its lower-left to its upper-right corner.
pub fn mesh_rect(x0: f64, x1: f64, y0: f64, y1: f64, nx: usize, ny: usize) -> Result<Mesh> {
    if !(x0 < x1 && y0 < y1) || nx == 0 || ny == 0 {
        return Err(invalid("rectangle mesh needs ordered bounds and positive counts"));
    }
    let xs: Vec<f64> = (0..=nx).map(|i| x0 + (x1 - x0) * i as f64 / nx as f64).collect();
    let ys: Vec<f64> = (0..=ny).map(|j| y0 + (y1 - y0) * j as f64 / ny as f64).collect();
    mesh_tensor(&xs, &ys, |_| true)
}

/// Tensor grid on the given increasing coordinate lines, keeping the squares
/// whose centre satisfies `keep`. Unused vertices are dropped.
pub fn mesh_tensor(xs: &[f64], ys: &[f64], keep: impl Fn(Point) -> bool) -> Result<Mesh> {
    if xs.len() < 2 || ys.len() < 2 || xs.windows(2).any(|w| w[0] >= w[1]) || ys.windows(2).any(|w| w[0] >= w[1]) {
        return Err(invalid("tensor grid lines must be strictly increasing"));
    }
    let (nx, ny) = (xs.len(), ys.len());
    let mut index = vec![usize::MAX; nx * ny];
    let mut vertices = Vec::new();
    let mut cells = Vec::new();
    let mut id = |i: usize, j: usize, vertices: &mut Vec<Point>| {
        let k = j * nx + i;
        if index[k] == usize::MAX {
            index[k] = vertices.len();
            vertices.push([xs[i], ys[j]]);
        }
        index[k]
    };
    for j in 0..ny - 1 {
        for i in 0..nx - 1 {
            let c = [0.5 * (xs[i] + xs[i + 1]), 0.5 * (ys[j] + ys[j + 1])];
            if !keep(c) {
                continue;
            }
            let a = id(i, j, &mut vertices);
            let b = id(i + 1, j, &mut vertices);
            let d = id(i + 1, j + 1, &mut vertices);
            let e = id(i, j + 1, &mut vertices);
            cells.push(vec![a, b, d]);
            cells.push(vec![a, d, e]);
        }
    }
    Mesh::new(2, vertices, cells)
}

/// Unit-disk ring mesh pushed forward by `map` (an affine map with positive
/// determinant).
fn ring_mesh(rings: usize, map: impl Fn(Point) -> Point) -> Result<Mesh> {
    let mut vertices = vec![map([0.0, 0.0])];
    let mut ring_ids: Vec<Vec<usize>> = vec![vec![0]];
    for j in 1..=rings {
        let r = j as f64 / rings as f64;
        let count = 6 * j;
        let ids = (0..count)
            .map(|k| {
                let t = TAU * k as f64 / count as f64;
                vertices.push(map([r * t.cos(), r * t.sin()]));
                vertices.len() - 1
            })
            .collect();
        ring_ids.push(ids);
    }
    let mut cells = Vec::new();
    for j in 1..=rings {
        let (inner, outer) = (&ring_ids[j - 1], &ring_ids[j]);
        let (n1, n2) = (inner.len(), outer.len());
        if n1 == 1 {
            for k in 0..n2 {
                cells.push(vec![inner[0], outer[k], outer[(k + 1) % n2]]);
            }
            continue;
        }
        // zipper between consecutive rings in order of angle
        let (mut i1, mut i2) = (0usize, 0usize);
        while i1 < n1 || i2 < n2 {
            let next_inner = (i1 + 1) as f64 / n1 as f64;
            let next_outer = (i2 + 1) as f64 / n2 as f64;
            let advance_outer = i1 == n1 || (i2 < n2 && next_outer <= next_inner);
            if advance_outer {
                cells.push(vec![inner[i1 % n1], outer[i2 % n2], outer[(i2 + 1) % n2]]);
                i2 += 1;
            } else {
                cells.push(vec![inner[i1 % n1], outer[i2 % n2], inner[(i1 + 1) % n1]]);
                i1 += 1;
            }
        }
    }
    orient_ccw(&vertices, &mut cells);
    Mesh::new(2, vertices, cells)
}

fn orient_ccw(vertices: &[Point], cells: &mut [Vec<usize>]) {
    for cell in cells {
        let (a, b, c) = (vertices[cell[0]], vertices[cell[1]], vertices[cell[2]]);
        if vec2::cross(vec2::sub(b, a), vec2::sub(c, a)) < 0.0 {
            cell.swap(1, 2);
        }
    }
}

/// Centroid fan of a convex polygon, each fan triangle split into `m²`
/// similar copies so that all cells inherit the fan triangles' angles.
fn fan_mesh(polygon: &[Point], h: f64) -> Result<Mesh> {
    let n = polygon.len();
    let c = crate::geometry::centroid(polygon);
    let mut longest = 0.0f64;
    for i in 0..n {
        let (a, b) = (polygon[i], polygon[(i + 1) % n]);
        longest = longest.max(vec2::dist(a, b)).max(vec2::dist(c, a));
    }
    let m = cells_for(longest, h);
    let mut vertices: Vec<Point> = Vec::new();
    let mut lookup: HashMap<(i64, i64), usize> = HashMap::new();
    let scale = 1e10 / longest.max(1e-300);
    let mut id = |p: Point, vertices: &mut Vec<Point>| -> usize {
        let key = ((p[0] * scale).round() as i64, (p[1] * scale).round() as i64);
        *lookup.entry(key).or_insert_with(|| {
            vertices.push(p);
            vertices.len() - 1
        })
    };
    let mut cells = Vec::new();
    for e in 0..n {
        let (a, b) = (polygon[e], polygon[(e + 1) % n]);
        let (da, db) = (vec2::sub(a, c), vec2::sub(b, c));
        let point = |i: usize, j: usize| {
            let (s, t) = (i as f64 / m as f64, j as f64 / m as f64);
            vec2::add(vec2::add(c, vec2::scale(s, da)), vec2::scale(t, db))
        };
        let mut grid = vec![vec![0usize; m + 1]; m + 1];
        for i in 0..=m {
            for j in 0..=m - i {
                grid[i][j] = id(point(i, j), &mut vertices);
            }
        }
        for i in 0..m {
            for j in 0..m - i {
                cells.push(vec![grid[i][j], grid[i + 1][j], grid[i][j + 1]]);
                if i + j + 2 <= m {
                    cells.push(vec![grid[i + 1][j], grid[i + 1][j + 1], grid[i][j + 1]]);
                }
            }
        }
    }
    Mesh::new(2, vertices, cells)
}

/// Tensor-grid mesh of the dumbbell aligned with its outline breakpoints.
pub fn mesh_dumbbell(shape: &NonconvexDumbbell, h: f64) -> Result<Mesh> {
    if !(h > 0.0) {
        return Err(invalid("mesh size must be positive"));
    }
    let lines = |breaks: [f64; 4]| {
        let mut out = vec![breaks[0]];
        for w in breaks.windows(2) {
            let n = cells_for(w[1] - w[0], h);
            out.extend((1..=n).map(|i| w[0] + (w[1] - w[0]) * i as f64 / n as f64));
        }
        out
    };
    let xs = lines(shape.x_breaks());
    let ys = lines(shape.y_breaks());
    mesh_tensor(&xs, &ys, |p| shape.contains(p))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn interval_examples() {
        let m = mesh_interval(-1.0, 1.0, 4).unwrap();
        let xs: Vec<f64> = m.vertices().iter().map(|v| v[0]).collect();
        assert_eq!(xs, vec![-1.0, -0.5, 0.0, 0.5, 1.0]);
        assert_eq!(m.boundary_vertices(), vec![0, 4]);
        assert!(mesh_interval(0.0, 1.0, 1).is_err());
        assert!(mesh_interval(1.0, 0.0, 4).is_err());
        let fine = mesh_interval(-3.0, 3.0, 600).unwrap();
        assert_eq!(fine.num_vertices(), 601);
        assert!((fine.max_cell_diameter() - 0.01).abs() < 1e-12);
    }

    #[test]
    fn box_grid_counts() {
        let m = mesh_convex_2d(&ConvexDomain::square(1.0), 0.5).unwrap();
        assert_eq!(m.num_cells(), 32);
        assert_eq!(m.num_vertices(), 25);
        assert_eq!(m.boundary_vertices().len(), 16);
        assert!((m.total_measure() - 4.0).abs() < 1e-12);
    }

    #[test]
    fn disk_containment_and_area() {
        let m = mesh_convex_2d(&ConvexDomain::disk([0.0, 0.0], 1.0), 0.25).unwrap();
        assert!(m.vertices().iter().all(|v| vec2::norm(*v) <= 1.0 + 1e-12));
        assert!(m.max_cell_diameter() <= 0.5);
        assert!(m.is_connected());
        // inscribed polygonal area is below π and converges to it
        let fine = mesh_convex_2d(&ConvexDomain::disk([0.0, 0.0], 1.0), 0.05).unwrap();
        assert!(m.total_measure() < fine.total_measure() && fine.total_measure() < std::f64::consts::PI);
        assert!(std::f64::consts::PI - fine.total_measure() < 0.01);
        assert!(fine.min_angle_degrees() > 20.0);
    }

    #[test]
    fn ellipse_mesh_is_valid() {
        let m = mesh_convex_2d(&ConvexDomain::ellipse([0.5, 0.0], 2.0, 1.0), 0.2).unwrap();
        for v in m.vertices() {
            let q = ((v[0] - 0.5) / 2.0).powi(2) + v[1].powi(2);
            assert!(q <= 1.0 + 1e-12);
        }
        assert!(m.max_cell_diameter() <= 0.4);
    }

    #[test]
    fn pentagon_quality() {
        let pent = ConvexDomain::regular_polygon(5, 1.0);
        let m = mesh_convex_2d(&pent, 0.1).unwrap();
        assert!(m.min_angle_degrees() >= 15.0, "{}", m.min_angle_degrees());
        assert!(m.max_cell_diameter() <= 0.2);
        let verts = pent.polygon_vertices().unwrap();
        let area: f64 = (0..5).map(|i| 0.5 * vec2::cross(verts[i], verts[(i + 1) % 5])).sum();
        assert!((m.total_measure() - area).abs() < 1e-12);
        assert!(m.is_connected());
    }

    #[test]
    fn refusal_when_h_exceeds_inradius() {
        assert!(mesh_convex_2d(&ConvexDomain::square(0.2), 0.5).is_err());
        assert!(mesh_convex_2d(&ConvexDomain::strip(1.0), 0.1).is_err());
    }

    #[test]
    fn dumbbell_mesh_covers_the_shape() {
        let shape = NonconvexDumbbell::new(2.0, 0.2, 2.0).unwrap();
        let m = mesh_dumbbell(&shape, 0.1).unwrap();
        assert!((m.total_measure() - shape.area()).abs() < 1e-12);
        assert!(m.is_connected());
    }
}
