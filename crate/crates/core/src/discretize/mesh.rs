use crate::error::{invalid, Error, Result};
use crate::geometry::vec2::{self, Point};
use serde::{Deserialize, Serialize};
use std::collections::HashMap;

/// Simplicial mesh of an interval (`dimension == 1`, two vertices per cell)
/// or of a planar region (`dimension == 2`, counterclockwise triangles).
///
/// One-dimensional vertices store their coordinate in `[x, 0.0]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Mesh {
    dimension: usize,
    vertices: Vec<Point>,
    cells: Vec<Vec<usize>>,
    boundary_markers: Vec<bool>,
}

/// JSON representation: `{"dimension", "vertices", "cells", "boundary_markers"}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeshFile {
    pub dimension: usize,
    pub vertices: Vec<Vec<f64>>,
    pub cells: Vec<Vec<usize>>,
    pub boundary_markers: Vec<bool>,
}

impl Mesh {
    /// Builds a mesh and derives boundary markers from the facets that belong
    /// to exactly one cell.
    pub fn new(dimension: usize, vertices: Vec<Point>, cells: Vec<Vec<usize>>) -> Result<Self> {
        let markers = boundary_from_facets(dimension, vertices.len(), &cells);
        let mesh = Self { dimension, vertices, cells, boundary_markers: markers };
        mesh.validate()?;
        Ok(mesh)
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn cells(&self) -> &[Vec<usize>] {
        &self.cells
    }

    pub fn boundary_markers(&self) -> &[bool] {
        &self.boundary_markers
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn num_cells(&self) -> usize {
        self.cells.len()
    }

    pub fn boundary_vertices(&self) -> Vec<usize> {
        (0..self.vertices.len()).filter(|&i| self.boundary_markers[i]).collect()
    }

    /// Signed length (1D) or area (2D) of a cell.
    pub fn cell_measure(&self, c: usize) -> f64 {
        let cell = &self.cells[c];
        match self.dimension {
            1 => self.vertices[cell[1]][0] - self.vertices[cell[0]][0],
            _ => {
                let (a, b, d) = (self.vertices[cell[0]], self.vertices[cell[1]], self.vertices[cell[2]]);
                0.5 * vec2::cross(vec2::sub(b, a), vec2::sub(d, a))
            }
        }
    }

    /// Checks arity, index bounds, positive orientation, non-degeneracy and
    /// boundary-marker consistency.
    pub fn validate(&self) -> Result<()> {
        if !(1..=2).contains(&self.dimension) {
            return Err(invalid(format!("unsupported dimension {}", self.dimension)));
        }
        if self.boundary_markers.len() != self.vertices.len() {
            return Err(invalid("one boundary marker per vertex is required"));
        }
        let arity = self.dimension + 1;
        let scale = self.bounding_box_size().max(f64::MIN_POSITIVE);
        for (c, cell) in self.cells.iter().enumerate() {
            if cell.len() != arity {
                return Err(invalid(format!("cell {c} has {} vertices, expected {arity}", cell.len())));
            }
            if cell.iter().any(|&v| v >= self.vertices.len()) {
                return Err(invalid(format!("cell {c} references a missing vertex")));
            }
            let m = self.cell_measure(c);
            let tiny = 1e-14 * scale.powi(self.dimension as i32);
            if !(m > tiny) {
                return Err(Error::DegenerateCell { cell: c, measure: m });
            }
        }
        let facets = boundary_from_facets(self.dimension, self.vertices.len(), &self.cells);
        if facets != self.boundary_markers {
            return Err(invalid("boundary markers disagree with the cell adjacency"));
        }
        Ok(())
    }

    fn bounding_box_size(&self) -> f64 {
        let mut lo = [f64::INFINITY; 2];
        let mut hi = [f64::NEG_INFINITY; 2];
        for v in &self.vertices {
            for k in 0..2 {
                lo[k] = lo[k].min(v[k]);
                hi[k] = hi[k].max(v[k]);
            }
        }
        (hi[0] - lo[0]).max(hi[1] - lo[1])
    }

    pub fn cell_diameter(&self, c: usize) -> f64 {
        let cell = &self.cells[c];
        let mut d = 0.0f64;
        for i in 0..cell.len() {
            for j in i + 1..cell.len() {
                d = d.max(vec2::dist(self.vertices[cell[i]], self.vertices[cell[j]]));
            }
        }
        d
    }

    pub fn max_cell_diameter(&self) -> f64 {
        (0..self.cells.len()).map(|c| self.cell_diameter(c)).fold(0.0, f64::max)
    }

    /// Smallest interior angle over all triangles, in degrees.
    pub fn min_angle_degrees(&self) -> f64 {
        if self.dimension != 2 {
            return 180.0;
        }
        let mut worst = 180.0f64;
        for cell in &self.cells {
            for k in 0..3 {
                let p = self.vertices[cell[k]];
                let a = vec2::sub(self.vertices[cell[(k + 1) % 3]], p);
                let b = vec2::sub(self.vertices[cell[(k + 2) % 3]], p);
                let ang = vec2::cross(a, b).abs().atan2(vec2::dot(a, b)).to_degrees();
                worst = worst.min(ang);
            }
        }
        worst
    }

    pub fn total_measure(&self) -> f64 {
        (0..self.cells.len()).map(|c| self.cell_measure(c)).sum()
    }

    /// Nodal interpolant of `f`.
    pub fn interpolate(&self, f: impl Fn(Point) -> f64) -> Vec<f64> {
        self.vertices.iter().map(|&v| f(v)).collect()
    }

    /// Whether the vertex graph of the cells is connected.
    pub fn is_connected(&self) -> bool {
        let n = self.vertices.len();
        if n == 0 {
            return true;
        }
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut [usize], mut i: usize) -> usize {
            while p[i] != i {
                p[i] = p[p[i]];
                i = p[i];
            }
            i
        }
        for cell in &self.cells {
            for w in cell.windows(2) {
                let (a, b) = (find(&mut parent, w[0]), find(&mut parent, w[1]));
                parent[a] = b;
            }
        }
        let root = find(&mut parent, 0);
        (0..n).all(|i| find(&mut parent, i) == root)
    }

    pub fn to_file(&self) -> MeshFile {
        MeshFile {
            dimension: self.dimension,
            vertices: self.vertices.iter().map(|v| v[..self.dimension].to_vec()).collect(),
            cells: self.cells.clone(),
            boundary_markers: self.boundary_markers.clone(),
        }
    }

    pub fn from_file(file: MeshFile) -> Result<Self> {
        let vertices = file
            .vertices
            .iter()
            .map(|v| match (file.dimension, v.len()) {
                (1, 1) => Ok([v[0], 0.0]),
                (2, 2) => Ok([v[0], v[1]]),
                _ => Err(invalid(format!("vertex {v:?} does not match dimension {}", file.dimension))),
            })
            .collect::<Result<Vec<_>>>()?;
        let mesh = Self { dimension: file.dimension, vertices, cells: file.cells, boundary_markers: file.boundary_markers };
        mesh.validate()?;
        Ok(mesh)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_file()).expect("mesh serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: MeshFile = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        Self::from_file(file)
    }
}

fn boundary_from_facets(dimension: usize, nv: usize, cells: &[Vec<usize>]) -> Vec<bool> {
    let mut markers = vec![false; nv];
    match dimension {
        1 => {
            let mut count = vec![0u32; nv];
            for cell in cells {
                for &v in cell {
                    if v < nv {
                        count[v] += 1;
                    }
                }
            }
            for v in 0..nv {
                markers[v] = count[v] == 1;
            }
        }
        _ => {
            let mut edges: HashMap<(usize, usize), u32> = HashMap::new();
            for cell in cells {
                for k in 0..cell.len() {
                    let (a, b) = (cell[k], cell[(k + 1) % cell.len()]);
                    *edges.entry((a.min(b), a.max(b))).or_default() += 1;
                }
            }
            for ((a, b), n) in edges {
                if n == 1 && a < nv && b < nv {
                    markers[a] = true;
                    markers[b] = true;
                }
            }
        }
    }
    markers
}

/// Bucketed point location for evaluating P1 functions at arbitrary points.
pub struct PointLocator<'a> {
    mesh: &'a Mesh,
    origin: Point,
    cell_size: f64,
    dims: [usize; 2],
    buckets: Vec<Vec<usize>>,
}

impl<'a> PointLocator<'a> {
    pub fn new(mesh: &'a Mesh) -> Self {
        let mut lo = [f64::INFINITY; 2];
        let mut hi = [f64::NEG_INFINITY; 2];
        for v in mesh.vertices() {
            for k in 0..2 {
                lo[k] = lo[k].min(v[k]);
                hi[k] = hi[k].max(v[k]);
            }
        }
        let span = [(hi[0] - lo[0]).max(1e-12), (hi[1] - lo[1]).max(1e-12)];
        let target = (mesh.num_cells() as f64).sqrt().max(1.0);
        let cell_size = if mesh.dimension() == 1 { span[0] / target.powi(2) } else { (span[0] * span[1]).sqrt() / target };
        let dims = [
            ((span[0] / cell_size).ceil() as usize).clamp(1, 4096),
            if mesh.dimension() == 1 { 1 } else { ((span[1] / cell_size).ceil() as usize).clamp(1, 4096) },
        ];
        let mut buckets = vec![Vec::new(); dims[0] * dims[1]];
        let bucket_of = |p: Point| -> [usize; 2] {
            [
                (((p[0] - lo[0]) / cell_size).floor() as isize).clamp(0, dims[0] as isize - 1) as usize,
                (((p[1] - lo[1]) / cell_size).floor() as isize).clamp(0, dims[1] as isize - 1) as usize,
            ]
        };
        for (c, cell) in mesh.cells().iter().enumerate() {
            let mut blo = [usize::MAX; 2];
            let mut bhi = [0usize; 2];
            for &v in cell {
                let b = bucket_of(mesh.vertices()[v]);
                for k in 0..2 {
                    blo[k] = blo[k].min(b[k]);
                    bhi[k] = bhi[k].max(b[k]);
                }
            }
            for i in blo[0]..=bhi[0] {
                for j in blo[1]..=bhi[1] {
                    buckets[i * dims[1] + j].push(c);
                }
            }
        }
        Self { mesh, origin: lo, cell_size, dims, buckets }
    }

    /// Cell containing `x` and the barycentric coordinates of `x` in it.
    pub fn locate(&self, x: Point) -> Option<(usize, [f64; 3])> {
        let i = ((x[0] - self.origin[0]) / self.cell_size).floor();
        let j = if self.dims[1] == 1 { 0.0 } else { ((x[1] - self.origin[1]) / self.cell_size).floor() };
        let eps = 1e-10;
        let try_bucket = |bi: isize, bj: isize| -> Option<(usize, [f64; 3])> {
            if bi < 0 || bj < 0 || bi as usize >= self.dims[0] || bj as usize >= self.dims[1] {
                return None;
            }
            for &c in &self.buckets[bi as usize * self.dims[1] + bj as usize] {
                let bary = self.barycentric(c, x);
                if bary.iter().all(|&l| l >= -eps) {
                    return Some((c, bary));
                }
            }
            None
        };
        let (bi, bj) = (i as isize, j as isize);
        try_bucket(bi, bj).or_else(|| {
            // points exactly on bucket edges may belong to a neighbour's cells
            for di in -1..=1 {
                for dj in -1..=1 {
                    if let Some(hit) = try_bucket(bi + di, bj + dj) {
                        return Some(hit);
                    }
                }
            }
            None
        })
    }

    fn barycentric(&self, c: usize, x: Point) -> [f64; 3] {
        let cell = &self.mesh.cells()[c];
        let v = self.mesh.vertices();
        if self.mesh.dimension() == 1 {
            let (a, b) = (v[cell[0]][0], v[cell[1]][0]);
            let t = (x[0] - a) / (b - a);
            return [1.0 - t, t, 0.0];
        }
        let (a, b, d) = (v[cell[0]], v[cell[1]], v[cell[2]]);
        let area = vec2::cross(vec2::sub(b, a), vec2::sub(d, a));
        let l1 = vec2::cross(vec2::sub(x, a), vec2::sub(d, a)) / area;
        let l2 = vec2::cross(vec2::sub(b, a), vec2::sub(x, a)) / area;
        [1.0 - l1 - l2, l1, l2]
    }

    /// Value at `x` of the P1 function with nodal values `values`.
    pub fn evaluate(&self, values: &[f64], x: Point) -> Option<f64> {
        let (c, bary) = self.locate(x)?;
        let cell = &self.mesh.cells()[c];
        Some(cell.iter().zip(bary).map(|(&v, l)| values[v] * l).sum())
    }
}
