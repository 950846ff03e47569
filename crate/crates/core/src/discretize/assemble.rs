use super::mesh::Mesh;
use crate::error::{Error, Result};
use crate::geometry::vec2;
use crate::measure::density;
use crate::sparse::CsrMatrix;
use rayon::prelude::*;

/// Gaussian-weighted P1 stiffness `K` and mass `M` of a mesh.
#[derive(Debug, Clone, PartialEq)]
pub struct AssembledSystem {
    pub stiffness: CsrMatrix,
    pub mass: CsrMatrix,
    pub dof_count: usize,
    /// `Σ M_ij`, the discrete Gaussian measure of the meshed region.
    pub gaussian_mass: f64,
    pub boundary_dofs: Vec<usize>,
}

impl AssembledSystem {
    /// Builds a system from externally supplied matrices.
    pub fn from_matrices(stiffness: CsrMatrix, mass: CsrMatrix, boundary_dofs: Vec<usize>) -> Result<Self> {
        let n = stiffness.nrows();
        if stiffness.ncols() != n || mass.nrows() != n || mass.ncols() != n {
            return Err(crate::error::invalid("K and M must be square and of equal size"));
        }
        if boundary_dofs.iter().any(|&b| b >= n) {
            return Err(crate::error::invalid("boundary dof out of range"));
        }
        let gaussian_mass = mass.sum_all();
        Ok(Self { stiffness, mass, dof_count: n, gaussian_mass, boundary_dofs })
    }

    /// `∫ v dγ` of the finite element function with nodal values `v`.
    pub fn integral(&self, v: &[f64]) -> f64 {
        self.mass.mul_vec(v).iter().sum()
    }

    /// `∫ v dγ / γ(Ω_h)`.
    pub fn mean(&self, v: &[f64]) -> f64 {
        self.integral(v) / self.gaussian_mass
    }
}

type CellBlock = (Vec<usize>, Vec<f64>, Vec<f64>);

/// Assembles `K_ij = ∫ Dφ_i·Dφ_j dγ` and `M_ij = ∫ φ_i φ_j dγ`.
///
/// The Gaussian density is sampled at quadrature nodes: two Gauss points per
/// interval and the three edge midpoints per triangle.
pub fn assemble(mesh: &Mesh) -> Result<AssembledSystem> {
    let blocks: Vec<Result<CellBlock>> = (0..mesh.num_cells())
        .into_par_iter()
        .map(|c| match mesh.dimension() {
            1 => interval_block(mesh, c),
            _ => triangle_block(mesh, c),
        })
        .collect();
    let mut k_trip = Vec::with_capacity(blocks.len() * 9);
    let mut m_trip = Vec::with_capacity(blocks.len() * 9);
    for block in blocks {
        let (dofs, kl, ml) = block?;
        let n = dofs.len();
        for a in 0..n {
            for b in 0..n {
                k_trip.push((dofs[a], dofs[b], kl[a * n + b]));
                m_trip.push((dofs[a], dofs[b], ml[a * n + b]));
            }
        }
    }
    let nv = mesh.num_vertices();
    let stiffness = CsrMatrix::from_triplets(nv, nv, &k_trip);
    let mass = CsrMatrix::from_triplets(nv, nv, &m_trip);
    let gaussian_mass = mass.sum_all();
    Ok(AssembledSystem { stiffness, mass, dof_count: nv, gaussian_mass, boundary_dofs: mesh.boundary_vertices() })
}

fn interval_block(mesh: &Mesh, c: usize) -> Result<CellBlock> {
    let cell = &mesh.cells()[c];
    let (x0, x1) = (mesh.vertices()[cell[0]][0], mesh.vertices()[cell[1]][0]);
    let len = x1 - x0;
    if !(len > 0.0) {
        return Err(Error::DegenerateCell { cell: c, measure: len });
    }
    let g = 0.5 / 3f64.sqrt();
    let mut kl = vec![0.0; 4];
    let mut ml = vec![0.0; 4];
    for s in [0.5 - g, 0.5 + g] {
        let w = 0.5 * len * density(1, (x0 + s * len).powi(2));
        let phi = [1.0 - s, s];
        let dphi = [-1.0 / len, 1.0 / len];
        for a in 0..2 {
            for b in 0..2 {
                kl[a * 2 + b] += w * dphi[a] * dphi[b];
                ml[a * 2 + b] += w * phi[a] * phi[b];
            }
        }
    }
    Ok((cell.clone(), kl, ml))
}

fn triangle_block(mesh: &Mesh, c: usize) -> Result<CellBlock> {
    let cell = &mesh.cells()[c];
    let p = [mesh.vertices()[cell[0]], mesh.vertices()[cell[1]], mesh.vertices()[cell[2]]];
    let det = vec2::cross(vec2::sub(p[1], p[0]), vec2::sub(p[2], p[0]));
    let area = 0.5 * det;
    if !(area > 0.0) {
        return Err(Error::DegenerateCell { cell: c, measure: area });
    }
    // gradient of the barycentric coordinate λ_i is perp(opposite edge) / det
    let grads: [[f64; 2]; 3] = std::array::from_fn(|i| {
        let e = vec2::sub(p[(i + 2) % 3], p[(i + 1) % 3]);
        [-e[1] / det, e[0] / det]
    });
    let mut kl = vec![0.0; 9];
    let mut ml = vec![0.0; 9];
    for q in 0..3 {
        // midpoint of the edge opposite vertex q
        let (i, j) = ((q + 1) % 3, (q + 2) % 3);
        let x = vec2::scale(0.5, vec2::add(p[i], p[j]));
        let w = area / 3.0 * density(2, vec2::norm2(x));
        let mut phi = [0.0; 3];
        phi[i] = 0.5;
        phi[j] = 0.5;
        for a in 0..3 {
            for b in 0..3 {
                kl[a * 3 + b] += w * vec2::dot(grads[a], grads[b]);
                ml[a * 3 + b] += w * phi[a] * phi[b];
            }
        }
    }
    Ok((cell.clone(), kl, ml))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::discretize::{mesh_convex_2d, mesh_interval, mesh_rect};
    use crate::geometry::{gaussian_measure, ConvexDomain};
    use crate::hermite::gauss_hermite_rule;
    use crate::measure::interval_measure;

    #[test]
    fn neumann_kernel_and_mass_1d() {
        let mesh = mesh_interval(-6.0, 6.0, 400).unwrap();
        let sys = assemble(&mesh).unwrap();
        let c = vec![2.5; sys.dof_count];
        let kc = sys.stiffness.mul_vec(&c);
        assert!(kc.iter().all(|v| v.abs() < 1e-12));
        let mass = sys.mass.quad_form(&c);
        assert!((mass - 6.25 * interval_measure(-6.0, 6.0)).abs() < 1e-5);
        assert!(sys.stiffness.symmetry_defect() < 1e-14);
    }

    #[test]
    fn single_triangle() {
        let mesh = Mesh::new(2, vec![[0.0, 0.0], [0.1, 0.0], [0.0, 0.1]], vec![vec![0, 1, 2]]).unwrap();
        let sys = assemble(&mesh).unwrap();
        for i in 0..3 {
            assert!(sys.mass.row(i).all(|(_, v)| v > 0.0));
            let row: f64 = sys.stiffness.row(i).map(|(_, v)| v).sum();
            assert!(row.abs() < 1e-15);
        }
    }

    #[test]
    fn gaussian_moments_on_truncated_plane() {
        let mesh = mesh_rect(-6.0, 6.0, -6.0, 6.0, 120, 120).unwrap();
        let sys = assemble(&mesh).unwrap();
        let psi = mesh.interpolate(|x| x[0]);
        // oracle: tensor Gauss-Hermite moments ∫ 1 dγ and ∫ x² dγ
        let gh = gauss_hermite_rule(20).unwrap();
        let second = gh.integrate(|t| t * t);
        let ones = gh.integrate(|_| 1.0);
        assert!((sys.stiffness.quad_form(&psi) - ones * ones).abs() < 1e-3);
        assert!((sys.mass.quad_form(&psi) - second * ones).abs() < 1e-2);
    }

    #[test]
    fn gaussian_mass_converges_from_below() {
        let disk = ConvexDomain::disk([0.3, 0.0], 1.0);
        let exact = gaussian_measure(&disk);
        let masses: Vec<f64> = [0.2, 0.1, 0.05, 0.025]
            .iter()
            .map(|&h| assemble(&mesh_convex_2d(&disk, h).unwrap()).unwrap().gaussian_mass)
            .collect();
        assert!(masses.windows(2).all(|w| w[0] < w[1]), "{masses:?}");
        assert!(exact - masses[3] < 1e-3 && exact > masses[3]);
        let sq = ConvexDomain::square(1.0);
        let box_mass = assemble(&mesh_convex_2d(&sq, 0.05).unwrap()).unwrap().gaussian_mass;
        assert!((box_mass - gaussian_measure(&sq)).abs() < 1e-6, "{box_mass}");
    }

    #[test]
    fn constant_kernel_is_one_dimensional() {
        let mesh = mesh_convex_2d(&ConvexDomain::regular_polygon(6, 1.0), 0.25).unwrap();
        let sys = assemble(&mesh).unwrap();
        let k = sys.stiffness.to_dense();
        let eig = nalgebra::SymmetricEigen::new(k);
        let mut vals: Vec<f64> = eig.eigenvalues.iter().copied().collect();
        vals.sort_by(f64::total_cmp);
        assert!(vals[0].abs() < 1e-8 && vals[1] > 1e-4, "{:?}", &vals[..3]);
    }
}
