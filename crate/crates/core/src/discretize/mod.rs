//! Meshes, truncation of unbounded domains and Gaussian-weighted P1 assembly.

mod assemble;
mod mesh;
mod meshing;
mod truncate;

pub use assemble::{assemble, AssembledSystem};
pub use mesh::{Mesh, MeshFile, PointLocator};
pub use meshing::{mesh_convex_2d, mesh_domain, mesh_dumbbell, mesh_interval, mesh_interval_h, mesh_rect, mesh_tensor};
pub use truncate::{truncate_unbounded, truncation_radius, Truncation, LOW_ACCURACY_TAIL};
