//! Convex domains: distance and projection queries, the normal reflection
//! across the boundary, invading truncations, and the nonconvex dumbbell.

mod domain;
mod dumbbell;
mod reflect;
mod sequence;
pub mod vec2;

pub use domain::{BoundaryProjection, ConvexDomain, Feature};
pub use dumbbell::NonconvexDumbbell;
pub use reflect::{
    exp_factor, gaussian_ratio, jacobian_product, reflect, reflected_point, ring_width, ReflectionData,
    JACOBIAN_FD_STEP,
};
pub use sequence::{
    gaussian_measure, invading_complement_measure, invading_sequence, star_shaped_integral,
    translate_to_contain_origin, InvadingStep, Translation,
};
pub use vec2::Point;

pub(crate) use domain::centroid;

/// Distance from `x` to the boundary, with gradient and projection.
pub fn distance_to_boundary(domain: &ConvexDomain, x: Point) -> crate::Result<BoundaryProjection> {
    domain.project(x)
}
