//! Extension of functions from a convex domain to the whole space by normal
//! reflection and a distance cut-off, with the conjugation used when the
//! domain misses the origin.

mod checks;
mod field;
mod norms;

pub use checks::{
    conjugation_identity, exp_factor_survey, jacobian_survey, ring_mass_check, sample_collar, ConjugationIdentity,
    ExpFactorSurvey, JacobianSurvey, RingMassCheck,
};
pub use field::{build_cutoff, conjugate_extend, extend, smoothstep, Cutoff, Extension, ExtensionField, FieldSample, Region};
pub use norms::{extension_norm_ratio, NormRatio};
