//! Exact elimination and numerical frame checks for δ(2)-ideal non-Hopf real
//! hypersurfaces in ℂP².

pub mod algebra;
pub mod derivation;
pub mod pipeline;
