//! Homological algebra of finite-dimensional modules: covers, envelopes,
//! syzygies, Ext, pushouts and pullbacks, decomposition.

pub mod approx;
pub mod cache;
pub mod conflation;
pub mod decompose;
pub mod ext;
pub mod maps;

pub use approx::{
    cosyzygy, injective_envelope, is_injective, is_projective, projective_cover, projective_dimension, socle_dims,
    syzygy, top_dims,
};
pub use conflation::{
    projective_resolution, truncated_coresolution, truncated_resolution, Conflation, ConflationSpec, Resolution,
    ResolutionKind,
};
pub use decompose::{
    decompose, decompose_summands, is_indecomposable, is_isomorphic, iso_between_indecomposables, IsoOutcome, Summand,
};
pub use ext::{ext_dim, ext_dim_injective};
pub use maps::{
    cokernel, factor_through_injection, factor_through_surjection, image, kernel, pullback, pushout, submodule,
};
