//! Bound quiver algebras over prime fields and their modules.

pub mod algebra;
pub mod module;
pub mod spec;

pub use algebra::{Algebra, Arrow, BoundQuiver, Path, Relation};
pub use module::{hom_dim, hom_space, span_rank, DirectSum, Module, ModuleMap};
pub use spec::{AlgebraSpec, ArrowSpec, MapSpec, ModuleSpec, TermSpec};

pub use crate::homalg::decompose::{is_isomorphic, IsoOutcome};

/// Parses and validates an algebra document.
pub fn parse_algebra(spec: &AlgebraSpec) -> crate::Result<Algebra> {
    Algebra::from_spec(spec)
}
