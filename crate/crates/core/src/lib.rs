//! Cotorsion pairs, Hovey triples and their lifts over finite-dimensional
//! algebras given by bound quivers over prime fields.
//!
//! Every verdict produced here is relative to a finite universe of
//! indecomposable modules of bounded dimension; see [`universe`].

pub mod bqa;
pub mod cotorsion;
pub mod error;
pub mod fixtures;
pub mod homalg;
pub mod hovey;
pub mod linfield;
pub mod quiverlift;
pub mod report;
pub mod universe;

#[cfg(test)]
mod testkit;

pub use bqa::{Algebra, AlgebraSpec, Module, ModuleMap, ModuleSpec};
pub use cotorsion::CotorsionPair;
pub use error::{Error, Result};
pub use hovey::HoveyTriple;
pub use linfield::{Mat, PrimeField};
pub use report::{Report, Verdict, Witness};
pub use universe::{ObjectClass, Side, Universe};
