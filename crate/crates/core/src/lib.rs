//! Forbidden-patterns problems over finite relational structures.
//!
//! The crate provides coloured relational structures and homomorphism
//! search, the forbidden-patterns decision procedure, tree-depth tools,
//! truncated products, universal templates for bounded-degree and low
//! tree-depth classes, and a compiler between primitive MMSNP sentences
//! and forbidden-patterns problems.

pub mod canon;
pub mod check;
pub mod cli;
pub mod enumerate;
pub mod error;
pub mod gen;
pub mod hom;
pub mod io;
pub mod mmsnp;
pub mod par;
pub mod patterns;
pub mod products;
pub mod relstruct;
pub mod treedepth;
pub mod universal;

pub use error::{Error, Result};
pub use hom::Hom;
pub use patterns::{Pattern, Problem};
pub use relstruct::{
    Colour, ColouredStructure, ElementId, Palettes, Signature, Structure, TupleOccurrence,
};
