//! Exact finite data behind equivariant exceptional collections: cyclotomic
//! scalars, finite groups and their central extensions, 2-cocycles, character
//! tables, numerical K-lattices of rational surfaces, and the builder that turns
//! a group-invariant block collection into an equivariant one.

pub mod builder;
pub mod catalogs;
pub mod cocycles;
pub mod error;
pub mod groups;
pub mod kmodel;
pub mod linalg;
pub mod reps;
pub mod scalars;

pub use builder::{build, hom_dim, rank_report, BlockTwist, EqCollection, EqObject, HomDim};
pub use cocycles::{Cocycle2, TwistedGroupAlgebra};
pub use error::{Error, Result};
pub use groups::{CentralExt, FiniteGroup, Perm, Subgroup};
pub use kmodel::{ExcCollection, ExcObject, GroupAction, KClass, PicLattice};
pub use reps::{Character, CharacterTable, Classes, WeightedIrrep};
pub use scalars::{Cyc, Rational};
