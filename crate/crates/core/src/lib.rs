//! Finite groups given by multiplication tables, exact character tables,
//! and decision procedures for (pseudo-)unramified towers and complete
//! representations, with synthesis of invariant generators.

pub mod catalog;
pub mod chartheory;
pub mod cyclotomic;
pub mod decide;
pub mod error;
pub mod field;
pub mod freegroup;
pub mod group;
pub mod invariants;
pub mod matrix;
pub mod modp;
pub mod rational;

pub use chartheory::{CharacterTable, ClassFunction};
pub use cyclotomic::Cyclotomic;
pub use error::{Error, Result};
pub use group::{ConjugacyClasses, FiniteGroup, QuotientGroup, Subgroup};
pub use rational::Rational;
