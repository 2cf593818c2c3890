//! Fibered ordered monoids over `N̄ⁿ`: a finite, decidable model of the
//! Cuntz-semigroup constructions (ideals, quotients, exact sequences).

pub mod abelian;
pub mod axioms;
pub mod error;
pub mod exact;
pub mod extnat;
pub mod fiber;
pub mod fragment;
pub mod ideals;
pub mod intmat;
pub mod label;
pub mod morphism;
pub mod polyhedral;
pub mod quotients;
pub mod report;
pub mod samples;
pub mod semigroup;

pub use error::{CuError, Result};
pub use extnat::{CuVector, ExtNat};
pub use label::Label;
pub use semigroup::{Element, FiberedSemigroup, MonotoneChain};
