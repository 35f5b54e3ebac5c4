pub mod algebra;
pub mod cli;
pub mod cocycle;
pub mod dual;
pub mod error;
pub mod group;
pub mod harness;
pub mod norms;
pub mod operators;
pub mod tolerance;
pub mod words;

pub use algebra::GroupAlgebraElement;
pub use cocycle::{BasisVectorId, CocycleFamily, LengthCocycle};
pub use error::{Error, Result};
pub use group::{GroupDescriptor, GroupElement};
pub use words::{ReducedWord, WordKind};
