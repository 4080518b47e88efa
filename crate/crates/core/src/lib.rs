//! Derangement proportions, eigenvalue-one proportions and their threshold checks
//! for permutation groups, semilinear groups and affine groups.

pub mod check;
mod closure;
pub mod error;
pub mod families;
pub mod ffield;
pub mod gammal1;
pub mod harness;
pub mod matgroup;
pub mod numtheory;
pub mod perm;
pub mod ratio;

pub use check::{CheckResult, Status, Strictness};
pub use error::{Error, Result};
pub use ffield::{make_field, FieldCtx, FieldElem};
pub use matgroup::{AffineStats, MatGroup, SemilinearMap};
pub use perm::{BlockSystem, Perm, PermGroup};
pub use ratio::{ExactRatio, Relation};
