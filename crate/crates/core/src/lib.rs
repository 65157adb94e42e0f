//! Belief fusion over the hyper-power set.
//!
//! * [`hyperlattice`]: canonical elements of the free distributive lattice on
//!   the atoms of a frame, enumeration and Venn refinement.
//! * [`model`]: free, Shafer and hybrid models given by integrity constraints.
//! * [`bba`]: validated mass functions and mass matrices.
//! * [`rules`]: Dempster's rule, the classic and hybrid DSm rules, and the
//!   corresponding conditioning operators.
//! * [`corpus`]: reference scenarios, parametric counter-example generators
//!   and the harness that checks rules against them.

pub mod bba;
pub mod corpus;
pub mod hyperlattice;
pub mod model;
pub mod rules;

pub use bba::{BbaError, MassFunction, MassMatrix};
pub use hyperlattice::{AtomSet, Element, Expr, LatticeError};
pub use model::{ModelError, ModelKind, ModelSpec};
pub use rules::{Combination, CombineOutcome, RuleError, TransferPolicy};
