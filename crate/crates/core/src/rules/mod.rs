//! Combination and conditioning rules.
//!
//! All rules walk the Cartesian product of the sources' cores in a fixed
//! lexicographic order, so results are reproducible bit for bit.

mod dempster;
mod dsm;
mod refine;

pub use dempster::{conflict_degree, dempster_combine, dempster_condition};
pub use dsm::{dsm_classic_combine, dsm_condition, dsm_hybrid_combine};
pub use refine::{refine_and_dempster, venn_image, RefinedMass};

use thiserror::Error;

use crate::bba::{BbaError, MassFunction};
use crate::hyperlattice::{Element, LatticeError};

/// A conflict mass within this distance of 1 is total conflict.
pub const TOTAL_CONFLICT_EPSILON: f64 = 1e-12;
/// Largest core product a single combination may walk.
pub const MAX_TUPLES: u128 = 10_000_000;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum RuleError {
    #[error("total conflict between the sources (k = {conflict})")]
    TotalConflict { conflict: f64 },
    #[error("source {index} has focal elements outside the power set")]
    ParadoxicalInput { index: usize },
    #[error("frame size mismatch: expected {expected}, found {found}")]
    FrameMismatch { expected: usize, found: usize },
    #[error("at least two sources are required, got {0}")]
    TooFewSources(usize),
    #[error("the cores span {0} tuples, more than the supported {MAX_TUPLES}")]
    TooManyTuples(u128),
    #[error("the conditioning event must not be empty")]
    EmptyEvent,
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error("combined masses are not a valid bba: {0}")]
    InvalidResult(#[from] BbaError),
}

/// Where the hybrid rule sends a product whose conjunction is empty while
/// some of its focal elements are not.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum TransferPolicy {
    /// The union `X_1 ∪ … ∪ X_k` of the focal elements.
    #[default]
    S3Join,
    /// The canonical conjunction with every `∩` turned into `∪`; falls back to
    /// the union of focal elements if that target is itself empty.
    ReducedSwap,
}

impl TransferPolicy {
    pub const ALL: [TransferPolicy; 2] = [TransferPolicy::S3Join, TransferPolicy::ReducedSwap];
}

/// Which term of the hybrid rule carried a product.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TransferTerm {
    /// Non-empty conjunction, kept in place.
    S1,
    /// Every focal element empty: moved to the union of their atoms or to the
    /// total ignorance.
    S2,
    /// Empty conjunction of partly non-empty elements: moved to a union.
    S3,
}

/// One product of the combination and where it was credited.
#[derive(Debug, Clone, PartialEq)]
pub struct Transfer {
    pub focal: Vec<Element>,
    pub product: f64,
    pub destination: Element,
    pub term: TransferTerm,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Combination {
    pub mass: MassFunction,
    /// Mass of the products whose conjunction is empty under the model.
    pub conflict: f64,
    /// Populated by the hybrid rule, one entry per core tuple.
    pub ledger: Vec<Transfer>,
}

impl Combination {
    pub fn ledger_total(&self) -> f64 {
        self.ledger.iter().map(|t| t.product).sum()
    }
}

pub type CombineOutcome = Result<Combination, RuleError>;

pub(crate) fn is_total_conflict(conflict: f64) -> bool {
    conflict >= 1.0 - TOTAL_CONFLICT_EPSILON
}

/// Checks the source count and frames; returns the common frame size.
pub(crate) fn common_frame(sources: &[MassFunction]) -> Result<usize, RuleError> {
    if sources.len() < 2 {
        return Err(RuleError::TooFewSources(sources.len()));
    }
    let n = sources[0].n();
    for s in sources {
        if s.n() != n {
            return Err(RuleError::FrameMismatch { expected: n, found: s.n() });
        }
    }
    Ok(n)
}

/// Visits every tuple of focal elements with its product mass, first source
/// varying slowest.
pub(crate) fn for_each_tuple<T, F>(cores: &[Vec<(T, f64)>], mut visit: F) -> Result<(), RuleError>
where
    F: FnMut(&[&T], f64),
{
    let count = cores.iter().fold(1u128, |acc, c| acc.saturating_mul(c.len() as u128));
    if count > MAX_TUPLES {
        return Err(RuleError::TooManyTuples(count));
    }
    if count == 0 {
        return Ok(());
    }
    let mut index = vec![0usize; cores.len()];
    let mut tuple: Vec<&T> = Vec::with_capacity(cores.len());
    loop {
        tuple.clear();
        let mut product = 1.0;
        for (core, &i) in cores.iter().zip(&index) {
            tuple.push(&core[i].0);
            product *= core[i].1;
        }
        visit(&tuple, product);

        let mut pos = cores.len();
        loop {
            if pos == 0 {
                return Ok(());
            }
            pos -= 1;
            index[pos] += 1;
            if index[pos] < cores[pos].len() {
                break;
            }
            index[pos] = 0;
        }
    }
}

pub(crate) fn cores_of(sources: &[MassFunction]) -> Vec<Vec<(Element, f64)>> {
    sources.iter().map(MassFunction::to_assignments).collect()
}

pub(crate) fn meet_all(tuple: &[&Element]) -> Element {
    let mut acc = tuple[0].clone();
    for x in &tuple[1..] {
        acc = acc.meet(x);
    }
    acc
}

pub(crate) fn join_all(tuple: &[&Element]) -> Element {
    let mut acc = tuple[0].clone();
    for x in &tuple[1..] {
        acc = acc.join(x);
    }
    acc
}
