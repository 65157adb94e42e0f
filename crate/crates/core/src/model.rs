//! Fusion models: free, Shafer, and hybrid models given by integrity
//! constraints.
//!
//! A constraint forces an element to be empty. Everything below a constrained
//! element is empty too, and so is the union of two empty elements, so the set
//! of empty elements is exactly the down-set of the join of all constraints
//! (the constraint hull). Emptiness is decided against that single element.

use thiserror::Error;

use crate::hyperlattice::{total_ignorance, Element, LatticeError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error("Shafer's model needs at least two atoms, got {0}")]
    ShaferTooSmall(usize),
    #[error("the constraints force the total ignorance to be empty")]
    VacuousModel,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ModelKind {
    Free,
    Shafer,
    Custom,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModelSpec {
    n: usize,
    kind: ModelKind,
    constraints: Vec<Element>,
    hull: Element,
}

impl ModelSpec {
    /// The free model: no element other than `∅` is empty.
    pub fn free(n: usize) -> Result<Self, ModelError> {
        total_ignorance(n)?;
        Ok(ModelSpec {
            n,
            kind: ModelKind::Free,
            constraints: Vec::new(),
            hull: Element::empty(),
        })
    }

    /// Shafer's model: every pair of atoms is exclusive.
    pub fn shafer(n: usize) -> Result<Self, ModelError> {
        total_ignorance(n)?;
        if n < 2 {
            return Err(ModelError::ShaferTooSmall(n));
        }
        let mut constraints = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                constraints.push(Element::intersection_of([i, j]));
            }
        }
        let mut model = Self::build(n, constraints)?;
        model.kind = ModelKind::Shafer;
        Ok(model)
    }

    /// A hybrid model from arbitrary constraints. `∅`, duplicates and
    /// constraints implied by others are dropped.
    pub fn hybrid<I: IntoIterator<Item = Element>>(n: usize, constraints: I) -> Result<Self, ModelError> {
        total_ignorance(n)?;
        Self::build(n, constraints.into_iter().collect())
    }

    fn build(n: usize, constraints: Vec<Element>) -> Result<Self, ModelError> {
        for c in &constraints {
            c.check_frame(n)?;
        }
        let hull = constraints.iter().fold(Element::empty(), |acc, c| acc.join(c));
        if total_ignorance(n)?.leq(&hull) {
            return Err(ModelError::VacuousModel);
        }
        let mut kept: Vec<Element> = Vec::new();
        let mut sorted = constraints;
        sorted.sort();
        sorted.dedup();
        for c in &sorted {
            if c.is_empty() {
                continue;
            }
            let implied = sorted.iter().any(|other| other != c && c.leq(other));
            if !implied {
                kept.push(c.clone());
            }
        }
        Ok(ModelSpec {
            n,
            kind: ModelKind::Custom,
            constraints: kept,
            hull,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn kind(&self) -> ModelKind {
        self.kind
    }

    pub fn constraints(&self) -> &[Element] {
        &self.constraints
    }

    /// Join of all constraints; the greatest empty element.
    pub fn constraint_hull(&self) -> &Element {
        &self.hull
    }

    pub fn is_empty(&self, a: &Element) -> bool {
        a.is_empty() || a.leq(&self.hull)
    }

    /// Drops the conjunctions of `a` that are empty under the model. The
    /// result denotes the same set as `a` once the constraints hold.
    pub fn reduce(&self, a: &Element) -> Element {
        if self.constraints.is_empty() {
            return a.clone();
        }
        let kept = a
            .terms()
            .iter()
            .copied()
            .filter(|c| !self.is_empty(&Element::from_atom_sets([*c]).expect("terms are non-empty")));
        Element::from_atom_sets(kept).expect("terms are non-empty")
    }

    /// Characteristic emptiness function: 0 for empty elements, 1 otherwise.
    pub fn phi(&self, a: &Element) -> u8 {
        u8::from(!self.is_empty(a))
    }
}
