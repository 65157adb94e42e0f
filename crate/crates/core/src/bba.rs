//! Basic belief assignments over the hyper-power set.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::hyperlattice::{Element, LatticeError};

/// Absolute tolerance on the total mass of a bba.
pub const MASS_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum BbaError {
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error("mass {mass} on {element} is negative")]
    NegativeMass { element: Element, mass: f64 },
    #[error("mass on {element} is not a finite number")]
    NonFiniteMass { element: Element },
    #[error("positive mass {0} assigned to the empty element")]
    MassOnEmpty(f64),
    #[error("masses sum to {0}, expected 1")]
    SumNotOne(f64),
    #[error("a certain bba cannot be focused on the empty element")]
    EmptyFocus,
    #[error("row {row}: {source}")]
    Row { row: usize, source: Box<BbaError> },
    #[error("row {row} has {found} entries but the matrix has {expected} columns")]
    RowWidth { row: usize, expected: usize, found: usize },
    #[error("matrix column labels must be distinct")]
    DuplicateLabel,
}

/// A validated mass function: positive masses on canonical, non-empty
/// elements of a frame of size `n`, summing to 1.
#[derive(Debug, Clone, PartialEq)]
pub struct MassFunction {
    n: usize,
    masses: BTreeMap<Element, f64>,
}

impl MassFunction {
    /// Validates and merges assignments. Zero masses are dropped, repeated
    /// elements are summed.
    pub fn new<I>(n: usize, assignments: I) -> Result<Self, BbaError>
    where
        I: IntoIterator<Item = (Element, f64)>,
    {
        if n == 0 {
            return Err(LatticeError::EmptyFrame.into());
        }
        let mut masses: BTreeMap<Element, f64> = BTreeMap::new();
        for (element, mass) in assignments {
            element.check_frame(n)?;
            if !mass.is_finite() {
                return Err(BbaError::NonFiniteMass { element });
            }
            if mass < 0.0 {
                return Err(BbaError::NegativeMass { element, mass });
            }
            if element.is_empty() {
                if mass > 0.0 {
                    return Err(BbaError::MassOnEmpty(mass));
                }
                continue;
            }
            if mass > 0.0 {
                *masses.entry(element).or_insert(0.0) += mass;
            }
        }
        let total: f64 = masses.values().sum();
        if (total - 1.0).abs() > MASS_TOLERANCE {
            return Err(BbaError::SumNotOne(total));
        }
        Ok(MassFunction { n, masses })
    }

    /// `m_A`: all mass on a single element.
    pub fn certain(n: usize, focus: Element) -> Result<Self, BbaError> {
        if focus.is_empty() {
            return Err(BbaError::EmptyFocus);
        }
        Self::new(n, [(focus, 1.0)])
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn mass(&self, element: &Element) -> f64 {
        self.masses.get(element).copied().unwrap_or(0.0)
    }

    /// Focal elements with their masses, in [`Element`] order.
    pub fn iter(&self) -> impl Iterator<Item = (&Element, f64)> {
        self.masses.iter().map(|(e, m)| (e, *m))
    }

    /// The core: elements carrying positive mass.
    pub fn core(&self) -> impl Iterator<Item = &Element> {
        self.masses.keys()
    }

    pub fn core_len(&self) -> usize {
        self.masses.len()
    }

    pub fn total(&self) -> f64 {
        self.masses.values().sum()
    }

    /// True when every focal element is a singleton.
    pub fn is_bayesian(&self) -> bool {
        self.masses.keys().all(Element::is_singleton)
    }

    /// True when every focal element is a union of singletons.
    pub fn is_powerset_bba(&self) -> bool {
        self.masses.keys().all(Element::is_union_of_singletons)
    }

    pub fn to_assignments(&self) -> Vec<(Element, f64)> {
        self.iter().map(|(e, m)| (e.clone(), m)).collect()
    }
}

/// `k` sources described over a shared list of column elements.
#[derive(Debug, Clone, PartialEq)]
pub struct MassMatrix {
    n: usize,
    labels: Vec<Element>,
    rows: Vec<Vec<f64>>,
}

impl MassMatrix {
    pub fn new(n: usize, labels: Vec<Element>, rows: Vec<Vec<f64>>) -> Result<Self, BbaError> {
        for l in &labels {
            l.check_frame(n)?;
        }
        let mut sorted = labels.clone();
        sorted.sort();
        sorted.dedup();
        if sorted.len() != labels.len() {
            return Err(BbaError::DuplicateLabel);
        }
        for (row, r) in rows.iter().enumerate() {
            if r.len() != labels.len() {
                return Err(BbaError::RowWidth { row, expected: labels.len(), found: r.len() });
            }
        }
        let matrix = MassMatrix { n, labels, rows };
        matrix.to_sources()?;
        Ok(matrix)
    }

    /// Columns are the singletons `θ_1..θ_n`.
    pub fn bayesian(rows: Vec<Vec<f64>>) -> Result<Self, BbaError> {
        let n = rows.first().map_or(0, Vec::len);
        Self::new(n, (0..n).map(Element::atom).collect(), rows)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn labels(&self) -> &[Element] {
        &self.labels
    }

    pub fn rows(&self) -> &[Vec<f64>] {
        &self.rows
    }

    pub fn column(&self, j: usize) -> impl Iterator<Item = f64> + '_ {
        self.rows.iter().map(move |r| r[j])
    }

    /// One bba per row.
    pub fn to_sources(&self) -> Result<Vec<MassFunction>, BbaError> {
        self.rows
            .iter()
            .enumerate()
            .map(|(row, r)| {
                MassFunction::new(self.n, self.labels.iter().cloned().zip(r.iter().copied()))
                    .map_err(|e| BbaError::Row { row, source: Box::new(e) })
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(i: usize) -> Element {
        Element::atom(i - 1)
    }

    #[test]
    fn make_bba() {
        let m = MassFunction::new(4, [(t(1), 0.99), (t(3).join(&t(4)), 0.01)]).unwrap();
        assert_eq!(m.core_len(), 2);
        assert!(!m.is_bayesian());
        assert!(m.is_powerset_bba());

        let m = MassFunction::new(2, [(t(1), 1.0)]).unwrap();
        assert_eq!(m.mass(&t(1)), 1.0);

        assert_eq!(MassFunction::new(2, [(t(1), 0.5)]), Err(BbaError::SumNotOne(0.5)));
        assert!(matches!(
            MassFunction::new(2, [(t(1), 1.5), (t(2), -0.5)]),
            Err(BbaError::NegativeMass { .. })
        ));
        assert_eq!(
            MassFunction::new(2, [(Element::empty(), 0.5), (t(1), 0.5)]),
            Err(BbaError::MassOnEmpty(0.5))
        );
        assert!(MassFunction::new(2, [(t(3), 1.0)]).is_err());
        assert!(MassFunction::new(2, [(t(1), f64::NAN)]).is_err());
    }

    #[test]
    fn duplicates_merge() {
        let alias = t(1).join(&t(1).meet(&t(2)));
        let m = MassFunction::new(2, [(t(1), 0.25), (alias, 0.25), (t(2), 0.5)]).unwrap();
        assert_eq!(m.mass(&t(1)), 0.5);
        assert_eq!(m.core_len(), 2);
    }

    #[test]
    fn certain_bba() {
        let m = MassFunction::certain(6, t(2)).unwrap();
        assert_eq!(m.mass(&t(2)), 1.0);
        let m = MassFunction::certain(4, t(3).join(&t(4))).unwrap();
        assert_eq!(m.mass(&t(3).join(&t(4))), 1.0);
        assert_eq!(MassFunction::certain(3, Element::empty()), Err(BbaError::EmptyFocus));
    }

    #[test]
    fn bayesian_and_powerset() {
        let vacuous = MassFunction::certain(2, t(1).join(&t(2))).unwrap();
        assert!(!vacuous.is_bayesian());
        assert!(vacuous.is_powerset_bba());

        let paradox = MassFunction::new(
            2,
            [(t(1), 0.2), (t(2), 0.1), (t(1).meet(&t(2)), 0.4), (t(1).join(&t(2)), 0.3)],
        )
        .unwrap();
        assert!(!paradox.is_powerset_bba());
        assert!(!paradox.is_bayesian());
        assert!(MassFunction::certain(3, t(1)).unwrap().is_powerset_bba());
    }

    #[test]
    fn matrices() {
        let mm = MassMatrix::bayesian(vec![vec![0.6, 0.0, 0.4, 0.0], vec![0.0, 0.2, 0.0, 0.8]]).unwrap();
        let sources = mm.to_sources().unwrap();
        assert_eq!(sources.len(), 2);
        assert!(sources.iter().all(MassFunction::is_bayesian));

        let labels = vec![t(1), t(2), t(3), t(4), t(1).join(&t(2)), t(3).join(&t(4))];
        let mm = MassMatrix::new(
            4,
            labels,
            vec![
                vec![0.4, 0.5, 0.0, 0.0, 0.1, 0.0],
                vec![0.0, 0.0, 0.3, 0.6, 0.0, 0.1],
                vec![0.8, 0.0, 0.0, 0.0, 0.2, 0.0],
            ],
        )
        .unwrap();
        let sources = mm.to_sources().unwrap();
        assert_eq!(sources.len(), 3);
        assert!(!sources[0].is_bayesian());

        let single = MassMatrix::new(1, vec![t(1)], vec![vec![1.0]]).unwrap();
        assert_eq!(single.to_sources().unwrap()[0], MassFunction::certain(1, t(1)).unwrap());

        let err = MassMatrix::bayesian(vec![vec![1.0, 0.0], vec![0.3, 0.3]]).unwrap_err();
        assert!(matches!(err, BbaError::Row { row: 1, .. }));
        assert_eq!(
            MassMatrix::new(2, vec![t(1), t(1)], vec![vec![0.5, 0.5]]),
            Err(BbaError::DuplicateLabel)
        );
    }
}
