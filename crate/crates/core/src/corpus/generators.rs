//! Parametric families of inputs on which Dempster's rule breaks down,
//! with the predicates that characterize each family.
//!
//! * class 1: every column of the mass matrix has a zero (plus blocking rows
//!   for partial uncertainties), so the conflict is total;
//! * class 2: one column is all positive and tiny, every other column has a
//!   zero, so Dempster puts all mass on the tiny column;
//! * class 3: as class 2, but the positive column is a partial uncertainty
//!   whose atoms carry no mass;
//! * class 4: a certain source conditioned on a different singleton.

use std::collections::BTreeMap;

use thiserror::Error;

use super::{Check, Expected, Rule, Scenario};
use crate::bba::{BbaError, MassFunction, MassMatrix};
use crate::hyperlattice::{total_ignorance, AtomSet, Element, LatticeError};
use crate::model::{ModelError, ModelSpec};
use crate::rules::TransferPolicy;

/// The condition of a family that a matrix fails to meet.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Violation {
    #[error("column {0} has no zero entry")]
    ColumnWithoutZero(usize),
    #[error("column {0} is neither a singleton nor a union of singletons")]
    NotPowerSetColumn(usize),
    #[error("column {0} is not a singleton")]
    NotSingletonColumn(usize),
    #[error("uncertainty column {0} is the total ignorance")]
    TotalIgnoranceColumn(usize),
    #[error("uncertainty columns {0} and {1} are not disjoint")]
    OverlappingUncertainties(usize, usize),
    #[error("no row is zero on uncertainty column {0} and on all of its atoms")]
    NoBlockingRow(usize),
    #[error("column {0} must be strictly positive in every row")]
    ColumnNotPositive(usize),
    #[error("column {0} must be an uncertainty column")]
    NotAnUncertainty(usize),
    #[error("atom {0} occurs in an uncertainty but its column is not null")]
    UncertaintyAtomNotNull(usize),
    #[error("column index {0} is out of range")]
    NoSuchColumn(usize),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeneratorError {
    #[error("conditions not met: {0}")]
    ConditionsNotMet(#[from] Violation),
    #[error("epsilon {0} must lie in (0, 1]")]
    InvalidEpsilon(f64),
    #[error("invalid layout: {0}")]
    InvalidLayout(String),
    #[error("conditioning atoms must differ")]
    SameAtom,
    #[error(transparent)]
    Bba(#[from] BbaError),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    Model(#[from] ModelError),
}

fn has_zero(matrix: &MassMatrix, col: usize) -> bool {
    matrix.column(col).any(|v| v == 0.0)
}

fn atom_column(matrix: &MassMatrix, atom: usize) -> Option<usize> {
    matrix.labels().iter().position(|l| *l == Element::atom(atom))
}

/// Indices of union columns, after checking every column is in the power set
/// and no union is the total ignorance.
fn uncertainty_columns(matrix: &MassMatrix) -> Result<Vec<usize>, Violation> {
    let top = total_ignorance(matrix.n()).expect("matrix frame is valid");
    let mut out = Vec::new();
    for (j, label) in matrix.labels().iter().enumerate() {
        if label.is_empty() || !label.is_union_of_singletons() {
            return Err(Violation::NotPowerSetColumn(j));
        }
        if !label.is_singleton() {
            if *label == top {
                return Err(Violation::TotalIgnoranceColumn(j));
            }
            out.push(j);
        }
    }
    for (a, &i) in out.iter().enumerate() {
        for &j in &out[a + 1..] {
            let (x, y) = (matrix.labels()[i].atoms_of(), matrix.labels()[j].atoms_of());
            if !x.intersection(y).is_empty() {
                return Err(Violation::OverlappingUncertainties(i, j));
            }
        }
    }
    Ok(out)
}

/// Total-conflict family: every column has a zero; uncertainties are partial
/// and pairwise disjoint; every non-null uncertainty column has a row that is
/// zero on it and on the columns of all of its atoms.
pub fn check_class1(matrix: &MassMatrix) -> Result<(), Violation> {
    let uncertainties = uncertainty_columns(matrix)?;
    for j in 0..matrix.labels().len() {
        if !has_zero(matrix, j) {
            return Err(Violation::ColumnWithoutZero(j));
        }
    }
    for &c in &uncertainties {
        if matrix.column(c).all(|v| v == 0.0) {
            continue;
        }
        let atom_cols: Vec<usize> = matrix.labels()[c]
            .atoms_of()
            .iter()
            .filter_map(|a| atom_column(matrix, a))
            .collect();
        let blocked = matrix
            .rows()
            .iter()
            .any(|row| row[c] == 0.0 && atom_cols.iter().all(|&p| row[p] == 0.0));
        if !blocked {
            return Err(Violation::NoBlockingRow(c));
        }
    }
    Ok(())
}

/// Tiny-column family on singleton columns: column `target` is strictly
/// positive, every other column has a zero.
pub fn check_class2(matrix: &MassMatrix, target: usize) -> Result<(), Violation> {
    if target >= matrix.labels().len() {
        return Err(Violation::NoSuchColumn(target));
    }
    for (j, label) in matrix.labels().iter().enumerate() {
        if !label.is_singleton() {
            return Err(Violation::NotSingletonColumn(j));
        }
        if j == target {
            if matrix.column(j).any(|v| v <= 0.0) {
                return Err(Violation::ColumnNotPositive(j));
            }
        } else if !has_zero(matrix, j) {
            return Err(Violation::ColumnWithoutZero(j));
        }
    }
    Ok(())
}

/// Uncertainty family: column `target` is a partial uncertainty that is
/// strictly positive, every other column has a zero, uncertainties are
/// pairwise disjoint, and the singleton columns of their atoms are null.
pub fn check_class3(matrix: &MassMatrix, target: usize) -> Result<(), Violation> {
    if target >= matrix.labels().len() {
        return Err(Violation::NoSuchColumn(target));
    }
    let uncertainties = uncertainty_columns(matrix)?;
    if !uncertainties.contains(&target) {
        return Err(Violation::NotAnUncertainty(target));
    }
    for j in 0..matrix.labels().len() {
        if j == target {
            if matrix.column(j).any(|v| v <= 0.0) {
                return Err(Violation::ColumnNotPositive(j));
            }
        } else if !has_zero(matrix, j) {
            return Err(Violation::ColumnWithoutZero(j));
        }
    }
    for &c in &uncertainties {
        for a in matrix.labels()[c].atoms_of().iter() {
            if let Some(p) = atom_column(matrix, a) {
                if matrix.column(p).any(|v| v != 0.0) {
                    return Err(Violation::UncertaintyAtomNotNull(a));
                }
            }
        }
    }
    Ok(())
}

/// Expected outcomes of the classic rule and of the hybrid rule under
/// Shafer's model, for power-set sources.
#[derive(Debug, Clone, PartialEq)]
pub struct OracleMasses {
    pub classic: Vec<(Element, f64)>,
    pub hybrid_join: Vec<(Element, f64)>,
    pub hybrid_swap: Vec<(Element, f64)>,
}

/// Computes the classic and Shafer-hybrid results by treating each tuple of
/// power-set focal elements as a family of atom sets.
///
/// The conjunction `∩_i (∪ S_i)` of the tuple, in union-of-intersections
/// form, is the union over the minimal sets of atoms hitting every `S_i`.
/// Under Shafer's model it is non-empty exactly when one atom lies in every
/// `S_i`; otherwise the product moves to `∪ S_i` (join policy) or to the
/// union of the atoms of the minimal hitting sets (swap policy).
pub fn powerset_tuple_oracle(sources: &[MassFunction]) -> Option<OracleMasses> {
    if sources.is_empty() || !sources.iter().all(MassFunction::is_powerset_bba) {
        return None;
    }
    let n = sources[0].n();
    let cores: Vec<Vec<(AtomSet, f64)>> = sources
        .iter()
        .map(|s| s.iter().map(|(e, m)| (e.atoms_of(), m)).collect())
        .collect();

    let mut classic = BTreeMap::new();
    let mut join = BTreeMap::new();
    let mut swap = BTreeMap::new();
    let mut stack = Vec::with_capacity(cores.len());
    walk(&cores, 1.0, &mut stack, &mut |sets: &[AtomSet], p: f64| {
        let covered = sets.iter().fold(AtomSet::EMPTY, |a, s| a.union(*s));
        let hitting: Vec<AtomSet> = minimal_hitting_sets(sets, covered, n);
        let meet = Element::from_atom_sets(hitting.iter().copied()).expect("hitting sets are non-empty");
        *classic.entry(meet.clone()).or_insert(0.0) += p;
        if hitting.iter().any(|h| h.len() == 1) {
            *join.entry(meet.clone()).or_insert(0.0) += p;
            *swap.entry(meet).or_insert(0.0) += p;
        } else {
            let swapped = hitting.iter().fold(AtomSet::EMPTY, |a, h| a.union(*h));
            *join.entry(Element::union_of(covered.iter())).or_insert(0.0) += p;
            *swap.entry(Element::union_of(swapped.iter())).or_insert(0.0) += p;
        }
    });
    Some(OracleMasses {
        classic: classic.into_iter().collect(),
        hybrid_join: join.into_iter().collect(),
        hybrid_swap: swap.into_iter().collect(),
    })
}

fn walk(cores: &[Vec<(AtomSet, f64)>], p: f64, stack: &mut Vec<AtomSet>, visit: &mut dyn FnMut(&[AtomSet], f64)) {
    match cores.split_first() {
        None => visit(stack, p),
        Some((first, rest)) => {
            for (set, m) in first {
                stack.push(*set);
                walk(rest, p * m, stack, visit);
                stack.pop();
            }
        }
    }
}

fn minimal_hitting_sets(sets: &[AtomSet], universe: AtomSet, n: usize) -> Vec<AtomSet> {
    let hits = |h: u32| sets.iter().all(|s| s.bits() & h != 0);
    let mut found: Vec<AtomSet> = Vec::new();
    let mut candidates: Vec<u32> = (1u32..(1u32 << n))
        .filter(|h| h & !universe.bits() == 0 && hits(*h))
        .collect();
    candidates.sort_by_key(|h| h.count_ones());
    for h in candidates {
        let h = AtomSet::from_bits(h);
        if !found.iter().any(|f| f.is_subset(h)) {
            found.push(h);
        }
    }
    found
}

fn oracle_checks(sources: &[MassFunction], n: usize) -> Result<Vec<Check>, GeneratorError> {
    let oracle = powerset_tuple_oracle(sources).expect("generator sources are power-set bbas");
    let free = ModelSpec::free(n)?;
    let shafer = ModelSpec::shafer(n)?;
    Ok(vec![
        Check::new(Rule::DsmClassic, free, Expected::Masses(oracle.classic)),
        Check::new(Rule::DsmHybrid, shafer.clone(), Expected::Masses(oracle.hybrid_join))
            .with_policy(TransferPolicy::S3Join),
        Check::new(Rule::DsmHybrid, shafer, Expected::Masses(oracle.hybrid_swap))
            .with_policy(TransferPolicy::ReducedSwap),
    ])
}

fn scenario(id: &str, origin: &str, n: usize, sources: Vec<MassFunction>, checks: Vec<Check>) -> Scenario {
    Scenario {
        id: id.to_string(),
        origin: origin.to_string(),
        n,
        atom_names: Vec::new(),
        sources,
        event: None,
        checks,
        note: None,
    }
}

/// Scenario for a total-conflict matrix.
pub fn gen_class1(matrix: &MassMatrix) -> Result<Scenario, GeneratorError> {
    check_class1(matrix)?;
    let n = matrix.n();
    let sources = matrix.to_sources()?;
    let mut checks = vec![
        Check::new(Rule::Dempster, ModelSpec::shafer(n)?, Expected::TotalConflict),
        Check::new(Rule::ConflictDegree, ModelSpec::shafer(n)?, Expected::Value(1.0)),
    ];
    checks.extend(oracle_checks(&sources, n)?);
    Ok(scenario("G1", "generated total-conflict matrix", n, sources, checks))
}

fn check_epsilon(e: f64) -> Result<(), GeneratorError> {
    if e > 0.0 && e <= 1.0 {
        Ok(())
    } else {
        Err(GeneratorError::InvalidEpsilon(e))
    }
}

/// Two-row staggered layout over `n + 1` singletons with tiny masses
/// `eps[0..n]`, split after `p` of them.
///
/// Row 1 puts `1 - (ε_1 + … + ε_p)` on `θ_1`, `ε_1..ε_{p-1}` on
/// `θ_3..θ_{p+1}` and `ε_p` on `θ_{n+1}`. Row 2 puts `1 - (ε_{p+1} + … + ε_n)`
/// on `θ_2`, `ε_{p+1}..ε_{n-1}` on `θ_{p+2}..θ_n` and `ε_n` on `θ_{n+1}`.
/// The last column is the only one without a zero.
pub fn class2_layout(n: usize, p: usize, eps: &[f64]) -> Result<MassMatrix, GeneratorError> {
    if eps.len() != n {
        return Err(GeneratorError::InvalidLayout(format!("expected {n} epsilons, got {}", eps.len())));
    }
    if p == 0 || p >= n {
        return Err(GeneratorError::InvalidLayout(format!("split {p} must satisfy 1 <= p < {n}")));
    }
    for &e in eps {
        check_epsilon(e)?;
    }
    let width = n + 1;
    let mut row1 = vec![0.0; width];
    let mut row2 = vec![0.0; width];
    let head: f64 = eps[..p].iter().sum();
    let tail: f64 = eps[p..].iter().sum();
    if head > 1.0 || tail > 1.0 {
        return Err(GeneratorError::InvalidLayout("row epsilons exceed 1".into()));
    }
    row1[0] = 1.0 - head;
    row2[1] = 1.0 - tail;
    for (i, &e) in eps[..p - 1].iter().enumerate() {
        row1[2 + i] = e;
    }
    row1[n] = eps[p - 1];
    for (i, &e) in eps[p..n - 1].iter().enumerate() {
        row2[p + 1 + i] = e;
    }
    row2[n] = eps[n - 1];
    Ok(MassMatrix::bayesian(vec![row1, row2])?)
}

/// Scenario for the staggered layout: Dempster gives `m(θ_{n+1}) = 1`, the
/// classic rule `m(θ_{n+1}) = ε_p ε_n`.
pub fn gen_class2(n: usize, p: usize, eps: &[f64]) -> Result<Scenario, GeneratorError> {
    gen_class2_matrix(&class2_layout(n, p, eps)?, n)
}

/// Scenario for any Bayesian matrix with a positive `target` column and a
/// zero in every other column.
pub fn gen_class2_matrix(matrix: &MassMatrix, target: usize) -> Result<Scenario, GeneratorError> {
    check_class2(matrix, target)?;
    let n = matrix.n();
    let sources = matrix.to_sources()?;
    let focus = matrix.labels()[target].clone();
    let mut checks = vec![Check::new(
        Rule::Dempster,
        ModelSpec::shafer(n)?,
        Expected::Masses(vec![(focus, 1.0)]),
    )];
    checks.extend(oracle_checks(&sources, n)?);
    Ok(scenario("G2", "generated tiny-column matrix", n, sources, checks))
}

/// Matrix over the singletons plus one uncertainty column `uncertainty`
/// holding `eps[i]` in row `i`; the rest of row `i` goes to the
/// `i`-th atom outside the uncertainty, cyclically.
pub fn class3_layout(n: usize, k: usize, uncertainty: &Element, eps: &[f64]) -> Result<MassMatrix, GeneratorError> {
    uncertainty.check_frame(n)?;
    if eps.len() != k {
        return Err(GeneratorError::InvalidLayout(format!("expected {k} epsilons, got {}", eps.len())));
    }
    for &e in eps {
        check_epsilon(e)?;
    }
    let inside = uncertainty.atoms_of();
    let outside: Vec<usize> = (0..n).filter(|a| !inside.contains(*a)).collect();
    let mut labels: Vec<Element> = (0..n).map(Element::atom).collect();
    let mut rows = Vec::with_capacity(k);
    for (i, &e) in eps.iter().enumerate() {
        let mut row = vec![0.0; n + 1];
        row[n] = e;
        match outside.get(i % outside.len().max(1)) {
            Some(&a) => row[a] = 1.0 - e,
            None => return Err(Violation::TotalIgnoranceColumn(n).into()),
        }
        rows.push(row);
    }
    if uncertainty.is_singleton() {
        return Err(Violation::NotAnUncertainty(n).into());
    }
    labels.push(uncertainty.clone());
    Ok(MassMatrix::new(n, labels, rows)?)
}

/// Scenario for [`class3_layout`]: Dempster puts all mass on the uncertainty.
pub fn gen_class3(n: usize, k: usize, uncertainty: &Element, eps: &[f64]) -> Result<Scenario, GeneratorError> {
    gen_class3_matrix(&class3_layout(n, k, uncertainty, eps)?, n)
}

pub fn gen_class3_matrix(matrix: &MassMatrix, target: usize) -> Result<Scenario, GeneratorError> {
    check_class3(matrix, target)?;
    let n = matrix.n();
    let sources = matrix.to_sources()?;
    let focus = matrix.labels()[target].clone();
    let mut checks = vec![Check::new(
        Rule::Dempster,
        ModelSpec::shafer(n)?,
        Expected::Masses(vec![(focus, 1.0)]),
    )];
    checks.extend(oracle_checks(&sources, n)?);
    Ok(scenario("G3", "generated uncertainty-column matrix", n, sources, checks))
}

/// A source certain of `θ_i` conditioned on `θ_j` (zero-based indices).
pub fn gen_class4(n: usize, i: usize, j: usize) -> Result<Scenario, GeneratorError> {
    if i == j {
        return Err(GeneratorError::SameAtom);
    }
    for a in [i, j] {
        if a >= n {
            return Err(LatticeError::AtomOutOfRange { atom: a, n }.into());
        }
    }
    let (x, y) = (Element::atom(i), Element::atom(j));
    let source = MassFunction::certain(n, x.clone())?;
    let checks = vec![
        Check::new(Rule::ConditionDempster, ModelSpec::shafer(n)?, Expected::TotalConflict),
        Check::new(Rule::ConditionDsm, ModelSpec::free(n)?, Expected::Masses(vec![(x.meet(&y), 1.0)])),
        Check::new(Rule::ConditionDsm, ModelSpec::shafer(n)?, Expected::Masses(vec![(x.join(&y), 1.0)])),
    ];
    let mut s = scenario("G4", "certain source conditioned on another singleton", n, vec![source], checks);
    s.event = Some(y);
    Ok(s)
}
