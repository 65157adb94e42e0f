use std::collections::BTreeMap;

use super::{
    common_frame, cores_of, for_each_tuple, is_total_conflict, meet_all, Combination, CombineOutcome, RuleError,
};
use crate::bba::MassFunction;
use crate::hyperlattice::{AtomSet, Element};
use crate::model::ModelSpec;

/// Total product mass of the core tuples whose conjunction is empty under
/// `model`. Under Shafer's model and power-set sources this is Dempster's
/// degree of conflict.
pub fn conflict_degree(sources: &[MassFunction], model: &ModelSpec) -> Result<f64, RuleError> {
    let n = common_frame(sources)?;
    if model.n() != n {
        return Err(RuleError::FrameMismatch { expected: n, found: model.n() });
    }
    let mut conflict = 0.0;
    let mut survivors = false;
    for_each_tuple(&cores_of(sources), |tuple, p| {
        if model.is_empty(&meet_all(tuple)) {
            conflict += p;
        } else {
            survivors = true;
        }
    })?;
    // With every tuple conflicting, k is exactly 1 whatever the rounding of the sum.
    Ok(if survivors { conflict } else { 1.0 })
}

/// Dempster's rule for `k >= 2` power-set sources in one pass.
///
/// Focal elements are treated as sets of atoms under Shafer's model; products
/// landing on disjoint sets are conflict and the rest is renormalized by
/// `1 - k`. Fails with [`RuleError::TotalConflict`] when `k` is 1.
pub fn dempster_combine(sources: &[MassFunction]) -> CombineOutcome {
    let n = common_frame(sources)?;
    if let Some(source) = sources.iter().position(|s| !s.is_powerset_bba()) {
        return Err(RuleError::ParadoxicalInput { index: source });
    }
    let cores: Vec<Vec<(AtomSet, f64)>> = sources
        .iter()
        .map(|s| s.iter().map(|(e, m)| (e.atoms_of(), m)).collect())
        .collect();

    let mut conflict = 0.0;
    let mut acc: BTreeMap<Element, f64> = BTreeMap::new();
    for_each_tuple(&cores, |tuple, p| {
        let common = tuple.iter().fold(AtomSet::full(n), |a, s| a.intersection(**s));
        if common.is_empty() {
            conflict += p;
        } else {
            *acc.entry(Element::union_of(common.iter())).or_insert(0.0) += p;
        }
    })?;
    if acc.is_empty() {
        conflict = 1.0;
    }

    if is_total_conflict(conflict) {
        return Err(RuleError::TotalConflict { conflict });
    }
    // 1 - k, summed from the surviving products.
    let normalizer: f64 = acc.values().sum();
    let mass = MassFunction::new(n, acc.into_iter().map(|(e, m)| (e, m / normalizer)))?;
    Ok(Combination { mass, conflict, ledger: Vec::new() })
}

/// Dempster's conditioning of `m` on the event `a`: the combination of `m`
/// with the certain bba `m_A`.
pub fn dempster_condition(m: &MassFunction, a: &Element) -> CombineOutcome {
    if a.is_empty() {
        return Err(RuleError::EmptyEvent);
    }
    a.check_frame(m.n())?;
    if !m.is_powerset_bba() {
        return Err(RuleError::ParadoxicalInput { index: 0 });
    }
    if !a.is_union_of_singletons() {
        return Err(RuleError::ParadoxicalInput { index: 1 });
    }
    let certain = MassFunction::certain(m.n(), a.clone())?;
    dempster_combine(&[m.clone(), certain])
}
