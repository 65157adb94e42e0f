use std::collections::BTreeMap;

use super::{
    common_frame, cores_of, for_each_tuple, join_all, meet_all, Combination, CombineOutcome, RuleError, Transfer,
    TransferPolicy, TransferTerm,
};
use crate::bba::MassFunction;
use crate::hyperlattice::{total_ignorance, Element};
use crate::model::ModelSpec;

/// Classic DSm rule on the free model: every product is credited to the
/// canonical conjunction of its focal elements. No normalization.
pub fn dsm_classic_combine(sources: &[MassFunction]) -> Result<MassFunction, RuleError> {
    let n = common_frame(sources)?;
    let mut acc: BTreeMap<Element, f64> = BTreeMap::new();
    for_each_tuple(&cores_of(sources), |tuple, p| {
        *acc.entry(meet_all(tuple)).or_insert(0.0) += p;
    })?;
    Ok(MassFunction::new(n, acc)?)
}

/// DSm hybrid rule for a model, applied to all sources in one pass.
///
/// For each core tuple `(X_1..X_k)` with product `p`:
/// * the conjunction is non-empty under the model: `p` stays on it (S1);
/// * every `X_i` is empty: `p` goes to `U = u(X_1) ∪ … ∪ u(X_k)`, or to the
///   total ignorance when `U` is empty too (S2);
/// * otherwise `p` goes to the target chosen by `policy` (S3).
///
/// S1 credits the meet reduced under the model, so `θ1 ∪ (θ2∩θ3)` lands on
/// `θ1` under Shafer's model. S2 and S3 targets are kept as written.
///
/// The S2 condition is read as "credit `U` if it survives the model, else
/// `I_t`", which is the transfer described for Shafer's model.
pub fn dsm_hybrid_combine(model: &ModelSpec, sources: &[MassFunction], policy: TransferPolicy) -> CombineOutcome {
    let n = common_frame(sources)?;
    if model.n() != n {
        return Err(RuleError::FrameMismatch { expected: n, found: model.n() });
    }
    let ignorance = total_ignorance(n)?;
    let mut acc: BTreeMap<Element, f64> = BTreeMap::new();
    let mut ledger = Vec::new();
    let mut conflict = 0.0;

    for_each_tuple(&cores_of(sources), |tuple, p| {
        let meet = meet_all(tuple);
        let (destination, term) = if !model.is_empty(&meet) {
            (model.reduce(&meet), TransferTerm::S1)
        } else if tuple.iter().all(|x| model.is_empty(x)) {
            let u = tuple
                .iter()
                .fold(Element::empty(), |acc, x| acc.join(&x.union_of_atoms()));
            let target = if model.is_empty(&u) { ignorance.clone() } else { u };
            (target, TransferTerm::S2)
        } else {
            let target = match policy {
                TransferPolicy::S3Join => join_all(tuple),
                TransferPolicy::ReducedSwap => {
                    let swapped = meet.swap_conjunctions();
                    if model.is_empty(&swapped) {
                        join_all(tuple)
                    } else {
                        swapped
                    }
                }
            };
            (target, TransferTerm::S3)
        };
        if term != TransferTerm::S1 {
            conflict += p;
        }
        debug_assert_eq!(model.phi(&destination), 1);
        *acc.entry(destination.clone()).or_insert(0.0) += p;
        ledger.push(Transfer {
            focal: tuple.iter().map(|x| (*x).clone()).collect(),
            product: p,
            destination,
            term,
        });
    })?;

    let mass = MassFunction::new(n, acc)?;
    Ok(Combination { mass, conflict, ledger })
}

/// DSm conditioning of `m` on `a`: the hybrid rule applied to `m` and `m_A`.
/// On the free model every product stays in place, which is the classic rule.
pub fn dsm_condition(m: &MassFunction, a: &Element, model: &ModelSpec, policy: TransferPolicy) -> CombineOutcome {
    if a.is_empty() {
        return Err(RuleError::EmptyEvent);
    }
    a.check_frame(m.n())?;
    let sources = [m.clone(), MassFunction::certain(m.n(), a.clone())?];
    dsm_hybrid_combine(model, &sources, policy)
}
