#![allow(dead_code)]

use std::collections::BTreeMap;

use dsmt_core::bba::MassFunction;
use dsmt_core::hyperlattice::{AtomSet, Element};
use rand::seq::SliceRandom;
use rand::Rng;

pub fn t(i: usize) -> Element {
    Element::atom(i - 1)
}

/// Random weights summing to 1.
pub fn weights<R: Rng>(rng: &mut R, k: usize) -> Vec<f64> {
    let raw: Vec<f64> = (0..k).map(|_| rng.gen_range(0.05..1.0)).collect();
    let total: f64 = raw.iter().sum();
    raw.into_iter().map(|w| w / total).collect()
}

/// A power-set bba whose focal elements are drawn from `pool` (atom masks).
pub fn bba_from_masks<R: Rng>(rng: &mut R, n: usize, pool: &[u32], max_focal: usize) -> MassFunction {
    let count = rng.gen_range(1..=max_focal.min(pool.len()));
    let chosen: Vec<u32> = pool.choose_multiple(rng, count).copied().collect();
    let w = weights(rng, count);
    MassFunction::new(
        n,
        chosen
            .into_iter()
            .zip(w)
            .map(|(mask, m)| (Element::union_of(AtomSet::from_bits(mask).iter()), m)),
    )
    .unwrap()
}

pub fn random_powerset_bba<R: Rng>(rng: &mut R, n: usize) -> MassFunction {
    let pool: Vec<u32> = (1u32..(1 << n)).collect();
    bba_from_masks(rng, n, &pool, 4)
}

/// A bba over the hyper-power set with focal elements drawn from `elements`.
pub fn random_dsm_bba<R: Rng>(rng: &mut R, n: usize, elements: &[Element]) -> MassFunction {
    let candidates: Vec<&Element> = elements.iter().filter(|e| !e.is_empty()).collect();
    let count = rng.gen_range(1..=4);
    let chosen: Vec<Element> = candidates.choose_multiple(rng, count).map(|e| (*e).clone()).collect();
    let w = weights(rng, chosen.len());
    MassFunction::new(n, chosen.into_iter().zip(w)).unwrap()
}

pub fn as_map(m: &MassFunction) -> BTreeMap<Element, f64> {
    m.iter().map(|(e, v)| (e.clone(), v)).collect()
}

/// Largest absolute difference over the union of the two key sets.
pub fn max_diff<K: Ord + Clone>(a: &BTreeMap<K, f64>, b: &BTreeMap<K, f64>) -> f64 {
    let keys: Vec<&K> = a.keys().chain(b.keys()).collect();
    keys.into_iter()
        .map(|k| (a.get(k).copied().unwrap_or(0.0) - b.get(k).copied().unwrap_or(0.0)).abs())
        .fold(0.0, f64::max)
}
