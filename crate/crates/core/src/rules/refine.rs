use std::collections::BTreeMap;

use super::{common_frame, for_each_tuple, is_total_conflict, RuleError};
use crate::bba::MassFunction;
use crate::hyperlattice::{venn_regions, Element, RegionSet};

/// A mass function on the power set of the Venn regions of a frame.
#[derive(Debug, Clone, PartialEq)]
pub struct RefinedMass {
    pub n: usize,
    pub masses: BTreeMap<RegionSet, f64>,
    /// Conflict met by Dempster's rule on the refined frame.
    pub conflict: f64,
}

impl RefinedMass {
    /// Maps every focal region set back to the element it is the image of.
    pub fn pullback(&self) -> BTreeMap<Element, f64> {
        self.masses.iter().map(|(r, m)| (r.minimal_element(), *m)).collect()
    }
}

/// The image of a bba on the refined frame.
pub fn venn_image(m: &MassFunction) -> Result<BTreeMap<RegionSet, f64>, RuleError> {
    let mut out = BTreeMap::new();
    for (e, v) in m.iter() {
        *out.entry(venn_regions(e, m.n())?).or_insert(0.0) += v;
    }
    Ok(out)
}

/// Refines every source to the Venn regions of its frame and combines the
/// refined sources with Dempster's rule, where intersection is plain set
/// intersection of regions.
///
/// Every non-empty element covers the region inside all atoms, so the refined
/// conflict is always zero and no renormalization takes place.
pub fn refine_and_dempster(sources: &[MassFunction]) -> Result<RefinedMass, RuleError> {
    let n = common_frame(sources)?;
    let cores: Vec<Vec<(RegionSet, f64)>> = sources
        .iter()
        .map(|s| venn_image(s).map(|img| img.into_iter().collect()))
        .collect::<Result<_, _>>()?;

    let mut conflict = 0.0;
    let mut acc: BTreeMap<RegionSet, f64> = BTreeMap::new();
    for_each_tuple(&cores, |tuple, p| {
        let common = tuple[1..].iter().fold(*tuple[0], |a, r| a.intersection(**r));
        if common.is_empty() {
            conflict += p;
        } else {
            *acc.entry(common).or_insert(0.0) += p;
        }
    })?;
    if is_total_conflict(conflict) {
        return Err(RuleError::TotalConflict { conflict });
    }
    assert!(conflict == 0.0, "refined frame produced conflict {conflict}");
    let normalizer = 1.0 - conflict;
    for v in acc.values_mut() {
        *v /= normalizer;
    }
    Ok(RefinedMass { n, masses: acc, conflict })
}
