//! Elements of the hyper-power set: the free distributive lattice generated by
//! the atoms of a frame, together with the empty element.
//!
//! Every element is kept in union-of-intersections normal form: a sorted
//! antichain of conjunctions, each conjunction being a non-empty set of atoms.
//! There is no complement in this lattice, so the monotone normal form is
//! unique and `meet`/`join` reduce to set algebra on the conjunctions.

use std::cmp::Ordering;
use std::fmt;

use thiserror::Error;

/// Largest frame an [`Element`] can address (atoms are bits of a `u32`).
pub const MAX_ATOMS: usize = 32;
/// Enumeration cap used by [`enumerate_hyperpowerset`].
pub const DEFAULT_ENUMERATION_CAP: usize = 4;
/// Absolute cap for enumeration and Venn refinement.
pub const HARD_ENUMERATION_CAP: usize = 5;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LatticeError {
    #[error("atom index {atom} is out of range for a frame of size {n}")]
    AtomOutOfRange { atom: usize, n: usize },
    #[error("frame size must be at least 1")]
    EmptyFrame,
    #[error("frame size {n} exceeds the supported maximum of {max}")]
    FrameTooLarge { n: usize, max: usize },
    #[error("frame size {n} exceeds the enumeration cap of {cap}")]
    CapacityExceeded { n: usize, cap: usize },
    #[error("a conjunction must contain at least one atom")]
    EmptyConjunction,
}

fn check_frame(n: usize) -> Result<(), LatticeError> {
    if n == 0 {
        Err(LatticeError::EmptyFrame)
    } else if n > MAX_ATOMS {
        Err(LatticeError::FrameTooLarge { n, max: MAX_ATOMS })
    } else {
        Ok(())
    }
}

/// Index of a singleton hypothesis, zero based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct AtomIndex(u32);

impl AtomIndex {
    pub fn new(value: usize, n: usize) -> Result<Self, LatticeError> {
        check_frame(n)?;
        if value >= n {
            return Err(LatticeError::AtomOutOfRange { atom: value, n });
        }
        Ok(AtomIndex(value as u32))
    }

    pub fn get(self) -> usize {
        self.0 as usize
    }
}

/// A set of atoms stored as a bit mask.
///
/// Ordered lexicographically by the sorted list of atom indices, so `{0,1}`
/// sorts before `{0,2}` and `{1}` sorts after both.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct AtomSet(u32);

impl AtomSet {
    pub const EMPTY: AtomSet = AtomSet(0);

    pub fn from_bits(bits: u32) -> Self {
        AtomSet(bits)
    }

    /// Panics if an index is not below [`MAX_ATOMS`].
    pub fn from_atoms<I: IntoIterator<Item = usize>>(atoms: I) -> Self {
        let mut bits = 0u32;
        for a in atoms {
            assert!(a < MAX_ATOMS, "atom index {a} exceeds {MAX_ATOMS}");
            bits |= 1 << a;
        }
        AtomSet(bits)
    }

    /// All atoms of a frame of size `n`.
    pub fn full(n: usize) -> Self {
        if n >= 32 {
            AtomSet(u32::MAX)
        } else {
            AtomSet((1u32 << n) - 1)
        }
    }

    pub fn bits(self) -> u32 {
        self.0
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn contains(self, atom: usize) -> bool {
        atom < MAX_ATOMS && self.0 & (1 << atom) != 0
    }

    pub fn is_subset(self, other: AtomSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn union(self, other: AtomSet) -> AtomSet {
        AtomSet(self.0 | other.0)
    }

    pub fn intersection(self, other: AtomSet) -> AtomSet {
        AtomSet(self.0 & other.0)
    }

    /// Highest atom index plus one, or 0 when empty.
    pub fn span(self) -> usize {
        (32 - self.0.leading_zeros()) as usize
    }

    pub fn iter(self) -> impl Iterator<Item = usize> {
        let mut bits = self.0;
        std::iter::from_fn(move || {
            if bits == 0 {
                None
            } else {
                let a = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                Some(a)
            }
        })
    }
}

impl Ord for AtomSet {
    fn cmp(&self, other: &Self) -> Ordering {
        let (mut a, mut b) = (self.0, other.0);
        loop {
            match (a == 0, b == 0) {
                (true, true) => return Ordering::Equal,
                (true, false) => return Ordering::Less,
                (false, true) => return Ordering::Greater,
                _ => {
                    let (x, y) = (a.trailing_zeros(), b.trailing_zeros());
                    if x != y {
                        return x.cmp(&y);
                    }
                    a &= a - 1;
                    b &= b - 1;
                }
            }
        }
    }
}

impl PartialOrd for AtomSet {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// A canonical member of the hyper-power set.
///
/// The empty term list is the empty element. Equality is structural, which is
/// sound because the antichain form is unique.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Element {
    terms: Vec<AtomSet>,
}

/// Drops conjunctions that contain another conjunction and sorts the rest.
fn reduce(mut terms: Vec<AtomSet>) -> Vec<AtomSet> {
    terms.sort_by_key(|t| (t.len(), t.bits()));
    terms.dedup();
    let mut kept: Vec<AtomSet> = Vec::with_capacity(terms.len());
    for t in terms {
        if !kept.iter().any(|k| k.is_subset(t)) {
            kept.push(t);
        }
    }
    kept.sort();
    kept
}

impl Element {
    pub fn empty() -> Self {
        Element { terms: Vec::new() }
    }

    /// The singleton `θ_{atom+1}`. Panics if `atom >= MAX_ATOMS`.
    pub fn atom(atom: usize) -> Self {
        Element {
            terms: vec![AtomSet::from_atoms([atom])],
        }
    }

    /// Intersection of the given atoms; empty input gives the empty element.
    pub fn intersection_of<I: IntoIterator<Item = usize>>(atoms: I) -> Self {
        let set = AtomSet::from_atoms(atoms);
        if set.is_empty() {
            Element::empty()
        } else {
            Element { terms: vec![set] }
        }
    }

    /// Union of the given atoms; empty input gives the empty element.
    pub fn union_of<I: IntoIterator<Item = usize>>(atoms: I) -> Self {
        Element {
            terms: AtomSet::from_atoms(atoms).iter().map(|a| AtomSet::from_atoms([a])).collect(),
        }
    }

    /// Builds the canonical element for a union of conjunctions.
    pub fn from_atom_sets<I: IntoIterator<Item = AtomSet>>(terms: I) -> Result<Self, LatticeError> {
        let terms: Vec<AtomSet> = terms.into_iter().collect();
        if terms.iter().any(|t| t.is_empty()) {
            return Err(LatticeError::EmptyConjunction);
        }
        Ok(Element { terms: reduce(terms) })
    }

    pub fn terms(&self) -> &[AtomSet] {
        &self.terms
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Smallest frame size that contains every atom of this element.
    pub fn frame_span(&self) -> usize {
        self.atoms_of().span()
    }

    pub fn check_frame(&self, n: usize) -> Result<(), LatticeError> {
        check_frame(n)?;
        let span = self.frame_span();
        if span > n {
            return Err(LatticeError::AtomOutOfRange { atom: span - 1, n });
        }
        Ok(())
    }

    pub fn meet(&self, other: &Element) -> Element {
        let mut terms = Vec::with_capacity(self.terms.len() * other.terms.len());
        for a in &self.terms {
            for b in &other.terms {
                terms.push(a.union(*b));
            }
        }
        Element { terms: reduce(terms) }
    }

    pub fn join(&self, other: &Element) -> Element {
        let mut terms = Vec::with_capacity(self.terms.len() + other.terms.len());
        terms.extend_from_slice(&self.terms);
        terms.extend_from_slice(&other.terms);
        Element { terms: reduce(terms) }
    }

    /// Lattice order: every conjunction of `self` lies below some conjunction
    /// of `other`.
    pub fn leq(&self, other: &Element) -> bool {
        self.terms.iter().all(|a| other.terms.iter().any(|b| b.is_subset(*a)))
    }

    /// The atoms appearing anywhere in the element (`u(X)` as a set).
    pub fn atoms_of(&self) -> AtomSet {
        self.terms.iter().fold(AtomSet::EMPTY, |acc, t| acc.union(*t))
    }

    /// `u(X)`: the union of the singletons that compose the element.
    pub fn union_of_atoms(&self) -> Element {
        Element::union_of(self.atoms_of().iter())
    }

    /// Replaces every conjunction by the union of its atoms.
    pub fn swap_conjunctions(&self) -> Element {
        self.terms
            .iter()
            .fold(Element::empty(), |acc, t| acc.join(&Element::union_of(t.iter())))
    }

    /// True when the element is a union of singletons, i.e. a member of the
    /// classical power set.
    pub fn is_union_of_singletons(&self) -> bool {
        self.terms.iter().all(|t| t.len() == 1)
    }

    pub fn is_singleton(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].len() == 1
    }

    /// Renders with `&`/`|`, using `names[i]` for atom `i` when available and
    /// `t{i+1}` otherwise. The empty element renders as `0`.
    pub fn display_with<S: AsRef<str>>(&self, names: &[S]) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let name = |a: usize| match names.get(a) {
            Some(s) => s.as_ref().to_string(),
            None => format!("t{}", a + 1),
        };
        self.terms
            .iter()
            .map(|t| t.iter().map(name).collect::<Vec<_>>().join("&"))
            .collect::<Vec<_>>()
            .join("|")
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_with::<&str>(&[]))
    }
}

/// Ordered by number of conjunctions, then lexicographically by conjunction.
impl Ord for Element {
    fn cmp(&self, other: &Self) -> Ordering {
        self.terms
            .len()
            .cmp(&other.terms.len())
            .then_with(|| self.terms.cmp(&other.terms))
    }
}

impl PartialOrd for Element {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// `I_t`, the union of all atoms of the frame.
pub fn total_ignorance(n: usize) -> Result<Element, LatticeError> {
    check_frame(n)?;
    Ok(Element::union_of(0..n))
}

/// Expression tree over atoms with `∩` and `∪`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Expr {
    Empty,
    Atom(usize),
    Meet(Box<Expr>, Box<Expr>),
    Join(Box<Expr>, Box<Expr>),
}

impl Expr {
    pub fn meet(a: Expr, b: Expr) -> Expr {
        Expr::Meet(Box::new(a), Box::new(b))
    }

    pub fn join(a: Expr, b: Expr) -> Expr {
        Expr::Join(Box::new(a), Box::new(b))
    }
}

/// Normal form of an expression over a frame of size `n`.
pub fn canonicalize(expr: &Expr, n: usize) -> Result<Element, LatticeError> {
    check_frame(n)?;
    fn go(expr: &Expr, n: usize) -> Result<Element, LatticeError> {
        match expr {
            Expr::Empty => Ok(Element::empty()),
            Expr::Atom(a) if *a < n => Ok(Element::atom(*a)),
            Expr::Atom(a) => Err(LatticeError::AtomOutOfRange { atom: *a, n }),
            Expr::Meet(a, b) => Ok(go(a, n)?.meet(&go(b, n)?)),
            Expr::Join(a, b) => Ok(go(a, n)?.join(&go(b, n)?)),
        }
    }
    go(expr, n)
}

/// All elements of the hyper-power set for `n <= DEFAULT_ENUMERATION_CAP`.
pub fn enumerate_hyperpowerset(n: usize) -> Result<Vec<Element>, LatticeError> {
    enumerate_hyperpowerset_with_cap(n, DEFAULT_ENUMERATION_CAP)
}

/// All elements of the hyper-power set, `∅` included, in [`Element`] order.
///
/// Generated as the antichains of non-empty atom sets; the cap may be raised
/// up to [`HARD_ENUMERATION_CAP`].
pub fn enumerate_hyperpowerset_with_cap(n: usize, cap: usize) -> Result<Vec<Element>, LatticeError> {
    check_frame(n)?;
    let cap = cap.min(HARD_ENUMERATION_CAP);
    if n > cap {
        return Err(LatticeError::CapacityExceeded { n, cap });
    }
    let subsets: Vec<AtomSet> = (1u32..(1 << n)).map(AtomSet).collect();
    let mut out = Vec::new();
    let mut chosen = Vec::new();
    antichains(&subsets, 0, &mut chosen, &mut out);
    out.sort();
    Ok(out)
}

fn antichains(subsets: &[AtomSet], from: usize, chosen: &mut Vec<AtomSet>, out: &mut Vec<Element>) {
    out.push(Element { terms: reduce(chosen.clone()) });
    for i in from..subsets.len() {
        let s = subsets[i];
        if chosen.iter().all(|c| !c.is_subset(s) && !s.is_subset(*c)) {
            chosen.push(s);
            antichains(subsets, i + 1, chosen, out);
            chosen.pop();
        }
    }
}

/// A cell of the Venn diagram of the frame: the points lying in exactly the
/// atoms of `atoms_in`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VennRegion(AtomSet);

impl VennRegion {
    pub fn new(atoms_in: AtomSet) -> Option<Self> {
        (!atoms_in.is_empty()).then_some(VennRegion(atoms_in))
    }

    pub fn atoms_in(self) -> AtomSet {
        self.0
    }
}

/// A set of Venn regions of a frame with at most [`HARD_ENUMERATION_CAP`]
/// atoms, stored as a bitset indexed by the region's atom mask.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct RegionSet(u64);

impl RegionSet {
    pub fn from_regions<I: IntoIterator<Item = VennRegion>>(regions: I) -> Self {
        let mut bits = 0u64;
        for r in regions {
            let mask = r.0.bits();
            assert!(mask < 64, "region outside the refinement cap");
            bits |= 1 << mask;
        }
        RegionSet(bits)
    }

    pub fn bits(self) -> u64 {
        self.0
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn contains(self, region: VennRegion) -> bool {
        let mask = region.0.bits();
        mask < 64 && self.0 & (1 << mask) != 0
    }

    pub fn intersection(self, other: RegionSet) -> RegionSet {
        RegionSet(self.0 & other.0)
    }

    pub fn union(self, other: RegionSet) -> RegionSet {
        RegionSet(self.0 | other.0)
    }

    pub fn iter(self) -> impl Iterator<Item = VennRegion> {
        let mut bits = self.0;
        std::iter::from_fn(move || {
            if bits == 0 {
                None
            } else {
                let mask = bits.trailing_zeros();
                bits &= bits - 1;
                Some(VennRegion(AtomSet(mask)))
            }
        })
    }

    /// The element whose Venn image is this set, assuming the set is an
    /// up-set of regions: its minimal regions are the conjunctions.
    pub fn minimal_element(self) -> Element {
        let regions: Vec<AtomSet> = self.iter().map(|r| r.0).collect();
        Element {
            terms: reduce(regions),
        }
    }
}

/// Maps an element to the regions of the refined frame it covers.
pub fn venn_regions(a: &Element, n: usize) -> Result<RegionSet, LatticeError> {
    check_frame(n)?;
    if n > HARD_ENUMERATION_CAP {
        return Err(LatticeError::CapacityExceeded { n, cap: HARD_ENUMERATION_CAP });
    }
    a.check_frame(n)?;
    let mut bits = 0u64;
    for mask in 1u32..(1 << n) {
        let region = AtomSet(mask);
        if a.terms.iter().any(|t| t.is_subset(region)) {
            bits |= 1 << mask;
        }
    }
    Ok(RegionSet(bits))
}
