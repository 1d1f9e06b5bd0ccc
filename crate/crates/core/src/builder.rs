//! Forward construction of type-`(v, k)` groups along a strict divisor
//! chain, with marker bookkeeping.
//!
//! The recursion starts from the cyclic group generated by `(1/m)^[mk]` and
//! performs one extension per later chain step.  Each step is labelled by a
//! *marker*: the generator it adjoined, remembered so that later steps can
//! form their step sum as a subset sum of live markers.  Live markers have
//! pairwise disjoint supports and value `1/d_i` on their support, so a
//! marker subset is recoverable from its sum by support inspection alone;
//! that uniqueness is what makes the construction data `(chain, subsets)` a
//! faithful label for the resulting class.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::ToString;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::extension;
use crate::group_core::HeightedGroup;
use crate::qz_arith::{ModOneVector, Rational};

/// A live construction symbol: the generator adjoined at `step`, in the
/// current ambient width.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Marker {
    step: usize,
    element: ModOneVector,
}

impl Marker {
    pub fn new(step: usize, element: ModOneVector) -> Self {
        Marker { step, element }
    }

    pub fn step(&self) -> usize {
        self.step
    }

    pub fn element(&self) -> &ModOneVector {
        &self.element
    }
}

/// The set of live markers attached to a group mid-construction.  Markers
/// are kept sorted by creation step and share the group's ambient width.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct MarkerSet {
    width: usize,
    markers: Vec<Marker>,
}

impl MarkerSet {
    /// Builds a marker set, enforcing width agreement, distinct steps and
    /// pairwise disjoint supports.
    pub fn new(width: usize, markers: Vec<Marker>) -> Result<Self> {
        let mut markers = markers;
        markers.sort_by_key(|m| m.step);
        if markers.windows(2).any(|w| w[0].step == w[1].step) {
            return Err(Error::BadParameter("duplicate marker step".to_string()));
        }
        let mut used = BTreeSet::new();
        for m in &markers {
            if m.element.width() != width {
                return Err(Error::LengthMismatch {
                    left: m.element.width(),
                    right: width,
                });
            }
            for i in m.element.support() {
                if !used.insert(i) {
                    return Err(Error::Inconsistent(format!(
                        "marker supports overlap at coordinate {i}"
                    )));
                }
            }
        }
        Ok(MarkerSet { width, markers })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn markers(&self) -> &[Marker] {
        &self.markers
    }

    pub fn len(&self) -> usize {
        self.markers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.markers.is_empty()
    }

    /// Creation steps of the live markers, ascending.
    pub fn steps(&self) -> Vec<usize> {
        self.markers.iter().map(|m| m.step).collect()
    }

    pub fn get(&self, step: usize) -> Option<&Marker> {
        self.markers.iter().find(|m| m.step == step)
    }

    /// Sum of the markers with the given steps.  Supports are disjoint, so
    /// the sum never wraps.
    pub fn subset_sum(&self, steps: &BTreeSet<usize>) -> Result<ModOneVector> {
        let mut acc = ModOneVector::zero(self.width);
        for &step in steps {
            let marker = self.get(step).ok_or(Error::UnknownMarker { step })?;
            acc = acc.add_mod1(&marker.element)?;
        }
        Ok(acc)
    }

    /// Re-checks the marker invariants against the group they belong to:
    /// every marker is an element of `g`, supports are pairwise disjoint,
    /// and each marker equals `1/d_i` on its support.
    pub fn validate_for(&self, g: &HeightedGroup) -> Result<()> {
        if self.width != g.width() {
            return Err(Error::LengthMismatch {
                left: self.width,
                right: g.width(),
            });
        }
        for m in &self.markers {
            if !g.contains(&m.element) {
                return Err(Error::NotInGroup(format!(
                    "marker {} = ({})",
                    m.step, m.element
                )));
            }
            for (i, value) in m.element.entries().iter().enumerate() {
                if value.is_zero() {
                    continue;
                }
                let expected = Rational::new(BigInt::one(), BigInt::from(g.coord_orders()[i]));
                if *value != expected {
                    return Err(Error::Inconsistent(format!(
                        "marker {} has value {value} at coordinate {i}, expected {expected}",
                        m.step
                    )));
                }
            }
        }
        // Disjointness is a MarkerSet construction invariant; re-check it
        // here so a corrupted set cannot pass.
        let mut used = BTreeSet::new();
        for m in &self.markers {
            for i in m.element.support() {
                if !used.insert(i) {
                    return Err(Error::Inconsistent(format!(
                        "marker supports overlap at coordinate {i}"
                    )));
                }
            }
        }
        Ok(())
    }

    fn pad(&self, extra: usize) -> Self {
        MarkerSet {
            width: self.width + extra,
            markers: self
                .markers
                .iter()
                .map(|m| Marker {
                    step: m.step,
                    element: m.element.pad(extra),
                })
                .collect(),
        }
    }
}

/// Construction data for one equivalence class: the strict divisor chain
/// `1 = M_0 < M_1 < ... < M_s = v` and, for each step `i`, the subset `J_i`
/// of live marker steps consumed by that step (`J_1` is always empty).
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub struct ClassData {
    k: u64,
    chain: Vec<u64>,
    subsets: Vec<BTreeSet<usize>>,
}

impl ClassData {
    /// Validates the chain (strictly increasing divisor chain from 1 with
    /// ratios >= 2), the subset count (one per step), `J_1 = {}`, and that
    /// each `J_i` draws only on markers alive entering step `i`.
    pub fn new(k: u64, chain: Vec<u64>, subsets: Vec<BTreeSet<usize>>) -> Result<Self> {
        if k < 1 {
            return Err(Error::BadParameter("class data needs k >= 1".to_string()));
        }
        if chain.len() < 2 || chain[0] != 1 {
            return Err(Error::BadParameter(format!(
                "chain must run from 1 to v, got {chain:?}"
            )));
        }
        for w in chain.windows(2) {
            if w[1] % w[0] != 0 || w[1] / w[0] < 2 {
                return Err(Error::BadParameter(format!(
                    "chain step {} -> {} is not a strict divisor step",
                    w[0], w[1]
                )));
            }
        }
        let steps = chain.len() - 1;
        if subsets.len() != steps {
            return Err(Error::BadParameter(format!(
                "expected {steps} subsets, got {}",
                subsets.len()
            )));
        }
        if !subsets[0].is_empty() {
            return Err(Error::BadParameter(
                "the first step consumes no markers".to_string(),
            ));
        }
        let mut alive: BTreeSet<usize> = BTreeSet::new();
        alive.insert(1);
        for (i, subset) in subsets.iter().enumerate().skip(1) {
            let step = i + 1;
            if let Some(&bad) = subset.iter().find(|s| !alive.contains(s)) {
                return Err(Error::BadParameter(format!(
                    "step {step} consumes marker {bad}, which is not alive"
                )));
            }
            for s in subset {
                alive.remove(s);
            }
            alive.insert(step);
        }
        Ok(ClassData { k, chain, subsets })
    }

    pub fn k(&self) -> u64 {
        self.k
    }

    pub fn chain(&self) -> &[u64] {
        &self.chain
    }

    pub fn subsets(&self) -> &[BTreeSet<usize>] {
        &self.subsets
    }

    /// Number of extension steps `s`.
    pub fn steps(&self) -> usize {
        self.chain.len() - 1
    }

    /// The group order `v` this data builds.
    pub fn v(&self) -> u64 {
        *self.chain.last().expect("chain is nonempty")
    }
}

impl fmt::Display for ClassData {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "k={} chain=", self.k)?;
        for (i, m) in self.chain.iter().enumerate() {
            if i > 0 {
                write!(f, "<")?;
            }
            write!(f, "{m}")?;
        }
        write!(f, " subsets=")?;
        for (i, subset) in self.subsets.iter().enumerate() {
            if i > 0 {
                write!(f, ";")?;
            }
            write!(f, "{{")?;
            for (j, s) in subset.iter().enumerate() {
                if j > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{s}")?;
            }
            write!(f, "}}")?;
        }
        Ok(())
    }
}

/// A finished build: the group, its live markers, and the adjoined
/// generators `c_1, ..., c_s` padded to the final width.
#[derive(Clone, Debug)]
pub struct BuiltPair {
    pub group: HeightedGroup,
    pub markers: MarkerSet,
    pub generators: Vec<ModOneVector>,
}

/// Starts the recursion: the cyclic group generated by `c = (1/m)^[mk]`,
/// of type `(m, k)`, with the single marker `(1, c)`.
pub fn init_pair(m: u64, k: u64) -> Result<(HeightedGroup, MarkerSet)> {
    if m < 2 || k < 1 {
        return Err(Error::BadParameter(format!(
            "initial step needs m >= 2 and k >= 1, got m={m}, k={k}"
        )));
    }
    let width = usize::try_from(m * k)
        .map_err(|_| Error::BadParameter("initial width out of range".to_string()))?;
    let c = ModOneVector::new(vec![Rational::new(BigInt::one(), BigInt::from(m)); width])?;
    let elements = (0..m).map(|t| c.scale_mod1(t)).collect();
    let group = HeightedGroup::from_closed(elements)?;
    let markers = MarkerSet::new(
        width,
        vec![Marker {
            step: 1,
            element: c,
        }],
    )?;
    markers.validate_for(&group)?;
    Ok((group, markers))
}

/// Performs one construction step: consumes the markers in `subset`, forms
/// their sum `h`, extends `g` by `(h, n)`, and returns the extended group,
/// the updated marker set (survivors padded, plus the new generator under
/// `step_index`), and the adjoined generator.
pub fn step_pair(
    g: &HeightedGroup,
    markers: &MarkerSet,
    subset: &BTreeSet<usize>,
    n: u64,
    step_index: usize,
) -> Result<(HeightedGroup, MarkerSet, ModOneVector)> {
    markers.validate_for(g)?;
    if markers.get(step_index).is_some() {
        return Err(Error::BadParameter(format!(
            "step index {step_index} is already a live marker"
        )));
    }
    let h = markers.subset_sum(subset)?;
    let (extended, c) = extension::extend(g, &h, n)?;
    let pad = extended.width() - g.width();
    let mut survivors = markers.pad(pad).markers;
    survivors.retain(|m| !subset.contains(&m.step));
    survivors.push(Marker {
        step: step_index,
        element: c.clone(),
    });
    let updated = MarkerSet::new(extended.width(), survivors)?;
    updated.validate_for(&extended)?;
    Ok((extended, updated, c))
}

/// Recovers the consumed subset from a step sum: `J` is the set of markers
/// whose support meets `supp(h)`, and the decomposition is valid only if
/// those markers sum exactly to `h`.
pub fn subset_sum_decompose(markers: &MarkerSet, h: &ModOneVector) -> Result<BTreeSet<usize>> {
    if h.width() != markers.width() {
        return Err(Error::LengthMismatch {
            left: h.width(),
            right: markers.width(),
        });
    }
    let support: BTreeSet<usize> = h.support().into_iter().collect();
    let subset: BTreeSet<usize> = markers
        .markers()
        .iter()
        .filter(|m| m.element.support().iter().any(|i| support.contains(i)))
        .map(|m| m.step)
        .collect();
    let sum = markers.subset_sum(&subset)?;
    if sum != *h {
        return Err(Error::NoSubsetDecomposition(format!("({h})")));
    }
    Ok(subset)
}

/// Builds the group described by `data`, following the chain step by step.
pub fn build_pair_from_data(data: &ClassData) -> Result<BuiltPair> {
    let chain = data.chain();
    let (mut group, mut markers) = init_pair(chain[1], data.k())?;
    let mut generators: Vec<(usize, ModOneVector)> =
        vec![(group.width(), markers.markers()[0].element().clone())];
    for i in 2..chain.len() {
        let n = chain[i] / chain[i - 1];
        let subset = &data.subsets()[i - 1];
        let (next, next_markers, c) = step_pair(&group, &markers, subset, n, i)?;
        generators.push((next.width(), c));
        group = next;
        markers = next_markers;
    }
    let width = group.width();
    let generators = generators
        .into_iter()
        .map(|(w, c)| c.pad(width - w))
        .collect();
    Ok(BuiltPair {
        group,
        markers,
        generators,
    })
}

/// Builds just the group described by `data`.
pub fn build_from_data(data: &ClassData) -> Result<HeightedGroup> {
    Ok(build_pair_from_data(data)?.group)
}

/// Renders subsets as bitmask integers over the live markers at each step
/// (bit `b` = the `b`-th live marker in creation order).  Used for compact
/// textual output; `data` is the authoritative form.
pub fn subset_bitmasks(data: &ClassData) -> Vec<u64> {
    let mut alive: Vec<usize> = Vec::new();
    let mut masks = Vec::with_capacity(data.steps());
    for (i, subset) in data.subsets().iter().enumerate() {
        let step = i + 1;
        let mut mask = 0u64;
        for (bit, s) in alive.iter().enumerate() {
            if subset.contains(s) {
                mask |= 1 << bit;
            }
        }
        masks.push(mask);
        alive.retain(|s| !subset.contains(s));
        alive.push(step);
    }
    masks
}

#[cfg(test)]
mod tests {
    use super::*;

    fn vector(blocks: &[(i64, i64, usize)]) -> ModOneVector {
        ModOneVector::from_blocks(blocks).unwrap()
    }

    fn data(k: u64, chain: &[u64], subsets: &[&[usize]]) -> ClassData {
        ClassData::new(
            k,
            chain.to_vec(),
            subsets
                .iter()
                .map(|s| s.iter().copied().collect())
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn init_pair_is_the_uniform_cyclic_group() {
        let (g, markers) = init_pair(2, 1).unwrap();
        assert_eq!(g.order(), 2);
        assert_eq!(g.width(), 2);
        assert_eq!(markers.steps(), vec![1]);
        assert_eq!(markers.markers()[0].element(), &vector(&[(1, 2, 2)]));

        let (g, _) = init_pair(3, 2).unwrap();
        assert_eq!(g.width(), 6);
        assert_eq!(g.heights(), &[0, 2, 4]);

        assert!(init_pair(1, 1).is_err());
        assert!(init_pair(2, 0).is_err());
    }

    #[test]
    fn class_data_validation() {
        assert!(ClassData::new(1, vec![1, 2, 4], vec![BTreeSet::new(), BTreeSet::new()]).is_ok());
        // Chain must start at 1.
        assert!(ClassData::new(1, vec![2, 4], vec![BTreeSet::new()]).is_err());
        // Ratios must be >= 2.
        assert!(ClassData::new(1, vec![1, 2, 2], vec![BTreeSet::new(), BTreeSet::new()]).is_err());
        // First subset must be empty.
        assert!(ClassData::new(
            1,
            vec![1, 2, 4],
            vec![[1].into_iter().collect(), BTreeSet::new()]
        )
        .is_err());
        // Subsets may only consume live markers.
        assert!(ClassData::new(
            1,
            vec![1, 2, 4, 8],
            vec![
                BTreeSet::new(),
                [1].into_iter().collect(),
                [1].into_iter().collect()
            ]
        )
        .is_err());
        // Consuming marker 1 then creating 2 leaves {2} alive for step 3.
        assert!(ClassData::new(
            1,
            vec![1, 2, 4, 8],
            vec![
                BTreeSet::new(),
                [1].into_iter().collect(),
                [2].into_iter().collect()
            ]
        )
        .is_ok());
    }

    #[test]
    fn two_step_build_reproduces_extension_examples() {
        // J_2 = {}: fresh block of 4 new coordinates.
        let built = build_pair_from_data(&data(1, &[1, 2, 4], &[&[], &[]])).unwrap();
        assert_eq!(built.group.width(), 6);
        assert_eq!(
            built.generators,
            vec![
                vector(&[(1, 2, 2), (0, 1, 4)]),
                vector(&[(0, 1, 2), (1, 2, 4)]),
            ]
        );
        assert_eq!(built.markers.steps(), vec![1, 2]);

        // J_2 = {1}: the new generator halves the old one.
        let built = build_pair_from_data(&data(1, &[1, 2, 4], &[&[], &[1]])).unwrap();
        assert_eq!(built.group.width(), 5);
        assert_eq!(
            built.generators,
            vec![
                vector(&[(1, 2, 2), (0, 1, 3)]),
                vector(&[(1, 4, 2), (1, 2, 3)]),
            ]
        );
        assert_eq!(built.markers.steps(), vec![2]);
    }

    #[test]
    fn three_step_generators_on_the_eights_chain() {
        // J_2 = {1}, J_3 = {2}.
        let built = build_pair_from_data(&data(1, &[1, 2, 4, 8], &[&[], &[1], &[2]])).unwrap();
        assert_eq!(
            built.generators[2],
            vector(&[(1, 8, 2), (1, 4, 3), (1, 2, 6)])
        );
        assert!(built
            .group
            .is_type(&crate::group_core::TypeProfile::new(8, 1).unwrap()));

        // J_2 = {}, J_3 = {1, 2}.
        let built = build_pair_from_data(&data(1, &[1, 2, 4, 8], &[&[], &[], &[1, 2]])).unwrap();
        assert_eq!(
            built.generators[2],
            vector(&[(1, 4, 2), (1, 4, 4), (1, 2, 5)])
        );
        assert_eq!(built.markers.steps(), vec![3]);
    }

    #[test]
    fn subset_sums_recover_their_subsets() {
        let built = build_pair_from_data(&data(1, &[1, 2, 4], &[&[], &[]])).unwrap();
        let markers = &built.markers;
        // All four subsets of the two live markers are distinguishable.
        let all_steps: Vec<usize> = markers.steps();
        for mask in 0u32..4 {
            let subset: BTreeSet<usize> = all_steps
                .iter()
                .enumerate()
                .filter(|(b, _)| mask & (1 << b) != 0)
                .map(|(_, &s)| s)
                .collect();
            let h = markers.subset_sum(&subset).unwrap();
            assert_eq!(subset_sum_decompose(markers, &h).unwrap(), subset);
        }
        // A non-subset-sum is rejected.
        let stray = vector(&[(1, 4, 1), (0, 1, 5)]);
        assert!(matches!(
            subset_sum_decompose(markers, &stray),
            Err(Error::NoSubsetDecomposition(_))
        ));
    }

    #[test]
    fn step_pair_rejects_unknown_and_reused_steps() {
        let (g, markers) = init_pair(2, 1).unwrap();
        let missing: BTreeSet<usize> = [7].into_iter().collect();
        assert!(matches!(
            step_pair(&g, &markers, &missing, 2, 2),
            Err(Error::UnknownMarker { step: 7 })
        ));
        assert!(matches!(
            step_pair(&g, &markers, &BTreeSet::new(), 2, 1),
            Err(Error::BadParameter(_))
        ));
    }

    #[test]
    fn bitmask_rendering_follows_alive_order() {
        let d = data(1, &[1, 2, 4, 8], &[&[], &[1], &[2]]);
        assert_eq!(subset_bitmasks(&d), vec![0, 1, 1]);
        let d = data(1, &[1, 2, 4, 8], &[&[], &[], &[1, 2]]);
        assert_eq!(subset_bitmasks(&d), vec![0, 0, 3]);
    }
}
