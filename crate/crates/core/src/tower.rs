//! Canonical quotient tower of a typed group, and recovery of its
//! construction data.
//!
//! Every type-`(v, k)` group carries a unique increasing tower of typed
//! subgroups, selected without any arbitrary choices: stage `i` picks the
//! one coset of the previous subgroup whose minimal height is exactly
//! `M_{i-1} k`, and adjoins that coset's minimal element.  Because the
//! tower is canonical, walking it backwards recovers the chain and subset
//! data the group was built from, exactly and not merely up to relabeling.

use alloc::format;
use alloc::string::ToString;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::builder::{ClassData, Marker, MarkerSet};
use crate::error::{Error, Result};
use crate::group_core::{HeightedGroup, TypeProfile};
use crate::qz_arith::{ModOneVector, Rational};

/// One stage of the canonical tower: the subgroup `G_i` (in ambient width),
/// its order `M_i`, the index `n_i = M_i / M_{i-1}`, the adjoined coset
/// representative `c_i`, and the step sum `n_i c_i`, which lies in
/// `G_{i-1}`.
#[derive(Clone, Debug)]
pub struct TowerStage {
    index: usize,
    order: u64,
    ratio: u64,
    lift: ModOneVector,
    step_sum: ModOneVector,
    subgroup: HeightedGroup,
}

impl TowerStage {
    pub fn index(&self) -> usize {
        self.index
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn ratio(&self) -> u64 {
        self.ratio
    }

    pub fn lift(&self) -> &ModOneVector {
        &self.lift
    }

    pub fn step_sum(&self) -> &ModOneVector {
        &self.step_sum
    }

    pub fn subgroup(&self) -> &HeightedGroup {
        &self.subgroup
    }
}

/// Finds the unique element of height exactly `k` and checks its rigid
/// shape: for `m` its order, exactly `m k` coordinates equal `1/m` and all
/// others are zero.
pub fn unique_height_k_element(g: &HeightedGroup, k: u64) -> Result<ModOneVector> {
    let mut found = None;
    let mut count = 0usize;
    for (x, &h) in g.elements().iter().zip(g.heights()) {
        if h == k {
            count += 1;
            found = Some(x.clone());
        }
    }
    if count != 1 {
        return Err(Error::NoUniqueMinimalHeight { k, found: count });
    }
    let c = found.expect("count == 1");
    let m = c.order_mod1()?;
    let share = Rational::new(BigInt::one(), BigInt::from(m));
    let mut on_support = 0u64;
    for entry in c.entries() {
        if *entry == share {
            on_support += 1;
        } else if !entry.is_zero() {
            return Err(Error::Inconsistent(format!(
                "height-{k} element has entry {entry}, expected 0 or {share}"
            )));
        }
    }
    if on_support != m * k {
        return Err(Error::Inconsistent(format!(
            "height-{k} element of order {m} has {on_support} entries equal to {share}, expected {}",
            m * k
        )));
    }
    Ok(c)
}

/// Computes the canonical tower `G_1 < G_2 < ... < G_s = g` of a
/// type-`(v, k)` group.  Each later stage scans the cosets of the previous
/// subgroup, requires exactly one whose minimal height is `M_{i-1} k`, and
/// adjoins that coset's minimal element.  Every stage subgroup is verified
/// to be typed before the tower proceeds.
pub fn quotient_tower(g: &HeightedGroup, k: u64) -> Result<Vec<TowerStage>> {
    let profile = g
        .type_profile()
        .ok_or_else(|| Error::NotOfType("height table is not an arithmetic ladder".to_string()))?;
    if profile.k() != k {
        return Err(Error::NotOfType(format!(
            "expected step k={k}, group has k={}",
            profile.k()
        )));
    }
    let v = profile.v();

    // Stage 1 is cyclic on the unique height-k element; its rigid shape is
    // checked as part of the lookup.
    let c1 = unique_height_k_element(g, k)?;
    let n1 = c1.order_mod1()?;
    let elements = (0..n1).map(|t| c1.scale_mod1(t)).collect();
    let g1 = HeightedGroup::from_closed(elements)?;
    if !g1.is_type(&TypeProfile::new(n1, k)?) {
        return Err(Error::NotOfType(format!(
            "stage 1 subgroup is not of type ({n1}, {k})"
        )));
    }
    let mut stages = vec![TowerStage {
        index: 1,
        order: n1,
        ratio: n1,
        lift: c1.clone(),
        step_sum: c1.scale_mod1(n1),
        subgroup: g1.clone(),
    }];
    let mut current = g1;
    let mut order = n1;

    while order < v {
        let stage_index = stages.len() + 1;
        let target = order * k;

        // Elements are stored in height order, so the first element of each
        // coset encountered by the scan is that coset's minimum.
        let total = usize::try_from(g.order()).expect("order fits the closure cap");
        let mut assigned = vec![false; total];
        let mut qualifying: Vec<ModOneVector> = Vec::new();
        for (idx, x) in g.elements().iter().enumerate() {
            if assigned[idx] {
                continue;
            }
            if g.heights()[idx] == target {
                qualifying.push(x.clone());
            }
            for y in current.elements() {
                let z = x.add_mod1(y)?;
                let zi = g
                    .index_of(&z)
                    .ok_or_else(|| Error::Inconsistent("coset left the group".to_string()))?;
                assigned[zi] = true;
            }
        }
        if qualifying.len() != 1 {
            return Err(Error::NoQualifyingCoset { stage: stage_index });
        }
        let c = qualifying.pop().expect("one qualifying coset");

        let mut ratio = 0u64;
        for r in 1..=c.order_mod1()? {
            if current.contains(&c.scale_mod1(r)) {
                ratio = r;
                break;
            }
        }
        debug_assert!(ratio >= 2, "lift lies outside the previous subgroup");
        let step_sum = c.scale_mod1(ratio);

        let mut elements = Vec::with_capacity(usize::try_from(order * ratio).expect("bounded"));
        for t in 0..ratio {
            let tc = c.scale_mod1(t);
            for x in current.elements() {
                elements.push(x.add_mod1(&tc)?);
            }
        }
        let next = HeightedGroup::from_closed(elements)?;
        let next_order = order * ratio;
        if !next.is_type(&TypeProfile::new(next_order, k)?) {
            return Err(Error::NotOfType(format!(
                "stage {stage_index} subgroup is not of type ({next_order}, {k})"
            )));
        }
        stages.push(TowerStage {
            index: stage_index,
            order: next_order,
            ratio,
            lift: c,
            step_sum,
            subgroup: next.clone(),
        });
        current = next;
        order = next_order;
    }
    Ok(stages)
}

/// Recovers the construction data of a typed group by walking its
/// canonical tower: the chain is the stage orders, and each step's subset
/// is read off by decomposing the step sum against the live markers.
/// Marker bookkeeping runs in ambient width; marker invariants are
/// re-validated against every stage subgroup.
pub fn extract_data(g: &HeightedGroup, k: u64) -> Result<ClassData> {
    let stages = quotient_tower(g, k)?;
    let mut chain = Vec::with_capacity(stages.len() + 1);
    chain.push(1);
    for stage in &stages {
        chain.push(stage.order);
    }

    let mut subsets = vec![alloc::collections::BTreeSet::new()];
    let mut markers = MarkerSet::new(g.width(), vec![Marker::new(1, stages[0].lift.clone())])?;
    markers.validate_for(&stages[0].subgroup)?;
    for (i, stage) in stages.iter().enumerate().skip(1) {
        let step = i + 1;
        let subset = crate::builder::subset_sum_decompose(&markers, &stage.step_sum)?;
        let mut survivors: Vec<Marker> = markers
            .markers()
            .iter()
            .filter(|m| !subset.contains(&m.step()))
            .cloned()
            .collect();
        survivors.push(Marker::new(step, stage.lift.clone()));
        markers = MarkerSet::new(g.width(), survivors)?;
        markers.validate_for(&stage.subgroup)?;
        subsets.push(subset);
    }
    ClassData::new(k, chain, subsets)
}

/// Decides the consecutive-block property for a cyclic walk of integers.
///
/// Hypothesis: the entries are pairwise distinct and every cyclic forward
/// step (including the wrap from last to first) is at most `+1`.  Returns
/// `None` when the hypothesis fails, otherwise `Some(b)` where `b` says
/// whether the values form a consecutive block `{min, ..., max}`.  The
/// hypothesis in fact forces the block; callers assert the conclusion.
pub fn cyclic_walk_is_block(seq: &[i64]) -> Option<bool> {
    if seq.is_empty() {
        return Some(true);
    }
    let mut sorted: Vec<i64> = seq.to_vec();
    sorted.sort_unstable();
    if sorted.windows(2).any(|w| w[0] == w[1]) {
        return None;
    }
    for i in 0..seq.len() {
        let next = seq[(i + 1) % seq.len()];
        if next - seq[i] > 1 {
            return None;
        }
    }
    let min = sorted[0];
    let max = sorted[sorted.len() - 1];
    Some(max - min + 1 == i64::try_from(seq.len()).ok()?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builder::{build_pair_from_data, ClassData};

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
    fn tower_of_the_order_four_sample() {
        let g = HeightedGroup::close_generators(&[vector(&[(1, 4, 2), (1, 2, 3)])], 5).unwrap();
        let stages = quotient_tower(&g, 1).unwrap();
        assert_eq!(stages.len(), 2);
        assert_eq!(stages[0].order(), 2);
        assert_eq!(stages[0].ratio(), 2);
        assert_eq!(stages[0].lift(), &vector(&[(1, 2, 2), (0, 1, 3)]));
        assert_eq!(stages[1].order(), 4);
        assert_eq!(stages[1].ratio(), 2);
        assert_eq!(stages[1].lift(), &vector(&[(1, 4, 2), (1, 2, 3)]));
        assert_eq!(stages[1].step_sum(), &vector(&[(1, 2, 2), (0, 1, 3)]));
        assert_eq!(stages[1].subgroup(), &g);
    }

    #[test]
    fn tower_of_a_one_step_group_has_one_stage() {
        let g = HeightedGroup::close_generators(&[vector(&[(1, 8, 8)])], 8).unwrap();
        let stages = quotient_tower(&g, 1).unwrap();
        assert_eq!(stages.len(), 1);
        assert_eq!(stages[0].order(), 8);
        assert_eq!(stages[0].lift(), &vector(&[(1, 8, 8)]));
    }

    #[test]
    fn extraction_recovers_two_step_data() {
        for subsets in [&[&[][..], &[][..]], &[&[][..], &[1][..]]] {
            let d = data(1, &[1, 2, 4], subsets);
            let built = build_pair_from_data(&d).unwrap();
            assert_eq!(extract_data(&built.group, 1).unwrap(), d);
        }
    }

    #[test]
    fn extraction_recovers_one_step_data() {
        let d = data(1, &[1, 8], &[&[]]);
        let built = build_pair_from_data(&d).unwrap();
        assert_eq!(extract_data(&built.group, 1).unwrap(), d);
    }

    #[test]
    fn extraction_is_permutation_invariant() {
        let d = data(1, &[1, 2, 4, 8], &[&[], &[1], &[2]]);
        let built = build_pair_from_data(&d).unwrap();
        let width = built.group.width();
        // Rotate coordinates; the recovered data must not change.
        let perm: Vec<usize> = (0..width).map(|i| (i + 3) % width).collect();
        let permuted = built.group.permute_coordinates(&perm).unwrap();
        assert_eq!(extract_data(&permuted, 1).unwrap(), d);
    }

    #[test]
    fn unique_height_element_shape_is_enforced() {
        // Two height-1 elements: no unique choice.
        let klein = HeightedGroup::close_generators(
            &[
                vector(&[(1, 2, 2), (0, 1, 2)]),
                vector(&[(0, 1, 2), (1, 2, 2)]),
            ],
            4,
        )
        .unwrap();
        assert!(matches!(
            unique_height_k_element(&klein, 1),
            Err(Error::NoUniqueMinimalHeight { k: 1, found: 2 })
        ));

        // Unique height-1 element, but not of the rigid uniform shape.
        let skew =
            HeightedGroup::close_generators(&[vector(&[(1, 9, 2), (2, 9, 2), (1, 3, 1)])], 5)
                .unwrap();
        assert!(matches!(
            unique_height_k_element(&skew, 1),
            Err(Error::Inconsistent(_))
        ));

        let good = HeightedGroup::close_generators(&[vector(&[(1, 4, 2), (1, 2, 3)])], 5).unwrap();
        assert_eq!(
            unique_height_k_element(&good, 1).unwrap(),
            vector(&[(1, 2, 2), (0, 1, 3)])
        );
    }

    #[test]
    fn tower_requires_a_typed_group() {
        let klein = HeightedGroup::close_generators(
            &[
                vector(&[(1, 2, 2), (0, 1, 2)]),
                vector(&[(0, 1, 2), (1, 2, 2)]),
            ],
            4,
        )
        .unwrap();
        assert!(matches!(
            quotient_tower(&klein, 1),
            Err(Error::NotOfType(_))
        ));
    }

    #[test]
    fn cyclic_walk_cases() {
        assert_eq!(cyclic_walk_is_block(&[]), Some(true));
        assert_eq!(cyclic_walk_is_block(&[7]), Some(true));
        assert_eq!(cyclic_walk_is_block(&[0, 1, 2]), Some(true));
        assert_eq!(cyclic_walk_is_block(&[2, 3, 1]), Some(true));
        assert_eq!(cyclic_walk_is_block(&[5, 3, 4, 2]), None);
        assert_eq!(cyclic_walk_is_block(&[0, 2, 1]), None);
        assert_eq!(cyclic_walk_is_block(&[1, 1]), None);
    }

    #[test]
    fn extraction_rejects_untyped_input() {
        let klein = HeightedGroup::close_generators(
            &[
                vector(&[(1, 2, 2), (0, 1, 2)]),
                vector(&[(0, 1, 2), (1, 2, 2)]),
            ],
            4,
        )
        .unwrap();
        assert!(extract_data(&klein, 1).is_err());
    }
}
