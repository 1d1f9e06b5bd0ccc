//! Complete classification for a given order and step: enumerate every
//! construction datum, build each group, and assemble the results with
//! their counting and distinctness invariants checked.
//!
//! The enumeration walks strict divisor chains in lexicographic order and,
//! within a chain, subset choices in ascending bitmask order over the live
//! markers, so output order is deterministic.  Each chain with `s` steps
//! contributes exactly `s!` data; the assembled total must match the count
//! derived independently from the divisor lattice, and the canonical keys
//! of all built groups must be pairwise distinct.  Violations are reported
//! as errors, never patched over.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use crate::builder::{build_pair_from_data, ClassData};
use crate::divisor_lattice::{chain_census, count_classes, factorial, strict_chains, ChainCensus};
use crate::error::{Error, Result};
use crate::group_core::{CanonicalKey, HeightedGroup, TypeProfile};
use crate::qz_arith::ModOneVector;
use crate::tower::extract_data;

/// Default ceiling on the group order accepted by [`classify`].
pub const DEFAULT_MAX_ORDER: u64 = 512;

/// One classified equivalence class: its construction data, the built
/// group, the adjoined generators (in final width), the canonical key and
/// the coefficient vector of the class.
#[derive(Clone, Debug)]
pub struct ClassRecord {
    data: ClassData,
    group: HeightedGroup,
    generators: Vec<ModOneVector>,
    key: CanonicalKey,
    hstar: Vec<u64>,
}

impl ClassRecord {
    pub fn data(&self) -> &ClassData {
        &self.data
    }

    pub fn group(&self) -> &HeightedGroup {
        &self.group
    }

    pub fn generators(&self) -> &[ModOneVector] {
        &self.generators
    }

    pub fn key(&self) -> &CanonicalKey {
        &self.key
    }

    pub fn hstar(&self) -> &[u64] {
        &self.hstar
    }

    /// Simplex dimension of the class: one less than the ambient width.
    pub fn dimension(&self) -> usize {
        self.group.width() - 1
    }
}

/// The full classification for one `(v, k)`: census of chains by length
/// plus one record per class, in enumeration order.
#[derive(Clone, Debug)]
pub struct ClassificationResult {
    v: u64,
    k: u64,
    census: ChainCensus,
    classes: Vec<ClassRecord>,
}

impl ClassificationResult {
    pub fn v(&self) -> u64 {
        self.v
    }

    pub fn k(&self) -> u64 {
        self.k
    }

    pub fn census(&self) -> &ChainCensus {
        &self.census
    }

    pub fn classes(&self) -> &[ClassRecord] {
        &self.classes
    }

    pub fn total(&self) -> usize {
        self.classes.len()
    }
}

/// Result of re-deriving every class's construction data from its built
/// group.  `failures` lists human-readable mismatches; empty means the
/// round trip is exact for all classes.
#[derive(Clone, Debug)]
pub struct BijectionReport {
    v: u64,
    k: u64,
    checked: usize,
    failures: Vec<String>,
}

impl BijectionReport {
    pub fn v(&self) -> u64 {
        self.v
    }

    pub fn k(&self) -> u64 {
        self.k
    }

    pub fn checked(&self) -> usize {
        self.checked
    }

    pub fn failures(&self) -> &[String] {
        &self.failures
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

fn fill_subsets(
    chain: &[u64],
    k: u64,
    step: usize,
    alive: &[usize],
    subsets: &mut Vec<BTreeSet<usize>>,
    out: &mut Vec<ClassData>,
) -> Result<()> {
    let s = chain.len() - 1;
    if step > s {
        out.push(ClassData::new(k, chain.to_vec(), subsets.clone())?);
        return Ok(());
    }
    for mask in 0u64..(1u64 << alive.len()) {
        let subset: BTreeSet<usize> = alive
            .iter()
            .enumerate()
            .filter(|(b, _)| mask & (1 << b) != 0)
            .map(|(_, &x)| x)
            .collect();
        let mut next_alive: Vec<usize> = alive
            .iter()
            .filter(|x| !subset.contains(x))
            .copied()
            .collect();
        next_alive.push(step);
        subsets.push(subset);
        fill_subsets(chain, k, step + 1, &next_alive, subsets, out)?;
        subsets.pop();
    }
    Ok(())
}

/// Enumerates every construction datum of order `v` and step `k`:
/// chains in lexicographic order, and subset sequences per chain in
/// ascending bitmask order.  Each chain with `s` steps must yield exactly
/// `s!` data.
pub fn enumerate_data(v: u64, k: u64) -> Result<Vec<ClassData>> {
    if v < 2 {
        return Err(Error::BadParameter(format!(
            "order must be at least 2, got {v}"
        )));
    }
    if k < 1 {
        return Err(Error::BadParameter("step must be at least 1".to_string()));
    }
    let mut out = Vec::new();
    for chain in strict_chains(v)? {
        let s = chain.len() - 1;
        let before = out.len();
        let mut subsets = vec![BTreeSet::new()];
        fill_subsets(&chain, k, 2, &[1], &mut subsets, &mut out)?;
        let produced = (out.len() - before) as u64;
        let expected = factorial(s as u64)?;
        if produced != expected {
            return Err(Error::Inconsistent(format!(
                "chain {chain:?} produced {produced} data, expected {expected}"
            )));
        }
    }
    Ok(out)
}

/// Builds the group for one construction datum and packages it with its
/// invariants verified: correct type, no zero coordinate, the expected
/// coefficient vector, and a well-defined canonical key.
pub fn build_record(data: &ClassData) -> Result<ClassRecord> {
    let built = build_pair_from_data(data)?;
    let group = built.group;
    let v = data.v();
    let k = data.k();
    if !group.is_type(&TypeProfile::new(v, k)?) {
        return Err(Error::Inconsistent(format!(
            "built group for [{data}] is not of type ({v}, {k})"
        )));
    }
    if let Some(&index) = group.zero_coordinates().first() {
        return Err(Error::ZeroCoordinate { index });
    }
    let dim = group.width() - 1;
    let hstar = group.hstar_vector(dim);
    let expected: Vec<u64> = (0..=dim as u64)
        .map(|j| u64::from(j % k == 0 && j / k < v))
        .collect();
    if hstar != expected {
        return Err(Error::Inconsistent(format!(
            "built group for [{data}] has coefficient vector {hstar:?}, expected {expected:?}"
        )));
    }
    let key = group.canonical_key()?;
    Ok(ClassRecord {
        data: data.clone(),
        group,
        generators: built.generators,
        key,
        hstar,
    })
}

fn assemble(v: u64, k: u64, classes: Vec<ClassRecord>) -> Result<ClassificationResult> {
    let expected = count_classes(v)?;
    if classes.len() as u64 != expected {
        return Err(Error::Inconsistent(format!(
            "classification of ({v}, {k}) produced {} classes, expected {expected}",
            classes.len()
        )));
    }
    let mut seen: BTreeMap<&CanonicalKey, &ClassData> = BTreeMap::new();
    for record in &classes {
        if let Some(other) = seen.insert(record.key(), record.data()) {
            return Err(Error::Inconsistent(format!(
                "canonical key collision between [{other}] and [{}]",
                record.data()
            )));
        }
    }
    Ok(ClassificationResult {
        v,
        k,
        census: chain_census(v)?,
        classes,
    })
}

/// Classifies all classes of order `v` and step `k` under the default
/// order cap.
pub fn classify(v: u64, k: u64) -> Result<ClassificationResult> {
    classify_capped(v, k, DEFAULT_MAX_ORDER)
}

/// Classifies with an explicit order cap.
pub fn classify_capped(v: u64, k: u64, max_order: u64) -> Result<ClassificationResult> {
    if v < 2 {
        return Err(Error::BadParameter(format!(
            "order must be at least 2, got {v}"
        )));
    }
    if k < 1 {
        return Err(Error::BadParameter("step must be at least 1".to_string()));
    }
    if v > max_order {
        return Err(Error::OrderCapExceeded {
            order: v,
            cap: max_order,
        });
    }
    let data = enumerate_data(v, k)?;
    let mut classes = Vec::with_capacity(data.len());
    for d in &data {
        classes.push(build_record(d)?);
    }
    assemble(v, k, classes)
}

/// Re-derives each class's construction data from its built group via the
/// canonical tower and reports any class where the round trip is not the
/// identity.
pub fn verify_bijection(result: &ClassificationResult) -> BijectionReport {
    let mut failures = Vec::new();
    for record in result.classes() {
        match extract_data(record.group(), result.k()) {
            Ok(recovered) => {
                if recovered != *record.data() {
                    failures.push(format!("[{}] extracted as [{recovered}]", record.data()));
                }
            }
            Err(err) => failures.push(format!("[{}] failed extraction: {err}", record.data())),
        }
    }
    BijectionReport {
        v: result.v(),
        k: result.k(),
        checked: result.total(),
        failures,
    }
}
