//! Finite subgroups of `[0,1)^N` with integer heights, stored as explicit
//! element tables.
//!
//! The table is kept sorted by `(height, entries)`, so equal groups have
//! identical representations.  Coordinate permutation is the only ambient
//! symmetry; `canonical_key` quotients it out by sorting columns, which is
//! well defined exactly when all element heights are distinct.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::ToString;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

use crate::error::{Error, Result};
use crate::qz_arith::{ModOneVector, Rational};

/// Default cap on the number of elements produced by generator closure.
pub const DEFAULT_CLOSURE_CAP: usize = 10_000;

/// The target shape `(v, k)`: order `v` with heights `0, k, ..., (v-1)k`,
/// each realized exactly once.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct TypeProfile {
    v: u64,
    k: u64,
}

impl TypeProfile {
    /// Requires `v >= 2` and `k >= 1`.
    pub fn new(v: u64, k: u64) -> Result<Self> {
        if v < 2 {
            return Err(Error::BadParameter(format!(
                "type profile needs v >= 2, got {v}"
            )));
        }
        if k < 1 {
            return Err(Error::BadParameter("type profile needs k >= 1".to_string()));
        }
        Ok(TypeProfile { v, k })
    }

    pub fn v(&self) -> u64 {
        self.v
    }

    pub fn k(&self) -> u64 {
        self.k
    }

    /// Largest height in a group of this type, `(v-1) * k`.
    pub fn max_height(&self) -> u64 {
        (self.v - 1) * self.k
    }
}

impl fmt::Display for TypeProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.v, self.k)
    }
}

/// A finite subgroup of `[0,1)^N` in which every element has an integer
/// height, held as a complete element table.
#[derive(Clone, Debug)]
pub struct HeightedGroup {
    width: usize,
    /// All elements, sorted by `(height, entries)`.  The zero vector is
    /// always present and always first.
    elements: Vec<ModOneVector>,
    /// Heights aligned with `elements`.
    heights: Vec<u64>,
    /// Indices into `elements`, sorted by element value, for membership
    /// lookups.
    by_value: Vec<usize>,
    /// Per-coordinate image sizes: coordinate `i` takes exactly the values
    /// `j / coord_orders[i]`.
    coord_orders: Vec<u64>,
}

impl PartialEq for HeightedGroup {
    fn eq(&self, other: &Self) -> bool {
        self.width == other.width && self.elements == other.elements
    }
}

impl Eq for HeightedGroup {}

impl HeightedGroup {
    /// The group `{0}` in the given ambient width.
    pub fn trivial(width: usize) -> Self {
        Self::assemble(vec![ModOneVector::zero(width)])
            .expect("the trivial group is always well formed")
    }

    /// Closure of the generators under addition mod 1, with the default
    /// element cap.
    pub fn close_generators(generators: &[ModOneVector], width: usize) -> Result<Self> {
        Self::close_generators_capped(generators, width, DEFAULT_CLOSURE_CAP)
    }

    /// Closure of the generators under addition mod 1.  Errors if any
    /// generator has the wrong width, if any element of the closure has a
    /// non-integer height, or if the closure exceeds `cap` elements.
    pub fn close_generators_capped(
        generators: &[ModOneVector],
        width: usize,
        cap: usize,
    ) -> Result<Self> {
        for g in generators {
            if g.width() != width {
                return Err(Error::LengthMismatch {
                    left: g.width(),
                    right: width,
                });
            }
        }
        let zero = ModOneVector::zero(width);
        let mut seen: BTreeSet<ModOneVector> = BTreeSet::new();
        seen.insert(zero.clone());
        let mut frontier = vec![zero];
        while let Some(x) = frontier.pop() {
            for g in generators {
                let y = x.add_mod1(g)?;
                if !seen.contains(&y) {
                    if seen.len() >= cap {
                        return Err(Error::ClosureCapExceeded { cap });
                    }
                    seen.insert(y.clone());
                    frontier.push(y);
                }
            }
        }
        Self::assemble(seen.into_iter().collect())
    }

    /// Builds a group from a complete element list, validating widths,
    /// distinctness, integer heights, presence of zero, and closure under
    /// addition.
    pub fn from_elements(elements: Vec<ModOneVector>) -> Result<Self> {
        let group = Self::assemble(elements)?;
        group.verify_closed()?;
        Ok(group)
    }

    /// Constructor for element sets that are closed by construction
    /// (extension cosets, tower stages, solution-class enumeration).
    /// Validates everything except closure, which callers guarantee.
    pub(crate) fn from_closed(elements: Vec<ModOneVector>) -> Result<Self> {
        Self::assemble(elements)
    }

    fn assemble(mut elements: Vec<ModOneVector>) -> Result<Self> {
        if elements.is_empty() {
            return Err(Error::BadParameter(
                "a group needs at least one element".to_string(),
            ));
        }
        let width = elements[0].width();
        for e in &elements {
            if e.width() != width {
                return Err(Error::LengthMismatch {
                    left: e.width(),
                    right: width,
                });
            }
        }
        elements.sort_unstable();
        if elements.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::BadParameter("duplicate elements".to_string()));
        }
        if !elements[0].is_zero() {
            // Entries are nonnegative, so zero sorts first when present.
            return Err(Error::NotInGroup("zero vector missing".to_string()));
        }
        let mut heights = Vec::with_capacity(elements.len());
        for e in &elements {
            heights.push(e.height()?);
        }
        // Reorder to (height, entries); a stable sort keeps the value order
        // within equal heights.
        let mut index: Vec<usize> = (0..elements.len()).collect();
        index.sort_by_key(|&i| heights[i]);
        let elements: Vec<ModOneVector> = index.iter().map(|&i| elements[i].clone()).collect();
        let heights: Vec<u64> = index.iter().map(|&i| heights[i]).collect();
        let mut by_value: Vec<usize> = (0..elements.len()).collect();
        by_value.sort_by(|&a, &b| elements[a].cmp(&elements[b]));
        let coord_orders = (0..width)
            .map(|col| {
                let values: BTreeSet<&Rational> = elements.iter().map(|e| e.entry(col)).collect();
                values.len() as u64
            })
            .collect();
        Ok(HeightedGroup {
            width,
            elements,
            heights,
            by_value,
            coord_orders,
        })
    }

    pub fn order(&self) -> u64 {
        self.elements.len() as u64
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn elements(&self) -> &[ModOneVector] {
        &self.elements
    }

    pub fn element(&self, index: usize) -> &ModOneVector {
        &self.elements[index]
    }

    pub fn heights(&self) -> &[u64] {
        &self.heights
    }

    /// Image size of each coordinate projection: coordinate `i` takes
    /// exactly the values `0, 1/d_i, ..., (d_i - 1)/d_i`.
    pub fn coord_orders(&self) -> &[u64] {
        &self.coord_orders
    }

    pub fn contains(&self, x: &ModOneVector) -> bool {
        self.index_of(x).is_some()
    }

    /// Position of `x` in the element table, if present.
    pub fn index_of(&self, x: &ModOneVector) -> Option<usize> {
        if x.width() != self.width {
            return None;
        }
        self.by_value
            .binary_search_by(|&i| self.elements[i].cmp(x))
            .ok()
            .map(|pos| self.by_value[pos])
    }

    /// Checks closure under `add_mod1`.  Quadratic in the order; meant for
    /// validation at API boundaries and in tests, not for hot paths.
    pub fn verify_closed(&self) -> Result<()> {
        for (i, a) in self.elements.iter().enumerate() {
            for b in &self.elements[i..] {
                let sum = a.add_mod1(b)?;
                if !self.contains(&sum) {
                    return Err(Error::Inconsistent(format!(
                        "not closed: ({a}) + ({b}) = ({sum}) missing"
                    )));
                }
            }
        }
        Ok(())
    }

    /// The unique profile this group can have, if any: `k` is forced to be
    /// the smallest nonzero height.  The trivial group has no profile.
    pub fn type_profile(&self) -> Option<TypeProfile> {
        if self.elements.len() < 2 {
            return None;
        }
        let k = self.heights[1];
        if k == 0 {
            return None;
        }
        for (i, &h) in self.heights.iter().enumerate() {
            if h != i as u64 * k {
                return None;
            }
        }
        TypeProfile::new(self.order(), k).ok()
    }

    pub fn is_type(&self, profile: &TypeProfile) -> bool {
        self.type_profile().as_ref() == Some(profile)
    }

    /// Coordinates that are zero in every element.  Nonempty exactly when
    /// the corresponding simplex is a lattice pyramid.
    pub fn zero_coordinates(&self) -> Vec<usize> {
        self.coord_orders
            .iter()
            .enumerate()
            .filter(|(_, &d)| d == 1)
            .map(|(i, _)| i)
            .collect()
    }

    pub fn nonzero_coordinates(&self) -> Vec<usize> {
        self.coord_orders
            .iter()
            .enumerate()
            .filter(|(_, &d)| d > 1)
            .map(|(i, _)| i)
            .collect()
    }

    /// Deletes identically-zero coordinates.  Heights and the group
    /// structure are unchanged.
    pub fn reduce(&self) -> Self {
        let keep = self.nonzero_coordinates();
        if keep.len() == self.width {
            return self.clone();
        }
        let elements = self.elements.iter().map(|e| e.project(&keep)).collect();
        Self::assemble(elements).expect("deleting zero coordinates preserves the group")
    }

    /// Canonical representative of the coordinate-permutation class: rows
    /// are the elements in height order (heights must be pairwise distinct),
    /// columns are sorted lexicographically as rational vectors.  Two groups
    /// have equal keys iff one is a coordinate permutation of the other.
    pub fn canonical_key(&self) -> Result<CanonicalKey> {
        for w in self.heights.windows(2) {
            if w[0] == w[1] {
                return Err(Error::DuplicateHeights { height: w[0] });
            }
        }
        let mut columns: Vec<usize> = (0..self.width).collect();
        columns.sort_by(|&a, &b| {
            for e in &self.elements {
                match e.entry(a).cmp(e.entry(b)) {
                    Ordering::Equal => continue,
                    other => return other,
                }
            }
            Ordering::Equal
        });
        let rows = self
            .elements
            .iter()
            .map(|e| columns.iter().map(|&c| e.entry(c).clone()).collect())
            .collect();
        Ok(CanonicalKey { rows })
    }

    /// Whether the two groups are related by a coordinate permutation.
    pub fn equivalent(&self, other: &Self) -> Result<bool> {
        Ok(self.canonical_key()? == other.canonical_key()?)
    }

    /// Height histogram `(h*_0, ..., h*_dim_hint)`.  Heights above
    /// `dim_hint` are not counted; callers pass the simplex dimension, which
    /// bounds every height.
    pub fn hstar_vector(&self, dim_hint: usize) -> Vec<u64> {
        let mut counts = vec![0u64; dim_hint + 1];
        for &h in &self.heights {
            if let Ok(i) = usize::try_from(h) {
                if i <= dim_hint {
                    counts[i] += 1;
                }
            }
        }
        counts
    }

    /// The group with coordinates reindexed by `perm` (entry `j` of each
    /// element becomes old entry `perm[j]`).
    pub fn permute_coordinates(&self, perm: &[usize]) -> Result<Self> {
        let elements = self
            .elements
            .iter()
            .map(|e| e.permute(perm))
            .collect::<Result<Vec<_>>>()?;
        Self::assemble(elements)
    }
}

impl fmt::Display for HeightedGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "group of order {} in width {}", self.order(), self.width)
    }
}

/// Element table with columns brought to the canonical order.  Equality of
/// keys is coordinate-permutation equivalence of groups.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct CanonicalKey {
    rows: Vec<Vec<Rational>>,
}

impl CanonicalKey {
    pub fn rows(&self) -> &[Vec<Rational>] {
        &self.rows
    }
}

impl fmt::Display for CanonicalKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, row) in self.rows.iter().enumerate() {
            if i > 0 {
                write!(f, "; ")?;
            }
            for (j, e) in row.iter().enumerate() {
                if j > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{e}")?;
            }
        }
        Ok(())
    }
}
