//! One-step extensions: growing a group of type `(M, k)` to one of type
//! `(M*n, k)` by adjoining a single new generator.
//!
//! Given an *admissible* element `h` of the base group (every coordinate is
//! `0` or `1/d_i`, where `d_i` is the image size of coordinate `i`) and a
//! multiplier `n >= 2`, the extension appends `L = n*M*k - height(h)` new
//! coordinates and adjoins
//!
//! ```text
//! c = (h_1/n, ..., h_N/n, 1/n, ..., 1/n)      (L trailing entries)
//! ```
//!
//! Then `n*c` is `h` (padded), every coset `x + r*c` with `0 <= r < n`
//! carries heights `r*M*k + {0, k, ..., (M-1)k}`, and the result is of type
//! `(M*n, k)`.  Conversely, every extension with cyclic quotient and the
//! height block structure arises this way; the brute-force search in the
//! test suite checks that on small groups.

use alloc::format;
use alloc::string::ToString;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::group_core::{HeightedGroup, TypeProfile};
use crate::qz_arith::{ModOneVector, Rational};

/// The elements of `g` whose coordinates are all `0` or `1/d_i`.  These are
/// exactly the valid step sums for one-step extensions.  Returned in height
/// order (the element table order).
pub fn admissible_elements(g: &HeightedGroup) -> Vec<ModOneVector> {
    let inverses: Vec<Rational> = g
        .coord_orders()
        .iter()
        .map(|&d| Rational::new(BigInt::one(), BigInt::from(d)))
        .collect();
    g.elements()
        .iter()
        .filter(|e| {
            e.entries()
                .iter()
                .zip(&inverses)
                .all(|(value, inv)| value.is_zero() || value == inv)
        })
        .cloned()
        .collect()
}

/// Checks whether `h` is admissible for `g` without materializing the full
/// admissible list.
pub fn is_admissible(g: &HeightedGroup, h: &ModOneVector) -> bool {
    h.width() == g.width()
        && h.entries().iter().zip(g.coord_orders()).all(|(value, &d)| {
            value.is_zero() || *value == Rational::new(BigInt::one(), BigInt::from(d))
        })
}

/// Extends `g` (which must be of some type `(M, k)`) by the admissible
/// element `h` with multiplier `n >= 2`.  Returns the extended group and the
/// adjoined generator `c`, which has height `M*k` and is the minimum-height
/// element of its coset.
pub fn extend(
    g: &HeightedGroup,
    h: &ModOneVector,
    n: u64,
) -> Result<(HeightedGroup, ModOneVector)> {
    let profile = g
        .type_profile()
        .ok_or_else(|| Error::NotOfType(format!("{g} has no type profile")))?;
    if n < 2 {
        return Err(Error::BadParameter(format!("extension multiplier {n} < 2")));
    }
    if !g.contains(h) {
        return Err(Error::NotInGroup(format!("step sum ({h})")));
    }
    if !is_admissible(g, h) {
        return Err(Error::NotAdmissible(format!("step sum ({h})")));
    }
    let m = profile.v();
    let k = profile.k();
    let new_coords = usize::try_from(n * m * k - h.height()?)
        .map_err(|_| Error::BadParameter("extension width out of range".to_string()))?;
    let divisor = BigInt::from(n);
    let mut entries: Vec<Rational> = h
        .entries()
        .iter()
        .map(|e| Rational::new(e.numer().clone(), e.denom() * &divisor))
        .collect();
    entries.extend((0..new_coords).map(|_| Rational::new(BigInt::one(), divisor.clone())));
    let c = ModOneVector::new(entries)?;

    let mut elements = Vec::with_capacity(g.elements().len() * n as usize);
    for r in 0..n {
        let offset = c.scale_mod1(r);
        for x in g.elements() {
            elements.push(x.pad(new_coords).add_mod1(&offset)?);
        }
    }
    let extended = HeightedGroup::from_closed(elements)?;
    Ok((extended, c))
}

/// Verifies the full extension contract between `base` (type `(m, k)`,
/// possibly padded with zero coordinates relative to `extended`) and
/// `extended`:
///
/// * `base` embeds in `extended` and `extended = base + <c>`;
/// * the quotient is cyclic of order exactly `n` with `n*c` in `base`;
/// * `extended` is of type `(m*n, k)` and each coset `r*c + base` carries
///   the height block `r*m*k + {0, k, ..., (m-1)k}`;
/// * `c` has height `m*k`, the minimum of its coset.
///
/// `m = 1` (trivial base) is allowed; the base type check degenerates to
/// `base = {0}`.
pub fn verify_block_structure(
    extended: &HeightedGroup,
    base: &HeightedGroup,
    c: &ModOneVector,
    n: u64,
    m: u64,
    k: u64,
) -> bool {
    if n < 1 || m < 1 || k < 1 {
        return false;
    }
    if c.width() != extended.width() || base.width() > extended.width() {
        return false;
    }
    let pad = extended.width() - base.width();
    if base.order() != m || extended.order() != m * n {
        return false;
    }
    if m == 1 {
        if base.order() != 1 {
            return false;
        }
    } else {
        match TypeProfile::new(m, k) {
            Ok(profile) => {
                if !base.is_type(&profile) {
                    return false;
                }
            }
            Err(_) => return false,
        }
    }
    match TypeProfile::new(m * n, k) {
        Ok(profile) => {
            if !extended.is_type(&profile) {
                return false;
            }
        }
        Err(_) => return false,
    }
    if !extended.contains(c) {
        return false;
    }
    let embedded: Vec<ModOneVector> = base.elements().iter().map(|x| x.pad(pad)).collect();
    if embedded.iter().any(|x| !extended.contains(x)) {
        return false;
    }
    let in_base = |x: &ModOneVector| embedded.iter().any(|b| b == x);
    // Quotient order: the least r >= 1 with r*c in the base must be n.
    for r in 1..n {
        if in_base(&c.scale_mod1(r)) {
            return false;
        }
    }
    if !in_base(&c.scale_mod1(n)) {
        return false;
    }
    // Coset-by-coset: heights form the arithmetic block r*m*k + j*k and the
    // union reproduces the extended table.
    let mut all: Vec<ModOneVector> = Vec::with_capacity((m * n) as usize);
    for r in 0..n {
        let offset = c.scale_mod1(r);
        let mut heights: Vec<u64> = Vec::with_capacity(m as usize);
        for x in &embedded {
            let y = match x.add_mod1(&offset) {
                Ok(y) => y,
                Err(_) => return false,
            };
            match y.height() {
                Ok(h) => heights.push(h),
                Err(_) => return false,
            }
            all.push(y);
        }
        heights.sort_unstable();
        let expected: Vec<u64> = (0..m).map(|j| r * m * k + j * k).collect();
        if heights != expected {
            return false;
        }
    }
    all.sort_unstable();
    let mut table: Vec<ModOneVector> = extended.elements().to_vec();
    table.sort_unstable();
    if all != table {
        return false;
    }
    // The generator is the minimum-height element of its coset (height m*k,
    // the base of the r = 1 block).
    matches!(c.height(), Ok(h) if h == m * k)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn vector(blocks: &[(i64, i64, usize)]) -> ModOneVector {
        ModOneVector::from_blocks(blocks).unwrap()
    }

    fn cyclic(blocks: &[(i64, i64, usize)]) -> HeightedGroup {
        let g = vector(blocks);
        let width = g.width();
        HeightedGroup::close_generators(&[g], width).unwrap()
    }

    #[test]
    fn admissible_elements_of_small_groups() {
        let trivial = HeightedGroup::trivial(0);
        assert_eq!(admissible_elements(&trivial), vec![ModOneVector::zero(0)]);

        let g = cyclic(&[(1, 4, 2), (1, 2, 3)]);
        let admissible = admissible_elements(&g);
        assert_eq!(
            admissible,
            vec![ModOneVector::zero(5), vector(&[(1, 4, 2), (1, 2, 3)])]
        );
        assert!(is_admissible(&g, &admissible[1]));
        assert!(!is_admissible(&g, &vector(&[(1, 2, 2), (0, 1, 3)])));
    }

    #[test]
    fn extend_by_zero_appends_a_fresh_block() {
        let g = cyclic(&[(1, 2, 2)]);
        let (g2, c) = extend(&g, &ModOneVector::zero(2), 2).unwrap();
        assert_eq!(c, vector(&[(0, 1, 2), (1, 2, 4)]));
        assert_eq!(g2.order(), 4);
        assert_eq!(g2.heights(), &[0, 1, 2, 3]);
        assert!(verify_block_structure(&g2, &g, &c, 2, 2, 1));

        let g3 = cyclic(&[(1, 3, 3)]);
        let (g6, c6) = extend(&g3, &ModOneVector::zero(3), 2).unwrap();
        assert_eq!(c6, vector(&[(0, 1, 3), (1, 2, 6)]));
        assert!(verify_block_structure(&g6, &g3, &c6, 2, 3, 1));
    }

    #[test]
    fn extend_by_generator_divides_it() {
        let g = cyclic(&[(1, 2, 2)]);
        let h = vector(&[(1, 2, 2)]);
        let (g2, c) = extend(&g, &h, 2).unwrap();
        assert_eq!(c, vector(&[(1, 4, 2), (1, 2, 3)]));
        assert_eq!(g2.order(), 4);
        assert!(verify_block_structure(&g2, &g, &c, 2, 2, 1));
        // n*c recovers h, padded.
        assert_eq!(c.scale_mod1(2), h.pad(3));
    }

    #[test]
    fn extend_rejects_bad_inputs() {
        let g = cyclic(&[(1, 4, 2), (1, 2, 3)]);
        // Not in the group.
        assert!(matches!(
            extend(&g, &vector(&[(1, 4, 2), (0, 1, 3)]), 2),
            Err(Error::NotInGroup(_))
        ));
        // In the group but not admissible.
        assert!(matches!(
            extend(&g, &vector(&[(1, 2, 2), (0, 1, 3)]), 2),
            Err(Error::NotAdmissible(_))
        ));
        // Multiplier too small.
        assert!(matches!(
            extend(&g, &ModOneVector::zero(5), 1),
            Err(Error::BadParameter(_))
        ));
        // Trivial base has no type profile.
        assert!(matches!(
            extend(&HeightedGroup::trivial(1), &ModOneVector::zero(1), 2),
            Err(Error::NotOfType(_))
        ));
    }

    #[test]
    fn no_carry_height_law() {
        // Heights along the cosets x + r*c increase by exactly r*M*k.
        let g = cyclic(&[(1, 4, 2), (1, 2, 3)]);
        let h = vector(&[(1, 4, 2), (1, 2, 3)]);
        for n in [2u64, 3] {
            let (_, c) = extend(&g, &h, n).unwrap();
            let pad = c.width() - g.width();
            for x in g.elements() {
                let hx = x.height().unwrap();
                for r in 0..n {
                    let y = x.pad(pad).add_mod1(&c.scale_mod1(r)).unwrap();
                    assert_eq!(y.height().unwrap(), hx + r * 4);
                }
            }
        }
    }

    #[test]
    fn block_structure_rejects_wrong_shapes() {
        let g = cyclic(&[(1, 2, 2)]);
        let (g2, c) = extend(&g, &ModOneVector::zero(2), 2).unwrap();
        assert!(!verify_block_structure(&g2, &g, &c, 2, 2, 2));
        assert!(!verify_block_structure(&g2, &g, &c, 4, 2, 1));
        let wrong = vector(&[(0, 1, 2), (1, 2, 3), (0, 1, 1)]);
        assert!(!verify_block_structure(&g2, &g, &wrong, 2, 2, 1));
    }
}
