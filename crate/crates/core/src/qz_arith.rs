//! Exact arithmetic in the half-open torus `[0,1)^N`.
//!
//! Group elements are vectors of rationals reduced mod 1, added entrywise
//! with the fractional part taken after every operation.  The *height* of a
//! vector is its coordinate sum; for the groups built in this crate heights
//! are always integers, and most structure theory is phrased through them.

use alloc::format;
use alloc::string::ToString;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Arbitrary-precision rational number.  Always stored in lowest terms with
/// a positive denominator.
pub type Rational = num_rational::BigRational;

/// Builds `numer/denom`.  Panics if `denom == 0`.
pub fn rational(numer: i64, denom: i64) -> Rational {
    Rational::new(BigInt::from(numer), BigInt::from(denom))
}

/// Fractional part `x - floor(x)`, always in `[0, 1)`.
pub fn fract(x: &Rational) -> Rational {
    x - x.floor()
}

/// A vector in `[0,1)^N` under coordinatewise addition mod 1.
///
/// Values are immutable: every operation returns a fresh vector.  Ordering
/// is lexicographic on the exact rational entries, which makes sorted
/// element tables and canonical keys deterministic.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct ModOneVector {
    entries: Vec<Rational>,
}

impl ModOneVector {
    /// Wraps entries after checking each lies in `[0, 1)`.
    pub fn new(entries: Vec<Rational>) -> Result<Self> {
        for (i, e) in entries.iter().enumerate() {
            if e.is_negative() || *e >= Rational::one() {
                return Err(Error::EntryOutOfRange(format!("entry {i} = {e}")));
            }
        }
        Ok(ModOneVector { entries })
    }

    /// The zero vector of the given width.
    pub fn zero(width: usize) -> Self {
        ModOneVector {
            entries: vec![Rational::zero(); width],
        }
    }

    /// Builds a vector from `(numer, denom, repeat)` blocks, e.g.
    /// `[(1, 4, 2), (1, 2, 3)]` gives `(1/4, 1/4, 1/2, 1/2, 1/2)`.
    pub fn from_blocks(blocks: &[(i64, i64, usize)]) -> Result<Self> {
        let mut entries = Vec::new();
        for &(numer, denom, repeat) in blocks {
            if denom == 0 {
                return Err(Error::BadParameter("zero denominator in block".to_string()));
            }
            let value = rational(numer, denom);
            for _ in 0..repeat {
                entries.push(value.clone());
            }
        }
        ModOneVector::new(entries)
    }

    pub fn width(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[Rational] {
        &self.entries
    }

    pub fn entry(&self, i: usize) -> &Rational {
        &self.entries[i]
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Zero::is_zero)
    }

    /// Entrywise sum mod 1.  Errors if the widths differ.
    pub fn add_mod1(&self, other: &Self) -> Result<Self> {
        if self.width() != other.width() {
            return Err(Error::LengthMismatch {
                left: self.width(),
                right: other.width(),
            });
        }
        let one = Rational::one();
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| {
                let mut s = a + b;
                // a, b < 1 so the sum is < 2; a single subtraction reduces it.
                if s >= one {
                    s -= &one;
                }
                s
            })
            .collect();
        Ok(ModOneVector { entries })
    }

    /// `t`-fold repeated `add_mod1` of `self`, computed as `{t * x_i}`.
    pub fn scale_mod1(&self, t: u64) -> Self {
        let factor = BigInt::from(t);
        let entries = self
            .entries
            .iter()
            .map(|e| {
                let numer = (e.numer() * &factor).mod_floor(e.denom());
                Rational::new(numer, e.denom().clone())
            })
            .collect();
        ModOneVector { entries }
    }

    /// Coordinate sum, which must be a nonnegative integer.
    pub fn height(&self) -> Result<u64> {
        let sum: Rational = self.entries.iter().sum();
        if !sum.is_integer() {
            return Err(Error::NonIntegerHeight(format!(
                "coordinate sum {sum} of ({self})"
            )));
        }
        sum.to_integer()
            .to_u64()
            .ok_or_else(|| Error::NonIntegerHeight(format!("coordinate sum {sum} out of range")))
    }

    /// Indices of the nonzero coordinates, ascending.
    pub fn support(&self) -> Vec<usize> {
        self.entries
            .iter()
            .enumerate()
            .filter(|(_, e)| !e.is_zero())
            .map(|(i, _)| i)
            .collect()
    }

    /// Order in the torus group: the least `t >= 1` with `t * self = 0`,
    /// i.e. the lcm of the entry denominators.
    pub fn order_mod1(&self) -> Result<u64> {
        let mut acc = BigInt::one();
        for e in &self.entries {
            acc = acc.lcm(e.denom());
        }
        acc.to_u64()
            .ok_or_else(|| Error::BadParameter(format!("element order {acc} out of range")))
    }

    /// Appends `extra` zero coordinates.
    pub fn pad(&self, extra: usize) -> Self {
        let mut entries = self.entries.clone();
        entries.extend(core::iter::repeat_with(Rational::zero).take(extra));
        ModOneVector { entries }
    }

    /// Restriction to the given coordinate indices, in the given order.
    pub fn project(&self, keep: &[usize]) -> Self {
        let entries = keep.iter().map(|&i| self.entries[i].clone()).collect();
        ModOneVector { entries }
    }

    /// Reindexes by a permutation: entry `j` of the result is entry
    /// `perm[j]` of `self`.  Errors unless `perm` is a permutation of
    /// `0..width`.
    pub fn permute(&self, perm: &[usize]) -> Result<Self> {
        if perm.len() != self.width() {
            return Err(Error::LengthMismatch {
                left: perm.len(),
                right: self.width(),
            });
        }
        let mut seen = vec![false; perm.len()];
        for &p in perm {
            if p >= perm.len() || seen[p] {
                return Err(Error::BadParameter("not a permutation".to_string()));
            }
            seen[p] = true;
        }
        Ok(ModOneVector {
            entries: perm.iter().map(|&i| self.entries[i].clone()).collect(),
        })
    }
}

impl fmt::Display for ModOneVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, e) in self.entries.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{e}")?;
        }
        Ok(())
    }
}

/// The shift-sum discrepancy
/// `sum_{j=0}^{d-1} {j/d + s/(nd)}  -  sum_{j=0}^{d-1} j/d`,
/// computed by literal summation of fractional parts.
///
/// Writing `s = qn + r` with `0 <= r < n`, the result equals `r/n`: shifting
/// the full residue system `{j/d}` by `s/(nd)` moves total mass `r/n` across
/// the unit interval.  This identity is what makes one-step extensions
/// height-exact, and the test suite checks it against this literal sum.
///
/// Requires `d >= 1`, `n >= 1` and `0 <= s < n*d`.
pub fn shift_sum_delta(d: u64, n: u64, s: u64) -> Result<Rational> {
    if d == 0 || n == 0 {
        return Err(Error::BadParameter(
            "shift_sum_delta needs d, n >= 1".to_string(),
        ));
    }
    let bound = n
        .checked_mul(d)
        .ok_or_else(|| Error::BadParameter("n*d overflows".to_string()))?;
    if s >= bound {
        return Err(Error::BadParameter(format!(
            "shift s = {s} outside [0, {bound})"
        )));
    }
    let shift = Rational::new(BigInt::from(s), BigInt::from(bound));
    let mut delta = Rational::zero();
    for j in 0..d {
        let base = Rational::new(BigInt::from(j), BigInt::from(d));
        delta += fract(&(&base + &shift)) - base;
    }
    Ok(delta)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn vector(blocks: &[(i64, i64, usize)]) -> ModOneVector {
        ModOneVector::from_blocks(blocks).unwrap()
    }

    #[test]
    fn add_wraps_mod_one() {
        let c = vector(&[(1, 4, 2), (1, 2, 3)]);
        let sum = c.add_mod1(&c).unwrap();
        assert_eq!(sum, vector(&[(1, 2, 2), (0, 1, 3)]));
    }

    #[test]
    fn add_rejects_width_mismatch() {
        let a = ModOneVector::zero(2);
        let b = ModOneVector::zero(3);
        assert!(matches!(
            a.add_mod1(&b),
            Err(Error::LengthMismatch { left: 2, right: 3 })
        ));
    }

    #[test]
    fn height_of_generator() {
        let c = vector(&[(1, 4, 2), (1, 2, 3)]);
        assert_eq!(c.height().unwrap(), 2);
    }

    #[test]
    fn height_rejects_fractional_sum() {
        let v = vector(&[(1, 4, 1)]);
        assert!(matches!(v.height(), Err(Error::NonIntegerHeight(_))));
    }

    #[test]
    fn entries_outside_unit_interval_rejected() {
        assert!(ModOneVector::new(vec![rational(1, 1)]).is_err());
        assert!(ModOneVector::new(vec![rational(-1, 2)]).is_err());
        assert!(ModOneVector::new(vec![rational(99, 100)]).is_ok());
    }

    #[test]
    fn scale_is_exact() {
        let c = vector(&[(1, 4, 2), (1, 2, 3)]);
        assert_eq!(c.scale_mod1(3), vector(&[(3, 4, 2), (1, 2, 3)]));
        assert_eq!(c.scale_mod1(4), ModOneVector::zero(5));
    }

    #[test]
    fn order_is_lcm_of_denominators() {
        let c = vector(&[(1, 4, 2), (1, 2, 3)]);
        assert_eq!(c.order_mod1().unwrap(), 4);
        assert_eq!(ModOneVector::zero(3).order_mod1().unwrap(), 1);
    }

    #[test]
    fn support_and_projection() {
        let v = vector(&[(0, 1, 1), (1, 2, 1), (0, 1, 1), (1, 3, 1)]);
        assert_eq!(v.support(), vec![1, 3]);
        assert_eq!(v.project(&[1, 3]), vector(&[(1, 2, 1), (1, 3, 1)]));
    }

    #[test]
    fn shift_sum_matches_hand_computed_cases() {
        assert_eq!(shift_sum_delta(2, 3, 4).unwrap(), rational(1, 3));
        assert_eq!(shift_sum_delta(1, 5, 3).unwrap(), rational(3, 5));
        assert!(shift_sum_delta(2, 3, 6).is_err());
        assert!(shift_sum_delta(0, 3, 0).is_err());
    }

    #[test]
    fn shift_sum_closed_form_small_ranges() {
        // The defining double sum must collapse to (s mod n)/n.
        for d in 1..=12u64 {
            for n in 1..=12u64 {
                for s in 0..n * d {
                    let expect = Rational::new(BigInt::from(s % n), BigInt::from(n));
                    assert_eq!(
                        shift_sum_delta(d, n, s).unwrap(),
                        expect,
                        "d={d} n={n} s={s}"
                    );
                }
            }
        }
    }

    /// Strategy: a vector with integer height, entries with denominators
    /// up to 9, built by appending a balancing entry.
    fn integer_height_vector() -> impl Strategy<Value = ModOneVector> {
        (1usize..6, 1i64..9)
            .prop_flat_map(|(len, _)| proptest::collection::vec((0i64..9, 1i64..9), len))
            .prop_map(|pairs| {
                let mut entries: Vec<Rational> = pairs
                    .into_iter()
                    .map(|(n, d)| fract(&rational(n, d)))
                    .collect();
                let sum: Rational = entries.iter().sum();
                let deficit = fract(&(-sum));
                entries.push(deficit);
                ModOneVector::new(entries).unwrap()
            })
    }

    proptest! {
        #[test]
        fn height_subadditive(a in integer_height_vector(), b in integer_height_vector()) {
            let width = a.width().min(b.width());
            let a = a.project(&(0..width).collect::<Vec<_>>());
            let b = b.project(&(0..width).collect::<Vec<_>>());
            // Truncation can break integrality; only test when defined.
            if let (Ok(ha), Ok(hb)) = (a.height(), b.height()) {
                let sum = a.add_mod1(&b).unwrap();
                if let Ok(hs) = sum.height() {
                    prop_assert!(hs <= ha + hb);
                }
            }
        }

        #[test]
        fn scale_agrees_with_repeated_addition(v in integer_height_vector(), t in 0u64..8) {
            let mut acc = ModOneVector::zero(v.width());
            for _ in 0..t {
                acc = acc.add_mod1(&v).unwrap();
            }
            prop_assert_eq!(v.scale_mod1(t), acc);
        }

        #[test]
        fn addition_commutes_and_associates(
            a in integer_height_vector(),
            b in integer_height_vector(),
            c in integer_height_vector(),
        ) {
            let w = a.width().min(b.width()).min(c.width());
            let keep: Vec<usize> = (0..w).collect();
            let (a, b, c) = (a.project(&keep), b.project(&keep), c.project(&keep));
            prop_assert_eq!(a.add_mod1(&b).unwrap(), b.add_mod1(&a).unwrap());
            let left = a.add_mod1(&b).unwrap().add_mod1(&c).unwrap();
            let right = a.add_mod1(&b.add_mod1(&c).unwrap()).unwrap();
            prop_assert_eq!(left, right);
        }
    }
}
