//! Strict divisor chains of `v` and the class counts they induce.
//!
//! Equivalence classes of type-`(v, k)` groups are indexed by a strict
//! divisor chain `1 = M_0 < M_1 < ... < M_s = v` together with one marker
//! subset per later step; a chain of length `s` contributes exactly `s!`
//! classes.  Everything here is integer combinatorics on the divisor lattice
//! of `v` and never touches group tables.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::ToString;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};

/// All divisors of `v`, ascending.
pub fn divisors(v: u64) -> Vec<u64> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1;
    while d * d <= v {
        if v % d == 0 {
            small.push(d);
            if d != v / d {
                large.push(v / d);
            }
        }
        d += 1;
    }
    large.reverse();
    small.extend(large);
    small
}

/// All strict divisor chains `1 = M_0 < M_1 < ... < M_s = v`, each as the
/// full vector including both endpoints, in lexicographic order.
pub fn strict_chains(v: u64) -> Result<Vec<Vec<u64>>> {
    if v < 2 {
        return Err(Error::BadParameter(format!(
            "divisor chains need v >= 2, got {v}"
        )));
    }
    let divs = divisors(v);
    let mut chains = Vec::new();
    let mut prefix = vec![1u64];
    descend(v, &divs, &mut prefix, &mut chains);
    Ok(chains)
}

fn descend(v: u64, divs: &[u64], prefix: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
    let last = *prefix.last().expect("prefix starts at 1");
    if last == v {
        out.push(prefix.clone());
        return;
    }
    for &d in divs {
        if d > last && d % last == 0 {
            prefix.push(d);
            descend(v, divs, prefix, out);
            prefix.pop();
        }
    }
}

/// Number of chains of each length for a fixed `v`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ChainCensus {
    v: u64,
    counts: BTreeMap<usize, u64>,
}

impl ChainCensus {
    pub fn v(&self) -> u64 {
        self.v
    }

    /// Map from chain length `s` to the number `c_s` of strict chains.
    pub fn counts(&self) -> &BTreeMap<usize, u64> {
        &self.counts
    }

    pub fn total_chains(&self) -> u64 {
        self.counts.values().sum()
    }
}

impl fmt::Display for ChainCensus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "v={}:", self.v)?;
        for (s, c) in &self.counts {
            write!(f, " c_{s}={c}")?;
        }
        Ok(())
    }
}

/// Census computed by dynamic programming over the divisor lattice, without
/// materializing chains.  `counts[s]` is the number of strict chains of
/// length `s` from `1` to `v`.
pub fn chain_census(v: u64) -> Result<ChainCensus> {
    if v < 2 {
        return Err(Error::BadParameter(format!(
            "divisor chains need v >= 2, got {v}"
        )));
    }
    let divs = divisors(v);
    // paths[i][s] = number of strict chains of length s from 1 to divs[i].
    let mut paths: Vec<Vec<u64>> = vec![Vec::new(); divs.len()];
    paths[0] = vec![1]; // divs[0] == 1, one empty chain.
    for i in 1..divs.len() {
        let mut acc: Vec<u64> = vec![0];
        for j in 0..i {
            if divs[i] % divs[j] == 0 {
                for (s, &count) in paths[j].iter().enumerate() {
                    if count == 0 {
                        continue;
                    }
                    if acc.len() <= s + 1 {
                        acc.resize(s + 2, 0);
                    }
                    acc[s + 1] = acc[s + 1]
                        .checked_add(count)
                        .ok_or_else(|| Error::BadParameter("chain count overflow".to_string()))?;
                }
            }
        }
        paths[i] = acc;
    }
    let counts = paths
        .last()
        .expect("divisor list is nonempty")
        .iter()
        .enumerate()
        .filter(|(_, &c)| c > 0)
        .map(|(s, &c)| (s, c))
        .collect();
    Ok(ChainCensus { v, counts })
}

/// `n!` with overflow checking.
pub fn factorial(n: u64) -> Result<u64> {
    let mut acc: u64 = 1;
    for i in 2..=n {
        acc = acc
            .checked_mul(i)
            .ok_or_else(|| Error::BadParameter(format!("{n}! overflows")))?;
    }
    Ok(acc)
}

/// Binomial coefficient with overflow checking.
pub fn binomial(n: u64, r: u64) -> Result<u64> {
    if r > n {
        return Ok(0);
    }
    let r = r.min(n - r);
    let mut acc: u64 = 1;
    for i in 0..r {
        acc = acc
            .checked_mul(n - i)
            .ok_or_else(|| Error::BadParameter(format!("C({n},{r}) overflows")))?;
        acc /= i + 1;
    }
    Ok(acc)
}

/// Stirling number of the second kind `S(n, s)`: partitions of an `n`-set
/// into `s` nonempty blocks, via `S(n, s) = s*S(n-1, s) + S(n-1, s-1)`.
pub fn stirling2(n: u64, s: u64) -> Result<u64> {
    if s > n {
        return Ok(0);
    }
    if n == 0 {
        return Ok(1); // S(0, 0)
    }
    if s == 0 {
        return Ok(0);
    }
    let mut row: Vec<u64> = vec![1]; // S(0, 0)
    for i in 1..=n {
        let top = s.min(i);
        let mut next: Vec<u64> = vec![0; top as usize + 1];
        for j in 1..=top {
            let stay = row
                .get(j as usize)
                .copied()
                .unwrap_or(0)
                .checked_mul(j)
                .ok_or_else(|| Error::BadParameter(format!("S({n},{s}) overflows")))?;
            let split = row.get(j as usize - 1).copied().unwrap_or(0);
            next[j as usize] = stay
                .checked_add(split)
                .ok_or_else(|| Error::BadParameter(format!("S({n},{s}) overflows")))?;
        }
        row = next;
    }
    Ok(row.get(s as usize).copied().unwrap_or(0))
}

/// Total number of equivalence classes for order `v` (any `k`):
/// `sum over s of c_s * s!` where `c_s` counts strict chains of length `s`.
pub fn count_classes(v: u64) -> Result<u64> {
    let census = chain_census(v)?;
    let mut total: u64 = 0;
    for (&s, &c) in census.counts() {
        let term = c
            .checked_mul(factorial(s as u64)?)
            .ok_or_else(|| Error::BadParameter("class count overflow".to_string()))?;
        total = total
            .checked_add(term)
            .ok_or_else(|| Error::BadParameter("class count overflow".to_string()))?;
    }
    Ok(total)
}

/// Closed form for prime powers `v = p^ell`:
/// `sum_{s=1}^{ell} C(ell-1, s-1) * s!`, independent of `p`.
pub fn prime_power_count(ell: u32) -> Result<u64> {
    if ell == 0 {
        return Err(Error::BadParameter(
            "prime power exponent must be >= 1".to_string(),
        ));
    }
    let ell = ell as u64;
    let mut total: u64 = 0;
    for s in 1..=ell {
        let term = binomial(ell - 1, s - 1)?
            .checked_mul(factorial(s)?)
            .ok_or_else(|| Error::BadParameter("class count overflow".to_string()))?;
        total = total
            .checked_add(term)
            .ok_or_else(|| Error::BadParameter("class count overflow".to_string()))?;
    }
    Ok(total)
}

/// Closed form for squarefree `v` with `ell` prime factors:
/// `sum_{s=1}^{ell} (s!)^2 * S(ell, s)`, independent of the primes.
pub fn squarefree_count(ell: u32) -> Result<u64> {
    if ell == 0 {
        return Err(Error::BadParameter(
            "squarefree factor count must be >= 1".to_string(),
        ));
    }
    let ell = ell as u64;
    let mut total: u64 = 0;
    for s in 1..=ell {
        let f = factorial(s)?;
        let term = f
            .checked_mul(f)
            .and_then(|x| x.checked_mul(stirling2(ell, s).ok()?))
            .ok_or_else(|| Error::BadParameter("class count overflow".to_string()))?;
        total = total
            .checked_add(term)
            .ok_or_else(|| Error::BadParameter("class count overflow".to_string()))?;
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn divisor_lists() {
        assert_eq!(divisors(1), vec![1]);
        assert_eq!(divisors(12), vec![1, 2, 3, 4, 6, 12]);
        assert_eq!(divisors(49), vec![1, 7, 49]);
    }

    #[test]
    fn chains_of_four_and_six() {
        assert_eq!(strict_chains(4).unwrap(), vec![vec![1, 2, 4], vec![1, 4]]);
        assert_eq!(
            strict_chains(6).unwrap(),
            vec![vec![1, 2, 6], vec![1, 3, 6], vec![1, 6]]
        );
        assert!(strict_chains(1).is_err());
    }

    #[test]
    fn chains_of_twelve() {
        let chains = strict_chains(12).unwrap();
        assert_eq!(chains.len(), 8);
        // Lexicographic order of the full chain vectors.
        assert_eq!(chains[0], vec![1, 2, 4, 12]);
        assert_eq!(chains[7], vec![1, 12]);
        let census = chain_census(12).unwrap();
        let expect: BTreeMap<usize, u64> = [(1, 1), (2, 4), (3, 3)].into_iter().collect();
        assert_eq!(census.counts(), &expect);
        assert_eq!(count_classes(12).unwrap(), 1 + 4 * 2 + 3 * 6);
    }

    #[test]
    fn census_agrees_with_materialized_chains() {
        for v in 2..=120u64 {
            let chains = strict_chains(v).unwrap();
            let mut by_len: BTreeMap<usize, u64> = BTreeMap::new();
            for chain in &chains {
                *by_len.entry(chain.len() - 1).or_insert(0) += 1;
            }
            assert_eq!(chain_census(v).unwrap().counts(), &by_len, "v={v}");
        }
    }

    #[test]
    fn chain_endpoints_and_divisibility() {
        for v in [8u64, 30, 36, 60] {
            for chain in strict_chains(v).unwrap() {
                assert_eq!(chain[0], 1);
                assert_eq!(*chain.last().unwrap(), v);
                for w in chain.windows(2) {
                    assert!(w[1] % w[0] == 0 && w[1] / w[0] >= 2);
                }
            }
        }
    }

    #[test]
    fn small_counts() {
        assert_eq!(count_classes(2).unwrap(), 1);
        assert_eq!(count_classes(8).unwrap(), 11);
        assert_eq!(count_classes(9).unwrap(), 3);
        assert_eq!(count_classes(30).unwrap(), 49);
        let census = chain_census(8).unwrap();
        let expect: BTreeMap<usize, u64> = [(1, 1), (2, 2), (3, 1)].into_iter().collect();
        assert_eq!(census.counts(), &expect);
    }

    #[test]
    fn closed_forms_match_direct_counts() {
        // Prime powers: independent of p.
        for (ell, v_list) in [
            (1, vec![2u64, 3, 5, 7]),
            (2, vec![4, 9, 25]),
            (3, vec![8, 27]),
            (4, vec![16, 81]),
            (5, vec![32]),
            (6, vec![64]),
        ] {
            let closed = prime_power_count(ell).unwrap();
            for v in v_list {
                assert_eq!(count_classes(v).unwrap(), closed, "v={v}");
            }
        }
        assert_eq!(prime_power_count(1).unwrap(), 1);
        assert_eq!(prime_power_count(3).unwrap(), 11);
        assert_eq!(prime_power_count(4).unwrap(), 49);

        // Squarefree: independent of the primes chosen.
        for (ell, v_list) in [
            (1, vec![5u64, 13]),
            (2, vec![6, 10, 15, 77]),
            (3, vec![30, 42, 105]),
            (4, vec![210]),
        ] {
            let closed = squarefree_count(ell).unwrap();
            for v in v_list {
                assert_eq!(count_classes(v).unwrap(), closed, "v={v}");
            }
        }
        assert_eq!(squarefree_count(1).unwrap(), 1);
        assert_eq!(squarefree_count(2).unwrap(), 5);
        assert_eq!(squarefree_count(3).unwrap(), 49);
    }

    #[test]
    fn stirling_and_binomial_basics() {
        assert_eq!(stirling2(4, 2).unwrap(), 7);
        assert_eq!(stirling2(5, 3).unwrap(), 25);
        assert_eq!(stirling2(3, 0).unwrap(), 0);
        assert_eq!(stirling2(0, 0).unwrap(), 1);
        assert_eq!(binomial(6, 2).unwrap(), 15);
        assert_eq!(binomial(3, 5).unwrap(), 0);
        assert_eq!(factorial(0).unwrap(), 1);
        assert_eq!(factorial(5).unwrap(), 120);
        assert!(factorial(30).is_err());
    }
}
