//! Partitions, conjugate-tuple counts and the signed sums built from them.
//!
//! A partition `λ` records how many closed points of each degree a finite set
//! of points has: part `i` with multiplicity `λ_i` means `λ_i` conjugate
//! `i`-tuples. Its weight is `Σ i·λ_i` (the geometric point count) and its
//! length `Σ λ_i` (the number of closed points).

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CombinatError {
    #[error("orbit count of degree {degree} is not an integer: {numerator}/{degree}")]
    NonIntegral { degree: usize, numerator: i128 },
    #[error("orbit count of degree {degree} is negative ({value})")]
    Negative { degree: usize, value: i128 },
    #[error("point counts known up to degree {have}, but degree {need} is required")]
    TooShort { need: usize, have: usize },
    #[error("invalid partition: {0}")]
    BadPartition(String),
}

/// A finite partition stored as ascending `(part, multiplicity)` pairs with
/// positive multiplicities.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(try_from = "Vec<(u32, u32)>", into = "Vec<(u32, u32)>")]
pub struct Partition {
    pairs: Vec<(u32, u32)>,
}

impl TryFrom<Vec<(u32, u32)>> for Partition {
    type Error = CombinatError;

    fn try_from(pairs: Vec<(u32, u32)>) -> Result<Self, Self::Error> {
        Partition::from_pairs(&pairs)
    }
}

impl From<Partition> for Vec<(u32, u32)> {
    fn from(p: Partition) -> Self {
        p.pairs
    }
}

impl Partition {
    pub fn empty() -> Self {
        Partition { pairs: Vec::new() }
    }

    /// Build from `(part, multiplicity)` pairs in any order. Repeated parts are
    /// merged and zero multiplicities dropped; a part of size 0 is rejected.
    pub fn from_pairs(pairs: &[(u32, u32)]) -> Result<Self, CombinatError> {
        let mut sorted: Vec<(u32, u32)> = Vec::with_capacity(pairs.len());
        for &(part, mult) in pairs {
            if part == 0 {
                return Err(CombinatError::BadPartition("part of size 0".into()));
            }
            if mult > 0 {
                sorted.push((part, mult));
            }
        }
        sorted.sort_unstable();
        let mut merged: Vec<(u32, u32)> = Vec::with_capacity(sorted.len());
        for (part, mult) in sorted {
            match merged.last_mut() {
                Some(last) if last.0 == part => last.1 += mult,
                _ => merged.push((part, mult)),
            }
        }
        Ok(Partition { pairs: merged })
    }

    /// From a multiplicity vector: `mults[i]` is the multiplicity of part `i + 1`.
    pub fn from_multiplicities(mults: &[u64]) -> Self {
        let pairs = mults.iter().enumerate().filter(|(_, &m)| m > 0).map(|(i, &m)| (i as u32 + 1, m as u32)).collect();
        Partition { pairs }
    }

    pub fn pairs(&self) -> &[(u32, u32)] {
        &self.pairs
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn weight(&self) -> u64 {
        self.pairs.iter().map(|&(i, m)| i as u64 * m as u64).sum()
    }

    /// `Σ λ_i`, the number of closed points.
    pub fn length(&self) -> u64 {
        self.pairs.iter().map(|&(_, m)| m as u64).sum()
    }

    pub fn multiplicity(&self, part: u32) -> u32 {
        self.pairs.iter().find(|&&(i, _)| i == part).map_or(0, |&(_, m)| m)
    }

    pub fn max_part(&self) -> u32 {
        self.pairs.last().map_or(0, |&(i, _)| i)
    }

    /// `[λ, 1¹]`: one more part of size 1.
    pub fn append_node(&self) -> Partition {
        let mut pairs = self.pairs.clone();
        match pairs.first_mut() {
            Some(first) if first.0 == 1 => first.1 += 1,
            _ => pairs.insert(0, (1, 1)),
        }
        Partition { pairs }
    }
}

impl Ord for Partition {
    fn cmp(&self, other: &Self) -> Ordering {
        self.weight().cmp(&other.weight()).then_with(|| self.pairs.cmp(&other.pairs))
    }
}

impl PartialOrd for Partition {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (k, (i, m)) in self.pairs.iter().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            write!(f, "{i}^{m}")?;
        }
        f.write_str("]")
    }
}

/// All partitions of exactly `weight`, in the crate's partition order.
pub fn partitions_of_weight(weight: u32) -> Vec<Partition> {
    fn rec(rest: u32, max_part: u32, acc: &mut Vec<(u32, u32)>, out: &mut Vec<Partition>) {
        if rest == 0 {
            out.push(Partition::from_pairs(acc).expect("parts are positive"));
            return;
        }
        for part in (1..=max_part.min(rest)).rev() {
            for mult in 1..=rest / part {
                acc.push((part, mult));
                rec(rest - part * mult, part - 1, acc, out);
                acc.pop();
            }
        }
    }
    let mut out = Vec::new();
    rec(weight, weight, &mut Vec::new(), &mut out);
    out.sort();
    out
}

/// All partitions of weight at most `bound`, including the empty one.
pub fn partitions_up_to(bound: u32) -> Vec<Partition> {
    (0..=bound).flat_map(partitions_of_weight).collect()
}

/// Visit every `μ ⊂ λ` (as a multiplicity vector aligned with `pairs`) with
/// `|μ| ≤ bound`.
fn for_each_sub(pairs: &[(u32, u64)], bound: u64, f: &mut dyn FnMut(&[u64])) {
    fn rec(pairs: &[(u32, u64)], k: usize, rest: u64, acc: &mut Vec<u64>, f: &mut dyn FnMut(&[u64])) {
        if k == pairs.len() {
            f(acc);
            return;
        }
        let (part, max) = pairs[k];
        let cap = max.min(rest / part as u64);
        for mu in 0..=cap {
            acc.push(mu);
            rec(pairs, k + 1, rest - mu * part as u64, acc, f);
            acc.pop();
        }
    }
    rec(pairs, 0, bound, &mut Vec::with_capacity(pairs.len()), f);
}

/// Sub-partitions `μ ⊂ λ` (`μ_i ≤ λ_i`) with `|μ| ≤ bound`, sorted.
pub fn subpartitions(lambda: &Partition, bound: u64) -> Vec<Partition> {
    let pairs: Vec<(u32, u64)> = lambda.pairs.iter().map(|&(i, m)| (i, m as u64)).collect();
    let mut out = Vec::new();
    for_each_sub(&pairs, bound, &mut |mu| {
        let p = pairs.iter().zip(mu).map(|(&(i, _), &m)| (i, m as u32)).collect::<Vec<_>>();
        out.push(Partition::from_pairs(&p).expect("parts are positive"));
    });
    out.sort();
    out
}

pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    num_integer::binomial(BigInt::from(n), BigInt::from(k))
}

fn signed(length: u64) -> BigInt {
    if length.is_multiple_of(2) {
        BigInt::one()
    } else {
        -BigInt::one()
    }
}

/// Classical Möbius function.
pub fn mobius(n: u64) -> i64 {
    assert!(n > 0);
    let mut n = n;
    let mut result = 1;
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            n /= d;
            if n.is_multiple_of(d) {
                return 0;
            }
            result = -result;
        }
        d += 1;
    }
    if n > 1 {
        result = -result;
    }
    result
}

/// Orbit counts `m_i = (μ∗N)(i) / i` from point counts `N_1..N_D`.
pub fn mobius_orbit_counts(counts: &[u64]) -> Result<Vec<u64>, CombinatError> {
    let mut out = Vec::with_capacity(counts.len());
    for n in 1..=counts.len() {
        let mut acc: i128 = 0;
        for d in (1..=n).filter(|d| n % d == 0) {
            acc += mobius((n / d) as u64) as i128 * counts[d - 1] as i128;
        }
        if acc % n as i128 != 0 {
            return Err(CombinatError::NonIntegral { degree: n, numerator: acc });
        }
        let m = acc / n as i128;
        if m < 0 {
            return Err(CombinatError::Negative { degree: n, value: m });
        }
        out.push(m as u64);
    }
    Ok(out)
}

/// Point counts `N_r = Σ_{d|r} d·m_d` from orbit counts.
pub fn point_counts_from_orbits(orbits: &[u64]) -> Vec<u64> {
    (1..=orbits.len()).map(|r| (1..=r).filter(|d| r % d == 0).map(|d| d as u64 * orbits[d - 1]).sum()).collect()
}

/// `|X(λ)| = Π C(m_i, λ_i)` given orbit counts `m_1..m_D`.
pub fn tuple_count_from_orbits(orbits: &[u64], lambda: &Partition) -> Result<BigInt, CombinatError> {
    if lambda.max_part() as usize > orbits.len() {
        return Err(CombinatError::TooShort { need: lambda.max_part() as usize, have: orbits.len() });
    }
    Ok(lambda.pairs.iter().map(|&(i, m)| binomial(orbits[i as usize - 1], m as u64)).product())
}

/// Number of `λ`-tuples of points of a scheme with point counts `N`.
pub fn tuple_count(counts: &[u64], lambda: &Partition) -> Result<BigInt, CombinatError> {
    tuple_count_from_orbits(&mobius_orbit_counts(counts)?, lambda)
}

/// `π_w = Σ_{|λ| = w} (-1)^{Σλ_i} |X(λ)|` from orbit counts.
pub fn pi_w_from_orbits(orbits: &[u64], w: u32) -> Result<BigInt, CombinatError> {
    if w as usize > orbits.len() {
        return Err(CombinatError::TooShort { need: w as usize, have: orbits.len() });
    }
    let mut total = BigInt::zero();
    for lambda in partitions_of_weight(w) {
        total += signed(lambda.length()) * tuple_count_from_orbits(orbits, &lambda)?;
    }
    Ok(total)
}

pub fn pi_w(counts: &[u64], w: u32) -> Result<BigInt, CombinatError> {
    pi_w_from_orbits(&mobius_orbit_counts(counts)?, w)
}

/// `-Σ_{μ⊂λ, |μ|≤N} (-1)^{Σμ_i} Π C(λ_i, μ_i)` over pairs `(part, λ_part)`.
fn sigma_pairs(pairs: &[(u32, u64)], threshold: u64) -> BigInt {
    let mut total = BigInt::zero();
    for_each_sub(pairs, threshold, &mut |mu| {
        let len: u64 = mu.iter().sum();
        let term: BigInt = pairs.iter().zip(mu).map(|(&(_, l), &m)| binomial(l, m)).product();
        total += signed(len) * term;
    });
    -total
}

/// The sieve correction coefficient `σ_N(λ)`.
pub fn sigma(lambda: &Partition, threshold: u64) -> BigInt {
    let pairs: Vec<(u32, u64)> = lambda.pairs.iter().map(|&(i, m)| (i, m as u64)).collect();
    sigma_pairs(&pairs, threshold)
}

/// `σ_N(λ)` through the complementary sum over `|μ| < |λ| - N`.
pub fn sigma_complement(lambda: &Partition, threshold: u64) -> BigInt {
    if lambda.is_empty() {
        return -BigInt::one();
    }
    let weight = lambda.weight();
    if weight <= threshold {
        return BigInt::zero();
    }
    let pairs: Vec<(u32, u64)> = lambda.pairs.iter().map(|&(i, m)| (i, m as u64)).collect();
    let mut total = BigInt::zero();
    for_each_sub(&pairs, weight - threshold - 1, &mut |mu| {
        let len: u64 = mu.iter().sum();
        let term: BigInt = pairs.iter().zip(mu).map(|(&(_, l), &m)| binomial(l, m)).product();
        total += signed(len) * term;
    });
    signed(lambda.length()) * total
}

/// `σ_N` from the orbit counts `m_1, m_2, ...` of a possibly infinite set of
/// points; only parts of size at most `N` can contribute.
pub fn sigma_truncated(orbits: &[u64], threshold: u64) -> BigInt {
    let pairs: Vec<(u32, u64)> =
        orbits.iter().enumerate().take(threshold as usize).map(|(i, &m)| (i as u32 + 1, m)).collect();
    sigma_pairs(&pairs, threshold)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn part(pairs: &[(u32, u32)]) -> Partition {
        Partition::from_pairs(pairs).unwrap()
    }

    #[test]
    fn orbit_counts_examples() {
        assert_eq!(mobius_orbit_counts(&[3, 5, 9]).unwrap(), vec![3, 1, 2]);
        assert_eq!(mobius_orbit_counts(&[7, 21]).unwrap(), vec![7, 7]);
        assert_eq!(mobius_orbit_counts(&[4, 4, 4, 4]).unwrap(), vec![4, 0, 0, 0]);
        assert!(matches!(mobius_orbit_counts(&[3, 4]), Err(CombinatError::NonIntegral { degree: 2, .. })));
        assert!(matches!(mobius_orbit_counts(&[5, 3]), Err(CombinatError::Negative { degree: 2, .. })));
    }

    #[test]
    fn tuple_counts() {
        assert_eq!(tuple_count(&[7, 21], &part(&[(1, 2)])).unwrap(), BigInt::from(21));
        assert_eq!(tuple_count(&[7], &Partition::empty()).unwrap(), BigInt::from(1));
        assert_eq!(tuple_count(&[3, 5], &part(&[(2, 1)])).unwrap(), BigInt::from(1));
        assert!(tuple_count(&[3], &part(&[(2, 1)])).is_err());
    }

    #[test]
    fn pi_examples() {
        assert_eq!(pi_w(&[3, 5], 2).unwrap(), BigInt::from(2));
        assert_eq!(pi_w(&[3], 0).unwrap(), BigInt::from(1));
        let p2: Vec<u64> = (1..=4).map(|r| 4u64.pow(r) + 2u64.pow(r) + 1).collect();
        assert_eq!(pi_w(&p2, 4).unwrap(), BigInt::zero());
    }

    #[test]
    fn sigma_examples() {
        assert_eq!(sigma(&part(&[(1, 9)]), 5), BigInt::from(56));
        assert_eq!(sigma(&Partition::empty(), 5), BigInt::from(-1));
        for lambda in partitions_up_to(5).into_iter().filter(|l| !l.is_empty()) {
            assert_eq!(sigma(&lambda, 5), BigInt::zero(), "{lambda}");
        }
        assert_eq!(sigma(&part(&[(1, 3), (2, 3)]), 5), BigInt::from(6));
        assert_eq!(sigma(&part(&[(1, 6)]), 5), BigInt::from(1));
    }

    #[test]
    fn sigma_truncated_examples() {
        assert_eq!(sigma_truncated(&[0, 0, 0, 0, 0], 5), BigInt::from(-1));
        assert_eq!(sigma_truncated(&[3, 1, 2, 0, 0], 5), sigma(&part(&[(1, 3), (2, 1), (3, 2)]), 5));
        assert_eq!(sigma_truncated(&[9, 0, 0, 0, 0], 5), BigInt::from(56));
        assert_eq!(sigma_truncated(&[9, 0, 0, 0, 0, 7, 2], 5), BigInt::from(56));
    }

    #[test]
    fn subpartition_and_append() {
        let subs = subpartitions(&part(&[(1, 2)]), 5);
        assert_eq!(subs, vec![Partition::empty(), part(&[(1, 1)]), part(&[(1, 2)])]);
        assert_eq!(part(&[(2, 1)]).append_node(), part(&[(1, 1), (2, 1)]));
        assert_eq!(part(&[(1, 2)]).append_node(), part(&[(1, 3)]));
        assert_eq!(partitions_up_to(5).len(), 19);
    }

    #[test]
    fn serialization_is_ascending_pairs() {
        let p = part(&[(3, 2), (1, 1)]);
        assert_eq!(serde_json::to_string(&p).unwrap(), "[[1,1],[3,2]]");
        let back: Partition = serde_json::from_str("[[1,1],[3,2]]").unwrap();
        assert_eq!(back, p);
        assert!(serde_json::from_str::<Partition>("[[0,1]]").is_err());
        assert_eq!(p.to_string(), "[1^1,3^2]");
    }

    #[test]
    fn mobius_values() {
        let expect = [1, -1, -1, 0, -1, 1, -1, 0, 0, 1];
        for (n, &m) in expect.iter().enumerate() {
            assert_eq!(mobius(n as u64 + 1), m);
        }
    }
}
