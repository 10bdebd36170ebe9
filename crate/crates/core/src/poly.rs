//! Monic 0/1 polynomials stored as exponent sets, and the multiplicity maps
//! produced by multiplying them.
//!
//! A normalized semifair die is a polynomial whose nonzero coefficients are
//! all 1, so it is fully described by its support. Multiplying such
//! polynomials is a sumset computation; the coefficient of `x^s` in the
//! product counts the ways of picking one exponent per factor that sum to
//! `s`.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

/// Dense buffers are used for sumsets whose degree stays below this.
const DENSE_LIMIT: u64 = 1 << 22;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PolyError {
    #[error("support polynomial must have at least one term")]
    Empty,
    #[error("exponents must be strictly increasing (position {index})")]
    NotIncreasing { index: usize },
    #[error("cannot parse polynomial term `{term}`")]
    BadTerm { term: String },
    #[error("exponent overflow")]
    Overflow,
}

/// A polynomial with every nonzero coefficient equal to 1.
///
/// Ordering is lexicographic on the exponent sequence.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SupportPoly {
    exponents: Vec<u64>,
}

impl SupportPoly {
    /// Builds a polynomial from a strictly increasing, non-empty exponent list.
    pub fn new(exponents: Vec<u64>) -> Result<Self, PolyError> {
        if exponents.is_empty() {
            return Err(PolyError::Empty);
        }
        if let Some(i) = exponents.windows(2).position(|w| w[0] >= w[1]) {
            return Err(PolyError::NotIncreasing { index: i + 1 });
        }
        Ok(Self { exponents })
    }

    /// Sorts and deduplicates the given exponents.
    pub fn from_unsorted<I: IntoIterator<Item = u64>>(exponents: I) -> Result<Self, PolyError> {
        let set: BTreeSet<u64> = exponents.into_iter().collect();
        Self::new(set.into_iter().collect())
    }

    pub(crate) fn from_sorted_unchecked(exponents: Vec<u64>) -> Self {
        debug_assert!(!exponents.is_empty());
        debug_assert!(exponents.windows(2).all(|w| w[0] < w[1]));
        Self { exponents }
    }

    /// The constant polynomial 1.
    pub fn one() -> Self {
        Self { exponents: vec![0] }
    }

    pub fn exponents(&self) -> &[u64] {
        &self.exponents
    }

    pub fn into_exponents(self) -> Vec<u64> {
        self.exponents
    }

    pub fn degree(&self) -> u64 {
        *self.exponents.last().expect("support is non-empty")
    }

    pub fn term_count(&self) -> usize {
        self.exponents.len()
    }

    pub fn contains(&self, exponent: u64) -> bool {
        self.exponents.binary_search(&exponent).is_ok()
    }

    pub fn is_one(&self) -> bool {
        self.exponents == [0]
    }

    /// Smallest positive exponent, if any.
    pub fn least_positive(&self) -> Option<u64> {
        self.exponents.iter().copied().find(|&e| e > 0)
    }

    /// `p(j) = p(n - j)` for the underlying 0/1 coefficients.
    pub fn is_palindromic(&self) -> bool {
        let n = self.degree();
        let m = self.exponents.len();
        (0..m).all(|i| self.exponents[i] + self.exponents[m - 1 - i] == n)
    }

    /// The sumset of `self` and `other`, or `None` if two pairs of exponents
    /// share a sum.
    pub fn collision_free_product(&self, other: &SupportPoly) -> Option<SupportPoly> {
        collision_free_product([self, other])
    }
}

impl fmt::Display for SupportPoly {
    /// Ascending terms joined by `+`, e.g. `1+x+x^4+x^5`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, &e) in self.exponents.iter().enumerate() {
            if i > 0 {
                f.write_str("+")?;
            }
            match e {
                0 => f.write_str("1")?,
                1 => f.write_str("x")?,
                _ => write!(f, "x^{e}")?,
            }
        }
        Ok(())
    }
}

impl FromStr for SupportPoly {
    type Err = PolyError;

    /// Accepts the display form, with optional whitespace, optional
    /// surrounding parentheses and `x^{11}`-style braces.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let body: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let body = body
            .strip_prefix('(')
            .and_then(|b| b.strip_suffix(')'))
            .unwrap_or(&body);
        let mut exps = Vec::new();
        for term in body.split('+') {
            let bad = || PolyError::BadTerm { term: term.into() };
            let e = match term {
                "1" => 0,
                "x" => 1,
                _ => {
                    let rest = term.strip_prefix("x^").ok_or_else(bad)?;
                    let rest = rest
                        .strip_prefix('{')
                        .and_then(|r| r.strip_suffix('}'))
                        .unwrap_or(rest);
                    rest.parse::<u64>().map_err(|_| bad())?
                }
            };
            exps.push(e);
        }
        Self::new(exps)
    }
}

/// The t-fair polynomial `1 + x + ... + x^t`.
pub fn fair_poly(t: u64) -> SupportPoly {
    SupportPoly::from_sorted_unchecked((0..=t).collect())
}

/// The `a`-term polynomial `1 + x^b + x^{2b} + ... + x^{(a-1)b}`.
///
/// # Panics
///
/// If `a` or `b` is zero, or the degree overflows `u64`.
pub fn scaled_fair_poly(a: u64, b: u64) -> SupportPoly {
    assert!(a >= 1 && b >= 1, "scaled_fair_poly needs a >= 1 and b >= 1");
    (a - 1).checked_mul(b).expect("exponent overflow");
    SupportPoly::from_sorted_unchecked((0..a).map(|u| u * b).collect())
}

/// Number of index tuples producing each total degree in a product of
/// support polynomials.
///
/// Counts saturate at `u128::MAX`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultiplicityMap {
    counts: BTreeMap<u64, u128>,
}

impl MultiplicityMap {
    pub fn counts(&self) -> &BTreeMap<u64, u128> {
        &self.counts
    }

    pub fn get(&self, s: u64) -> u128 {
        self.counts.get(&s).copied().unwrap_or(0)
    }

    /// Sum of all multiplicities, i.e. the number of index tuples.
    pub fn total_terms(&self) -> u128 {
        self.counts.values().fold(0u128, |acc, &c| acc.saturating_add(c))
    }

    /// Totals reached by more than one tuple.
    pub fn collisions(&self) -> impl Iterator<Item = (u64, u128)> + '_ {
        self.counts.iter().filter(|(_, &c)| c > 1).map(|(&s, &c)| (s, c))
    }

    pub fn is_uniform_total(&self, t: u64) -> bool {
        is_uniform_total(self, t)
    }
}

/// Multiplies the factors out, keeping every multiplicity. An empty list
/// gives `{0: 1}`.
pub fn product<'a, I>(factors: I) -> MultiplicityMap
where
    I: IntoIterator<Item = &'a SupportPoly>,
{
    let factors: Vec<&SupportPoly> = factors.into_iter().collect();
    let degree = factors
        .iter()
        .try_fold(0u64, |acc, f| acc.checked_add(f.degree()))
        .expect("exponent overflow");

    let counts = if degree < DENSE_LIMIT {
        let mut dense = vec![0u128; degree as usize + 1];
        dense[0] = 1;
        let mut reach = 0usize;
        for f in &factors {
            let mut next = vec![0u128; degree as usize + 1];
            for (s, &c) in dense[..=reach].iter().enumerate() {
                if c == 0 {
                    continue;
                }
                for &e in f.exponents() {
                    let slot = &mut next[s + e as usize];
                    *slot = slot.saturating_add(c);
                }
            }
            reach += f.degree() as usize;
            dense = next;
        }
        dense
            .into_iter()
            .enumerate()
            .filter(|&(_, c)| c > 0)
            .map(|(s, c)| (s as u64, c))
            .collect()
    } else {
        let mut acc: BTreeMap<u64, u128> = BTreeMap::new();
        acc.insert(0, 1);
        for f in &factors {
            let mut next = BTreeMap::new();
            for (&s, &c) in &acc {
                for &e in f.exponents() {
                    let slot = next.entry(s + e).or_insert(0u128);
                    *slot = slot.saturating_add(c);
                }
            }
            acc = next;
        }
        acc
    };
    MultiplicityMap { counts }
}

/// True iff the counts are exactly `{0: 1, 1: 1, ..., t: 1}`.
pub fn is_uniform_total(m: &MultiplicityMap, t: u64) -> bool {
    m.counts.len() as u64 == t.wrapping_add(1)
        && m.counts.iter().zip(0u64..).all(|((&s, &c), expect)| s == expect && c == 1)
}

/// Sumset of all factors, aborting on the first repeated total.
pub fn collision_free_product<'a, I>(factors: I) -> Option<SupportPoly>
where
    I: IntoIterator<Item = &'a SupportPoly>,
{
    let factors: Vec<&SupportPoly> = factors.into_iter().collect();
    let degree = factors
        .iter()
        .try_fold(0u64, |acc, f| acc.checked_add(f.degree()))?;

    if degree < DENSE_LIMIT {
        let mut hit = vec![false; degree as usize + 1];
        let mut current: Vec<u64> = vec![0];
        for f in &factors {
            let mut next = Vec::with_capacity(current.len() * f.term_count());
            for &s in &current {
                for &e in f.exponents() {
                    let slot = &mut hit[(s + e) as usize];
                    if *slot {
                        return None;
                    }
                    *slot = true;
                    next.push(s + e);
                }
            }
            for &s in &next {
                hit[s as usize] = false;
            }
            current = next;
        }
        current.sort_unstable();
        Some(SupportPoly::from_sorted_unchecked(current))
    } else {
        let mut current: BTreeSet<u64> = BTreeSet::from([0]);
        for f in &factors {
            let mut next = BTreeSet::new();
            for &s in &current {
                for &e in f.exponents() {
                    if !next.insert(s + e) {
                        return None;
                    }
                }
            }
            current = next;
        }
        Some(SupportPoly::from_sorted_unchecked(current.into_iter().collect()))
    }
}

/// Early-exit check that the factors multiply to `1 + x + ... + x^t` where
/// `t` is the sum of their degrees.
pub fn is_fair_product<'a, I>(factors: I) -> bool
where
    I: IntoIterator<Item = &'a SupportPoly>,
{
    let factors: Vec<&SupportPoly> = factors.into_iter().collect();
    let Some(t) = factors.iter().try_fold(0u64, |acc, f| acc.checked_add(f.degree())) else {
        return false;
    };
    let terms = factors
        .iter()
        .try_fold(1u64, |acc, f| acc.checked_mul(f.term_count() as u64));
    if terms != t.checked_add(1) {
        return false;
    }
    match collision_free_product(factors) {
        Some(p) => p.term_count() as u64 == t + 1,
        None => false,
    }
}

/// Exact division of supports: returns `Q` with `divisor + Q = dividend`
/// collision-free, if it exists. `divisor` must contain 0.
pub fn sumset_quotient(dividend: &SupportPoly, divisor: &SupportPoly) -> Option<SupportPoly> {
    if divisor.exponents()[0] != 0 || !dividend.term_count().is_multiple_of(divisor.term_count()) {
        return None;
    }
    let mut remaining: BTreeSet<u64> = dividend.exponents().iter().copied().collect();
    let mut quotient = Vec::with_capacity(dividend.term_count() / divisor.term_count());
    while let Some(&q) = remaining.iter().next() {
        for &e in divisor.exponents() {
            if !remaining.remove(&q.checked_add(e)?) {
                return None;
            }
        }
        quotient.push(q);
    }
    Some(SupportPoly::from_sorted_unchecked(quotient))
}
