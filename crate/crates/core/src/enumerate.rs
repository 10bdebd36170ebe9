//! Exhaustive generation of fair sacks.
//!
//! [`enumerate_fair_sacks`] walks every ordered factorization of `t + 1` and
//! every interval-free partition of its length. [`brute_force_fair_sacks`]
//! knows nothing about factorizations: it searches directly for all ways to
//! tile `{0..t}` as a sumset of dice, and serves as the oracle for the first.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use crate::arith::nontrivial_divisors;
use crate::construct::{partition_sack, IntervalPartition, OrderedFactorization, Sack};
use crate::decompose::decompose_sack;
use crate::poly::{is_fair_product, SupportPoly};

/// Default cap on `t + 1` for the brute-force search.
pub const DEFAULT_ORACLE_BOUND: u64 = 36;
/// Largest `t + 1` the bitmask search can represent.
pub const MAX_ORACLE_BOUND: u64 = 64;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum EnumerateError {
    #[error("t + 1 = {tplus1} exceeds the brute-force bound {bound}")]
    BoundExceeded { tplus1: u64, bound: u64 },
    #[error("brute-force bound must lie in 1..={MAX_ORACLE_BOUND}, got {0}")]
    InvalidBound(u64),
}

/// All tuples of integers `>= 2` with product `n`, in lexicographic order.
/// `n = 1` gives the single empty tuple.
pub fn ordered_factorizations(n: u64) -> Vec<OrderedFactorization> {
    fn go(n: u64, prefix: &mut Vec<u64>, out: &mut Vec<OrderedFactorization>) {
        if n == 1 {
            out.push(OrderedFactorization::new(prefix.clone()).expect("factors >= 2"));
            return;
        }
        for d in nontrivial_divisors(n) {
            prefix.push(d);
            go(n / d, prefix, out);
            prefix.pop();
        }
    }
    assert!(n >= 1, "ordered_factorizations needs n >= 1");
    let mut out = Vec::new();
    go(n, &mut Vec::new(), &mut out);
    out
}

/// Set partitions of `{1..l}` with no block holding two consecutive
/// elements, in lexicographic order of their block labels.
pub fn interval_free_partitions(l: usize) -> Vec<IntervalPartition> {
    fn go(l: usize, labels: &mut Vec<usize>, blocks: usize, out: &mut Vec<IntervalPartition>) {
        if labels.len() == l {
            out.push(IntervalPartition::from_labels(labels));
            return;
        }
        let prev = labels.last().copied();
        for g in 0..=blocks {
            if Some(g) == prev {
                continue;
            }
            labels.push(g);
            go(l, labels, blocks.max(g + 1), out);
            labels.pop();
        }
    }
    let mut out = Vec::new();
    go(l, &mut Vec::with_capacity(l), 0, &mut out);
    out
}

/// A fair sack with its canonical description.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EnumeratedSack {
    pub factorization: OrderedFactorization,
    pub partition: IntervalPartition,
    /// Dice in canonical order (ascending least positive side).
    pub sack: Sack,
    /// Every pair from the enumeration that produced this sack.
    pub sources: Vec<(OrderedFactorization, IntervalPartition)>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub struct EnumerationCounts {
    pub factorizations: usize,
    /// Interval-free `(a, partition)` pairs built.
    pub partitions: usize,
    pub distinct_sacks: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EnumerationResult {
    pub total: u64,
    /// Sorted by factorization, then partition.
    pub sacks: Vec<EnumeratedSack>,
    pub counts: EnumerationCounts,
}

/// One factorization's interval-free factorization-partition sacks.
pub fn sacks_from_factorization(a: &OrderedFactorization) -> Vec<(IntervalPartition, Sack)> {
    interval_free_partitions(a.len())
        .into_iter()
        .map(|p| {
            let sack = partition_sack(a, &p).expect("factorization-partition sacks are collision free");
            (p, sack)
        })
        .collect()
}

impl EnumerationResult {
    /// Deduplicates constructed sacks by their multiset of dice, verifies each
    /// one and attaches its decomposition.
    ///
    /// # Panics
    ///
    /// If a constructed sack fails verification or decomposition.
    pub fn from_candidates<I>(total: u64, factorizations: usize, candidates: I) -> Self
    where
        I: IntoIterator<Item = (OrderedFactorization, IntervalPartition, Sack)>,
    {
        let mut by_dice: BTreeMap<Vec<SupportPoly>, EnumeratedSack> = BTreeMap::new();
        let mut partitions = 0;
        for (a, p, sack) in candidates {
            partitions += 1;
            let mut key = sack.dice().to_vec();
            key.sort();
            by_dice
                .entry(key)
                .or_insert_with(|| {
                    assert!(is_fair_product(sack.dice()), "constructed sack {sack} is not fair");
                    let dec = decompose_sack(&sack).expect("constructed sack decomposes");
                    EnumeratedSack {
                        factorization: dec.factorization,
                        partition: dec.partition,
                        sack: sack.canonical(),
                        sources: Vec::new(),
                    }
                })
                .sources
                .push((a, p));
        }
        let mut sacks: Vec<EnumeratedSack> = by_dice.into_values().collect();
        sacks.sort_by(|x, y| {
            (&x.factorization, &x.partition).cmp(&(&y.factorization, &y.partition))
        });
        let counts = EnumerationCounts { factorizations, partitions, distinct_sacks: sacks.len() };
        Self { total, sacks, counts }
    }
}

/// Every fair sack with total `t`, each once as an unordered sack.
pub fn enumerate_fair_sacks(t: u64) -> EnumerationResult {
    let factorizations = ordered_factorizations(t + 1);
    let count = factorizations.len();
    let candidates = factorizations.into_iter().flat_map(|a| {
        sacks_from_factorization(&a).into_iter().map(move |(p, s)| (a.clone(), p, s))
    });
    EnumerationResult::from_candidates(t, count, candidates)
}

/// Number of distinct fair sacks with total `t`.
pub fn count_fair_sacks(t: u64) -> usize {
    enumerate_fair_sacks(t).sacks.len()
}

/// Brute force with the default bound.
pub fn brute_force_fair_sacks(t: u64) -> Result<Vec<Sack>, EnumerateError> {
    brute_force_fair_sacks_bounded(t, DEFAULT_ORACLE_BOUND)
}

/// All multisets of dice (each containing 0, at least two sides) whose
/// sumset is `{0..t}` without repeated sums, found by direct search.
///
/// Sacks come back with dice in ascending order of least positive side,
/// sorted lexicographically.
pub fn brute_force_fair_sacks_bounded(t: u64, bound: u64) -> Result<Vec<Sack>, EnumerateError> {
    if bound == 0 || bound > MAX_ORACLE_BOUND {
        return Err(EnumerateError::InvalidBound(bound));
    }
    let tplus1 = t.saturating_add(1);
    if tplus1 > bound {
        return Err(EnumerateError::BoundExceeded { tplus1, bound });
    }
    let target: u128 = (1u128 << tplus1) - 1;
    let mut memo = BTreeMap::new();
    let mut sacks: Vec<Sack> = tilings(target, &mut memo)
        .into_iter()
        .map(|dice| Sack::new(dice.into_iter().map(mask_to_poly).collect()).expect("tiles contain 0"))
        .collect();
    sacks.sort();
    sacks.dedup();
    Ok(sacks)
}

fn mask_to_poly(mask: u128) -> SupportPoly {
    SupportPoly::new((0..128).filter(|&i| mask >> i & 1 == 1).collect()).expect("non-empty")
}

/// All multisets of tiles (as bitmasks) whose sumset is exactly `set`.
/// The tile holding the least positive element of `set` comes first.
fn tilings(set: u128, memo: &mut BTreeMap<u128, Vec<Vec<u128>>>) -> Vec<Vec<u128>> {
    if set == 1 {
        return vec![Vec::new()];
    }
    if let Some(found) = memo.get(&set) {
        return found.clone();
    }
    let mut out = Vec::new();
    for (tile, rest) in splits(set) {
        for mut tail in tilings(rest, memo) {
            tail.insert(0, tile);
            out.push(tail);
        }
    }
    memo.insert(set, out.clone());
    out
}

/// Pairs `(A, Q)` with `A + Q = set` collision-free, both containing 0, and
/// `A` containing the least positive element of `set`.
fn splits(set: u128) -> Vec<(u128, u128)> {
    // The smallest element of `set` not yet covered must join A or Q with
    // 0 as its partner; anything else would repeat a sum.
    fn go(set: u128, least: u32, a: u128, q: u128, covered: u128, out: &mut Vec<(u128, u128)>) {
        let open = set & !covered;
        if open == 0 {
            out.push((a, q));
            return;
        }
        let s = open.trailing_zeros();
        let into_a = q << s;
        if into_a & !set == 0 && into_a & covered == 0 {
            go(set, least, a | 1 << s, q, covered | into_a, out);
        }
        if s != least {
            let into_q = a << s;
            if into_q & !set == 0 && into_q & covered == 0 {
                go(set, least, a, q | 1 << s, covered | into_q, out);
            }
        }
    }
    debug_assert!(set & 1 == 1 && set.leading_zeros() >= 64);
    let least = (set & !1).trailing_zeros();
    let mut out = Vec::new();
    go(set, least, 1, 1, 1, &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construct::factorization_sack;
    use crate::poly::fair_poly;
    use alloc::string::ToString;

    fn sp(e: &[u64]) -> SupportPoly {
        SupportPoly::new(e.to_vec()).unwrap()
    }

    #[test]
    fn factorizations_of_twelve() {
        let got: Vec<alloc::string::String> =
            ordered_factorizations(12).iter().map(|a| a.to_ascii()).collect();
        assert_eq!(got, ["2*2*3", "2*3*2", "2*6", "3*2*2", "3*4", "4*3", "6*2", "12"]);
        assert_eq!(ordered_factorizations(13).len(), 1);
        assert_eq!(ordered_factorizations(13)[0].factors(), &[13]);
        assert_eq!(ordered_factorizations(1), vec![OrderedFactorization::empty()]);
    }

    #[test]
    fn interval_free_small() {
        let got: Vec<_> = interval_free_partitions(3).iter().map(|p| p.to_string()).collect();
        assert_eq!(got, ["[{1,3},{2}]", "[{1},{2},{3}]"]);
        assert_eq!(interval_free_partitions(1), vec![IntervalPartition::singletons(1)]);
        assert_eq!(interval_free_partitions(0), vec![IntervalPartition::singletons(0)]);
        assert!(interval_free_partitions(6).iter().all(|p| p.is_interval_free()));
    }

    #[test]
    fn interval_free_four_by_filter() {
        // restricted growth strings of length 4, filtered
        let mut all = Vec::new();
        for code in 0..4usize.pow(4) {
            let labels: Vec<usize> = (0..4).map(|i| code / 4usize.pow(i) % 4).collect();
            let rgs = labels.iter().enumerate().all(|(i, &g)| g <= labels[..i].iter().max().map_or(0, |m| m + 1));
            if rgs {
                all.push(IntervalPartition::from_labels(&labels));
            }
        }
        assert_eq!(all.len(), 15);
        let free = all.iter().filter(|p| p.is_interval_free()).count();
        assert_eq!(free, 5);
        assert_eq!(interval_free_partitions(4).len(), 5);
    }

    #[test]
    fn eleven_sacks_for_total_eleven() {
        let r = enumerate_fair_sacks(11);
        assert_eq!(r.sacks.len(), 11);
        assert_eq!(r.counts.factorizations, 8);
        assert_eq!(r.counts.partitions, 11);
        assert!(r.sacks.iter().all(|s| s.sources.len() == 1));
        let news: Vec<alloc::string::String> = r
            .sacks
            .iter()
            .filter(|s| s.sack.len() < s.factorization.len())
            .map(|s| s.sack.to_string())
            .collect();
        assert_eq!(
            news,
            [
                "(1+x+x^4+x^5+x^8+x^9)(1+x^2)",
                "(1+x+x^6+x^7)(1+x^2+x^4)",
                "(1+x+x^2+x^6+x^7+x^8)(1+x^3)",
            ]
        );
    }

    #[test]
    fn prime_totals_have_one_sack() {
        for p in [2u64, 3, 5, 7, 11, 13, 31] {
            let r = enumerate_fair_sacks(p - 1);
            assert_eq!(r.sacks.len(), 1);
            assert_eq!(r.sacks[0].sack.dice(), &[fair_poly(p - 1)]);
            assert_eq!(brute_force_fair_sacks(p - 1).unwrap().len(), 1);
        }
    }

    #[test]
    fn trivial_total() {
        let r = enumerate_fair_sacks(0);
        assert_eq!(r.sacks.len(), 1);
        assert!(r.sacks[0].sack.is_empty());
        assert_eq!(brute_force_fair_sacks(0).unwrap(), vec![Sack::empty()]);
    }

    #[test]
    fn brute_force_small() {
        assert_eq!(brute_force_fair_sacks(1).unwrap(), vec![Sack::new(vec![sp(&[0, 1])]).unwrap()]);
        let got = brute_force_fair_sacks(3).unwrap();
        let mut expected = vec![
            Sack::new(vec![sp(&[0, 1, 2, 3])]).unwrap(),
            Sack::new(vec![sp(&[0, 1]), sp(&[0, 2])]).unwrap(),
        ];
        expected.sort();
        assert_eq!(got, expected);
    }

    #[test]
    fn brute_force_matches_for_eleven_and_seven() {
        for t in [7u64, 11] {
            let constructed: Vec<Sack> = {
                let mut v: Vec<Sack> = enumerate_fair_sacks(t).sacks.into_iter().map(|s| s.sack).collect();
                v.sort();
                v
            };
            assert_eq!(brute_force_fair_sacks(t).unwrap(), constructed);
            assert_eq!(count_fair_sacks(t), constructed.len());
        }
    }

    #[test]
    fn oracle_bounds() {
        assert_eq!(
            brute_force_fair_sacks(36),
            Err(EnumerateError::BoundExceeded { tplus1: 37, bound: 36 })
        );
        assert_eq!(brute_force_fair_sacks_bounded(3, 0), Err(EnumerateError::InvalidBound(0)));
        assert_eq!(brute_force_fair_sacks_bounded(3, 65), Err(EnumerateError::InvalidBound(65)));
        assert_eq!(brute_force_fair_sacks_bounded(47, 64).unwrap().len(), count_fair_sacks(47));
    }

    #[test]
    fn factorization_sacks_are_listed() {
        let r = enumerate_fair_sacks(23);
        for a in ordered_factorizations(24) {
            let s = factorization_sack(&a);
            assert!(r.sacks.iter().any(|e| e.sack.same_dice(&s)));
        }
    }
}
