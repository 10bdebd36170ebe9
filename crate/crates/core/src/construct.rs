//! Fair sacks built from ordered factorizations and set partitions.
//!
//! An ordered factorization `(a_1, ..., a_l)` of `t + 1` with prefix products
//! `b_1 = 1, b_{h+1} = b_h a_h` gives the factorization sack whose `h`-th die
//! is `1 + x^{b_h} + ... + x^{(a_h - 1) b_h}`. Grouping those dice by the
//! blocks of a partition of `{1..l}` and multiplying within each block gives a
//! factorization-partition sack. Every such sack is fair, and it has a unique
//! description by an interval-free partition.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::arith::prime_factors;
use crate::poly::{collision_free_product, scaled_fair_poly, SupportPoly};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ConstructError {
    #[error("factor {value} at position {position} is less than 2")]
    FactorTooSmall { position: usize, value: u64 },
    #[error("product of factors overflows u64")]
    Overflow,
    #[error("factor range {u}..={v} is invalid for a factorization of length {len}")]
    BadRange { u: usize, v: usize, len: usize },
    #[error("partition covers {partition} elements but the factorization has {factorization}")]
    LengthMismatch { partition: usize, factorization: usize },
    #[error("element {element} is missing from the partition")]
    Uncovered { element: usize },
    #[error("element {element} appears twice or is out of range")]
    BadElement { element: usize },
    #[error("partition blocks must be non-empty")]
    EmptyBlock,
    #[error("die {die} does not contain side 0")]
    MissingZero { die: usize },
    #[error("die {die} is constant; only the single-die identity sack may contain one")]
    ConstantDie { die: usize },
    #[error("dice of block {block} collide when multiplied")]
    TermCollision { block: usize },
    #[error("cannot parse `{input}`")]
    Parse { input: String },
}

/// A tuple of integers, each at least 2, with cached prefix products.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct OrderedFactorization {
    factors: Vec<u64>,
    // prefix[h] = a_1 * ... * a_h, so prefix[0] = 1 and prefix[len] = t + 1
    prefix: Vec<u64>,
}

impl OrderedFactorization {
    pub fn new(factors: Vec<u64>) -> Result<Self, ConstructError> {
        let mut prefix = Vec::with_capacity(factors.len() + 1);
        prefix.push(1u64);
        for (position, &a) in factors.iter().enumerate() {
            if a < 2 {
                return Err(ConstructError::FactorTooSmall { position: position + 1, value: a });
            }
            let last = *prefix.last().unwrap();
            prefix.push(last.checked_mul(a).ok_or(ConstructError::Overflow)?);
        }
        Ok(Self { factors, prefix })
    }

    /// The empty factorization of 1.
    pub fn empty() -> Self {
        Self { factors: Vec::new(), prefix: vec![1] }
    }

    pub fn factors(&self) -> &[u64] {
        &self.factors
    }

    pub fn len(&self) -> usize {
        self.factors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }

    /// Prefix product `b_h` for `1 <= h <= len + 1`.
    pub fn stride(&self, h: usize) -> u64 {
        self.prefix[h - 1]
    }

    /// `b_1, ..., b_{l+1}`.
    pub fn strides(&self) -> &[u64] {
        &self.prefix
    }

    /// `t + 1`, the product of all factors.
    pub fn product(&self) -> u64 {
        *self.prefix.last().unwrap()
    }

    /// The total `t` of the sacks this factorization describes.
    pub fn total(&self) -> u64 {
        self.product() - 1
    }

    /// The `h`-th die of the factorization sack (1-based).
    pub fn die(&self, h: usize) -> SupportPoly {
        scaled_fair_poly(self.factors[h - 1], self.prefix[h - 1])
    }

    /// `2*2*3` instead of `2·2·3`.
    pub fn to_ascii(&self) -> String {
        self.render("*")
    }

    fn render(&self, sep: &str) -> String {
        if self.factors.is_empty() {
            return "1".into();
        }
        let parts: Vec<String> = self.factors.iter().map(|a| alloc::format!("{a}")).collect();
        parts.join(sep)
    }
}

impl fmt::Display for OrderedFactorization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render("·"))
    }
}

impl FromStr for OrderedFactorization {
    type Err = ConstructError;

    /// Accepts factors separated by `·`, `*`, `x` or `,`; `1` or the empty
    /// string is the empty factorization.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let trimmed = s.trim().trim_start_matches('(').trim_end_matches(')');
        if trimmed.is_empty() || trimmed == "1" {
            return Ok(Self::empty());
        }
        let factors = trimmed
            .split(['·', '*', 'x', ','])
            .map(|p| p.trim().parse::<u64>())
            .collect::<Result<Vec<_>, _>>()
            .map_err(|_| ConstructError::Parse { input: s.into() })?;
        Self::new(factors)
    }
}

/// A set partition of `{1..l}`.
///
/// Stored as a block label per element with blocks numbered by their least
/// element, so equal partitions have equal representations.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct IntervalPartition {
    labels: Vec<usize>,
    blocks: usize,
}

impl IntervalPartition {
    /// Relabels an arbitrary block assignment (element `h` is `labels[h - 1]`)
    /// so blocks are numbered in order of first appearance.
    pub fn from_labels<T: Ord + Clone>(labels: &[T]) -> Self {
        let mut seen: Vec<T> = Vec::new();
        let labels = labels
            .iter()
            .map(|l| match seen.iter().position(|s| s == l) {
                Some(i) => i,
                None => {
                    seen.push(l.clone());
                    seen.len() - 1
                }
            })
            .collect();
        Self { labels, blocks: seen.len() }
    }

    /// From explicit blocks of 1-based elements, which must cover `{1..l}`
    /// exactly once.
    pub fn from_blocks(blocks: &[Vec<usize>]) -> Result<Self, ConstructError> {
        let l: usize = blocks.iter().map(Vec::len).sum();
        let mut labels = vec![usize::MAX; l];
        for (g, block) in blocks.iter().enumerate() {
            if block.is_empty() {
                return Err(ConstructError::EmptyBlock);
            }
            for &h in block {
                if h == 0 || h > l || labels[h - 1] != usize::MAX {
                    return Err(ConstructError::BadElement { element: h });
                }
                labels[h - 1] = g;
            }
        }
        Ok(Self::from_labels(&labels))
    }

    /// All-singleton partition of `{1..l}`.
    pub fn singletons(l: usize) -> Self {
        Self { labels: (0..l).collect(), blocks: l }
    }

    /// The one-block partition of `{1..l}`.
    pub fn whole(l: usize) -> Self {
        Self { labels: vec![0; l], blocks: usize::from(l > 0) }
    }

    /// Number of elements `l`.
    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn block_count(&self) -> usize {
        self.blocks
    }

    /// 0-based block index of the 1-based element `h`.
    pub fn block_of(&self, h: usize) -> usize {
        self.labels[h - 1]
    }

    /// 0-based labels, one per element.
    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    /// Blocks as ascending lists of 1-based elements.
    pub fn blocks(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.blocks];
        for (i, &g) in self.labels.iter().enumerate() {
            out[g].push(i + 1);
        }
        out
    }

    /// No block contains two consecutive elements.
    pub fn is_interval_free(&self) -> bool {
        self.labels.windows(2).all(|w| w[0] != w[1])
    }
}

impl fmt::Display for IntervalPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (g, block) in self.blocks().iter().enumerate() {
            if g > 0 {
                f.write_str(",")?;
            }
            f.write_str("{")?;
            for (i, h) in block.iter().enumerate() {
                if i > 0 {
                    f.write_str(",")?;
                }
                write!(f, "{h}")?;
            }
            f.write_str("}")?;
        }
        f.write_str("]")
    }
}

impl FromStr for IntervalPartition {
    type Err = ConstructError;

    /// Parses `[{1,3},{2}]`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || ConstructError::Parse { input: s.into() };
        let body: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let body = body.strip_prefix('[').and_then(|b| b.strip_suffix(']')).ok_or_else(err)?;
        let mut blocks = Vec::new();
        let mut rest = body;
        while !rest.is_empty() {
            let inner = rest.strip_prefix('{').ok_or_else(err)?;
            let close = inner.find('}').ok_or_else(err)?;
            let block = inner[..close]
                .split(',')
                .filter(|p| !p.is_empty())
                .map(|p| p.parse::<usize>().map_err(|_| err()))
                .collect::<Result<Vec<_>, _>>()?;
            blocks.push(block);
            rest = &inner[close + 1..];
            rest = rest.strip_prefix(',').unwrap_or(rest);
        }
        Self::from_blocks(&blocks)
    }
}

/// An ordered list of dice, each containing side 0.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Sack {
    dice: Vec<SupportPoly>,
    total: u64,
}

impl Sack {
    /// Every die must contain 0 and have at least two terms, except that the
    /// single-die sack `[1]` is accepted as the identity.
    pub fn new(dice: Vec<SupportPoly>) -> Result<Self, ConstructError> {
        let identity = dice.len() == 1 && dice[0].is_one();
        for (die, d) in dice.iter().enumerate() {
            if d.exponents()[0] != 0 {
                return Err(ConstructError::MissingZero { die });
            }
            if d.is_one() && !identity {
                return Err(ConstructError::ConstantDie { die });
            }
        }
        let total = dice
            .iter()
            .try_fold(0u64, |acc, d| acc.checked_add(d.degree()))
            .ok_or(ConstructError::Overflow)?;
        Ok(Self { dice, total })
    }

    pub(crate) fn from_dice_unchecked(dice: Vec<SupportPoly>) -> Self {
        let total = dice.iter().map(SupportPoly::degree).sum();
        Self { dice, total }
    }

    /// The sack with no dice and total 0.
    pub fn empty() -> Self {
        Self { dice: Vec::new(), total: 0 }
    }

    pub fn dice(&self) -> &[SupportPoly] {
        &self.dice
    }

    pub fn into_dice(self) -> Vec<SupportPoly> {
        self.dice
    }

    pub fn len(&self) -> usize {
        self.dice.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dice.is_empty()
    }

    /// Sum of die degrees.
    pub fn total(&self) -> u64 {
        self.total
    }

    /// The same dice ordered by ascending least positive side, which for a
    /// fair sack is also lexicographic order.
    pub fn canonical(&self) -> Sack {
        let mut dice = self.dice.clone();
        dice.sort_by_key(|d| (d.least_positive().unwrap_or(0), d.clone()));
        Sack { dice, total: self.total }
    }

    /// Same multiset of dice.
    pub fn same_dice(&self, other: &Sack) -> bool {
        let mut a = self.dice.clone();
        let mut b = other.dice.clone();
        a.sort();
        b.sort();
        a == b
    }
}

impl fmt::Display for Sack {
    /// `(1+x)(1+x^2)`; the empty sack renders as `1`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.dice.is_empty() {
            return f.write_str("1");
        }
        for d in &self.dice {
            write!(f, "({d})")?;
        }
        Ok(())
    }
}

/// The factorization sack: die `h` is `scaled_fair_poly(a_h, b_h)`.
pub fn factorization_sack(a: &OrderedFactorization) -> Sack {
    Sack::from_dice_unchecked((1..=a.len()).map(|h| a.die(h)).collect())
}

fn check_range(a: &OrderedFactorization, u: usize, v: usize) -> Result<(), ConstructError> {
    if u == 0 || u > v || v > a.len() {
        return Err(ConstructError::BadRange { u, v, len: a.len() });
    }
    Ok(())
}

/// Product of dice `u..=v` of the factorization sack (1-based).
///
/// This equals `psi_{b_{v+1}-1} / psi_{b_u-1}`: the multiples of `b_u` below
/// `b_{v+1}`.
pub fn partial_products(
    a: &OrderedFactorization,
    u: usize,
    v: usize,
) -> Result<SupportPoly, ConstructError> {
    check_range(a, u, v)?;
    let step = a.stride(u);
    let count = a.stride(v + 1) / step;
    Ok(scaled_fair_poly(count, step))
}

/// Replaces the consecutive factors `a_u..=a_v` by their product.
pub fn collapse(
    a: &OrderedFactorization,
    u: usize,
    v: usize,
) -> Result<OrderedFactorization, ConstructError> {
    check_range(a, u, v)?;
    let f = a.factors();
    let merged = f[u - 1..v].iter().product();
    let mut out = Vec::with_capacity(f.len() - (v - u));
    out.extend_from_slice(&f[..u - 1]);
    out.push(merged);
    out.extend_from_slice(&f[v..]);
    OrderedFactorization::new(out)
}

fn check_lengths(a: &OrderedFactorization, p: &IntervalPartition) -> Result<(), ConstructError> {
    if a.len() != p.len() {
        return Err(ConstructError::LengthMismatch { partition: p.len(), factorization: a.len() });
    }
    Ok(())
}

/// The factorization-partition sack: die `g` is the product of the
/// factorization-sack dice whose indices lie in block `g`.
pub fn partition_sack(
    a: &OrderedFactorization,
    p: &IntervalPartition,
) -> Result<Sack, ConstructError> {
    check_lengths(a, p)?;
    let mut members: Vec<Vec<SupportPoly>> = vec![Vec::new(); p.block_count()];
    for h in 1..=a.len() {
        members[p.block_of(h)].push(a.die(h));
    }
    let dice = members
        .iter()
        .enumerate()
        .map(|(block, fs)| collision_free_product(fs).ok_or(ConstructError::TermCollision { block }))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Sack::from_dice_unchecked(dice))
}

/// Splits every factor into its prime factors (ascending), carrying each
/// element's block over to all of its primes.
pub fn prime_refine(
    a: &OrderedFactorization,
    p: &IntervalPartition,
) -> Result<(OrderedFactorization, IntervalPartition), ConstructError> {
    check_lengths(a, p)?;
    let mut factors = Vec::new();
    let mut labels = Vec::new();
    for (h, &ah) in a.factors().iter().enumerate() {
        for q in prime_factors(ah) {
            factors.push(q);
            labels.push(p.labels()[h]);
        }
    }
    Ok((OrderedFactorization::new(factors)?, IntervalPartition::from_labels(&labels)))
}

/// Merges every run of consecutive elements sharing a block into one factor,
/// giving the interval-free description of the same sack.
pub fn canonicalize(
    a: &OrderedFactorization,
    p: &IntervalPartition,
) -> Result<(OrderedFactorization, IntervalPartition), ConstructError> {
    check_lengths(a, p)?;
    let mut factors: Vec<u64> = Vec::new();
    let mut labels: Vec<usize> = Vec::new();
    for (&ah, &g) in a.factors().iter().zip(p.labels()) {
        if labels.last() == Some(&g) {
            let last = factors.last_mut().unwrap();
            *last = last.checked_mul(ah).ok_or(ConstructError::Overflow)?;
        } else {
            factors.push(ah);
            labels.push(g);
        }
    }
    Ok((OrderedFactorization::new(factors)?, IntervalPartition::from_labels(&labels)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{fair_poly, is_fair_product, product};

    fn sp(e: &[u64]) -> SupportPoly {
        SupportPoly::new(e.to_vec()).unwrap()
    }

    fn fac(f: &[u64]) -> OrderedFactorization {
        OrderedFactorization::new(f.to_vec()).unwrap()
    }

    fn part(s: &str) -> IntervalPartition {
        s.parse().unwrap()
    }

    #[test]
    fn factorization_strides() {
        let a = fac(&[2, 2, 3]);
        assert_eq!(a.strides(), &[1, 2, 4, 12]);
        assert_eq!(a.total(), 11);
        assert_eq!(a.to_string(), "2·2·3");
        assert_eq!(a.to_ascii(), "2*2*3");
        assert_eq!("2·2·3".parse::<OrderedFactorization>().unwrap(), a);
        assert_eq!("2*2*3".parse::<OrderedFactorization>().unwrap(), a);
        assert_eq!(
            OrderedFactorization::new(vec![2, 1]),
            Err(ConstructError::FactorTooSmall { position: 2, value: 1 })
        );
        assert_eq!(OrderedFactorization::new(vec![u64::MAX, 2]), Err(ConstructError::Overflow));
    }

    #[test]
    fn factorization_sack_examples() {
        let s = factorization_sack(&fac(&[2, 2, 3]));
        assert_eq!(s.dice(), &[sp(&[0, 1]), sp(&[0, 2]), sp(&[0, 4, 8])]);
        assert_eq!(s.to_string(), "(1+x)(1+x^2)(1+x^4+x^8)");

        let s = factorization_sack(&fac(&[6, 2]));
        assert_eq!(s.dice(), &[sp(&[0, 1, 2, 3, 4, 5]), sp(&[0, 6])]);

        let s = factorization_sack(&fac(&[12]));
        assert_eq!(s.dice(), &[fair_poly(11)]);
        assert_eq!(s.total(), 11);
    }

    #[test]
    fn partial_product_examples() {
        let a = fac(&[2, 2, 3]);
        assert_eq!(partial_products(&a, 1, 3).unwrap(), fair_poly(11));
        assert_eq!(partial_products(&a, 2, 3).unwrap(), sp(&[0, 2, 4, 6, 8, 10]));
        assert_eq!(partial_products(&a, 3, 3).unwrap(), a.die(3));
        assert!(partial_products(&a, 2, 1).is_err());
        assert!(partial_products(&a, 0, 1).is_err());
        assert!(partial_products(&a, 1, 4).is_err());
    }

    #[test]
    fn collapse_examples() {
        let a = fac(&[2, 2, 3]);
        let c = collapse(&a, 1, 2).unwrap();
        assert_eq!(c, fac(&[4, 3]));
        assert_eq!(factorization_sack(&c).dice()[0], sp(&[0, 1, 2, 3]));
        assert_eq!(collapse(&a, 2, 3).unwrap(), fac(&[2, 6]));
        assert_eq!(collapse(&a, 2, 2).unwrap(), a);
    }

    #[test]
    fn partition_sack_examples() {
        let s = partition_sack(&fac(&[2, 2, 3]), &part("[{1,3},{2}]")).unwrap();
        assert_eq!(s.dice(), &[sp(&[0, 1, 4, 5, 8, 9]), sp(&[0, 2])]);

        let s = partition_sack(&fac(&[3, 2, 2]), &part("[{1,3},{2}]")).unwrap();
        assert_eq!(s.dice(), &[sp(&[0, 1, 2, 6, 7, 8]), sp(&[0, 3])]);

        let a = fac(&[2, 3, 2]);
        assert_eq!(
            partition_sack(&a, &IntervalPartition::singletons(3)).unwrap(),
            factorization_sack(&a)
        );
        assert!(matches!(
            partition_sack(&a, &IntervalPartition::singletons(2)),
            Err(ConstructError::LengthMismatch { .. })
        ));
    }

    #[test]
    fn prime_refine_examples() {
        let (a, p) = prime_refine(&fac(&[4, 3]), &IntervalPartition::singletons(2)).unwrap();
        assert_eq!(a, fac(&[2, 2, 3]));
        assert_eq!(p, part("[{1,2},{3}]"));

        let (a, p) = prime_refine(&fac(&[12]), &IntervalPartition::whole(1)).unwrap();
        assert_eq!(a, fac(&[2, 2, 3]));
        assert_eq!(p, part("[{1,2,3}]"));
        let direct = product(&[sp(&[0, 1]), sp(&[0, 2]), sp(&[0, 4, 8])]);
        assert!(direct.is_uniform_total(11));
        assert_eq!(partition_sack(&a, &p).unwrap().dice(), &[fair_poly(11)]);

        let prime = fac(&[2, 3, 2]);
        let p = part("[{1,3},{2}]");
        assert_eq!(prime_refine(&prime, &p).unwrap(), (prime, p));
    }

    #[test]
    fn canonicalize_examples() {
        let (a, p) = canonicalize(&fac(&[2, 2, 3]), &part("[{1,2},{3}]")).unwrap();
        assert_eq!((a, p), (fac(&[4, 3]), part("[{1},{2}]")));

        let input = (fac(&[2, 2, 3]), part("[{1,3},{2}]"));
        assert_eq!(canonicalize(&input.0, &input.1).unwrap(), input);

        let (a, p) = canonicalize(&fac(&[2, 2, 3]), &part("[{1,2,3}]")).unwrap();
        assert_eq!((a.clone(), p.clone()), (fac(&[12]), part("[{1}]")));
        assert_eq!(
            partition_sack(&a, &p).unwrap(),
            partition_sack(&fac(&[2, 2, 3]), &part("[{1,2,3}]")).unwrap()
        );
    }

    #[test]
    fn partition_parsing_and_numbering() {
        let p = part("[{2},{1,3}]");
        assert_eq!(p.blocks(), vec![vec![1, 3], vec![2]]);
        assert_eq!(p.to_string(), "[{1,3},{2}]");
        assert!(p.is_interval_free());
        assert!(!part("[{1,2},{3}]").is_interval_free());
        assert_eq!(part("[]"), IntervalPartition::singletons(0));
        assert!("[{1},{1}]".parse::<IntervalPartition>().is_err());
        assert!("[{1},{3}]".parse::<IntervalPartition>().is_err());
        assert!("[{1},{}]".parse::<IntervalPartition>().is_err());
    }

    #[test]
    fn sack_validation() {
        assert_eq!(Sack::new(vec![sp(&[1, 2])]), Err(ConstructError::MissingZero { die: 0 }));
        assert_eq!(
            Sack::new(vec![sp(&[0]), sp(&[0, 1])]),
            Err(ConstructError::ConstantDie { die: 0 })
        );
        let id = Sack::new(vec![sp(&[0])]).unwrap();
        assert_eq!(id.total(), 0);
        let s = Sack::new(vec![sp(&[0, 2]), sp(&[0, 1])]).unwrap();
        assert_eq!(s.total(), 3);
        assert_eq!(s.canonical().dice(), &[sp(&[0, 1]), sp(&[0, 2])]);
        assert!(s.same_dice(&s.canonical()));
    }

    #[test]
    fn empty_factorization_gives_empty_sack() {
        let a = OrderedFactorization::empty();
        assert_eq!(a.total(), 0);
        let s = partition_sack(&a, &IntervalPartition::singletons(0)).unwrap();
        assert!(s.is_empty());
        assert!(product(s.dice()).is_uniform_total(0));
        assert_eq!(s.to_string(), "1");
    }

    #[test]
    fn every_prefix_is_fair() {
        for a in [fac(&[2, 2, 3]), fac(&[3, 5, 2]), fac(&[7]), fac(&[2, 2, 2, 2, 2])] {
            for h in 1..=a.len() {
                let direct = collision_free_product((1..=h).map(|i| a.die(i)).collect::<Vec<_>>().iter());
                assert_eq!(direct.unwrap(), fair_poly(a.stride(h + 1) - 1));
                assert_eq!(partial_products(&a, 1, h).unwrap(), fair_poly(a.stride(h + 1) - 1));
            }
            assert!(is_fair_product(factorization_sack(&a).dice()));
        }
    }
}
