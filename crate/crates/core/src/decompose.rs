//! Recovering the interval-free description of a fair sack, and the
//! consequences of that description: which dice can occur in fair sacks,
//! a lower bound on the largest die, and atomization.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use crate::arith::is_prime;
use crate::construct::{
    partition_sack, prime_refine, IntervalPartition, OrderedFactorization, Sack,
};
use crate::poly::{collision_free_product, scaled_fair_poly, sumset_quotient, SupportPoly};
use crate::verify::check_fair;

/// Why the reading-off loop stopped.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Obstruction {
    /// No die has an `x^b` term.
    NoDie,
    /// Several dice have an `x^b` term.
    SharedTerm(Vec<usize>),
    /// The prefix products skipped past `t + 1`.
    Overshoot,
    /// Some die never received a factor.
    UnusedDie(usize),
    /// The rebuilt sack differs from the input at this die.
    Mismatch(usize),
}

impl core::fmt::Display for Obstruction {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            Obstruction::NoDie => f.write_str("no die has this term"),
            Obstruction::SharedTerm(dice) => {
                f.write_str("dice ")?;
                for (i, d) in dice.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{d}")?;
                }
                f.write_str(" all have this term")
            }
            Obstruction::Overshoot => f.write_str("the factors overshoot t + 1"),
            Obstruction::UnusedDie(d) => write!(f, "die {d} receives no factor"),
            Obstruction::Mismatch(d) => write!(f, "die {d} differs from its rebuilt form"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DecomposeError {
    #[error("sack is not fair: at x^{b}, {obstruction}")]
    NotFair { b: u64, obstruction: Obstruction },
    #[error("die {die} is not of the form 1 + x^b + ... + x^((p-1)b) with p prime")]
    NotAtomic { die: usize },
}

/// Canonical description of a fair sack.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decomposition {
    pub factorization: OrderedFactorization,
    /// Interval free, blocks numbered by least element.
    pub partition: IntervalPartition,
    /// `die_order[g]` is the index in the input sack of the die built from
    /// block `g`.
    pub die_order: Vec<usize>,
}

/// Reads off the factorization and interval-free partition of a fair sack.
///
/// Starting from `b = 1`, the unique die with an `x^b` term receives the next
/// factor `a`, the least `a >= 2` with `x^{ab}` absent from that die; then
/// `b` becomes `ab`. Partition blocks follow the order in which dice are first
/// chosen. The result is rebuilt and compared against the input, so an
/// unfair sack is always reported. Constant dice are ignored.
pub fn decompose_sack(sack: &Sack) -> Result<Decomposition, DecomposeError> {
    let dice = sack.dice();
    let t = sack.total();
    let target = t.checked_add(1).ok_or(DecomposeError::NotFair {
        b: 1,
        obstruction: Obstruction::Overshoot,
    })?;
    let mut factors = Vec::new();
    let mut chosen = Vec::new();
    let mut b = 1u64;
    while b < target {
        let holders: Vec<usize> = (0..dice.len()).filter(|&i| dice[i].contains(b)).collect();
        let gamma = match holders.as_slice() {
            [g] => *g,
            [] => return Err(DecomposeError::NotFair { b, obstruction: Obstruction::NoDie }),
            _ => {
                return Err(DecomposeError::NotFair {
                    b,
                    obstruction: Obstruction::SharedTerm(holders),
                })
            }
        };
        let die = &dice[gamma];
        let mut a = 2u64;
        while b.checked_mul(a).is_some_and(|e| die.contains(e)) {
            a += 1;
        }
        factors.push(a);
        chosen.push(gamma);
        b = b.checked_mul(a).ok_or(DecomposeError::NotFair {
            b,
            obstruction: Obstruction::Overshoot,
        })?;
    }
    if b != target {
        return Err(DecomposeError::NotFair { b, obstruction: Obstruction::Overshoot });
    }

    let partition = IntervalPartition::from_labels(&chosen);
    let mut die_order = Vec::with_capacity(partition.block_count());
    for &g in &chosen {
        if !die_order.contains(&g) {
            die_order.push(g);
        }
    }
    if let Some(unused) = (0..dice.len()).find(|i| !die_order.contains(i) && !dice[*i].is_one()) {
        return Err(DecomposeError::NotFair { b, obstruction: Obstruction::UnusedDie(unused) });
    }

    let factorization = OrderedFactorization::new(factors).expect("every factor is at least 2");
    let rebuilt = partition_sack(&factorization, &partition)
        .expect("interval-free factorization-partition sacks are collision free");
    for (g, die) in rebuilt.dice().iter().enumerate() {
        if *die != dice[die_order[g]] {
            return Err(DecomposeError::NotFair {
                b,
                obstruction: Obstruction::Mismatch(die_order[g]),
            });
        }
    }
    Ok(Decomposition { factorization, partition, die_order })
}

/// A die written as `prod_j scaled_fair_poly(a_j, b_j)` with `a_j b_j`
/// dividing `b_{j+1}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DieChain {
    pairs: Vec<(u64, u64)>,
}

impl DieChain {
    /// Checks `a_j >= 2`, `b_j >= 1` and the divisibility condition.
    pub fn new(pairs: Vec<(u64, u64)>) -> Option<Self> {
        let ok = pairs.iter().all(|&(a, b)| a >= 2 && b >= 1)
            && pairs.windows(2).all(|w| {
                let (a, b) = w[0];
                a.checked_mul(b).is_some_and(|ab| w[1].1 % ab == 0)
            });
        ok.then_some(Self { pairs })
    }

    pub fn pairs(&self) -> &[(u64, u64)] {
        &self.pairs
    }

    /// Expands the chain into its support polynomial.
    pub fn reconstruct(&self) -> SupportPoly {
        let factors: Vec<SupportPoly> =
            self.pairs.iter().map(|&(a, b)| scaled_fair_poly(a, b)).collect();
        collision_free_product(&factors).expect("divisibility makes the chain collision free")
    }

    /// The smallest total of a fair sack containing this die, `a_l b_l - 1`.
    pub fn minimal_total(&self) -> u64 {
        self.pairs.last().map_or(0, |&(a, b)| a * b - 1)
    }
}

/// Decides whether `d` occurs in some fair sack, returning a chain for it.
///
/// Peels `1 + x^b + ... + x^{(a-1)b}` off the bottom, where `b` is the least
/// positive exponent and `a` the length of the run `0, b, 2b, ...` inside the
/// support, divides it out exactly, and repeats on the quotient. The constant
/// die gives the empty chain.
pub fn die_membership(d: &SupportPoly) -> Option<DieChain> {
    if d.exponents()[0] != 0 {
        return None;
    }
    let mut pairs: Vec<(u64, u64)> = Vec::new();
    let mut rest = d.clone();
    while let Some(b) = rest.least_positive() {
        if let Some(&(pa, pb)) = pairs.last() {
            if b % (pa * pb) != 0 {
                return None;
            }
        }
        let mut a = 2u64;
        while b.checked_mul(a).is_some_and(|e| rest.contains(e)) {
            a += 1;
        }
        rest = sumset_quotient(&rest, &scaled_fair_poly(a, b))?;
        pairs.push((a, b));
    }
    DieChain::new(pairs)
}

/// Least prime factor of `n`.
pub fn least_prime(n: u64) -> u64 {
    crate::arith::least_prime_factor(n)
}

/// `(t + 1)(1 - 1/p) + 1`: every fair sack with total `t` has a die of at
/// least this order, `p` being the least prime dividing `t + 1`.
pub fn largest_die_bound(t: u64, p: u64) -> u64 {
    debug_assert!(p >= 2 && (t + 1).is_multiple_of(p));
    (t + 1) - (t + 1) / p + 1
}

/// Support of the form `{0, b, 2b, ..., (p-1)b}` with `p` prime.
pub fn is_atomic_fair_die(d: &SupportPoly) -> bool {
    let Some(b) = d.least_positive() else {
        return false;
    };
    let p = d.term_count() as u64;
    is_prime(p) && d.exponents().iter().zip(0u64..).all(|(&e, u)| e == u * b)
}

/// Replaces every die by its prime factors.
///
/// The dice of the result are `scaled_fair_poly(p, b)` pieces, grouped by
/// the input die they came from and ascending within each group.
pub fn atomize(sack: &Sack) -> Result<Sack, DecomposeError> {
    let dec = decompose_sack(sack)?;
    let (primes, refined) = prime_refine(&dec.factorization, &dec.partition)
        .expect("partition matches factorization");
    let mut groups: Vec<Vec<SupportPoly>> = vec![Vec::new(); sack.len()];
    for h in 1..=primes.len() {
        let g = refined.block_of(h);
        groups[dec.die_order[g]].push(primes.die(h));
    }
    let dice: Vec<SupportPoly> = groups.into_iter().flatten().collect();
    Ok(Sack::new(dice).expect("atomic dice have at least two terms"))
}

/// The chain of fair subsacks `S_1 < S_2 < ... < S_n` of an atomic fair sack,
/// `S_k` holding the dice of the first `k` factors.
pub fn fair_subsack_chain(sack: &Sack) -> Result<Vec<Sack>, DecomposeError> {
    if let Some(die) = sack.dice().iter().position(|d| !is_atomic_fair_die(d)) {
        return Err(DecomposeError::NotAtomic { die });
    }
    let dec = decompose_sack(sack)?;
    let ordered: Vec<SupportPoly> =
        (1..=dec.factorization.len()).map(|h| dec.factorization.die(h)).collect();
    let chain: Vec<Sack> = (1..=ordered.len())
        .map(|k| Sack::new(ordered[..k].to_vec()).expect("atomic dice"))
        .collect();
    debug_assert!(chain.iter().all(|s| check_fair(s.dice()).fair));
    Ok(chain)
}

/// Default cap on the number of atomizations returned.
pub const DEFAULT_ATOMIZATION_LIMIT: usize = 1000;

/// Exact sumset factorizations of supports, memoized on the quotient.
struct SumsetSearch {
    factorizations: BTreeMap<SupportPoly, Vec<Vec<SupportPoly>>>,
    atomic: BTreeMap<SupportPoly, bool>,
}

impl SumsetSearch {
    fn new() -> Self {
        Self { factorizations: BTreeMap::new(), atomic: BTreeMap::new() }
    }

    /// All ways to write `s = A + Q` collision-free with `0` in both and the
    /// least positive exponent of `s` in `A`, ordered by `A`. `s` must contain
    /// 0 and some positive exponent.
    ///
    /// Scans the smallest element of `s` not yet covered by `A + Q`; it must
    /// be a new element of `A` or of `Q`, paired with 0 on the other side.
    fn divisors_through_least(s: &SupportPoly) -> Vec<(SupportPoly, SupportPoly)> {
        struct Tiling<'a> {
            target: &'a [u64],
            least: u64,
            covered: Vec<bool>,
            left: Vec<u64>,
            right: Vec<u64>,
            out: Vec<(SupportPoly, SupportPoly)>,
        }

        impl Tiling<'_> {
            /// Marks `x + others` covered, or returns false leaving no trace.
            fn place(&mut self, x: u64, into_left: bool) -> bool {
                let others = if into_left { &self.right } else { &self.left };
                let mut marked = Vec::with_capacity(others.len());
                for &o in others {
                    match self.target.binary_search(&(x + o)) {
                        Ok(i) if !self.covered[i] => {
                            self.covered[i] = true;
                            marked.push(i);
                        }
                        _ => {
                            for i in marked {
                                self.covered[i] = false;
                            }
                            return false;
                        }
                    }
                }
                if into_left {
                    self.left.push(x);
                } else {
                    self.right.push(x);
                }
                true
            }

            fn unplace(&mut self, x: u64, from_left: bool) {
                if from_left {
                    self.left.pop();
                } else {
                    self.right.pop();
                }
                let others = if from_left { &self.right } else { &self.left };
                for &o in others {
                    let i = self.target.binary_search(&(x + o)).unwrap();
                    self.covered[i] = false;
                }
            }

            fn search(&mut self, from: usize) {
                let Some(i) = (from..self.target.len()).find(|&i| !self.covered[i]) else {
                    self.out.push((
                        SupportPoly::from_sorted_unchecked(self.left.clone()),
                        SupportPoly::from_sorted_unchecked(self.right.clone()),
                    ));
                    return;
                };
                let x = self.target[i];
                for into_left in [true, false] {
                    if !into_left && x == self.least {
                        continue;
                    }
                    if self.place(x, into_left) {
                        self.search(i + 1);
                        self.unplace(x, into_left);
                    }
                }
            }
        }

        let target = s.exponents();
        let mut covered = vec![false; target.len()];
        covered[0] = true;
        let mut tiling = Tiling {
            target,
            least: s.least_positive().expect("non-constant support"),
            covered,
            left: vec![0],
            right: vec![0],
            out: Vec::new(),
        };
        tiling.search(1);
        tiling.out.sort();
        tiling.out
    }

    fn is_atomic(&mut self, d: &SupportPoly) -> bool {
        if let Some(&known) = self.atomic.get(d) {
            return known;
        }
        let atomic = d.term_count() >= 2
            && Self::divisors_through_least(d).iter().all(|(_, q)| q.is_one());
        self.atomic.insert(d.clone(), atomic);
        atomic
    }

    fn atomizations(&mut self, s: &SupportPoly, limit: usize) -> Vec<Vec<SupportPoly>> {
        if s.is_one() {
            return vec![Vec::new()];
        }
        if let Some(found) = self.factorizations.get(s) {
            if found.len() >= limit {
                return found[..limit].to_vec();
            }
        }
        let mut out: Vec<Vec<SupportPoly>> = Vec::new();
        for (factor, quotient) in Self::divisors_through_least(s) {
            if out.len() >= limit {
                break;
            }
            if !self.is_atomic(&factor) {
                continue;
            }
            for rest in self.atomizations(&quotient, limit - out.len()) {
                let mut v = Vec::with_capacity(rest.len() + 1);
                v.push(factor.clone());
                v.extend(rest);
                out.push(v);
            }
        }
        self.factorizations.insert(s.clone(), out.clone());
        out
    }
}

/// Multisets of sumset-atomic 0/1 dice whose collision-free product is `d`,
/// at most `limit` of them, in lexicographic order. Factors within a result
/// ascend by least positive exponent. The constant die yields `[[1]]`.
pub fn sumset_atomizations(d: &SupportPoly, limit: usize) -> Vec<Vec<SupportPoly>> {
    if d.exponents()[0] != 0 || limit == 0 {
        return Vec::new();
    }
    if d.is_one() {
        return vec![vec![SupportPoly::one()]];
    }
    SumsetSearch::new().atomizations(d, limit)
}
