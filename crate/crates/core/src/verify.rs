//! Fairness checks for arbitrary sacks.
//!
//! [`check_fair`] expands the product of support polynomials exactly.
//! [`check_gk`] works on rational dice and tests the two conditions that
//! characterize fair sacks: every die is semifair, and each total arises from
//! exactly one roll.

use alloc::vec;
use alloc::vec::Vec;

use crate::dice::{is_semifair, RationalDie};
use crate::poly::{product, MultiplicityMap, SupportPoly};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("sack is not fair")]
pub struct NotFair;

/// Two distinct rolls (side per die) reaching the same total.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TotalCollision {
    pub total: u64,
    pub first: Vec<u64>,
    pub second: Vec<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct FairnessReport {
    pub fair: bool,
    pub semifair_failures: Vec<usize>,
    pub total_collisions: Vec<TotalCollision>,
    pub missing_totals: Vec<u64>,
}

/// Sorted set of sums reachable by dice `i..` for each `i`.
struct SuffixSums {
    sums: Vec<Vec<u64>>,
}

impl SuffixSums {
    fn new(dice: &[SupportPoly]) -> Self {
        let mut sums = vec![Vec::new(); dice.len() + 1];
        sums[dice.len()] = vec![0];
        for i in (0..dice.len()).rev() {
            let mut next: Vec<u64> = sums[i + 1]
                .iter()
                .flat_map(|&s| dice[i].exponents().iter().map(move |&e| s + e))
                .collect();
            next.sort_unstable();
            next.dedup();
            sums[i] = next;
        }
        Self { sums }
    }

    fn reachable(&self, from: usize, s: u64) -> bool {
        self.sums[from].binary_search(&s).is_ok()
    }
}

/// Visits rolls with the given total in lexicographic order until `visit`
/// returns false.
fn rolls_with_total(
    dice: &[SupportPoly],
    suffix: &SuffixSums,
    total: u64,
    visit: &mut dyn FnMut(&[u64]) -> bool,
) {
    fn go(
        dice: &[SupportPoly],
        suffix: &SuffixSums,
        i: usize,
        remaining: u64,
        roll: &mut Vec<u64>,
        visit: &mut dyn FnMut(&[u64]) -> bool,
    ) -> bool {
        if i == dice.len() {
            return visit(roll);
        }
        for &e in dice[i].exponents() {
            if e > remaining {
                break;
            }
            if suffix.reachable(i + 1, remaining - e) {
                roll.push(e);
                let more = go(dice, suffix, i + 1, remaining - e, roll, visit);
                roll.pop();
                if !more {
                    return false;
                }
            }
        }
        true
    }
    if suffix.reachable(0, total) {
        go(dice, suffix, 0, total, &mut Vec::with_capacity(dice.len()), visit);
    }
}

fn smallest_two_rolls(dice: &[SupportPoly], suffix: &SuffixSums, total: u64) -> TotalCollision {
    let mut found: Vec<Vec<u64>> = Vec::with_capacity(2);
    rolls_with_total(dice, suffix, total, &mut |roll| {
        found.push(roll.to_vec());
        found.len() < 2
    });
    let second = found.pop().expect("collision has two rolls");
    let first = found.pop().expect("collision has two rolls");
    TotalCollision { total, first, second }
}

fn totals_report(supports: &[SupportPoly], semifair_failures: Vec<usize>) -> FairnessReport {
    let t: u64 = supports.iter().map(SupportPoly::degree).sum();
    let m: MultiplicityMap = product(supports);
    let colliding: Vec<u64> = m.collisions().map(|(s, _)| s).collect();
    let total_collisions = if colliding.is_empty() {
        Vec::new()
    } else {
        let suffix = SuffixSums::new(supports);
        colliding.into_iter().map(|s| smallest_two_rolls(supports, &suffix, s)).collect()
    };
    let missing_totals: Vec<u64> = (0..=t).filter(|&s| m.get(s) == 0).collect();
    let fair =
        semifair_failures.is_empty() && total_collisions.is_empty() && missing_totals.is_empty();
    FairnessReport { fair, semifair_failures, total_collisions, missing_totals }
}

/// Exact fairness of a sack of normalized dice.
///
/// A die whose support lacks 0 or is not palindromic is listed under
/// `semifair_failures`; collisions carry the two lexicographically smallest
/// rolls reaching that total. Constant dice are permitted.
pub fn check_fair(dice: &[SupportPoly]) -> FairnessReport {
    let semifair_failures = dice
        .iter()
        .enumerate()
        .filter(|(_, d)| d.exponents()[0] != 0 || !d.is_palindromic())
        .map(|(i, _)| i)
        .collect();
    totals_report(dice, semifair_failures)
}

/// The semifair and uniqueness-of-totals conditions on rational dice.
///
/// Totals are computed over the sides with nonzero probability of each die,
/// whether or not the die is semifair.
pub fn check_gk(dice: &[RationalDie]) -> FairnessReport {
    let semifair_failures =
        dice.iter().enumerate().filter(|(_, d)| !is_semifair(d).semifair).map(|(i, _)| i).collect();
    let supports: Vec<SupportPoly> = dice.iter().map(RationalDie::support).collect();
    let report = totals_report(&supports, semifair_failures);
    #[cfg(debug_assertions)]
    if report.semifair_failures.is_empty() {
        debug_assert_eq!(report.fair, check_fair(&supports).fair);
    }
    report
}

/// An exponent `e >= 1` present in more than one die.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SharedTerm {
    pub exponent: u64,
    pub dice: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UniqueTerms {
    pub holds: bool,
    pub shared: Vec<SharedTerm>,
    /// The die with an `x` term, when exactly one exists.
    pub linear_die: Option<usize>,
}

/// Uniqueness of terms: every positive exponent lies in at most one die, and
/// for positive totals exactly one die has an `x` term.
pub fn unique_terms(dice: &[SupportPoly]) -> UniqueTerms {
    let mut owners: alloc::collections::BTreeMap<u64, Vec<usize>> = Default::default();
    for (i, d) in dice.iter().enumerate() {
        for &e in d.exponents().iter().filter(|&&e| e > 0) {
            owners.entry(e).or_default().push(i);
        }
    }
    let linear = owners.get(&1).cloned().unwrap_or_default();
    let shared: Vec<SharedTerm> = owners
        .into_iter()
        .filter(|(_, v)| v.len() > 1)
        .map(|(exponent, dice)| SharedTerm { exponent, dice })
        .collect();
    let t: u64 = dice.iter().map(SupportPoly::degree).sum();
    let linear_die = (linear.len() == 1).then(|| linear[0]);
    let holds = shared.is_empty() && (t == 0 || linear_die.is_some());
    UniqueTerms { holds, shared, linear_die }
}

/// Side contributed by each die to the unique roll with each total.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FactorDegreeTable {
    /// `degrees[i][s]` is the side of die `i` in the roll totalling `s`.
    degrees: Vec<Vec<u64>>,
}

impl FactorDegreeTable {
    pub fn sigma(&self, die: usize, total: u64) -> u64 {
        self.degrees[die][total as usize]
    }

    pub fn die_count(&self) -> usize {
        self.degrees.len()
    }

    pub fn rows(&self) -> &[Vec<u64>] {
        &self.degrees
    }
}

/// Factor degree functions of a fair sack.
pub fn factor_degrees(dice: &[SupportPoly]) -> Result<FactorDegreeTable, NotFair> {
    if !crate::poly::is_fair_product(dice) {
        return Err(NotFair);
    }
    let t: u64 = dice.iter().map(SupportPoly::degree).sum();
    let mut degrees = vec![vec![0u64; t as usize + 1]; dice.len()];
    // a fair sack has exactly t + 1 rolls, one per total
    let mut roll = vec![0usize; dice.len()];
    loop {
        let s: u64 = roll.iter().zip(dice).map(|(&k, d)| d.exponents()[k]).sum();
        for (i, (&k, d)) in roll.iter().zip(dice).enumerate() {
            degrees[i][s as usize] = d.exponents()[k];
        }
        let mut i = 0;
        loop {
            if i == dice.len() {
                return Ok(FactorDegreeTable { degrees });
            }
            roll[i] += 1;
            if roll[i] < dice[i].term_count() {
                break;
            }
            roll[i] = 0;
            i += 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construct::{factorization_sack, partition_sack, OrderedFactorization};
    use crate::dice::denormalize;
    use num_bigint::BigInt;
    use num_rational::BigRational;

    fn sp(e: &[u64]) -> SupportPoly {
        SupportPoly::new(e.to_vec()).unwrap()
    }

    fn table_sack(a: &[u64]) -> Vec<SupportPoly> {
        factorization_sack(&OrderedFactorization::new(a.to_vec()).unwrap()).into_dice()
    }

    #[test]
    fn check_fair_examples() {
        assert!(check_fair(&table_sack(&[2, 3, 2])).fair);

        let r = check_fair(&[sp(&[0, 1]), sp(&[0, 1])]);
        assert!(!r.fair);
        assert_eq!(
            r.total_collisions,
            vec![TotalCollision { total: 1, first: vec![0, 1], second: vec![1, 0] }]
        );
        assert!(r.missing_totals.is_empty() && r.semifair_failures.is_empty());

        let r = check_fair(&[sp(&[0, 2, 3, 5]), sp(&[0, 1]), sp(&[0, 6])]);
        assert!(!r.fair);
        assert_eq!(r.total_collisions[0].total, 3);
        assert_eq!(r.total_collisions[0].first, vec![2, 1, 0]);
        assert_eq!(r.total_collisions[0].second, vec![3, 0, 0]);
    }

    #[test]
    fn missing_totals_and_bad_dice() {
        let r = check_fair(&[sp(&[0, 2])]);
        assert_eq!(r.missing_totals, vec![1]);
        let r = check_fair(&[sp(&[0, 1, 3])]);
        assert_eq!(r.semifair_failures, vec![0]);
        assert!(!r.fair);
        assert!(check_fair(&[]).fair);
        assert!(check_fair(&[SupportPoly::one()]).fair);
        assert!(check_fair(&[SupportPoly::one(), sp(&[0, 1])]).fair);
    }

    #[test]
    fn gk_examples() {
        let dice: Vec<RationalDie> =
            table_sack(&[3, 4]).iter().map(|s| denormalize(s).unwrap()).collect();
        assert!(check_gk(&dice).fair);

        let skew = RationalDie::new(vec![
            BigRational::new(BigInt::from(1), BigInt::from(2)),
            BigRational::new(BigInt::from(1), BigInt::from(4)),
            BigRational::new(BigInt::from(1), BigInt::from(4)),
        ])
        .unwrap();
        let r = check_gk(&[RationalDie::fair(1), skew]);
        assert!(!r.fair);
        assert_eq!(r.semifair_failures, vec![1]);

        let dice = [sp(&[0, 1, 4, 5, 8, 9]), sp(&[0, 2])].map(|s| denormalize(&s).unwrap());
        assert!(check_gk(&dice).fair);
    }

    #[test]
    fn unique_terms_examples() {
        for a in [[2, 2, 3], [2, 3, 2], [3, 2, 2]] {
            assert!(unique_terms(&table_sack(&a)).holds);
        }
        let u = unique_terms(&[sp(&[0, 3]), sp(&[0, 3, 6])]);
        assert!(!u.holds);
        assert_eq!(u.shared, vec![SharedTerm { exponent: 3, dice: vec![0, 1] }]);

        let dice = [sp(&[0, 2]), sp(&[0, 4])];
        let u = unique_terms(&dice);
        assert!(!u.holds && u.shared.is_empty() && u.linear_die.is_none());
        assert!(!check_fair(&dice).fair);
    }

    #[test]
    fn factor_degree_examples() {
        let t = factor_degrees(&table_sack(&[12])).unwrap();
        assert!((0..12).all(|s| t.sigma(0, s) == s));

        let t = factor_degrees(&table_sack(&[4, 3])).unwrap();
        assert_eq!((t.sigma(0, 5), t.sigma(1, 5)), (1, 4));

        let a = OrderedFactorization::new(vec![2, 2, 3]).unwrap();
        let s = partition_sack(&a, &"[{1,3},{2}]".parse().unwrap()).unwrap();
        let t = factor_degrees(s.dice()).unwrap();
        assert_eq!((t.sigma(0, 7), t.sigma(1, 7)), (5, 2));

        assert_eq!(factor_degrees(&[sp(&[0, 1]), sp(&[0, 1])]), Err(NotFair));
    }

    #[test]
    fn factor_degrees_sum_to_total() {
        let dice = table_sack(&[2, 3, 2, 5]);
        let t = factor_degrees(&dice).unwrap();
        let total = 59;
        for s in 0..=total {
            let sum: u64 = (0..dice.len()).map(|i| t.sigma(i, s)).sum();
            assert_eq!(sum, s);
        }
        for (i, d) in dice.iter().enumerate() {
            assert_eq!(t.sigma(i, 0), 0);
            assert_eq!(t.sigma(i, total), d.degree());
        }
    }
}
