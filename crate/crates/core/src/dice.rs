//! Dice with exact rational side probabilities.

use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::poly::SupportPoly;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DieError {
    #[error("a die needs at least one side")]
    NoSides,
    #[error("probability of side {side} is outside [0, 1]")]
    OutOfRange { side: usize },
    #[error("side probabilities sum to {sum}, not 1")]
    BadSum { sum: BigRational },
    #[error("the largest side must have nonzero probability")]
    TopSideZero,
    #[error("die is not semifair (sides {} and {} disagree)", .witness.0, .witness.1)]
    NotSemifair { witness: (usize, usize) },
    #[error("support must contain side 0")]
    InvalidSupport,
}

/// A die on sides `0..=n` with exact probabilities summing to 1 and `p(n) > 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalDie {
    probs: Vec<BigRational>,
}

impl RationalDie {
    pub fn new(probs: Vec<BigRational>) -> Result<Self, DieError> {
        let Some(last) = probs.last() else {
            return Err(DieError::NoSides);
        };
        if last.is_zero() {
            return Err(DieError::TopSideZero);
        }
        let one = BigRational::one();
        if let Some(side) = probs.iter().position(|p| *p < BigRational::zero() || *p > one) {
            return Err(DieError::OutOfRange { side });
        }
        let sum = probs.iter().fold(BigRational::zero(), |acc, p| acc + p);
        if sum != one {
            return Err(DieError::BadSum { sum });
        }
        Ok(Self { probs })
    }

    /// The fair die with sides `0..=n`.
    pub fn fair(n: u64) -> Self {
        let p = BigRational::new(BigInt::one(), BigInt::from(n) + 1);
        Self { probs: vec![p; n as usize + 1] }
    }

    pub fn probs(&self) -> &[BigRational] {
        &self.probs
    }

    /// Largest side `n`.
    pub fn degree(&self) -> u64 {
        self.probs.len() as u64 - 1
    }

    /// Sides with nonzero probability.
    pub fn support(&self) -> SupportPoly {
        let exps = self
            .probs
            .iter()
            .enumerate()
            .filter(|(_, p)| !p.is_zero())
            .map(|(j, _)| j as u64)
            .collect();
        SupportPoly::new(exps).expect("top side is nonzero")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SemifairVerdict {
    pub semifair: bool,
    pub fair: bool,
    /// First pair of sides breaking palindromy or the equal-value condition.
    pub witness: Option<(usize, usize)>,
}

/// Palindromic with all nonzero probabilities equal; fair when no side is zero.
pub fn is_semifair(d: &RationalDie) -> SemifairVerdict {
    let p = d.probs();
    let n = p.len() - 1;
    let witness = (0..=n / 2)
        .find(|&j| p[j] != p[n - j])
        .map(|j| (j, n - j))
        .or_else(|| {
            // palindromic, so p(0) = p(n) > 0
            (1..=n).find(|&j| !p[j].is_zero() && p[j] != p[0]).map(|j| (0, j))
        });
    let semifair = witness.is_none();
    SemifairVerdict {
        semifair,
        fair: semifair && p.iter().all(|x| !x.is_zero()),
        witness,
    }
}

/// Monic scaling of a semifair die: the set of sides it can show.
pub fn normalize(d: &RationalDie) -> Result<SupportPoly, DieError> {
    match is_semifair(d).witness {
        Some(witness) => Err(DieError::NotSemifair { witness }),
        None => Ok(d.support()),
    }
}

/// Uniform probabilities over the support.
pub fn denormalize(s: &SupportPoly) -> Result<RationalDie, DieError> {
    if s.exponents()[0] != 0 {
        return Err(DieError::InvalidSupport);
    }
    let p = BigRational::new(BigInt::one(), BigInt::from(s.term_count()));
    let mut probs = vec![BigRational::zero(); s.degree() as usize + 1];
    for &e in s.exponents() {
        probs[e as usize] = p.clone();
    }
    Ok(RationalDie { probs })
}

/// Exact distribution of the total of independent dice.
pub fn total_distribution(dice: &[RationalDie]) -> Vec<BigRational> {
    let mut dist = vec![BigRational::one()];
    for d in dice {
        let mut next = vec![BigRational::zero(); dist.len() + d.probs.len() - 1];
        for (s, ps) in dist.iter().enumerate() {
            if ps.is_zero() {
                continue;
            }
            for (j, pj) in d.probs.iter().enumerate() {
                if !pj.is_zero() {
                    next[s + j] += ps * pj;
                }
            }
        }
        dist = next;
    }
    dist
}

/// Uniform total distribution, decided from the exact rational convolution.
pub fn has_uniform_total(dice: &[RationalDie]) -> bool {
    let dist = total_distribution(dice);
    dist.iter().all(|p| *p == dist[0])
}
