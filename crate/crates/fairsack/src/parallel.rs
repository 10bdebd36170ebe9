//! Multi-threaded enumeration and the oracle comparison.

use fairsack_core::construct::Sack;
use fairsack_core::enumerate::{
    enumerate_fair_sacks, ordered_factorizations, sacks_from_factorization, EnumerationResult,
};
use rayon::prelude::*;

/// Same result as [`enumerate_fair_sacks`], with factorizations spread over
/// `jobs` threads.
pub fn enumerate_with_jobs(t: u64, jobs: usize) -> Result<EnumerationResult, rayon::ThreadPoolBuildError> {
    if jobs <= 1 {
        return Ok(enumerate_fair_sacks(t));
    }
    let pool = rayon::ThreadPoolBuilder::new().num_threads(jobs).build()?;
    let factorizations = ordered_factorizations(t + 1);
    let per_factorization: Vec<Vec<_>> = pool.install(|| {
        factorizations
            .par_iter()
            .map(|a| {
                sacks_from_factorization(a)
                    .into_iter()
                    .map(|(p, s)| (a.clone(), p, s))
                    .collect()
            })
            .collect()
    });
    Ok(EnumerationResult::from_candidates(
        t,
        factorizations.len(),
        per_factorization.into_iter().flatten(),
    ))
}

/// Both lists describe the same set of unordered sacks.
pub fn same_sacks(result: &EnumerationResult, oracle: &[Sack]) -> bool {
    let canon = |s: &Sack| {
        let mut d = s.dice().to_vec();
        d.sort();
        d
    };
    let mut left: Vec<_> = result.sacks.iter().map(|s| canon(&s.sack)).collect();
    let mut right: Vec<_> = oracle.iter().map(canon).collect();
    left.sort();
    right.sort();
    left == right
}
