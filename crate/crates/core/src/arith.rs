//! Small integer helpers: primality and factorization by trial division.

use alloc::vec::Vec;

pub fn is_prime(n: u64) -> bool {
    n >= 2 && least_prime_factor(n) == n
}

/// Least prime factor of `n >= 2`; returns `n` for `n < 2`.
pub fn least_prime_factor(n: u64) -> u64 {
    if n < 2 {
        return n;
    }
    if n.is_multiple_of(2) {
        return 2;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            return d;
        }
        d += 2;
    }
    n
}

/// Prime factors of `n` in ascending order, with multiplicity.
pub fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    while n > 1 {
        let p = least_prime_factor(n);
        out.push(p);
        n /= p;
    }
    out
}

/// Divisors of `n` that are at least 2, ascending.
pub fn nontrivial_divisors(n: u64) -> Vec<u64> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            small.push(d);
            if d != n / d {
                large.push(n / d);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small.retain(|&d| d >= 2);
    small
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn primes() {
        let small: Vec<u64> = (0..30).filter(|&n| is_prime(n)).collect();
        assert_eq!(small, vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29]);
        assert_eq!(least_prime_factor(91), 7);
        assert_eq!(prime_factors(360), vec![2, 2, 2, 3, 3, 5]);
        assert!(prime_factors(1).is_empty());
    }

    #[test]
    fn divisors() {
        assert_eq!(nontrivial_divisors(12), vec![2, 3, 4, 6, 12]);
        assert_eq!(nontrivial_divisors(1), Vec::<u64>::new());
        assert_eq!(nontrivial_divisors(49), vec![7, 49]);
    }
}
