//! Sacks of independent dice whose totals are uniformly distributed.
//!
//! Dice are handled in two forms: [`dice::RationalDie`] carries exact side
//! probabilities, and [`poly::SupportPoly`] is the monic 0/1 polynomial of a
//! semifair die. Every fair sack comes from an ordered factorization of
//! `t + 1` together with an interval-free partition of its factors;
//! [`construct`] builds sacks from that data, [`decompose`] recovers it, and
//! [`enumerate`] lists all fair sacks of a given total.
//!
//! The crate is `no_std` and needs only `alloc`.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod arith;
pub mod construct;
pub mod decompose;
pub mod dice;
pub mod enumerate;
pub mod poly;
pub mod verify;

pub use construct::{
    canonicalize, collapse, factorization_sack, partial_products, partition_sack, prime_refine,
    ConstructError, IntervalPartition, OrderedFactorization, Sack,
};
pub use decompose::{
    atomize, decompose_sack, die_membership, fair_subsack_chain, is_atomic_fair_die,
    largest_die_bound, sumset_atomizations, DecomposeError, Decomposition, DieChain, Obstruction,
};
pub use dice::{denormalize, is_semifair, normalize, DieError, RationalDie, SemifairVerdict};
pub use enumerate::{
    brute_force_fair_sacks, brute_force_fair_sacks_bounded, count_fair_sacks,
    enumerate_fair_sacks, interval_free_partitions, ordered_factorizations, EnumerateError,
    EnumerationResult,
};
pub use poly::{fair_poly, is_uniform_total, product, scaled_fair_poly, MultiplicityMap, SupportPoly};
pub use verify::{check_fair, check_gk, factor_degrees, unique_terms, FairnessReport, NotFair};

pub use num_rational::BigRational;
