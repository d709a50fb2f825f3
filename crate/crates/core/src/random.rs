//! Seeded instance generators.
//!
//! All generators take a caller-supplied RNG; the fuzz suites use
//! `ChaCha8Rng` seeded from a `u64`, with [`stream_rng`] deriving an
//! independent stream per suite so that adding draws to one suite never
//! shifts another.

use std::sync::Arc;

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::filters::{ArraySpec, Domain, LabelId, PeriodicSet, UltrafilterOracle};
use crate::germs::{Germ, Poly};
use crate::index_algebra::{tabulate_function, Cuts, SupportedFunction, SupportedSet};
use crate::ultrapower::Structure;

/// ChaCha8 keyed by `seed`, positioned on stream `stream`.
pub fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Period in `1..=max_period`, up to three exceptional points below
/// `max_threshold`.
pub fn periodic_set<R: Rng + ?Sized>(rng: &mut R, max_period: u64, max_threshold: u64) -> PeriodicSet {
    let period = rng.gen_range(1..=max_period.max(1));
    let mask: Vec<u64> = (0..period).filter(|_| rng.gen_bool(0.5)).collect();
    let threshold = rng.gen_range(0..=max_threshold);
    let overrides: Vec<(u64, bool)> = if threshold == 0 {
        Vec::new()
    } else {
        (0..rng.gen_range(0..=3))
            .map(|_| (rng.gen_range(0..threshold), rng.gen_bool(0.5)))
            .collect()
    };
    PeriodicSet::new(period, mask, threshold, overrides).expect("residues below period")
}

/// A random subset of a domain; finite domains draw each value with
/// probability one half.
pub fn domain_subset<R: Rng + ?Sized>(rng: &mut R, domain: Domain) -> PeriodicSet {
    match domain {
        Domain::Finite(n) => PeriodicSet::finite((0..n).filter(|_| rng.gen_bool(0.5))),
        Domain::Omega => periodic_set(rng, 6, 8),
    }
}

/// Union of up to `max_clauses` random clauses, each constraining a random
/// subset of the labels.
pub fn supported_set<R: Rng + ?Sized>(
    rng: &mut R,
    array: &Arc<ArraySpec>,
    max_clauses: usize,
) -> SupportedSet {
    let labels: Vec<LabelId> = array.label_ids().collect();
    let clauses: Vec<Vec<(LabelId, PeriodicSet)>> = (0..rng.gen_range(0..=max_clauses))
        .map(|_| {
            let mut clause = Vec::new();
            for &l in &labels {
                if rng.gen_bool(0.6) {
                    clause.push((l, domain_subset(rng, array.domain(l))));
                }
            }
            clause
        })
        .collect();
    SupportedSet::from_clauses(array, clauses).expect("labels drawn from the array")
}

/// A function into `0..range` whose guards are the atoms cut out by a few
/// random subsets on a random subset of the coordinates.
pub fn supported_function<R: Rng + ?Sized>(
    rng: &mut R,
    array: &Arc<ArraySpec>,
    range: usize,
) -> SupportedFunction<usize> {
    let mut cuts = Cuts::new();
    for l in array.label_ids() {
        if rng.gen_bool(0.5) {
            cuts.touch(l);
            for _ in 0..rng.gen_range(1..=2) {
                cuts.add(l, domain_subset(rng, array.domain(l)));
            }
        }
    }
    tabulate_function::<_, std::convert::Infallible>(array, &cuts, |_| Ok(rng.gen_range(0..range.max(1))))
        .unwrap_or_else(|e| match e {})
}

/// `1..=max_labels` coordinates, each principal on a finite domain of size
/// at most 4, principal on ω, or the factorial tower.
pub fn mixed_array<R: Rng + ?Sized>(rng: &mut R, max_labels: usize) -> Arc<ArraySpec> {
    let count = rng.gen_range(1..=max_labels.max(1));
    let oracles = (0..count).map(|i| {
        let oracle = match rng.gen_range(0..3) {
            0 => {
                let n = rng.gen_range(1..=4);
                UltrafilterOracle::principal(Domain::Finite(n), rng.gen_range(0..n))
            }
            1 => UltrafilterOracle::principal(Domain::Omega, rng.gen_range(0..6)),
            _ => Ok(UltrafilterOracle::factorial_tower()),
        }
        .expect("point inside domain");
        (format!("a{i}"), oracle)
    });
    Arc::new(ArraySpec::from_oracles(oracles).expect("distinct labels"))
}

/// Every all-principal array with `1..=max_labels` coordinates over finite
/// domains of size at most `max_domain`, in a fixed order.
pub fn all_principal_arrays(max_labels: usize, max_domain: u64) -> Vec<Arc<ArraySpec>> {
    let choices: Vec<(u64, u64)> = (1..=max_domain)
        .flat_map(|n| (0..n).map(move |p| (n, p)))
        .collect();
    let mut out = Vec::new();
    let mut current: Vec<Vec<(u64, u64)>> = vec![Vec::new()];
    for _ in 0..max_labels {
        current = current
            .into_iter()
            .flat_map(|prefix| {
                choices.iter().map(move |&c| {
                    let mut next = prefix.clone();
                    next.push(c);
                    next
                })
            })
            .collect();
        for coords in &current {
            let oracles = coords.iter().enumerate().map(|(i, &(n, p))| {
                (
                    format!("a{i}"),
                    UltrafilterOracle::principal(Domain::Finite(n), p).expect("p < n"),
                )
            });
            out.push(Arc::new(ArraySpec::from_oracles(oracles).expect("distinct labels")));
        }
    }
    out
}

/// A structure on `1..=max_size` elements with up to `max_relations`
/// relations named `R0, R1, …` of arity `1..=max_arity`, each tuple present
/// with probability one half.
pub fn structure<R: Rng + ?Sized>(
    rng: &mut R,
    max_size: usize,
    max_relations: usize,
    max_arity: usize,
) -> Structure {
    let size = rng.gen_range(1..=max_size.max(1));
    let count = rng.gen_range(1..=max_relations.max(1));
    let relations: Vec<(String, usize, Vec<Vec<usize>>)> = (0..count)
        .map(|i| {
            let arity = rng.gen_range(1..=max_arity.max(1));
            let tuples = crate::ultrapower::tuples(size, arity)
                .into_iter()
                .filter(|_| rng.gen_bool(0.5))
                .collect();
            (format!("R{i}"), arity, tuples)
        })
        .collect();
    Structure::numbered(size, relations).expect("tuples inside the universe")
}

fn poly<R: Rng + ?Sized>(rng: &mut R, max_degree: usize, max_coeff: i64) -> Poly {
    let degree = rng.gen_range(0..=max_degree);
    Poly::new(
        (0..=degree)
            .map(|_| BigInt::from(rng.gen_range(-max_coeff..=max_coeff)))
            .collect(),
    )
}

/// `p / q` with random integer polynomials of degree at most `max_degree`
/// and coefficients in `[-max_coeff, max_coeff]`; `q` is redrawn until
/// nonzero.
pub fn germ<R: Rng + ?Sized>(rng: &mut R, max_degree: usize, max_coeff: i64) -> Germ {
    let num = poly(rng, max_degree, max_coeff);
    let den = loop {
        let q = poly(rng, max_degree, max_coeff);
        if !q.is_zero() {
            break q;
        }
    };
    Germ::new(num, den).expect("nonzero denominator")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn streams_are_reproducible_and_distinct() {
        let a: Vec<u64> = (0..4).map(|_| stream_rng(7, 1).gen()).collect();
        let b: Vec<u64> = (0..4).map(|_| stream_rng(7, 1).gen()).collect();
        assert_eq!(a, b);
        let mut r1 = stream_rng(7, 1);
        let mut r2 = stream_rng(7, 2);
        assert_ne!(r1.gen::<u64>(), r2.gen::<u64>());
    }

    #[test]
    fn principal_array_count() {
        assert_eq!(all_principal_arrays(1, 3).len(), 6);
        assert_eq!(all_principal_arrays(2, 3).len(), 42);
        assert!(all_principal_arrays(2, 3).iter().all(|a| a.all_principal()));
    }

    #[test]
    fn generated_instances_are_valid() {
        let mut rng = stream_rng(3, 0);
        for _ in 0..50 {
            let m = structure(&mut rng, 3, 2, 2);
            assert!((1..=3).contains(&m.size()));
            let a = mixed_array(&mut rng, 3);
            let s = supported_set(&mut rng, &a, 3);
            assert!(s.support().iter().all(|l| a.contains_label(*l)));
            let g = germ(&mut rng, 4, 9);
            assert!(!g.denominator().is_zero());
        }
    }
}
