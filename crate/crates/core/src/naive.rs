//! Slow set-based reference implementations, kept deliberately independent of
//! the stabilizer-chain machinery so the two paths can check each other.

use std::collections::HashSet;

use num_bigint::BigInt;
use num_rational::BigRational;
use rayon::prelude::*;

use crate::enumerate::{factorial_u64, for_each_permutation, permutation_from_rank};
use crate::error::{Error, Result};
use crate::perm::{check_equal_degrees, Permutation};

/// Every element of `⟨gens⟩`, by breadth-first closure under right
/// multiplication. Only usable for small groups; the fast path is
/// `GroupHandle`.
pub fn exhaustive_closure(gens: &[Permutation]) -> Result<HashSet<Permutation>> {
    let degree = check_equal_degrees(gens)?;
    let mut elements = HashSet::new();
    let mut frontier = vec![Permutation::identity(degree)];
    elements.insert(Permutation::identity(degree));
    while let Some(p) = frontier.pop() {
        for g in gens {
            let q = p.compose(g)?;
            if elements.insert(q.clone()) {
                frontier.push(q);
            }
        }
    }
    Ok(elements)
}

pub(crate) fn commutator(a: &Permutation, b: &Permutation) -> Permutation {
    a.invert()
        .compose_unchecked(&b.invert())
        .compose_unchecked(a)
        .compose_unchecked(b)
}

/// Derived subgroup of an explicitly listed group: the closure of all
/// commutators of element pairs.
pub fn derived_of_elements(elements: &HashSet<Permutation>) -> HashSet<Permutation> {
    let mut commutators: Vec<Permutation> = Vec::new();
    let mut seen = HashSet::new();
    for a in elements {
        for b in elements {
            let c = commutator(a, b);
            if seen.insert(c.clone()) {
                commutators.push(c);
            }
        }
    }
    exhaustive_closure(&commutators).expect("commutators share the degree of their group")
}

/// Solubility by listing every element of every derived term. Ground truth
/// for the certificate-producing fast path.
pub fn is_soluble_exhaustive(gens: &[Permutation]) -> Result<bool> {
    let mut current = exhaustive_closure(gens)?;
    loop {
        if current.len() == 1 {
            return Ok(true);
        }
        let next = derived_of_elements(&current);
        if next.len() == current.len() {
            return Ok(false);
        }
        current = next;
    }
}

/// Number of even `s` with `⟨a, b·s⟩` insoluble, walking all of `Sym(n)` with
/// the set-based solubility test. No stabilizer chains, no class reduction.
pub fn pins_count(a: &Permutation, b: &Permutation, n: usize) -> Result<u64> {
    let mut count = 0u64;
    let mut error = None;
    for_each_permutation(n, |s| {
        if error.is_some() || !s.is_even() {
            return;
        }
        let y = match b.compose(s) {
            Ok(y) => y,
            Err(e) => {
                error = Some(e);
                return;
            }
        };
        match is_soluble_exhaustive(&[a.clone(), y]) {
            Ok(false) => count += 1,
            Ok(true) => {}
            Err(e) => error = Some(e),
        }
    })?;
    match error {
        Some(e) => Err(e),
        None => Ok(count),
    }
}

/// Minimum insolubility probability over every nonidentity `a ∈ Sym(n)` and
/// both cosets of `Alt(n)`, with no conjugacy-class shortcut anywhere.
pub fn eta_no_reduction(n: usize) -> Result<BigRational> {
    if !(2..=6).contains(&n) {
        return Err(Error::OutOfRange {
            what: "degree",
            value: n.to_string(),
            range: "2..=6",
        });
    }
    let total = factorial_u64(n)?;
    let coset_size = total / 2;
    let reps = [
        Permutation::identity(n),
        Permutation::from_cycles(n, &[vec![0, 1]])?,
    ];
    let min_count = (1..total)
        .into_par_iter()
        .map(|rank| {
            let a = permutation_from_rank(n, rank).expect("rank below n!");
            reps.iter()
                .map(|b| pins_count(&a, b, n).expect("degrees agree"))
                .min()
                .expect("two cosets")
        })
        .min()
        .expect("Sym(n) has nonidentity elements for n >= 2");
    Ok(BigRational::new(
        BigInt::from(min_count),
        BigInt::from(coset_size),
    ))
}
