//! Structural questions about a generated group: derived series, solubility,
//! and whether the group swallows the alternating group of its degree.

use num_bigint::BigUint;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::group::GroupHandle;
use crate::perm::Permutation;

/// Orders of the successive derived terms, ending either at 1 (soluble) or at
/// the first repeated order (a perfect term, hence insoluble).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolubilityCertificate {
    pub soluble: bool,
    #[serde(with = "crate::textnum::biguint_vec_text")]
    pub derived_orders: Vec<BigUint>,
}

impl SolubilityCertificate {
    /// Derived length for soluble groups, otherwise the number of steps taken
    /// before the series stalled.
    pub fn steps(&self) -> usize {
        self.derived_orders.len() - 1
    }
}

/// Smallest normal subgroup containing `seeds`: close the seeds under
/// conjugation by the generators of `group`, skipping conjugates that already
/// sift into the subgroup built so far.
pub fn normal_closure(group: &GroupHandle, seeds: &[Permutation]) -> Result<GroupHandle> {
    let degree = group.degree();
    let mut gens: Vec<Permutation> = Vec::new();
    let mut worklist: Vec<Permutation> = Vec::new();
    let mut closure = GroupHandle::trivial(degree);
    for s in seeds {
        if !closure.contains(s)? {
            gens.push(s.clone());
            worklist.push(s.clone());
            closure = GroupHandle::new(gens.clone())?;
        }
    }
    while let Some(x) = worklist.pop() {
        for g in group.generators() {
            let conj = g.invert().compose(&x)?.compose(g)?;
            if !closure.contains(&conj)? {
                gens.push(conj.clone());
                worklist.push(conj);
                closure = GroupHandle::new(gens.clone())?;
            }
        }
    }
    Ok(closure)
}

/// The commutator subgroup: normal closure of the commutators of all
/// generator pairs.
pub fn derived_subgroup(group: &GroupHandle) -> Result<GroupHandle> {
    let gens = group.generators();
    let mut seeds = Vec::new();
    for a in gens {
        for b in gens {
            let c = a
                .invert()
                .compose_unchecked(&b.invert())
                .compose_unchecked(a)
                .compose_unchecked(b);
            if !c.is_identity() {
                seeds.push(c);
            }
        }
    }
    normal_closure(group, &seeds)
}

/// Runs the derived series until it reaches the identity or stalls.
pub fn solubility_certificate(group: &GroupHandle) -> Result<SolubilityCertificate> {
    let mut orders = vec![group.order()];
    let mut current = group.clone();
    loop {
        let last = orders.last().unwrap().clone();
        if last.is_one() {
            return Ok(SolubilityCertificate {
                soluble: true,
                derived_orders: orders,
            });
        }
        let next = derived_subgroup(&current)?;
        let next_order = next.order();
        if next_order == last {
            return Ok(SolubilityCertificate {
                soluble: false,
                derived_orders: orders,
            });
        }
        orders.push(next_order);
        current = next;
    }
}

pub fn is_soluble(group: &GroupHandle) -> Result<bool> {
    Ok(solubility_certificate(group)?.soluble)
}

/// Solubility of `⟨a, b⟩`, the question asked pointwise by every scan in this
/// crate.
pub fn pair_generates_soluble(a: &Permutation, b: &Permutation) -> Result<bool> {
    is_soluble(&GroupHandle::new(vec![a.clone(), b.clone()])?)
}

/// Whether the group contains the full alternating group of its degree, using
/// the index bound: the only subgroups of Sym(n) of order at least n!/2 are
/// Sym(n) and Alt(n).
pub fn contains_alternating(group: &GroupHandle) -> bool {
    let n = group.degree();
    if n < 3 {
        return true;
    }
    let mut half_factorial = BigUint::one();
    for k in 3..=n {
        half_factorial *= BigUint::from(k);
    }
    group.order() >= half_factorial
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::naive::is_soluble_exhaustive;
    use num_bigint::BigUint;

    fn cyc(degree: usize, cycles: &[&[usize]]) -> Permutation {
        let owned: Vec<Vec<usize>> = cycles.iter().map(|c| c.to_vec()).collect();
        Permutation::from_cycles(degree, &owned).unwrap()
    }

    fn group(gens: Vec<Permutation>) -> GroupHandle {
        GroupHandle::new(gens).unwrap()
    }

    #[test]
    fn derived_series_of_sym4() {
        let s4 = group(vec![cyc(4, &[&[0, 1]]), cyc(4, &[&[0, 1, 2, 3]])]);
        let cert = solubility_certificate(&s4).unwrap();
        assert!(cert.soluble);
        let orders: Vec<u64> = cert
            .derived_orders
            .iter()
            .map(|o| o.try_into().unwrap())
            .collect();
        assert_eq!(orders, vec![24, 12, 4, 1]);
        assert_eq!(cert.steps(), 3);
    }

    #[test]
    fn alt5_is_perfect() {
        let a5 = group(vec![cyc(5, &[&[0, 1, 2]]), cyc(5, &[&[0, 1, 2, 3, 4]])]);
        let cert = solubility_certificate(&a5).unwrap();
        assert!(!cert.soluble);
        assert_eq!(cert.derived_orders, vec![BigUint::from(60u32)]);
        let derived = derived_subgroup(&a5).unwrap();
        assert_eq!(derived.order(), BigUint::from(60u32));
    }

    #[test]
    fn sym5_series_stalls_at_alt5() {
        let s5 = group(vec![cyc(5, &[&[0, 1]]), cyc(5, &[&[0, 1, 2, 3, 4]])]);
        let cert = solubility_certificate(&s5).unwrap();
        assert!(!cert.soluble);
        let orders: Vec<u64> = cert
            .derived_orders
            .iter()
            .map(|o| o.try_into().unwrap())
            .collect();
        assert_eq!(orders, vec![120, 60]);
    }

    #[test]
    fn frobenius_group_of_order_twenty_is_soluble() {
        let f20 = group(vec![cyc(5, &[&[0, 1, 2, 3, 4]]), cyc(5, &[&[1, 2, 4, 3]])]);
        assert_eq!(f20.order(), BigUint::from(20u32));
        let cert = solubility_certificate(&f20).unwrap();
        assert!(cert.soluble);
        let orders: Vec<u64> = cert
            .derived_orders
            .iter()
            .map(|o| o.try_into().unwrap())
            .collect();
        assert_eq!(orders, vec![20, 5, 1]);
    }

    #[test]
    fn certificates_agree_with_the_exhaustive_reference() {
        let gen_sets: Vec<Vec<Permutation>> = vec![
            vec![cyc(4, &[&[0, 1, 2]]), cyc(4, &[&[1, 2, 3]])],
            vec![cyc(5, &[&[0, 1], &[2, 3]]), cyc(5, &[&[0, 1, 2, 3, 4]])],
            vec![cyc(6, &[&[0, 1, 2, 3, 4, 5]]), cyc(6, &[&[0, 3]])],
            vec![cyc(5, &[&[0, 1]]), cyc(5, &[&[0, 1, 2, 3, 4]])],
            vec![cyc(6, &[&[0, 1, 2]]), cyc(6, &[&[3, 4, 5]])],
            vec![cyc(7, &[&[0, 1, 2, 3, 4, 5, 6]])],
        ];
        for gens in gen_sets {
            let fast = is_soluble(&group(gens.clone())).unwrap();
            let slow = is_soluble_exhaustive(&gens).unwrap();
            assert_eq!(fast, slow, "disagreement on ⟨{gens:?}⟩");
        }
    }

    #[test]
    fn certificate_orders_strictly_decrease_while_soluble() {
        let g = group(vec![cyc(6, &[&[0, 1, 2, 3, 4, 5]]), cyc(6, &[&[1, 5], &[2, 4]])]);
        let cert = solubility_certificate(&g).unwrap();
        assert!(cert.soluble);
        for w in cert.derived_orders.windows(2) {
            assert!(w[1] < w[0]);
        }
    }

    #[test]
    fn normal_closure_of_a_three_cycle_in_sym5_is_alt5() {
        let s5 = group(vec![cyc(5, &[&[0, 1]]), cyc(5, &[&[0, 1, 2, 3, 4]])]);
        let closure = normal_closure(&s5, &[cyc(5, &[&[0, 1, 2]])]).unwrap();
        assert_eq!(closure.order(), BigUint::from(60u32));
        let empty = normal_closure(&s5, &[]).unwrap();
        assert_eq!(empty.order(), BigUint::from(1u32));
    }

    #[test]
    fn alternating_detection() {
        let a6 = group(vec![cyc(6, &[&[0, 1, 2]]), cyc(6, &[&[1, 2, 3, 4, 5]])]);
        assert!(contains_alternating(&a6));
        let s6 = group(vec![cyc(6, &[&[0, 1]]), cyc(6, &[&[0, 1, 2, 3, 4, 5]])]);
        assert!(contains_alternating(&s6));
        let f20_in_s5 = group(vec![cyc(5, &[&[0, 1, 2, 3, 4]]), cyc(5, &[&[1, 2, 4, 3]])]);
        assert!(!contains_alternating(&f20_in_s5));
        assert!(contains_alternating(&GroupHandle::trivial(2)));
        assert!(!contains_alternating(&GroupHandle::trivial(3)));
    }

    #[test]
    fn pair_solubility_matches_subgroup_solubility() {
        assert!(pair_generates_soluble(&cyc(5, &[&[0, 1]]), &cyc(5, &[&[2, 3, 4]])).unwrap());
        assert!(!pair_generates_soluble(
            &cyc(5, &[&[0, 1, 2]]),
            &cyc(5, &[&[0, 1, 2, 3, 4]])
        )
        .unwrap());
    }
}
