use std::sync::OnceLock;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};
use rand::Rng;

use crate::error::{Error, Result};
use crate::perm::{check_equal_degrees, orbits, Permutation};

/// A finite permutation group, held as its generators plus a lazily built
/// stabilizer chain.
///
/// The chain is computed at most once (first query wins) and shared by all
/// later queries, so a `GroupHandle` can be used freely from parallel scans
/// once constructed.
#[derive(Debug, Clone)]
pub struct GroupHandle {
    degree: usize,
    generators: Vec<Permutation>,
    chain: OnceLock<StabChain>,
}

impl GroupHandle {
    /// Wraps a nonempty generating set (identity generators are allowed and
    /// the trivial group is `⟨identity⟩`).
    pub fn new(generators: Vec<Permutation>) -> Result<Self> {
        let degree = check_equal_degrees(&generators)?;
        Ok(GroupHandle {
            degree,
            generators,
            chain: OnceLock::new(),
        })
    }

    pub fn trivial(degree: usize) -> Self {
        GroupHandle {
            degree,
            generators: vec![Permutation::identity(degree)],
            chain: OnceLock::new(),
        }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn generators(&self) -> &[Permutation] {
        &self.generators
    }

    pub(crate) fn chain(&self) -> &StabChain {
        self.chain
            .get_or_init(|| StabChain::build(self.degree, &self.generators))
    }

    /// Exact group order, as the product of the basic orbit lengths.
    pub fn order(&self) -> BigUint {
        self.chain().order.clone()
    }

    /// Group order if it fits in a u64.
    pub fn order_u64(&self) -> Option<u64> {
        self.chain().order.to_u64()
    }

    /// Membership via sifting through the stabilizer chain.
    pub fn contains(&self, p: &Permutation) -> Result<bool> {
        if p.degree() != self.degree {
            return Err(Error::DegreeMismatch {
                left: self.degree,
                right: p.degree(),
            });
        }
        Ok(self.chain().sift(p.clone()).is_identity())
    }

    pub fn is_transitive(&self) -> bool {
        self.degree > 0 && orbits(&self.generators).map(|o| o.len() == 1).unwrap_or(false)
    }

    /// The `rank`-th element under the mixed-radix indexing of the basic
    /// transversals (level 0 varies fastest). Ranks `0..order` enumerate the
    /// group without repetition; the map is deterministic for a fixed
    /// generating set.
    pub fn element_at(&self, rank: u64) -> Result<Permutation> {
        let chain = self.chain();
        let order = chain.order.to_u64().ok_or_else(|| Error::CeilingExceeded {
            what: "group order",
            value: chain.order.to_string(),
            ceiling: u64::MAX.to_string(),
        })?;
        if rank >= order {
            return Err(Error::OutOfRange {
                what: "element rank",
                value: rank.to_string(),
                range: "0..order",
            });
        }
        let mut digits = Vec::with_capacity(chain.levels.len());
        let mut rest = rank;
        for level in &chain.levels {
            let len = level.orbit.len() as u64;
            digits.push((rest % len) as usize);
            rest /= len;
        }
        Ok(chain.compose_from_digits(&digits))
    }

    /// Exactly uniform element: one independent uniform choice per basic
    /// transversal.
    pub fn sample_uniform<R: Rng>(&self, rng: &mut R) -> Permutation {
        let chain = self.chain();
        let digits: Vec<usize> = chain
            .levels
            .iter()
            .map(|level| rng.gen_range(0..level.orbit.len()))
            .collect();
        chain.compose_from_digits(&digits)
    }

    /// True when every generator of `other` sifts into this group.
    pub fn contains_subgroup(&self, other: &GroupHandle) -> Result<bool> {
        for g in other.generators() {
            if !self.contains(g)? {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

#[derive(Debug, Clone)]
pub(crate) struct StabChain {
    degree: usize,
    pub(crate) base: Vec<usize>,
    pub(crate) levels: Vec<Level>,
    pub(crate) order: BigUint,
}

#[derive(Debug, Clone)]
pub(crate) struct Level {
    pub(crate) point: usize,
    gens: Vec<Permutation>,
    /// Orbit of `point` under this level's generators, in discovery order.
    pub(crate) orbit: Vec<usize>,
    /// `transversal[p]` maps `point` to `p`.
    transversal: Vec<Option<Permutation>>,
    inverse_transversal: Vec<Option<Permutation>>,
}

impl Level {
    fn new(degree: usize, point: usize) -> Self {
        Level {
            point,
            gens: Vec::new(),
            orbit: Vec::new(),
            transversal: vec![None; degree],
            inverse_transversal: vec![None; degree],
        }
    }

    fn recompute_orbit(&mut self, degree: usize) {
        self.orbit.clear();
        self.transversal = vec![None; degree];
        self.inverse_transversal = vec![None; degree];
        self.orbit.push(self.point);
        self.transversal[self.point] = Some(Permutation::identity(degree));
        self.inverse_transversal[self.point] = Some(Permutation::identity(degree));
        let mut next = 0;
        while next < self.orbit.len() {
            let p = self.orbit[next];
            next += 1;
            for g in &self.gens {
                let q = g.image(p);
                if self.transversal[q].is_none() {
                    let rep = self.transversal[p].as_ref().unwrap().compose_unchecked(g);
                    self.inverse_transversal[q] = Some(rep.invert());
                    self.transversal[q] = Some(rep);
                    self.orbit.push(q);
                }
            }
        }
    }
}

impl StabChain {
    /// Deterministic Schreier-Sims. Base points are chosen as the smallest
    /// point moved by the generator that forces a new level, and orbits are
    /// explored breadth-first in generator order, so identical generator
    /// lists always produce identical chains.
    pub(crate) fn build(degree: usize, generators: &[Permutation]) -> StabChain {
        let mut chain = StabChain {
            degree,
            base: Vec::new(),
            levels: Vec::new(),
            order: BigUint::one(),
        };
        for g in generators {
            if !g.is_identity() {
                chain.insert_generator(g.clone(), 0, degree);
            }
        }
        for level in &mut chain.levels {
            level.recompute_orbit(degree);
        }

        let mut current = chain.levels.len() as isize - 1;
        while current >= 0 {
            let l = current as usize;
            chain.levels[l].recompute_orbit(degree);
            match chain.first_schreier_failure(l) {
                Some((residue, fail_level)) => {
                    let j = chain.insert_generator(residue, l + 1, degree);
                    debug_assert!(j >= l + 1 && (fail_level == j || fail_level == chain.levels.len()));
                    for m in (l + 1)..=j {
                        chain.levels[m].recompute_orbit(degree);
                    }
                    current = j as isize;
                }
                None => {
                    current -= 1;
                }
            }
        }

        chain.order = chain
            .levels
            .iter()
            .map(|level| BigUint::from(level.orbit.len()))
            .product();
        chain
    }

    /// Scans the Schreier generators of level `l`; returns the first sift
    /// residue that fails deeper in the chain, with the level it failed at.
    fn first_schreier_failure(&self, l: usize) -> Option<(Permutation, usize)> {
        let level = &self.levels[l];
        for &p in &level.orbit {
            let u_p = level.transversal[p].as_ref().unwrap();
            for s in &level.gens {
                let q = s.image(p);
                let schreier = u_p
                    .compose_unchecked(s)
                    .compose_unchecked(level.inverse_transversal[q].as_ref().unwrap());
                if schreier.is_identity() {
                    continue;
                }
                let (residue, fail_level) = self.sift_from(l + 1, schreier);
                if !residue.is_identity() {
                    return Some((residue, fail_level));
                }
            }
        }
        None
    }

    /// Adds `g` as a strong generator for levels `start..=j`, where `j` is the
    /// first level whose base point `g` moves (appending a new base point if
    /// `g` fixes them all). Returns `j`.
    fn insert_generator(&mut self, g: Permutation, start: usize, degree: usize) -> usize {
        let mut j = start;
        while j < self.base.len() && g.image(self.base[j]) == self.base[j] {
            j += 1;
        }
        if j == self.base.len() {
            let point = (0..degree).find(|&p| g.image(p) != p).unwrap();
            self.base.push(point);
            self.levels.push(Level::new(degree, point));
        }
        for level in &mut self.levels[start..=j] {
            level.gens.push(g.clone());
        }
        j
    }

    fn sift_from(&self, start: usize, mut g: Permutation) -> (Permutation, usize) {
        for (i, level) in self.levels.iter().enumerate().skip(start) {
            let p = g.image(level.point);
            match level.inverse_transversal[p].as_ref() {
                Some(inv) => g = g.compose_unchecked(inv),
                None => return (g, i),
            }
        }
        (g, self.levels.len())
    }

    pub(crate) fn sift(&self, g: Permutation) -> Permutation {
        self.sift_from(0, g).0
    }

    fn compose_from_digits(&self, digits: &[usize]) -> Permutation {
        let mut acc: Option<Permutation> = None;
        for (level, &d) in self.levels.iter().zip(digits).rev() {
            let rep = level.transversal[level.orbit[d]].as_ref().unwrap();
            acc = Some(match acc {
                None => rep.clone(),
                Some(a) => a.compose_unchecked(rep),
            });
        }
        acc.unwrap_or_else(|| Permutation::identity(self.degree))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::naive::exhaustive_closure;
    use num_bigint::BigUint;

    fn cyc(degree: usize, cycles: &[&[usize]]) -> Permutation {
        let owned: Vec<Vec<usize>> = cycles.iter().map(|c| c.to_vec()).collect();
        Permutation::from_cycles(degree, &owned).unwrap()
    }

    #[test]
    fn trivial_group_has_order_one() {
        let g = GroupHandle::trivial(6);
        assert_eq!(g.order(), BigUint::from(1u32));
        assert!(g.contains(&Permutation::identity(6)).unwrap());
        assert!(!g.contains(&cyc(6, &[&[0, 1]])).unwrap());
        assert_eq!(g.element_at(0).unwrap(), Permutation::identity(6));
    }

    #[test]
    fn symmetric_and_alternating_orders() {
        let s5 = GroupHandle::new(vec![cyc(5, &[&[0, 1]]), cyc(5, &[&[0, 1, 2, 3, 4]])]).unwrap();
        assert_eq!(s5.order(), BigUint::from(120u32));
        let a5 = GroupHandle::new(vec![cyc(5, &[&[0, 1, 2]]), cyc(5, &[&[0, 1, 2, 3, 4]])]).unwrap();
        assert_eq!(a5.order(), BigUint::from(60u32));
        let s4 = GroupHandle::new(vec![cyc(4, &[&[0, 1]]), cyc(4, &[&[0, 1, 2, 3]])]).unwrap();
        assert_eq!(s4.order(), BigUint::from(24u32));
    }

    #[test]
    fn large_degree_order_uses_big_integers() {
        let n = 24;
        let sn = GroupHandle::new(vec![
            cyc(n, &[&[0, 1]]),
            Permutation::from_images((0..n).map(|i| (i + 1) % n).collect()).unwrap(),
        ])
        .unwrap();
        let mut expected = BigUint::from(1u32);
        for k in 2..=n {
            expected *= BigUint::from(k);
        }
        assert_eq!(sn.order(), expected);
        assert!(sn.order_u64().is_none() || n <= 20);
    }

    #[test]
    fn membership_matches_closure_on_small_groups() {
        let gen_sets: Vec<Vec<Permutation>> = vec![
            vec![cyc(5, &[&[0, 1, 2]]), cyc(5, &[&[2, 3, 4]])],
            vec![cyc(6, &[&[0, 1, 2, 3, 4, 5]])],
            vec![cyc(6, &[&[0, 1]]), cyc(6, &[&[2, 3, 4]])],
            vec![cyc(7, &[&[0, 1, 2, 3, 4, 5, 6]]), cyc(7, &[&[0, 1, 2]])],
            vec![cyc(4, &[&[0, 1], &[2, 3]]), cyc(4, &[&[0, 2], &[1, 3]])],
        ];
        for gens in gen_sets {
            let group = GroupHandle::new(gens.clone()).unwrap();
            let closure = exhaustive_closure(&gens).unwrap();
            assert_eq!(group.order(), BigUint::from(closure.len()));
            for p in &closure {
                assert!(group.contains(p).unwrap());
            }
            let degree = group.degree();
            crate::enumerate::for_each_permutation(degree, |p| {
                let in_closure = closure.contains(p);
                assert_eq!(group.contains(p).unwrap(), in_closure);
            })
            .unwrap();
        }
    }

    #[test]
    fn element_at_enumerates_without_repetition() {
        let a5 = GroupHandle::new(vec![cyc(5, &[&[0, 1, 2]]), cyc(5, &[&[0, 1, 2, 3, 4]])]).unwrap();
        let mut seen = std::collections::HashSet::new();
        for rank in 0..60 {
            let e = a5.element_at(rank).unwrap();
            assert!(a5.contains(&e).unwrap());
            assert!(seen.insert(e), "rank {rank} repeated an element");
        }
        assert!(a5.element_at(60).is_err());
    }

    #[test]
    fn sampling_stays_inside_the_group_and_hits_everything() {
        use rand::SeedableRng;
        let a4 = GroupHandle::new(vec![cyc(4, &[&[0, 1, 2]]), cyc(4, &[&[1, 2, 3]])]).unwrap();
        let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(7);
        let mut seen = std::collections::HashSet::new();
        for _ in 0..1500 {
            let e = a4.sample_uniform(&mut rng);
            assert!(a4.contains(&e).unwrap());
            seen.insert(e);
        }
        assert_eq!(seen.len(), 12);
    }

    #[test]
    fn contains_rejects_degree_mismatch() {
        let g = GroupHandle::trivial(5);
        assert!(g.contains(&Permutation::identity(6)).is_err());
    }

    #[test]
    fn transitivity() {
        let c6 = GroupHandle::new(vec![cyc(6, &[&[0, 1, 2, 3, 4, 5]])]).unwrap();
        assert!(c6.is_transitive());
        let split = GroupHandle::new(vec![cyc(6, &[&[0, 1]]), cyc(6, &[&[3, 4, 5]])]).unwrap();
        assert!(!split.is_transitive());
    }

    #[test]
    fn chain_is_shared_across_threads() {
        let a6 = std::sync::Arc::new(
            GroupHandle::new(vec![cyc(6, &[&[0, 1, 2]]), cyc(6, &[&[1, 2, 3, 4, 5]])]).unwrap(),
        );
        let handles: Vec<_> = (0..8)
            .map(|_| {
                let g = a6.clone();
                std::thread::spawn(move || g.order())
            })
            .collect();
        for h in handles {
            assert_eq!(h.join().unwrap(), BigUint::from(360u32));
        }
    }
}
