//! Block systems of transitive permutation groups.
//!
//! The main entry point is [`minimal_block_system`], which returns the system
//! with the fewest blocks among all systems with more than one block. For a
//! primitive group that minimum is the partition into singletons.

use crate::error::{Error, Result};
use crate::perm::{check_equal_degrees, orbits, Permutation};

/// A partition of `0..degree` preserved by a group action. Blocks are sorted
/// internally and ordered by their smallest point.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockSystem {
    degree: usize,
    blocks: Vec<Vec<usize>>,
    block_of: Vec<usize>,
}

impl BlockSystem {
    /// Builds a system from explicit blocks, checking that they partition
    /// `0..degree`. Preservation by any particular group is checked
    /// separately, by [`blocks_action`].
    pub fn from_blocks(degree: usize, blocks: Vec<Vec<usize>>) -> Result<Self> {
        let mut block_of = vec![usize::MAX; degree];
        let mut canonical: Vec<Vec<usize>> = Vec::with_capacity(blocks.len());
        for block in blocks {
            if block.is_empty() {
                return Err(Error::NotABlockSystem {
                    detail: "empty block".into(),
                });
            }
            let mut sorted = block;
            sorted.sort_unstable();
            for &p in &sorted {
                if p >= degree {
                    return Err(Error::PointOutOfRange { point: p, degree });
                }
                if block_of[p] != usize::MAX {
                    return Err(Error::NotABlockSystem {
                        detail: format!("point {p} appears in two blocks"),
                    });
                }
                block_of[p] = 0;
            }
            canonical.push(sorted);
        }
        if let Some(p) = block_of.iter().position(|&b| b == usize::MAX) {
            return Err(Error::NotABlockSystem {
                detail: format!("point {p} is not covered"),
            });
        }
        canonical.sort_unstable_by_key(|b| b[0]);
        for (i, block) in canonical.iter().enumerate() {
            for &p in block {
                block_of[p] = i;
            }
        }
        Ok(BlockSystem {
            degree,
            blocks: canonical,
            block_of,
        })
    }

    pub fn singletons(degree: usize) -> Self {
        BlockSystem {
            degree,
            blocks: (0..degree).map(|p| vec![p]).collect(),
            block_of: (0..degree).collect(),
        }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn block_count(&self) -> usize {
        self.blocks.len()
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn block_of(&self, point: usize) -> usize {
        self.block_of[point]
    }

    pub fn is_singletons(&self) -> bool {
        self.blocks.len() == self.degree
    }
}

/// The permutations induced on the blocks of `system` by each generator.
/// Fails if some generator does not map blocks to blocks.
pub fn blocks_action(gens: &[Permutation], system: &BlockSystem) -> Result<Vec<Permutation>> {
    let degree = check_equal_degrees(gens)?;
    if degree != system.degree() {
        return Err(Error::DegreeMismatch {
            left: degree,
            right: system.degree(),
        });
    }
    let mut induced = Vec::with_capacity(gens.len());
    for g in gens {
        let mut images = vec![usize::MAX; system.block_count()];
        for (b, block) in system.blocks().iter().enumerate() {
            let target = system.block_of(g.image(block[0]));
            for &p in block {
                if system.block_of(g.image(p)) != target {
                    return Err(Error::NotABlockSystem {
                        detail: format!(
                            "generator {g} splits block {b} across blocks {target} and {}",
                            system.block_of(g.image(p))
                        ),
                    });
                }
            }
            images[b] = target;
        }
        induced.push(Permutation::from_images(images).map_err(|_| Error::NotABlockSystem {
            detail: "induced block map is not a bijection".into(),
        })?);
    }
    Ok(induced)
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
        self.parent[hi] = lo;
        true
    }
}

/// The finest block system in which `a` and `b` share a block, by closing the
/// seed pair under the generators.
pub fn finest_joining(gens: &[Permutation], a: usize, b: usize) -> Result<BlockSystem> {
    let degree = check_equal_degrees(gens)?;
    for p in [a, b] {
        if p >= degree {
            return Err(Error::PointOutOfRange { point: p, degree });
        }
    }
    let mut uf = UnionFind::new(degree);
    let mut queue = Vec::new();
    if uf.union(a, b) {
        queue.push((a, b));
    }
    while let Some((p, q)) = queue.pop() {
        for g in gens {
            let (gp, gq) = (g.image(p), g.image(q));
            if uf.union(gp, gq) {
                queue.push((gp, gq));
            }
        }
    }
    let mut classes: Vec<Vec<usize>> = vec![Vec::new(); degree];
    for p in 0..degree {
        let root = uf.find(p);
        classes[root].push(p);
    }
    classes.retain(|c| !c.is_empty());
    BlockSystem::from_blocks(degree, classes)
}

/// Replaces each block of `coarse_on_blocks` (a system for the induced action
/// on `fine`'s blocks) by the union of the fine blocks it names.
fn lift(fine: &BlockSystem, coarse_on_blocks: &BlockSystem) -> BlockSystem {
    let blocks = coarse_on_blocks
        .blocks()
        .iter()
        .map(|indices| {
            let mut merged: Vec<usize> = indices
                .iter()
                .flat_map(|&b| fine.blocks()[b].iter().copied())
                .collect();
            merged.sort_unstable();
            merged
        })
        .collect();
    BlockSystem::from_blocks(fine.degree(), blocks).expect("lift of a partition is a partition")
}

/// The block system with the fewest blocks, excluding the one-block system.
/// Requires a transitive action. Primitive groups get the singleton system
/// back, so primitivity is the test `result.is_singletons()`.
///
/// Every nontrivial system contains some pair `{0, i}` inside a block and is
/// therefore a coarsening of `finest_joining(gens, 0, i)`; coarsenings of a
/// fixed system correspond to systems of the induced action on its blocks,
/// which this function finds recursively.
pub fn minimal_block_system(gens: &[Permutation]) -> Result<BlockSystem> {
    let degree = check_equal_degrees(gens)?;
    let orbit_count = orbits(gens)?.len();
    if orbit_count != 1 {
        return Err(Error::NotTransitive { orbit_count });
    }
    if degree == 1 {
        return Ok(BlockSystem::singletons(1));
    }
    let mut best = BlockSystem::singletons(degree);
    for i in 1..degree {
        let fine = finest_joining(gens, 0, i)?;
        if fine.block_count() == 1 {
            continue;
        }
        let quotient_gens = blocks_action(gens, &fine)?;
        let quotient_min = minimal_block_system(&quotient_gens)?;
        let lifted = lift(&fine, &quotient_min);
        if lifted.block_count() < best.block_count() {
            best = lifted;
        }
    }
    Ok(best)
}
