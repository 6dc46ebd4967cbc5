//! Solubilizer enumeration and the normal-chain criteria: which pairs
//! `⟨g, y⟩` are soluble, chains of normal subgroups whose steps are abelian
//! or centralized, and the density bound `(1 − η̃)^t` that the solubilizer
//! ratio must respect.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::analysis::{is_soluble, pair_generates_soluble};
use crate::constructions::NamedConstruction;
use crate::error::{Error, Result};
use crate::group::GroupHandle;
use crate::insolubility::eta_tilde;
use crate::naive::commutator;
use crate::perm::Permutation;
use crate::textnum::rational_text;

/// Full-enumeration ceiling for solubilizer scans.
pub const DEFAULT_SOLUBILIZER_CEILING: u64 = 10_000;

/// A chain `G = N_0 ≥ N_1 ≥ … ≥ N_t = 1` of subgroups, each normal in the
/// ambient group; validated on construction.
#[derive(Debug, Clone)]
pub struct NormalChain {
    ambient: GroupHandle,
    subgroups: Vec<GroupHandle>,
    derived_steps: Vec<bool>,
}

fn conjugate(u: &Permutation, a: &Permutation) -> Permutation {
    a.invert().compose_unchecked(u).compose_unchecked(a)
}

impl NormalChain {
    pub fn new(ambient: GroupHandle, subgroups: Vec<GroupHandle>) -> Result<Self> {
        let first = subgroups.first().ok_or(Error::EmptyGeneratorSet)?;
        for n in &subgroups {
            if n.degree() != ambient.degree() {
                return Err(Error::DegreeMismatch {
                    left: ambient.degree(),
                    right: n.degree(),
                });
            }
        }
        if first.order() != ambient.order() || !ambient.contains_subgroup(first)? {
            return Err(Error::InvalidChain {
                detail: "the chain must start at the ambient group".into(),
            });
        }
        if !subgroups.last().expect("nonempty").order().is_one() {
            return Err(Error::InvalidChain {
                detail: "the chain must end at the trivial group".into(),
            });
        }
        for (i, pair) in subgroups.windows(2).enumerate() {
            if !pair[0].contains_subgroup(&pair[1])? {
                return Err(Error::InvalidChain {
                    detail: format!("step {i} is not a descent: the next group is not contained"),
                });
            }
        }
        for (i, n) in subgroups.iter().enumerate() {
            for a in ambient.generators() {
                for u in n.generators() {
                    if !n.contains(&conjugate(u, a))? {
                        return Err(Error::InvalidChain {
                            detail: format!("subgroup {i} is not normal in the ambient group"),
                        });
                    }
                }
            }
        }
        let derived_steps = subgroups
            .windows(2)
            .map(|pair| {
                let gens = pair[0].generators();
                for u in gens {
                    for v in gens {
                        if !pair[1].contains(&commutator(u, v))? {
                            return Ok(false);
                        }
                    }
                }
                Ok(true)
            })
            .collect::<Result<_>>()?;
        Ok(NormalChain {
            ambient,
            subgroups,
            derived_steps,
        })
    }

    pub fn ambient(&self) -> &GroupHandle {
        &self.ambient
    }

    pub fn subgroups(&self) -> &[GroupHandle] {
        &self.subgroups
    }

    /// Number of steps `t` in `N_0 ≥ … ≥ N_t`.
    pub fn steps(&self) -> usize {
        self.subgroups.len() - 1
    }

    /// `[N_i, N_i] ≤ N_{i+1}`: the factor at step `i` is abelian.
    pub fn derived_condition(&self, step: usize) -> bool {
        self.derived_steps[step]
    }

    /// `[N_i, x] ≤ N_{i+1}`: `x` centralizes the factor at step `i`.
    pub fn centralizer_condition(&self, step: usize, x: &Permutation) -> Result<bool> {
        let (level, next) = (&self.subgroups[step], &self.subgroups[step + 1]);
        if x.degree() != self.ambient.degree() {
            return Err(Error::DegreeMismatch {
                left: self.ambient.degree(),
                right: x.degree(),
            });
        }
        for u in level.generators() {
            if !next.contains(&commutator(u, x))? {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// `G ≥ socle ≥ 1` for a named construction, collapsing repeated entries.
pub fn construction_chain(c: &NamedConstruction) -> Result<NormalChain> {
    let trivial = GroupHandle::trivial(c.group.degree());
    let mut subgroups = vec![c.group.clone()];
    if c.socle.order() != c.group.order() && !c.socle.order().is_one() {
        subgroups.push(c.socle.clone());
    }
    subgroups.push(trivial);
    NormalChain::new(c.group.clone(), subgroups)
}

/// The derived series as a chain; errors if the series stalls before the
/// trivial group, which happens exactly for insoluble groups.
pub fn derived_series_chain(group: &GroupHandle) -> Result<NormalChain> {
    let mut subgroups = vec![group.clone()];
    let mut current = group.clone();
    loop {
        let next = crate::analysis::derived_subgroup(&current)?;
        if next.order().is_one() {
            subgroups.push(GroupHandle::trivial(group.degree()));
            break;
        }
        if next.order() == current.order() {
            return Err(Error::InvalidChain {
                detail: "the derived series stalls before reaching the trivial group".into(),
            });
        }
        subgroups.push(next.clone());
        current = next;
    }
    NormalChain::new(group.clone(), subgroups)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "outcome")]
pub enum CcentOutcome {
    /// Every step is abelian or centralized by `x`, and the ambient group
    /// was confirmed soluble.
    HypothesisHoldsAndSoluble,
    /// Neither condition holds at the reported step.
    HypothesisFails { step: usize },
}

/// Checks the chain criterion for `⟨x, y⟩` equal to the full ambient group:
/// each step must be abelian or centralized by `x`; when every step passes,
/// the ambient group is asserted soluble.
pub fn ccent_check(chain: &NormalChain, x: &Permutation, y: &Permutation) -> Result<CcentOutcome> {
    let ambient = chain.ambient();
    if !(ambient.contains(x)? && ambient.contains(y)?) {
        return Err(Error::NotAmbient);
    }
    let pair = GroupHandle::new(vec![x.clone(), y.clone()])?;
    if pair.order() != ambient.order() {
        return Err(Error::NotAmbient);
    }
    for step in 0..chain.steps() {
        if !(chain.derived_condition(step) || chain.centralizer_condition(step, x)?) {
            return Ok(CcentOutcome::HypothesisFails { step });
        }
    }
    if !is_soluble(ambient)? {
        return Err(Error::InvalidChain {
            detail: "every step passed yet the ambient group is insoluble".into(),
        });
    }
    Ok(CcentOutcome::HypothesisHoldsAndSoluble)
}

/// Number of steps whose factor is non-abelian and not centralized by `g`.
pub fn t_centralizer_count(series: &NormalChain, g: &Permutation) -> Result<usize> {
    if !series.ambient().contains(g)? {
        return Err(Error::NotInGroup {
            degree: series.ambient().degree(),
            order: series.ambient().order().to_string(),
        });
    }
    let mut count = 0;
    for step in 0..series.steps() {
        if !series.derived_condition(step) && !series.centralizer_condition(step, g)? {
            count += 1;
        }
    }
    Ok(count)
}

/// How solubility verdicts may be reused across elements sharing the cycle
/// type key `(type(y), type(g·y))`. The key does not determine conjugacy of
/// the pair `(g, y)`, so `Advisory` can differ from the exact scan; every
/// verdict it reports comes from the smallest-rank representative of its
/// key, making the output deterministic.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CacheMode {
    #[default]
    Off,
    Advisory,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolubilizerReport {
    pub group_order: u64,
    pub g: Permutation,
    pub solubilizer_size: u64,
    #[serde(with = "rational_text")]
    pub ratio: BigRational,
}

/// Counts the `y ∈ G` with `⟨g, y⟩` soluble by full enumeration.
pub fn solubilizer_set(
    group: &GroupHandle,
    g: &Permutation,
    ceiling: u64,
    cache: CacheMode,
) -> Result<SolubilizerReport> {
    if !group.contains(g)? {
        return Err(Error::NotInGroup {
            degree: group.degree(),
            order: group.order().to_string(),
        });
    }
    let order = group
        .order_u64()
        .filter(|&o| o <= ceiling)
        .ok_or_else(|| Error::CeilingExceeded {
            what: "solubilizer enumeration",
            value: group.order().to_string(),
            ceiling: ceiling.to_string(),
        })?;
    let solubilizer_size = match cache {
        CacheMode::Off => (0..order)
            .into_par_iter()
            .filter(|&rank| {
                let y = group.element_at(rank).expect("rank below the order");
                pair_generates_soluble(g, &y).expect("elements share the degree")
            })
            .count() as u64,
        CacheMode::Advisory => advisory_count(group, g, order),
    };
    Ok(SolubilizerReport {
        group_order: order,
        g: g.clone(),
        solubilizer_size,
        ratio: BigRational::new(BigInt::from(solubilizer_size), BigInt::from(order)),
    })
}

type CycleTypeKey = (Vec<usize>, Vec<usize>);

fn advisory_count(group: &GroupHandle, g: &Permutation, order: u64) -> u64 {
    let buckets = (0..order)
        .into_par_iter()
        .fold(
            BTreeMap::<CycleTypeKey, (u64, u64)>::new,
            |mut buckets, rank| {
                let y = group.element_at(rank).expect("rank below the order");
                let key = (y.cycle_type(), g.compose_unchecked(&y).cycle_type());
                let slot = buckets.entry(key).or_insert((rank, 0));
                slot.0 = slot.0.min(rank);
                slot.1 += 1;
                buckets
            },
        )
        .reduce(BTreeMap::new, |mut acc, other| {
            for (key, (rep, count)) in other {
                let slot = acc.entry(key).or_insert((rep, 0));
                slot.0 = slot.0.min(rep);
                slot.1 += count;
            }
            acc
        });
    buckets
        .into_iter()
        .par_bridge()
        .filter_map(|(_, (rep, count))| {
            let y = group.element_at(rep).expect("rank below the order");
            pair_generates_soluble(g, &y)
                .expect("elements share the degree")
                .then_some(count)
        })
        .sum()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CrucialReport {
    pub solubilizer: SolubilizerReport,
    /// Non-abelian steps of the series not centralized by `g`.
    pub t: usize,
    #[serde(with = "rational_text")]
    pub eta: BigRational,
    #[serde(with = "rational_text")]
    pub eta_tilde: BigRational,
    #[serde(with = "rational_text")]
    pub bound: BigRational,
    pub holds: bool,
}

/// Checks `|S_G(g)|/|G| ≤ (1 − min(eta, 53/90))^t` against the exact
/// solubilizer enumeration, with `t` counted from the supplied series.
pub fn crucial_bound_check(
    group: &GroupHandle,
    g: &Permutation,
    series: &NormalChain,
    eta: &BigRational,
    ceiling: u64,
) -> Result<CrucialReport> {
    if series.ambient().order() != group.order() || !series.ambient().contains_subgroup(group)? {
        return Err(Error::InvalidChain {
            detail: "the series is not a series of the given group".into(),
        });
    }
    let one = BigRational::one();
    if *eta <= BigRational::new(BigInt::from(0), BigInt::from(1)) || *eta > one {
        return Err(Error::OutOfRange {
            what: "insolubility level",
            value: eta.to_string(),
            range: "(0, 1]",
        });
    }
    let t = t_centralizer_count(series, g)?;
    let solubilizer = solubilizer_set(group, g, ceiling, CacheMode::Off)?;
    let tilde = eta_tilde(eta);
    let factor = &one - &tilde;
    let bound = (0..t).fold(one, |acc, _| acc * &factor);
    let holds = solubilizer.ratio <= bound;
    Ok(CrucialReport {
        solubilizer,
        t,
        eta: eta.clone(),
        eta_tilde: tilde,
        bound,
        holds,
    })
}
