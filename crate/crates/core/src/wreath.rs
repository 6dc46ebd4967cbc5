//! Wreath elements in their imprimitive action: `m` component permutations
//! of degree `d` plus a top permutation of the `m` blocks, acting on `m·d`
//! points by `(i, x) ↦ (i^top, x^{component_i})`.

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::analysis::is_soluble;
use crate::error::{Error, Result};
use crate::group::GroupHandle;
use crate::insolubility::{InsolubilityReport, Probability, ReportKind};
use crate::perm::{check_equal_degrees, Permutation};
use crate::sampling::{sample_rng, McEstimate};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WreathElement {
    components: Vec<Permutation>,
    top: Permutation,
}

impl WreathElement {
    pub fn new(components: Vec<Permutation>, top: Permutation) -> Result<Self> {
        if components.len() != top.degree() {
            return Err(Error::DegreeMismatch {
                left: components.len(),
                right: top.degree(),
            });
        }
        check_equal_degrees(&components)?;
        Ok(WreathElement { components, top })
    }

    pub fn identity(blocks: usize, component_degree: usize) -> Result<Self> {
        if blocks == 0 || component_degree == 0 {
            return Err(Error::OutOfRange {
                what: "wreath shape",
                value: format!("{blocks} blocks of degree {component_degree}"),
                range: "1.. x 1..",
            });
        }
        WreathElement::new(
            vec![Permutation::identity(component_degree); blocks],
            Permutation::identity(blocks),
        )
    }

    /// A base-group element: the given components under the trivial top.
    pub fn from_components(components: Vec<Permutation>) -> Result<Self> {
        let top = Permutation::identity(components.len());
        WreathElement::new(components, top)
    }

    pub fn components(&self) -> &[Permutation] {
        &self.components
    }

    pub fn top(&self) -> &Permutation {
        &self.top
    }

    pub fn block_count(&self) -> usize {
        self.top.degree()
    }

    pub fn component_degree(&self) -> usize {
        self.components[0].degree()
    }

    pub fn is_identity(&self) -> bool {
        self.top.is_identity() && self.components.iter().all(Permutation::is_identity)
    }

    /// The element as a permutation of the `m·d` points, block `i` occupying
    /// `i·d..(i+1)·d`.
    pub fn to_permutation(&self) -> Permutation {
        let d = self.component_degree();
        let mut images = Vec::with_capacity(self.block_count() * d);
        for (i, component) in self.components.iter().enumerate() {
            let target = self.top.image(i);
            for x in 0..d {
                images.push(target * d + component.image(x));
            }
        }
        Permutation::from_images(images).expect("blockwise images of bijections are a bijection")
    }

    /// Uniform element of `aut wr Sym(m)`: components drawn from `aut`, top
    /// uniform by inside-out shuffle.
    pub fn random<R: Rng>(aut: &GroupHandle, blocks: usize, rng: &mut R) -> Result<Self> {
        if blocks == 0 {
            return Err(Error::OutOfRange {
                what: "block count",
                value: "0".into(),
                range: "1..",
            });
        }
        let components = (0..blocks).map(|_| aut.sample_uniform(rng)).collect();
        let mut images: Vec<usize> = Vec::with_capacity(blocks);
        for i in 0..blocks {
            let j = rng.gen_range(0..=i);
            images.push(images.get(j).copied().unwrap_or(i));
            if j < i {
                images[j] = i;
            }
        }
        WreathElement::new(components, Permutation::from_images(images)?)
    }
}

/// Monte Carlo insolubility probability of `⟨a, x·b⟩` over uniform
/// `x ∈ S^m`, everything realized on `m·d` points. Witnesses are the sampled
/// base elements `x` as permutations.
pub fn wreath_pins_montecarlo(
    a: &WreathElement,
    b: &WreathElement,
    s: &GroupHandle,
    samples: u64,
    seed: u64,
    confidence: f64,
) -> Result<InsolubilityReport> {
    if a.is_identity() {
        return Err(Error::IdentityNotAllowed { what: "a" });
    }
    if samples < 100 {
        return Err(Error::OutOfRange {
            what: "sample count",
            value: samples.to_string(),
            range: "100..",
        });
    }
    let m = a.block_count();
    if b.block_count() != m {
        return Err(Error::DegreeMismatch {
            left: m,
            right: b.block_count(),
        });
    }
    let d = s.degree();
    if a.component_degree() != d || b.component_degree() != d {
        return Err(Error::DegreeMismatch {
            left: d,
            right: a.component_degree(),
        });
    }
    let a_perm = a.to_permutation();
    let b_perm = b.to_permutation();
    let (insoluble, witnesses) = (0..samples)
        .into_par_iter()
        .fold(
            || (0u64, Vec::new()),
            |(mut count, mut wits), index| {
                let mut rng = sample_rng(seed, index);
                let x = WreathElement::from_components(
                    (0..m).map(|_| s.sample_uniform(&mut rng)).collect(),
                )
                .expect("component degrees agree")
                .to_permutation();
                let y = x.compose_unchecked(&b_perm);
                let pair = GroupHandle::new(vec![a_perm.clone(), y])
                    .expect("wreath elements share the degree");
                if !is_soluble(&pair).expect("generators validated") {
                    count += 1;
                    merge_witness(&mut wits, index, x);
                }
                (count, wits)
            },
        )
        .reduce(
            || (0u64, Vec::new()),
            |(c1, mut w1), (c2, w2)| {
                w1.extend(w2);
                w1.sort_by_key(|(index, _)| *index);
                w1.truncate(3);
                (c1 + c2, w1)
            },
        );
    let base_size = s
        .order_u64()
        .and_then(|o| (0..m).try_fold(1u64, |acc, _| acc.checked_mul(o)));
    Ok(InsolubilityReport {
        kind: ReportKind::MonteCarlo,
        p_ins: Probability::Estimate(McEstimate::from_counts(insoluble, samples, confidence)?),
        q_value: None,
        count_insoluble: None,
        coset_size: base_size,
        samples: Some(samples),
        seed: Some(seed),
        confidence: Some(confidence),
        witnesses: witnesses.into_iter().map(|(_, x)| x).collect(),
        coverage_note: None,
    })
}

fn merge_witness(wits: &mut Vec<(u64, Permutation)>, index: u64, x: Permutation) {
    if wits.len() < 3 || index < wits.last().expect("nonempty").0 {
        let pos = wits.partition_point(|(existing, _)| *existing < index);
        wits.insert(pos, (index, x));
        wits.truncate(3);
    }
}
