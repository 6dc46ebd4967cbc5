//! Insolubility probabilities over cosets.
//!
//! For a subgroup `S` of an ambient permutation group, a representative `b`,
//! and a fixed `a`, the exact scan walks every `y = b·s` with `s ∈ S` and
//! counts how often `⟨a, y⟩` is insoluble; the Monte Carlo path samples `s`
//! uniformly instead. When `S` is an alternating group the scan also counts
//! how often `⟨a, y⟩` contains it, the generation probability that lower
//! bounds the insolubility one.

use num_bigint::BigInt;
use num_rational::BigRational;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::analysis::{contains_alternating, is_soluble};
use crate::constructions::{alternating, symmetric};
use crate::enumerate::{class_representative, factorial_u64, integer_partitions};
use crate::error::{Error, Result};
use crate::group::GroupHandle;
use crate::perm::Permutation;
use crate::sampling::{sample_rng, McEstimate};

/// Largest coset an exact scan will walk unless the caller raises the limit.
pub const DEFAULT_EXACT_CEILING: u64 = 500_000;

/// Wording attached to every degree-6 report with an alternating socle.
pub const SYM6_COVERAGE_NOTE: &str =
    "degree 6 covers only the Sym(6) part of the automorphism group; the exceptional outer automorphisms are out of scope";

const MAX_WITNESSES: usize = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CosetParity {
    Even,
    Odd,
}

impl CosetParity {
    pub const BOTH: [CosetParity; 2] = [CosetParity::Even, CosetParity::Odd];

    pub fn representative(self, degree: usize) -> Permutation {
        match self {
            CosetParity::Even => Permutation::identity(degree),
            CosetParity::Odd => Permutation::from_cycles(degree, &[vec![0, 1]])
                .expect("a transposition exists for degree >= 2"),
        }
    }
}

impl std::fmt::Display for CosetParity {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            CosetParity::Even => "even",
            CosetParity::Odd => "odd",
        })
    }
}

/// A coset `b·S` inside an ambient group, the domain every probability here
/// is taken over. Only the coset of `b` matters: replacing `rep` by `rep·s`
/// leaves all results unchanged.
#[derive(Debug, Clone)]
pub struct CosetSpec {
    ambient: GroupHandle,
    socle: GroupHandle,
    rep: Permutation,
}

impl CosetSpec {
    pub fn new(ambient: GroupHandle, socle: GroupHandle, rep: Permutation) -> Result<Self> {
        if !ambient.contains_subgroup(&socle)? {
            return Err(Error::NotInGroup {
                degree: socle.degree(),
                order: ambient.order().to_string(),
            });
        }
        if !ambient.contains(&rep)? {
            return Err(Error::NotInGroup {
                degree: rep.degree(),
                order: ambient.order().to_string(),
            });
        }
        Ok(CosetSpec {
            ambient,
            socle,
            rep,
        })
    }

    /// The even or odd coset of `Alt(n)` inside `Sym(n)`.
    pub fn alternating_coset(n: usize, parity: CosetParity) -> Result<Self> {
        if n < 2 {
            return Err(Error::OutOfRange {
                what: "degree",
                value: n.to_string(),
                range: "2..",
            });
        }
        CosetSpec::new(symmetric(n)?, alternating(n)?, parity.representative(n))
    }

    pub fn ambient(&self) -> &GroupHandle {
        &self.ambient
    }

    pub fn socle(&self) -> &GroupHandle {
        &self.socle
    }

    pub fn rep(&self) -> &Permutation {
        &self.rep
    }

    /// Whether the socle is exactly `Alt(degree)`, the case where generation
    /// counts are meaningful.
    pub fn socle_is_alternating(&self) -> bool {
        let n = self.socle.degree();
        if n < 3 {
            return false;
        }
        match factorial_u64(n) {
            Ok(nf) => self
                .socle
                .order_u64()
                .map(|o| o == nf / 2)
                .unwrap_or(false),
            Err(_) => false,
        }
    }

    fn coverage_note(&self) -> Option<String> {
        (self.socle.degree() == 6 && self.socle_is_alternating())
            .then(|| SYM6_COVERAGE_NOTE.to_string())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ReportKind {
    Exact,
    MonteCarlo,
}

/// An exact rational or a Monte Carlo estimate, depending on how the report
/// was produced.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Probability {
    Exact(#[serde(with = "crate::textnum::rational_text")] BigRational),
    Estimate(McEstimate),
}

impl Probability {
    pub fn point(&self) -> f64 {
        match self {
            Probability::Exact(r) => rational_to_f64(r),
            Probability::Estimate(e) => e.estimate,
        }
    }

    pub fn as_exact(&self) -> Option<&BigRational> {
        match self {
            Probability::Exact(r) => Some(r),
            Probability::Estimate(_) => None,
        }
    }

    pub fn as_estimate(&self) -> Option<&McEstimate> {
        match self {
            Probability::Exact(_) => None,
            Probability::Estimate(e) => Some(e),
        }
    }
}

pub(crate) fn rational_to_f64(r: &BigRational) -> f64 {
    use num_traits::ToPrimitive;
    r.to_f64().unwrap_or(f64::NAN)
}

pub(crate) fn ratio(count: u64, total: u64) -> BigRational {
    BigRational::new(BigInt::from(count), BigInt::from(total))
}

/// `min(eta, 53/90)`, the insolubility level that survives passing from a
/// simple group to its direct powers.
pub fn eta_tilde(eta: &BigRational) -> BigRational {
    let cap = BigRational::new(BigInt::from(53), BigInt::from(90));
    if *eta < cap {
        eta.clone()
    } else {
        cap
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InsolubilityReport {
    pub kind: ReportKind,
    pub p_ins: Probability,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub q_value: Option<Probability>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub count_insoluble: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub coset_size: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub samples: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub confidence: Option<f64>,
    /// Up to three socle elements `s` with `⟨a, b·s⟩` insoluble, in scan or
    /// sample order.
    pub witnesses: Vec<Permutation>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub coverage_note: Option<String>,
}

/// Per-chunk scan totals; merging is commutative, so parallel reduction gives
/// the same answer in any schedule.
#[derive(Debug, Clone, Default)]
struct Tally {
    insoluble: u64,
    generating: u64,
    witnesses: Vec<(u64, Permutation)>,
}

impl Tally {
    fn record(&mut self, index: u64, s: &Permutation, insoluble: bool, generating: bool) {
        if insoluble {
            self.insoluble += 1;
            if self.witnesses.len() < MAX_WITNESSES
                || index < self.witnesses.last().expect("nonempty").0
            {
                let pos = self
                    .witnesses
                    .partition_point(|(existing, _)| *existing < index);
                self.witnesses.insert(pos, (index, s.clone()));
                self.witnesses.truncate(MAX_WITNESSES);
            }
        }
        if generating {
            self.generating += 1;
        }
    }

    fn merge(mut self, other: Tally) -> Tally {
        self.insoluble += other.insoluble;
        self.generating += other.generating;
        self.witnesses.extend(other.witnesses);
        self.witnesses.sort_by_key(|(index, _)| *index);
        self.witnesses.truncate(MAX_WITNESSES);
        self
    }

    fn witness_elements(self) -> Vec<Permutation> {
        self.witnesses.into_iter().map(|(_, s)| s).collect()
    }
}

fn validate_a(a: &Permutation, coset: &CosetSpec) -> Result<()> {
    if a.is_identity() {
        return Err(Error::IdentityNotAllowed { what: "a" });
    }
    if !coset.ambient().contains(a)? {
        return Err(Error::NotInGroup {
            degree: a.degree(),
            order: coset.ambient().order().to_string(),
        });
    }
    Ok(())
}

fn test_pair(a: &Permutation, y: Permutation, want_generation: bool) -> (bool, bool) {
    let pair = GroupHandle::new(vec![a.clone(), y]).expect("coset elements share the degree");
    let generating = want_generation && contains_alternating(&pair);
    let insoluble = !is_soluble(&pair).expect("generators validated");
    (insoluble, generating)
}

/// Exact insolubility probability of `⟨a, b·s⟩` over all `s ∈ S`, plus the
/// generation probability when `S` is alternating.
pub fn pins_exact(a: &Permutation, coset: &CosetSpec, ceiling: u64) -> Result<InsolubilityReport> {
    validate_a(a, coset)?;
    let size = coset
        .socle()
        .order_u64()
        .filter(|&s| s <= ceiling)
        .ok_or_else(|| Error::CeilingExceeded {
            what: "coset size",
            value: coset.socle().order().to_string(),
            ceiling: ceiling.to_string(),
        })?;
    let want_q = coset.socle_is_alternating();
    let tally = (0..size)
        .into_par_iter()
        .fold(Tally::default, |mut acc, rank| {
            let s = coset
                .socle()
                .element_at(rank)
                .expect("ranks below the order are valid");
            let y = coset.rep().compose_unchecked(&s);
            let (insoluble, generating) = test_pair(a, y, want_q);
            acc.record(rank, &s, insoluble, generating);
            acc
        })
        .reduce(Tally::default, Tally::merge);
    Ok(InsolubilityReport {
        kind: ReportKind::Exact,
        p_ins: Probability::Exact(ratio(tally.insoluble, size)),
        q_value: want_q.then(|| Probability::Exact(ratio(tally.generating, size))),
        count_insoluble: Some(tally.insoluble),
        coset_size: Some(size),
        samples: None,
        seed: None,
        confidence: None,
        coverage_note: coset.coverage_note(),
        witnesses: tally.witness_elements(),
    })
}

/// Socle ranks of the insoluble witnesses, for containment comparisons
/// between related scans.
#[cfg(test)]
pub(crate) fn insoluble_ranks(a: &Permutation, coset: &CosetSpec, ceiling: u64) -> Result<Vec<u64>> {
    validate_a(a, coset)?;
    let size = coset
        .socle()
        .order_u64()
        .filter(|&s| s <= ceiling)
        .ok_or(Error::NoSamples)?;
    let mut ranks: Vec<u64> = (0..size)
        .into_par_iter()
        .filter(|&rank| {
            let s = coset.socle().element_at(rank).expect("rank in range");
            let y = coset.rep().compose_unchecked(&s);
            test_pair(a, y, false).0
        })
        .collect();
    ranks.sort_unstable();
    Ok(ranks)
}

/// Monte Carlo counterpart of [`pins_exact`]: `samples` uniform draws from
/// the socle, Wilson intervals at `confidence`. Reproducible from `seed`
/// alone, regardless of thread count.
pub fn pins_montecarlo(
    a: &Permutation,
    coset: &CosetSpec,
    samples: u64,
    seed: u64,
    confidence: f64,
) -> Result<InsolubilityReport> {
    validate_a(a, coset)?;
    if samples < 100 {
        return Err(Error::OutOfRange {
            what: "sample count",
            value: samples.to_string(),
            range: "100..",
        });
    }
    let want_q = coset.socle_is_alternating();
    let tally = (0..samples)
        .into_par_iter()
        .fold(Tally::default, |mut acc, index| {
            let mut rng = sample_rng(seed, index);
            let s = coset.socle().sample_uniform(&mut rng);
            let y = coset.rep().compose_unchecked(&s);
            let (insoluble, generating) = test_pair(a, y, want_q);
            acc.record(index, &s, insoluble, generating);
            acc
        })
        .reduce(Tally::default, Tally::merge);
    Ok(InsolubilityReport {
        kind: ReportKind::MonteCarlo,
        p_ins: Probability::Estimate(McEstimate::from_counts(
            tally.insoluble,
            samples,
            confidence,
        )?),
        q_value: match want_q {
            true => Some(Probability::Estimate(McEstimate::from_counts(
                tally.generating,
                samples,
                confidence,
            )?)),
            false => None,
        },
        count_insoluble: None,
        coset_size: coset.socle().order_u64(),
        samples: Some(samples),
        seed: Some(seed),
        confidence: Some(confidence),
        coverage_note: coset.coverage_note(),
        witnesses: tally.witness_elements(),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EtaRow {
    /// Cycle type of the class representative, parts non-increasing.
    pub class: Vec<usize>,
    pub coset: CosetParity,
    pub report: InsolubilityReport,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EtaReport {
    pub n: usize,
    /// The minimum insolubility probability over all classes and cosets.
    #[serde(with = "crate::textnum::rational_text")]
    pub eta: BigRational,
    /// Every `(class, coset)` pair attaining the minimum.
    pub witnesses: Vec<(Vec<usize>, CosetParity)>,
    pub rows: Vec<EtaRow>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub coverage_note: Option<String>,
}

/// Exact `min P_ins` over nonidentity class representatives `a` of `Sym(n)`
/// and both cosets of `Alt(n)`. Restricting to class representatives is
/// justified by conjugation invariance, which simultaneously conjugates `a`
/// and permutes each coset within itself.
pub fn eta_exact(n: usize, ceiling: u64) -> Result<EtaReport> {
    if !(5..=9).contains(&n) {
        return Err(Error::OutOfRange {
            what: "degree",
            value: n.to_string(),
            range: "5..=9",
        });
    }
    let mut rows = Vec::new();
    for partition in integer_partitions(n) {
        if partition.iter().all(|&p| p == 1) {
            continue;
        }
        let a = class_representative(&partition)?;
        for parity in CosetParity::BOTH {
            let coset = CosetSpec::alternating_coset(n, parity)?;
            let report = pins_exact(&a, &coset, ceiling)?;
            rows.push(EtaRow {
                class: partition.clone(),
                coset: parity,
                report,
            });
        }
    }
    let eta = rows
        .iter()
        .filter_map(|row| row.report.p_ins.as_exact())
        .min()
        .expect("at least one nonidentity class exists for n >= 2")
        .clone();
    let witnesses = rows
        .iter()
        .filter(|row| row.report.p_ins.as_exact() == Some(&eta))
        .map(|row| (row.class.clone(), row.coset))
        .collect();
    Ok(EtaReport {
        n,
        eta,
        witnesses,
        coverage_note: (n == 6).then(|| SYM6_COVERAGE_NOTE.to_string()),
        rows,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TwoCosetReport {
    pub n: usize,
    pub favorable: u64,
    pub total: u64,
    #[serde(with = "crate::textnum::rational_text")]
    pub probability: BigRational,
}

/// Exact probability over `(s1, s2) ∈ Alt(n)²` that `⟨s1·x1, s2·x2⟩`
/// contains `Alt(n)`.
pub fn two_coset_generation_check(
    x1: &Permutation,
    x2: &Permutation,
    n: usize,
) -> Result<TwoCosetReport> {
    if !(5..=7).contains(&n) {
        return Err(Error::OutOfRange {
            what: "degree",
            value: n.to_string(),
            range: "5..=7",
        });
    }
    for x in [x1, x2] {
        if x.degree() != n {
            return Err(Error::DegreeMismatch {
                left: n,
                right: x.degree(),
            });
        }
    }
    let alt = alternating(n)?;
    let size = alt.order_u64().expect("alternating orders up to 7 fit");
    let favorable: u64 = (0..size)
        .into_par_iter()
        .map(|i| {
            let left = alt
                .element_at(i)
                .expect("rank in range")
                .compose_unchecked(x1);
            let mut hits = 0;
            for j in 0..size {
                let right = alt
                    .element_at(j)
                    .expect("rank in range")
                    .compose_unchecked(x2);
                let pair = GroupHandle::new(vec![left.clone(), right])
                    .expect("equal degrees");
                if contains_alternating(&pair) {
                    hits += 1;
                }
            }
            hits
        })
        .sum();
    let total = size * size;
    Ok(TwoCosetReport {
        n,
        favorable,
        total,
        probability: ratio(favorable, total),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::naive;
    use num_bigint::BigInt;

    fn cyc(degree: usize, cycles: &[&[usize]]) -> Permutation {
        let owned: Vec<Vec<usize>> = cycles.iter().map(|c| c.to_vec()).collect();
        Permutation::from_cycles(degree, &owned).unwrap()
    }

    fn rational(p: i64, q: i64) -> BigRational {
        BigRational::new(BigInt::from(p), BigInt::from(q))
    }

    #[test]
    fn double_transposition_over_both_cosets_of_alt5() {
        let a = cyc(5, &[&[0, 1], &[2, 3]]);
        for parity in CosetParity::BOTH {
            let coset = CosetSpec::alternating_coset(5, parity).unwrap();
            let report = pins_exact(&a, &coset, DEFAULT_EXACT_CEILING).unwrap();
            assert_eq!(report.p_ins.as_exact().unwrap(), &rational(2, 5));
            assert_eq!(report.count_insoluble, Some(24));
            assert_eq!(report.coset_size, Some(60));
            assert_eq!(report.q_value.unwrap().as_exact().unwrap(), &rational(2, 5));
            assert_eq!(report.witnesses.len(), 3);
            assert!(report.coverage_note.is_none());
        }
    }

    #[test]
    fn exact_scan_matches_the_naive_oracle_for_every_class_of_sym5() {
        for partition in integer_partitions(5) {
            if partition.iter().all(|&p| p == 1) {
                continue;
            }
            let a = class_representative(&partition).unwrap();
            for parity in CosetParity::BOTH {
                let coset = CosetSpec::alternating_coset(5, parity).unwrap();
                let fast = pins_exact(&a, &coset, DEFAULT_EXACT_CEILING).unwrap();
                let naive_count = naive::pins_count(&a, coset.rep(), 5).unwrap();
                assert_eq!(
                    fast.count_insoluble,
                    Some(naive_count),
                    "class {partition:?}, {parity} coset"
                );
            }
        }
    }

    #[test]
    fn insolubility_dominates_generation() {
        for (class, parity) in [
            (vec![3, 1, 1], CosetParity::Even),
            (vec![4, 1], CosetParity::Odd),
            (vec![5], CosetParity::Even),
        ] {
            let a = class_representative(&class).unwrap();
            let coset = CosetSpec::alternating_coset(5, parity).unwrap();
            let report = pins_exact(&a, &coset, DEFAULT_EXACT_CEILING).unwrap();
            let p = report.p_ins.as_exact().unwrap();
            let q = report.q_value.as_ref().unwrap().as_exact().unwrap();
            assert!(p >= q);
            assert!(q > &BigRational::from(BigInt::from(0)));
        }
    }

    #[test]
    fn witnesses_generate_insoluble_pairs_and_come_first_in_rank_order() {
        let a = cyc(5, &[&[0, 1], &[2, 3]]);
        let coset = CosetSpec::alternating_coset(5, CosetParity::Even).unwrap();
        let report = pins_exact(&a, &coset, DEFAULT_EXACT_CEILING).unwrap();
        let ranks = insoluble_ranks(&a, &coset, DEFAULT_EXACT_CEILING).unwrap();
        assert_eq!(ranks.len(), 24);
        for (witness, &rank) in report.witnesses.iter().zip(&ranks) {
            assert_eq!(witness, &coset.socle().element_at(rank).unwrap());
            let y = coset.rep().compose_unchecked(witness);
            assert!(!crate::analysis::pair_generates_soluble(&a, &y).unwrap());
        }
    }

    #[test]
    fn rejects_identity_and_foreign_elements() {
        let coset = CosetSpec::alternating_coset(5, CosetParity::Even).unwrap();
        assert!(matches!(
            pins_exact(&Permutation::identity(5), &coset, DEFAULT_EXACT_CEILING),
            Err(Error::IdentityNotAllowed { .. })
        ));
        assert!(pins_exact(&cyc(6, &[&[0, 1]]), &coset, DEFAULT_EXACT_CEILING).is_err());
        assert!(matches!(
            pins_exact(&cyc(5, &[&[0, 1]]), &coset, 59),
            Err(Error::CeilingExceeded { .. })
        ));
    }

    #[test]
    fn coset_spec_validates_its_parts() {
        let s5 = symmetric(5).unwrap();
        let a6 = alternating(6).unwrap();
        assert!(CosetSpec::new(s5.clone(), a6, Permutation::identity(5)).is_err());
        let a5 = alternating(5).unwrap();
        assert!(CosetSpec::new(a5, s5.clone(), Permutation::identity(5)).is_err());
    }

    #[test]
    fn only_the_coset_of_the_representative_matters() {
        let a = cyc(5, &[&[0, 1, 2]]);
        let coset = CosetSpec::alternating_coset(5, CosetParity::Odd).unwrap();
        let base = pins_exact(&a, &coset, DEFAULT_EXACT_CEILING).unwrap();
        for rank in [1u64, 17, 42] {
            let s = coset.socle().element_at(rank).unwrap();
            let shifted = CosetSpec::new(
                coset.ambient().clone(),
                coset.socle().clone(),
                coset.rep().compose_unchecked(&s),
            )
            .unwrap();
            let report = pins_exact(&a, &shifted, DEFAULT_EXACT_CEILING).unwrap();
            assert_eq!(report.p_ins, base.p_ins);
            assert_eq!(report.q_value, base.q_value);
        }
    }

    #[test]
    fn conjugating_everything_preserves_the_probability() {
        let a = cyc(5, &[&[0, 1], &[2, 3]]);
        let coset = CosetSpec::alternating_coset(5, CosetParity::Odd).unwrap();
        let base = pins_exact(&a, &coset, DEFAULT_EXACT_CEILING).unwrap();
        for g in [cyc(5, &[&[0, 4, 2]]), cyc(5, &[&[1, 3]]), cyc(5, &[&[0, 1, 2, 3, 4]])] {
            let conj = |p: &Permutation| g.invert().compose_unchecked(p).compose_unchecked(&g);
            let moved = CosetSpec::new(
                coset.ambient().clone(),
                coset.socle().clone(),
                conj(coset.rep()),
            )
            .unwrap();
            let report = pins_exact(&conj(&a), &moved, DEFAULT_EXACT_CEILING).unwrap();
            assert_eq!(report.p_ins, base.p_ins);
        }
    }

    #[test]
    fn power_witness_sets_are_nested() {
        let coset = CosetSpec::alternating_coset(5, CosetParity::Even).unwrap();
        for partition in [vec![5], vec![4, 1], vec![3, 2], vec![2, 2, 1]] {
            let a = class_representative(&partition).unwrap();
            let base: std::collections::HashSet<u64> =
                insoluble_ranks(&a, &coset, DEFAULT_EXACT_CEILING)
                    .unwrap()
                    .into_iter()
                    .collect();
            for r in 2..=6 {
                let power = a.power(r);
                if power.is_identity() {
                    continue;
                }
                let powered = insoluble_ranks(&power, &coset, DEFAULT_EXACT_CEILING).unwrap();
                for rank in powered {
                    assert!(
                        base.contains(&rank),
                        "witness for a^{r} missing for a, class {partition:?}"
                    );
                }
            }
        }
    }

    #[test]
    fn eta_for_alt5_is_two_fifths_with_the_short_class_witnesses() {
        let report = eta_exact(5, DEFAULT_EXACT_CEILING).unwrap();
        assert_eq!(report.eta, rational(2, 5));
        assert_eq!(report.rows.len(), 12);
        let mut witnesses = report.witnesses.clone();
        witnesses.sort();
        assert_eq!(
            witnesses,
            vec![
                (vec![2, 1, 1, 1], CosetParity::Even),
                (vec![2, 1, 1, 1], CosetParity::Odd),
                (vec![2, 2, 1], CosetParity::Even),
                (vec![2, 2, 1], CosetParity::Odd),
            ]
        );
        assert!(report.coverage_note.is_none());
        let per_class: Vec<(Vec<usize>, BigRational)> = report
            .rows
            .iter()
            .filter(|row| row.coset == CosetParity::Even)
            .map(|row| (row.class.clone(), row.report.p_ins.as_exact().unwrap().clone()))
            .collect();
        let expected = vec![
            (vec![5], rational(5, 6)),
            (vec![4, 1], rational(8, 15)),
            (vec![3, 2], rational(9, 10)),
            (vec![3, 1, 1], rational(3, 5)),
            (vec![2, 2, 1], rational(2, 5)),
            (vec![2, 1, 1, 1], rational(2, 5)),
        ];
        assert_eq!(per_class, expected);
    }

    #[test]
    fn eta_rejects_out_of_range_degrees() {
        assert!(eta_exact(4, DEFAULT_EXACT_CEILING).is_err());
        assert!(eta_exact(10, DEFAULT_EXACT_CEILING).is_err());
    }

    #[test]
    fn degree_six_reports_carry_the_coverage_note() {
        let a = cyc(6, &[&[0, 1], &[2, 3]]);
        let coset = CosetSpec::alternating_coset(6, CosetParity::Even).unwrap();
        let report = pins_exact(&a, &coset, DEFAULT_EXACT_CEILING).unwrap();
        assert_eq!(report.coverage_note.as_deref(), Some(SYM6_COVERAGE_NOTE));
    }

    #[test]
    fn montecarlo_agrees_with_exact_and_is_seed_deterministic() {
        let a = cyc(5, &[&[0, 1], &[2, 3]]);
        let coset = CosetSpec::alternating_coset(5, CosetParity::Even).unwrap();
        let exact = pins_exact(&a, &coset, DEFAULT_EXACT_CEILING).unwrap();
        let exact_p = rational_to_f64(exact.p_ins.as_exact().unwrap());
        let mc = pins_montecarlo(&a, &coset, 4000, 11, 0.95).unwrap();
        let est = mc.p_ins.as_estimate().unwrap();
        assert!(est.covers(exact_p), "{est:?} should cover {exact_p}");
        let replay = pins_montecarlo(&a, &coset, 4000, 11, 0.95).unwrap();
        assert_eq!(mc, replay);
        let other_seed = pins_montecarlo(&a, &coset, 4000, 12, 0.95).unwrap();
        assert_ne!(
            mc.p_ins.as_estimate().unwrap().successes,
            other_seed.p_ins.as_estimate().unwrap().successes
        );
        assert!(matches!(
            pins_montecarlo(&a, &coset, 99, 1, 0.95),
            Err(Error::OutOfRange { .. })
        ));
    }

    #[test]
    fn montecarlo_interval_coverage_over_many_seeds() {
        let a = cyc(5, &[&[0, 1], &[2, 3]]);
        let coset = CosetSpec::alternating_coset(5, CosetParity::Even).unwrap();
        let exact_p = 0.4;
        let mut covered = 0;
        for seed in 0..100 {
            let mc = pins_montecarlo(&a, &coset, 400, seed, 0.95).unwrap();
            if mc.p_ins.as_estimate().unwrap().covers(exact_p) {
                covered += 1;
            }
        }
        assert!(covered >= 93, "only {covered}/100 intervals covered the exact value");
    }

    #[test]
    fn two_random_elements_of_alt5_generate_with_probability_19_30() {
        let id = Permutation::identity(5);
        let report = two_coset_generation_check(&id, &id, 5).unwrap();
        assert_eq!(report.probability, rational(19, 30));
        assert_eq!(report.total, 3600);
        assert_eq!(report.favorable, 2280);
    }

    #[test]
    fn two_coset_rejects_out_of_range_inputs() {
        let id = Permutation::identity(4);
        assert!(two_coset_generation_check(&id, &id, 4).is_err());
        let id5 = Permutation::identity(5);
        assert!(two_coset_generation_check(&id5, &Permutation::identity(6), 5).is_err());
    }
}
