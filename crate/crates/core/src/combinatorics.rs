//! Exhaustive counting checks over small symmetric groups: the closed-form
//! factorial identity, invariant-subset counts and their cycle-level
//! decomposition, projections of permutations onto subsets, distinguished
//! long-cycle counts, and transitivity rates over a coset.

use std::collections::BTreeSet;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::enumerate::{factorial_u64, for_each_permutation, permutation_from_rank};
use crate::error::{Error, Result};
use crate::numtheory::totient;
use crate::perm::{check_equal_degrees, orbits, Permutation};
use crate::sampling::{sample_rng, McEstimate};
use crate::textnum::rational_text;

/// Exhaustive scans over `Sym(n)` stay below this degree.
pub const EXHAUSTIVE_DEGREE_CEILING: usize = 9;

fn big_factorial(n: u64) -> BigUint {
    (1..=n).map(BigUint::from).product()
}

fn check_degree_ceiling(what: &'static str, n: usize, ceiling: usize) -> Result<()> {
    if n > ceiling {
        return Err(Error::CeilingExceeded {
            what,
            value: n.to_string(),
            ceiling: ceiling.to_string(),
        });
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FactorialIdentity {
    pub n: u64,
    pub a: u64,
    #[serde(with = "rational_text")]
    pub lhs: BigRational,
    #[serde(with = "rational_text")]
    pub rhs: BigRational,
    pub equal: bool,
}

/// Direct summation of `Σ_{x=0}^{a} (n−x−1)!/(a−x)!` against the closed
/// form `n!/(a!(n−a))`, all in exact arithmetic.
pub fn factorial_identity_check(n: u64, a: u64) -> Result<FactorialIdentity> {
    if a >= n {
        return Err(Error::OutOfRange {
            what: "summation cutoff",
            value: a.to_string(),
            range: "0..n",
        });
    }
    let lhs: BigRational = (0..=a)
        .map(|x| {
            BigRational::new(
                big_factorial(n - x - 1).into(),
                big_factorial(a - x).into(),
            )
        })
        .sum();
    let rhs = BigRational::new(
        big_factorial(n).into(),
        (big_factorial(a) * BigUint::from(n - a)).into(),
    );
    let equal = lhs == rhs;
    Ok(FactorialIdentity {
        n,
        a,
        lhs,
        rhs,
        equal,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct IotaCount {
    pub omega_size: usize,
    pub a_size: usize,
    pub total: u64,
    pub even: u64,
    pub odd: u64,
}

/// Whether some cycle of the image array lies entirely inside `a_mask`.
fn has_cycle_inside(images: &[usize], a_mask: u32) -> bool {
    let n = images.len();
    let mut visited = 0u32;
    for start in 0..n {
        if visited & (1 << start) != 0 {
            continue;
        }
        let mut inside = true;
        let mut point = start;
        loop {
            visited |= 1 << point;
            if a_mask & (1 << point) == 0 {
                inside = false;
            }
            point = images[point];
            if point == start {
                break;
            }
        }
        if inside {
            return true;
        }
    }
    false
}

/// Exhaustive count of permutations of `omega_size` points admitting a
/// nonempty invariant subset of a fixed `a_size`-point set, split by parity.
/// A nonempty invariant subset of `A` exists iff some cycle lies inside `A`,
/// so the scan inspects cycles instead of subsets.
pub fn iota_count(omega_size: usize, a_size: usize) -> Result<IotaCount> {
    check_degree_ceiling(
        "invariant-subset scan",
        omega_size,
        EXHAUSTIVE_DEGREE_CEILING,
    )?;
    if a_size > omega_size {
        return Err(Error::OutOfRange {
            what: "marked-subset size",
            value: a_size.to_string(),
            range: "0..=omega_size",
        });
    }
    let a_mask = (1u32 << a_size) - 1;
    let total_perms = factorial_u64(omega_size)?;
    let (even, odd) = (0..total_perms)
        .into_par_iter()
        .fold(
            || (0u64, 0u64),
            |(mut even, mut odd), rank| {
                let p = permutation_from_rank(omega_size, rank).expect("rank below n!");
                if has_cycle_inside(p.images(), a_mask) {
                    if p.is_even() {
                        even += 1;
                    } else {
                        odd += 1;
                    }
                }
                (even, odd)
            },
        )
        .reduce(|| (0, 0), |(e1, o1), (e2, o2)| (e1 + e2, o1 + o2));
    Ok(IotaCount {
        omega_size,
        a_size,
        total: even + odd,
        even,
        odd,
    })
}

fn validated_mask(omega: &[usize], subset: &[usize], what: &'static str) -> Result<u32> {
    let positions: Vec<usize> = subset
        .iter()
        .map(|point| {
            omega
                .iter()
                .position(|q| q == point)
                .ok_or(Error::OutOfRange {
                    what,
                    value: point.to_string(),
                    range: "points of the ambient set",
                })
        })
        .collect::<Result<_>>()?;
    Ok(positions.iter().fold(0u32, |mask, &i| mask | (1 << i)))
}

/// Exhaustive count of permutations of `omega` fixing `b` setwise while no
/// nonempty subset of `a∖b` is invariant.
pub fn kappa_count(omega: &[usize], a: &[usize], b: &[usize]) -> Result<u64> {
    let omega_sorted: BTreeSet<usize> = omega.iter().copied().collect();
    if omega_sorted.len() != omega.len() {
        return Err(Error::OutOfRange {
            what: "ambient set",
            value: "repeated point".into(),
            range: "distinct points",
        });
    }
    let omega: Vec<usize> = omega_sorted.into_iter().collect();
    check_degree_ceiling("setwise-stabilizer scan", omega.len(), EXHAUSTIVE_DEGREE_CEILING)?;
    let a_set: BTreeSet<usize> = a.iter().copied().collect();
    let b_set: BTreeSet<usize> = b.iter().copied().collect();
    if b_set.is_empty() {
        return Err(Error::EmptyGeneratorSet);
    }
    if !b_set.is_subset(&a_set) {
        return Err(Error::OutOfRange {
            what: "inner subset",
            value: "not contained in the middle subset".into(),
            range: "b ⊆ a",
        });
    }
    let a_mask = validated_mask(&omega, &a_set.iter().copied().collect::<Vec<_>>(), "middle subset point")?;
    let b_mask = validated_mask(&omega, &b_set.iter().copied().collect::<Vec<_>>(), "inner subset point")?;
    let n = omega.len();
    let total_perms = factorial_u64(n)?;
    let count = (0..total_perms)
        .into_par_iter()
        .filter(|&rank| {
            let p = permutation_from_rank(n, rank).expect("rank below n!");
            let b_image = (0..n)
                .filter(|&i| b_mask & (1 << i) != 0)
                .fold(0u32, |mask, i| mask | (1 << p.image(i)));
            b_image == b_mask && !has_cycle_inside(p.images(), a_mask & !b_mask)
        })
        .count() as u64;
    Ok(count)
}

/// `|B|!·(|Ω|−|B|)!·(1 − (|A|−|B|)/(|Ω|−|B|))` in integer form.
pub fn kappa_closed_form(omega_size: usize, a_size: usize, b_size: usize) -> Result<u64> {
    if b_size == 0 || b_size > a_size || a_size > omega_size {
        return Err(Error::OutOfRange {
            what: "subset sizes",
            value: format!("({omega_size}, {a_size}, {b_size})"),
            range: "0 < b ≤ a ≤ omega",
        });
    }
    let b_fact = factorial_u64(b_size)?;
    if a_size == b_size {
        return Ok(b_fact * factorial_u64(omega_size - b_size)?);
    }
    Ok(b_fact * factorial_u64(omega_size - b_size - 1)? * (omega_size - a_size) as u64)
}

fn validated_subset(degree: usize, r: &[usize]) -> Result<Vec<usize>> {
    let set: BTreeSet<usize> = r.iter().copied().collect();
    if set.is_empty() {
        return Err(Error::EmptyGeneratorSet);
    }
    if set.len() != r.len() {
        return Err(Error::OutOfRange {
            what: "projection subset",
            value: "repeated point".into(),
            range: "distinct points",
        });
    }
    if let Some(&max) = set.iter().next_back() {
        if max >= degree {
            return Err(Error::PointOutOfRange { point: max, degree });
        }
    }
    Ok(set.into_iter().collect())
}

/// The induced permutation of `r`: each `i ∈ r` maps to the first point of
/// its forward orbit under `eta` that lies in `r` again. Returned on
/// `r.len()` points, positions following sorted `r`.
pub fn project_onto(eta: &Permutation, r: &[usize]) -> Result<Permutation> {
    let sorted = validated_subset(eta.degree(), r)?;
    let position = |point: usize| sorted.binary_search(&point).ok();
    let images = sorted
        .iter()
        .map(|&i| {
            let mut point = eta.image(i);
            loop {
                if let Some(pos) = position(point) {
                    return pos;
                }
                point = eta.image(point);
            }
        })
        .collect();
    Permutation::from_images(images)
}

/// The restriction of `p` to `r`, on `r.len()` points following sorted `r`;
/// requires `p` to fix `r` setwise.
pub fn restrict_to(p: &Permutation, r: &[usize]) -> Result<Permutation> {
    let sorted = validated_subset(p.degree(), r)?;
    let images = sorted
        .iter()
        .map(|&i| {
            sorted
                .binary_search(&p.image(i))
                .map_err(|_| Error::NotABlockSystem {
                    detail: format!("point {i} leaves the subset under the permutation"),
                })
        })
        .collect::<Result<_>>()?;
    Permutation::from_images(images)
}

/// Buckets all permutations of `omega_size` points by their projection onto
/// `r`; true iff every bucket has size `omega_size!/|r|!`.
pub fn fact1_check(omega_size: usize, r: &[usize]) -> Result<bool> {
    check_degree_ceiling("projection bucket scan", omega_size, 8)?;
    let sorted = validated_subset(omega_size, r)?;
    let r_fact = factorial_u64(sorted.len())?;
    let total = factorial_u64(omega_size)?;
    let buckets = (0..total)
        .into_par_iter()
        .fold(
            || vec![0u64; r_fact as usize],
            |mut buckets, rank| {
                let p = permutation_from_rank(omega_size, rank).expect("rank below n!");
                let projected = project_onto(&p, &sorted).expect("validated subset");
                buckets[crate::enumerate::permutation_rank(&projected) as usize] += 1;
                buckets
            },
        )
        .reduce(
            || vec![0u64; r_fact as usize],
            |mut acc, other| {
                for (slot, value) in acc.iter_mut().zip(other) {
                    *slot += value;
                }
                acc
            },
        );
    let expected = total / r_fact;
    Ok(buckets.into_iter().all(|size| size == expected))
}

/// Orbit partitions compared two ways: `⟨G, σ⟩` on all points intersected
/// with `r`, versus `⟨G|_r, projection of σ⟩` directly on `r`. Generators of
/// `G` must fix every point outside `r`.
pub fn fact2_check(g_gens: &[Permutation], sigma: &Permutation, r: &[usize]) -> Result<bool> {
    let degree = check_equal_degrees(g_gens)?;
    if sigma.degree() != degree {
        return Err(Error::DegreeMismatch {
            left: degree,
            right: sigma.degree(),
        });
    }
    let sorted = validated_subset(degree, r)?;
    for g in g_gens {
        for point in 0..degree {
            if g.image(point) != point && sorted.binary_search(&point).is_err() {
                return Err(Error::OutOfRange {
                    what: "generator support",
                    value: point.to_string(),
                    range: "inside the projection subset",
                });
            }
        }
    }
    let mut ambient_gens = g_gens.to_vec();
    ambient_gens.push(sigma.clone());
    let mut global: Vec<Vec<usize>> = orbits(&ambient_gens)?
        .into_iter()
        .map(|orbit| {
            orbit
                .into_iter()
                .filter(|point| sorted.binary_search(point).is_ok())
                .collect::<Vec<usize>>()
        })
        .filter(|orbit| !orbit.is_empty())
        .collect();
    global.sort();
    let mut restricted_gens = g_gens
        .iter()
        .map(|g| restrict_to(g, &sorted))
        .collect::<Result<Vec<_>>>()?;
    restricted_gens.push(project_onto(sigma, &sorted)?);
    let mut local: Vec<Vec<usize>> = orbits(&restricted_gens)?
        .into_iter()
        .map(|orbit| orbit.into_iter().map(|i| sorted[i]).collect())
        .collect();
    local.sort();
    Ok(global == local)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DistinguishedCycleCount {
    pub n: usize,
    pub k: usize,
    pub exact: u64,
    pub closed_form: u64,
    #[serde(with = "rational_text")]
    pub bound: BigRational,
    pub matches_closed_form: bool,
    pub respects_bound: bool,
}

/// Count of permutations of `n` points whose cycle through point 0 has
/// length exactly `k` and reaches point 1 after a number of steps coprime
/// to `k`; compared against `(n−2)!·φ(k)` and the rate bound
/// `n!·φ(k)/((n+2)k)`.
pub fn facile_count(n: usize, k: usize) -> Result<DistinguishedCycleCount> {
    check_degree_ceiling("distinguished-cycle scan", n, EXHAUSTIVE_DEGREE_CEILING)?;
    if n < 2 {
        return Err(Error::OutOfRange {
            what: "degree",
            value: n.to_string(),
            range: "2..=9",
        });
    }
    if 2 * k < n || k > n {
        return Err(Error::OutOfRange {
            what: "cycle length",
            value: k.to_string(),
            range: "n/2..=n",
        });
    }
    let total = factorial_u64(n)?;
    let exact = (0..total)
        .into_par_iter()
        .filter(|&rank| {
            let p = permutation_from_rank(n, rank).expect("rank below n!");
            cycle_through_zero_qualifies(&p, k)
        })
        .count() as u64;
    let closed_form = if k < 2 {
        0
    } else {
        factorial_u64(n - 2)? * totient(k as u64)?
    };
    let bound = BigRational::new(
        BigInt::from(total) * BigInt::from(totient(k as u64)?),
        BigInt::from((n + 2) * k),
    );
    let respects_bound = BigRational::from(BigInt::from(exact)) >= bound;
    Ok(DistinguishedCycleCount {
        n,
        k,
        exact,
        closed_form,
        matches_closed_form: exact == closed_form,
        bound,
        respects_bound,
    })
}

/// The cycle of `p` through point 0 has length `k`, contains point 1, and
/// the step count from 0 to 1 is coprime to `k`.
fn cycle_through_zero_qualifies(p: &Permutation, k: usize) -> bool {
    let mut steps_to_one = None;
    let mut length = 1;
    let mut point = p.image(0);
    while point != 0 {
        if point == 1 {
            steps_to_one = Some(length);
        }
        length += 1;
        point = p.image(point);
    }
    length == k && steps_to_one.is_some_and(|j| j.gcd(&k) == 1)
}

/// Membership in the distinguished-cycle family at thresholds `delta1` on
/// the cycle length and `delta2` on its totient ratio.
pub fn lambda_member(tau: &Permutation, delta1: f64, delta2: f64) -> bool {
    let n = tau.degree();
    if n < 2 {
        return false;
    }
    let mut steps_to_one = None;
    let mut length = 1usize;
    let mut point = tau.image(0);
    while point != 0 {
        if point == 1 {
            steps_to_one = Some(length);
        }
        length += 1;
        point = tau.image(point);
    }
    let Some(j) = steps_to_one else {
        return false;
    };
    let phi = totient(length as u64).expect("positive length");
    length as f64 >= delta1 * n as f64
        && phi as f64 >= delta2 * length as f64
        && j.gcd(&length) == 1
}

/// Monte Carlo rate of `lambda_member` over uniform permutations.
pub fn lambda_rate_montecarlo(
    n: usize,
    delta1: f64,
    delta2: f64,
    samples: u64,
    seed: u64,
    confidence: f64,
) -> Result<McEstimate> {
    if n < 2 {
        return Err(Error::OutOfRange {
            what: "degree",
            value: n.to_string(),
            range: "2..",
        });
    }
    let hits = (0..samples)
        .into_par_iter()
        .filter(|&index| {
            let mut rng = sample_rng(seed, index);
            let (tau, _) = random_permutation(n, &mut rng);
            lambda_member(&tau, delta1, delta2)
        })
        .count() as u64;
    McEstimate::from_counts(hits, samples, confidence)
}

/// Exact rate of `lambda_member` by full enumeration, for cross-checking
/// the sampler at small degree.
pub fn lambda_rate_exact(n: usize, delta1: f64, delta2: f64) -> Result<BigRational> {
    check_degree_ceiling("membership scan", n, EXHAUSTIVE_DEGREE_CEILING)?;
    let mut hits = 0u64;
    for_each_permutation(n, |p| {
        if lambda_member(p, delta1, delta2) {
            hits += 1;
        }
    })?;
    Ok(BigRational::new(
        BigInt::from(hits),
        BigInt::from(factorial_u64(n)?),
    ))
}

/// Fisher-Yates permutation plus its parity (true = even).
fn random_permutation<R: rand::Rng>(n: usize, rng: &mut R) -> (Permutation, bool) {
    let mut images: Vec<usize> = (0..n).collect();
    let mut even = true;
    for i in (1..n).rev() {
        let j = rng.gen_range(0..=i);
        if j != i {
            images.swap(i, j);
            even = !even;
        }
    }
    (
        Permutation::from_images(images).expect("shuffle of distinct points"),
        even,
    )
}

fn check_nontrivial(g_gens: &[Permutation]) -> Result<usize> {
    let degree = check_equal_degrees(g_gens)?;
    if g_gens.iter().all(Permutation::is_identity) {
        return Err(Error::IdentityNotAllowed {
            what: "transitivity generators",
        });
    }
    Ok(degree)
}

/// Monte Carlo probability that `⟨g_gens, σ⟩` fails to be transitive for
/// `σ` uniform in the coset `rho·Alt(n)`.
pub fn nontransitivity_rate(
    g_gens: &[Permutation],
    rho: &Permutation,
    samples: u64,
    seed: u64,
    confidence: f64,
) -> Result<McEstimate> {
    let degree = check_nontrivial(g_gens)?;
    if rho.degree() != degree {
        return Err(Error::DegreeMismatch {
            left: degree,
            right: rho.degree(),
        });
    }
    let swap = Permutation::from_cycles(degree, &[vec![0, 1]])?;
    let hits = (0..samples)
        .into_par_iter()
        .filter(|&index| {
            let mut rng = sample_rng(seed, index);
            let (p, even) = random_permutation(degree, &mut rng);
            let alt_element = if even { p } else { p.compose_unchecked(&swap) };
            let sigma = rho.compose_unchecked(&alt_element);
            let mut gens = g_gens.to_vec();
            gens.push(sigma);
            orbits(&gens).expect("equal degrees").len() > 1
        })
        .count() as u64;
    McEstimate::from_counts(hits, samples, confidence)
}

/// Exact nontransitivity probability over the coset by full enumeration of
/// `Alt(n)`.
pub fn nontransitivity_exact(g_gens: &[Permutation], rho: &Permutation) -> Result<BigRational> {
    let degree = check_nontrivial(g_gens)?;
    if rho.degree() != degree {
        return Err(Error::DegreeMismatch {
            left: degree,
            right: rho.degree(),
        });
    }
    check_degree_ceiling("coset transitivity scan", degree, 8)?;
    let total = factorial_u64(degree)?;
    let hits = (0..total)
        .into_par_iter()
        .filter(|&rank| {
            let p = permutation_from_rank(degree, rank).expect("rank below n!");
            if !p.is_even() {
                return false;
            }
            let sigma = rho.compose_unchecked(&p);
            let mut gens = g_gens.to_vec();
            gens.push(sigma);
            orbits(&gens).expect("equal degrees").len() > 1
        })
        .count() as u64;
    Ok(BigRational::new(
        BigInt::from(hits),
        BigInt::from(total / 2),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::ToPrimitive;

    fn cyc(degree: usize, cycles: &[&[usize]]) -> Permutation {
        let owned: Vec<Vec<usize>> = cycles.iter().map(|c| c.to_vec()).collect();
        Permutation::from_cycles(degree, &owned).unwrap()
    }

    #[test]
    fn factorial_identity_small_cases() {
        let zero = factorial_identity_check(7, 0).unwrap();
        assert!(zero.equal);
        assert_eq!(zero.lhs, BigRational::from(BigInt::from(720)));
        let top = factorial_identity_check(6, 5).unwrap();
        assert!(top.equal);
        assert_eq!(top.lhs, BigRational::from(BigInt::from(6)));
        let mid = factorial_identity_check(4, 2).unwrap();
        assert!(mid.equal);
        assert_eq!(mid.rhs, BigRational::from(BigInt::from(6)));
        assert!(factorial_identity_check(4, 4).is_err());
    }

    #[test]
    fn factorial_identity_holds_up_to_thirty() {
        for n in 1..=30u64 {
            for a in 0..n {
                assert!(factorial_identity_check(n, a).unwrap().equal, "({n}, {a})");
            }
        }
    }

    #[test]
    fn iota_matches_the_product_formula() {
        for omega in 1..=6usize {
            for a in 0..=omega {
                let count = iota_count(omega, a).unwrap();
                let expected = factorial_u64(omega - 1).unwrap() * a as u64;
                assert_eq!(count.total, expected, "({omega}, {a})");
                assert_eq!(count.total, count.even + count.odd);
                if omega - a >= 2 {
                    assert_eq!(count.even, count.odd, "({omega}, {a})");
                }
            }
        }
    }

    #[test]
    fn iota_worked_examples() {
        assert_eq!(iota_count(5, 0).unwrap().total, 0);
        let three_one = iota_count(3, 1).unwrap();
        assert_eq!((three_one.total, three_one.even, three_one.odd), (2, 1, 1));
        let four_one = iota_count(4, 1).unwrap();
        assert_eq!((four_one.total, four_one.even, four_one.odd), (6, 3, 3));
        assert!(iota_count(10, 1).is_err());
        assert!(iota_count(4, 5).is_err());
    }

    #[test]
    fn kappa_matches_its_closed_form_exhaustively() {
        for omega in 1..=6usize {
            let points: Vec<usize> = (0..omega).collect();
            for a in 1..=omega {
                for b in 1..=a {
                    let exact = kappa_count(&points, &points[..a], &points[..b]).unwrap();
                    let formula = kappa_closed_form(omega, a, b).unwrap();
                    assert_eq!(exact, formula, "({omega}, {a}, {b})");
                }
            }
        }
    }

    #[test]
    fn kappa_worked_example_and_validation() {
        let exact = kappa_count(&[0, 1, 2, 3], &[0, 1], &[0]).unwrap();
        assert_eq!(exact, 4);
        assert_eq!(kappa_closed_form(4, 2, 1).unwrap(), 4);
        assert_eq!(kappa_closed_form(5, 3, 3).unwrap(), 12);
        assert!(kappa_count(&[0, 1, 2], &[0], &[]).is_err());
        assert!(kappa_count(&[0, 1, 2], &[0], &[1]).is_err());
        assert!(kappa_count(&[0, 1, 2], &[0, 5], &[0]).is_err());
    }

    #[test]
    fn kappa_sums_to_iota_over_inner_subsets() {
        let omega: Vec<usize> = (0..6).collect();
        for a_size in 1..=4usize {
            let a: Vec<usize> = (0..a_size).collect();
            let mut total = 0;
            for mask in 1u32..(1 << a_size) {
                let b: Vec<usize> = (0..a_size).filter(|&i| mask & (1 << i) != 0).collect();
                total += kappa_count(&omega, &a, &b).unwrap();
            }
            assert_eq!(total, iota_count(6, a_size).unwrap().total, "a = {a_size}");
        }
    }

    #[test]
    fn projection_follows_the_cycle() {
        let eta = cyc(4, &[&[0, 1, 2, 3]]);
        let projected = project_onto(&eta, &[0, 2]).unwrap();
        assert_eq!(projected, cyc(2, &[&[0, 1]]));
        let full = project_onto(&eta, &[0, 1, 2, 3]).unwrap();
        assert_eq!(full, eta);
        let single = project_onto(&eta, &[2]).unwrap();
        assert!(single.is_identity());
        assert!(project_onto(&eta, &[]).is_err());
        assert!(project_onto(&eta, &[0, 7]).is_err());
    }

    #[test]
    fn projection_of_an_invariant_subset_is_the_restriction() {
        let p = cyc(6, &[&[0, 2, 4], &[1, 3]]);
        let r = [0, 2, 4];
        assert_eq!(
            project_onto(&p, &r).unwrap(),
            restrict_to(&p, &r).unwrap()
        );
        assert!(restrict_to(&p, &[0, 1]).is_err());
    }

    #[test]
    fn projection_buckets_are_uniform() {
        assert!(fact1_check(5, &[0, 2, 4]).unwrap());
        assert!(fact1_check(5, &[0, 1, 2, 3, 4]).unwrap());
        assert!(fact1_check(6, &[1, 5]).unwrap());
        assert!(fact1_check(9, &[0]).is_err());
    }

    #[test]
    fn orbit_partitions_agree_for_supported_generators() {
        let g = vec![cyc(7, &[&[0, 1]]), cyc(7, &[&[2, 3, 4]])];
        let sigma = cyc(7, &[&[0, 5, 6, 2]]);
        let r = [0, 1, 2, 3, 4];
        assert!(fact2_check(&g, &sigma, &r).unwrap());
        let transitive = vec![cyc(5, &[&[0, 1, 2, 3, 4]])];
        assert!(fact2_check(&transitive, &Permutation::identity(5), &[0, 1, 2, 3, 4]).unwrap());
        let unsupported = vec![cyc(7, &[&[5, 6]])];
        assert!(fact2_check(&unsupported, &sigma, &r).is_err());
    }

    #[test]
    fn orbit_partitions_agree_on_random_instances() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(97);
        for _ in 0..60 {
            let r_size = rng.gen_range(1..=7usize);
            let r: Vec<usize> = rand::seq::index::sample(&mut rng, 7, r_size).into_vec();
            let mut sorted = r.clone();
            sorted.sort_unstable();
            let gens: Vec<Permutation> = (0..2)
                .map(|_| {
                    let (inner, _) = random_permutation(r_size, &mut rng);
                    let mut images: Vec<usize> = (0..7).collect();
                    for (pos, &point) in sorted.iter().enumerate() {
                        images[point] = sorted[inner.image(pos)];
                    }
                    Permutation::from_images(images).unwrap()
                })
                .collect();
            let (sigma, _) = random_permutation(7, &mut rng);
            assert!(fact2_check(&gens, &sigma, &sorted).unwrap());
        }
    }

    #[test]
    fn distinguished_cycle_count_matches_closed_form() {
        let four_two = facile_count(4, 2).unwrap();
        assert_eq!(four_two.exact, 2);
        assert_eq!(four_two.closed_form, 2);
        assert!(four_two.matches_closed_form);
        let five_five = facile_count(5, 5).unwrap();
        assert_eq!(five_five.exact, 24);
        assert_eq!(five_five.closed_form, 24);
        assert_eq!(
            five_five.bound,
            BigRational::new(BigInt::from(480), BigInt::from(35))
        );
        assert!(five_five.respects_bound);
        assert!(facile_count(6, 2).is_err());
        assert!(facile_count(10, 7).is_err());
    }

    #[test]
    fn rate_bound_fails_when_k_n_plus_2_is_below_n_n_minus_1() {
        let report = facile_count(6, 3).unwrap();
        assert!(report.matches_closed_form);
        assert!(!report.respects_bound);
        assert_eq!(report.exact, 48);
        let holds = facile_count(7, 5).unwrap();
        assert!(holds.respects_bound);
    }

    #[test]
    fn membership_worked_examples() {
        assert!(lambda_member(&cyc(2, &[&[0, 1]]), 0.5, 0.5));
        assert!(!lambda_member(&cyc(4, &[&[1, 2, 3]]), 0.5, 0.5));
        assert!(!lambda_member(&cyc(4, &[&[0, 2], &[1, 3]]), 0.25, 0.25));
        assert!(lambda_member(&cyc(5, &[&[0, 1, 2, 3, 4]]), 0.9, 0.7));
        assert!(!lambda_member(&cyc(5, &[&[0, 1, 2, 3, 4]]), 1.1, 0.7));
    }

    #[test]
    fn exhaustive_membership_rate_matches_the_totient_sum() {
        let n = 7usize;
        let (delta1, delta2) = (0.55, 0.3);
        let exact = lambda_rate_exact(n, delta1, delta2).unwrap();
        let low = (delta1 * n as f64).ceil() as usize;
        let phi_sum: u64 = (low.max(2)..=n)
            .filter(|&k| totient(k as u64).unwrap() as f64 >= delta2 * k as f64)
            .map(|k| totient(k as u64).unwrap())
            .sum();
        let expected = BigRational::new(BigInt::from(phi_sum), BigInt::from(n * (n - 1)));
        assert_eq!(exact, expected);
    }

    #[test]
    fn sampled_membership_rate_covers_the_exact_value() {
        let exact = lambda_rate_exact(7, 0.55, 0.3).unwrap().to_f64().unwrap();
        let estimate = lambda_rate_montecarlo(7, 0.55, 0.3, 4000, 3, 0.99).unwrap();
        assert!(estimate.covers(exact), "{estimate:?} vs {exact}");
        let replay = lambda_rate_montecarlo(7, 0.55, 0.3, 4000, 3, 0.99).unwrap();
        assert_eq!(estimate, replay);
    }

    #[test]
    fn intransitivity_vanishes_for_a_transitive_group() {
        let gens = vec![cyc(6, &[&[0, 1, 2, 3, 4, 5]])];
        let exact = nontransitivity_exact(&gens, &Permutation::identity(6)).unwrap();
        use num_traits::Zero;
        assert!(exact.is_zero());
        let mc = nontransitivity_rate(&gens, &Permutation::identity(6), 500, 1, 0.95).unwrap();
        assert_eq!(mc.successes, 0);
    }

    #[test]
    fn exact_intransitivity_for_a_transposition_on_six_points() {
        let gens = vec![cyc(6, &[&[0, 1]])];
        let exact = nontransitivity_exact(&gens, &Permutation::identity(6)).unwrap();
        assert_eq!(
            exact,
            BigRational::new(BigInt::from(2), BigInt::from(3))
        );
        let odd_coset = nontransitivity_exact(&gens, &cyc(6, &[&[0, 1]])).unwrap();
        assert!(odd_coset > BigRational::new(BigInt::from(1), BigInt::from(2)));
    }

    #[test]
    fn sampled_intransitivity_covers_the_exact_rate() {
        let gens = vec![cyc(6, &[&[0, 1]])];
        let exact = nontransitivity_exact(&gens, &Permutation::identity(6))
            .unwrap()
            .to_f64()
            .unwrap();
        let estimate =
            nontransitivity_rate(&gens, &Permutation::identity(6), 4000, 9, 0.99).unwrap();
        assert!(estimate.covers(exact), "{estimate:?} vs {exact}");
    }

    #[test]
    fn trivial_generating_sets_are_rejected() {
        let id = Permutation::identity(5);
        assert!(nontransitivity_rate(&[id.clone()], &id, 100, 0, 0.95).is_err());
        assert!(nontransitivity_exact(&[], &id).is_err());
        let mismatched = cyc(4, &[&[0, 1]]);
        assert!(nontransitivity_exact(&[mismatched], &id).is_err());
    }

    #[test]
    fn random_permutation_parity_is_tracked_correctly() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(5);
        for _ in 0..200 {
            let (p, even) = random_permutation(8, &mut rng);
            assert_eq!(p.is_even(), even);
        }
    }
}
