//! Euler totient machinery: direct factorization for single values, a linear
//! sieve for batch work, interval ratio counts, and the empirical
//! distribution of `n/φ(n)`.

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::error::{Error, Result};

/// Largest limit the batch sieve accepts; 2·10^8 u32 values is 800 MB of
/// address space at the extreme, far beyond anything the checks need.
pub const SIEVE_CEILING: usize = 200_000_000;

/// `φ(m)` by trial-division factorization.
pub fn totient(m: u64) -> Result<u64> {
    if m == 0 {
        return Err(Error::OutOfRange {
            what: "totient argument",
            value: "0".into(),
            range: "1..",
        });
    }
    let mut rest = m;
    let mut result = m;
    let mut p = 2u64;
    while p.saturating_mul(p) <= rest {
        if rest % p == 0 {
            while rest % p == 0 {
                rest /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if rest > 1 {
        result -= result / rest;
    }
    Ok(result)
}

/// `φ(0..=limit)` by a linear sieve; `phi[0]` is 0 by convention.
pub fn totient_sieve(limit: usize) -> Result<Vec<u32>> {
    if limit > SIEVE_CEILING {
        return Err(Error::CeilingExceeded {
            what: "totient sieve limit",
            value: limit.to_string(),
            ceiling: SIEVE_CEILING.to_string(),
        });
    }
    let mut phi = vec![0u32; limit + 1];
    if limit >= 1 {
        phi[1] = 1;
    }
    let mut primes: Vec<usize> = Vec::new();
    for i in 2..=limit {
        if phi[i] == 0 {
            primes.push(i);
            phi[i] = (i - 1) as u32;
        }
        for &p in &primes {
            let ip = i * p;
            if ip > limit {
                break;
            }
            if i % p == 0 {
                phi[ip] = phi[i] * p as u32;
                break;
            }
            phi[ip] = phi[i] * (p - 1) as u32;
        }
    }
    Ok(phi)
}

fn check_unit_interval(what: &'static str, value: f64) -> Result<()> {
    if !(value > 0.0 && value < 1.0) {
        return Err(Error::OutOfRange {
            what,
            value: value.to_string(),
            range: "(0, 1)",
        });
    }
    Ok(())
}

/// Number of integers `m` in `[⌈delta1·n⌉, n]` with `φ(m) ≥ delta2·m`.
pub fn totient_ratio_count(n: u64, delta1: f64, delta2: f64) -> Result<u64> {
    check_unit_interval("delta1", delta1)?;
    check_unit_interval("delta2", delta2)?;
    if n < 2 {
        return Err(Error::OutOfRange {
            what: "interval endpoint",
            value: n.to_string(),
            range: "2..",
        });
    }
    let low = (delta1 * n as f64).ceil().max(1.0) as u64;
    let phi = totient_sieve(n as usize)?;
    Ok((low..=n)
        .filter(|&m| phi[m as usize] as f64 >= delta2 * m as f64)
        .count() as u64)
}

/// Exact fraction of `n ≤ limit` with `n/φ(n) ≥ t`, the empirical
/// counterpart of the distribution function of `n/φ(n)`.
pub fn b_empirical(t: f64, limit: usize) -> Result<BigRational> {
    if !(t >= 1.0) {
        return Err(Error::OutOfRange {
            what: "distribution threshold",
            value: t.to_string(),
            range: "1..",
        });
    }
    if limit < 1_000 {
        return Err(Error::OutOfRange {
            what: "distribution sample limit",
            value: limit.to_string(),
            range: "1000..",
        });
    }
    let phi = totient_sieve(limit)?;
    let count = (1..=limit)
        .filter(|&n| n as f64 >= t * phi[n] as f64)
        .count();
    Ok(BigRational::new(BigInt::from(count), BigInt::from(limit)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;
    use rand::{Rng, SeedableRng};

    #[test]
    fn totient_of_small_values() {
        assert_eq!(totient(1).unwrap(), 1);
        assert_eq!(totient(2).unwrap(), 1);
        assert_eq!(totient(12).unwrap(), 4);
        assert_eq!(totient(97).unwrap(), 96);
        assert_eq!(totient(1_000_000).unwrap(), 400_000);
        assert!(totient(0).is_err());
    }

    #[test]
    fn totient_is_multiplicative_on_coprime_pairs() {
        use num_integer::Integer;
        let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(11);
        let mut checked = 0;
        while checked < 500 {
            let a = rng.gen_range(2u64..=1_000_000);
            let b = rng.gen_range(2u64..=1_000_000);
            if a.gcd(&b) != 1 {
                continue;
            }
            assert_eq!(
                totient(a * b).unwrap(),
                totient(a).unwrap() * totient(b).unwrap(),
                "a = {a}, b = {b}"
            );
            checked += 1;
        }
    }

    #[test]
    fn sieve_agrees_with_factorization() {
        let phi = totient_sieve(100_000).unwrap();
        assert_eq!(phi[0], 0);
        for m in 1..=100_000u64 {
            assert_eq!(u64::from(phi[m as usize]), totient(m).unwrap(), "m = {m}");
        }
    }

    #[test]
    fn ratio_count_matches_a_direct_scan() {
        let count = totient_ratio_count(1000, 0.5, 0.3).unwrap();
        let direct = (500..=1000u64)
            .filter(|&m| totient(m).unwrap() as f64 >= 0.3 * m as f64)
            .count() as u64;
        assert_eq!(count, direct);
        assert!(count > 0);
        assert!(totient_ratio_count(1000, 1.5, 0.3).is_err());
        assert!(totient_ratio_count(1000, 0.5, 0.0).is_err());
        assert!(totient_ratio_count(1, 0.5, 0.3).is_err());
    }

    #[test]
    fn every_m_qualifies_once_the_threshold_is_low_enough() {
        let n = 2000u64;
        let count = totient_ratio_count(n, 0.5, 1e-9).unwrap();
        assert_eq!(count, n - 1000 + 1);
    }

    #[test]
    fn primes_qualify_at_high_thresholds() {
        let phi = totient_sieve(100).unwrap();
        let count = totient_ratio_count(100, 0.5, 0.9).unwrap();
        let primes = (50..=100usize).filter(|&m| phi[m] == (m - 1) as u32).count() as u64;
        assert!(count >= primes);
        assert!(primes > 0);
    }

    #[test]
    fn distribution_extremes() {
        assert!(b_empirical(1.0, 1000).unwrap().is_one());
        use num_traits::Zero;
        assert!(b_empirical(100.0, 1_000_000).unwrap().is_zero());
        assert!(b_empirical(0.9, 1000).is_err());
        assert!(b_empirical(1.5, 10).is_err());
    }

    #[test]
    fn distribution_is_non_increasing_in_t() {
        let grid = [1.0, 1.05, 1.1, 1.25, 1.5, 2.0, 3.0, 6.0];
        let values: Vec<BigRational> = grid
            .iter()
            .map(|&t| b_empirical(t, 100_000).unwrap())
            .collect();
        for pair in values.windows(2) {
            assert!(pair[0] >= pair[1]);
        }
    }

    // Asymptotic sanity check, not a theorem-level assertion: the density of
    // n with n/φ(n) < 1+ε decays like e^(−γ)/log(ε⁻¹) as ε → 0, and at
    // limit 10^7 the empirical complement should sit within a factor of two
    // of that rate for moderate ε.
    #[test]
    fn near_one_complement_decays_at_the_expected_rate() {
        use num_traits::ToPrimitive;
        const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;
        for eps in [0.1, 0.01] {
            let b = b_empirical(1.0 + eps, 10_000_000).unwrap();
            let complement = 1.0 - b.to_f64().unwrap();
            let predicted = (-EULER_GAMMA).exp() / (1.0 / eps).ln();
            let ratio = complement / predicted;
            assert!(
                (0.5..=2.0).contains(&ratio),
                "eps = {eps}: complement {complement}, predicted {predicted}"
            );
        }
    }

    #[test]
    fn interval_ratio_is_stable_across_scales() {
        let mut ratios = Vec::new();
        for n in [100_000u64, 1_000_000] {
            let count = totient_ratio_count(n, 0.5, 0.3).unwrap();
            ratios.push(count as f64 / n as f64);
        }
        let drift = (ratios[0] - ratios[1]).abs() / ratios[1];
        assert!(drift <= 0.10, "ratios {ratios:?} drift {drift}");
    }
}
