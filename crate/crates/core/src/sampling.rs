//! Monte Carlo plumbing: reproducible per-sample randomness and Wilson score
//! intervals.
//!
//! Each sample gets its own ChaCha stream derived from `(seed, index)`, so an
//! estimate depends only on the seed and sample count, never on how rayon
//! schedules the work or how many worker threads run it.

use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, Normal};

use crate::error::{Error, Result};

/// The generator for sample `index` of a run seeded with `seed`.
pub fn sample_rng(seed: u64, index: u64) -> ChaCha12Rng {
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// A Bernoulli estimate with a Wilson score interval.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct McEstimate {
    pub successes: u64,
    pub samples: u64,
    pub estimate: f64,
    pub confidence: f64,
    pub ci_low: f64,
    pub ci_high: f64,
}

impl McEstimate {
    pub fn from_counts(successes: u64, samples: u64, confidence: f64) -> Result<Self> {
        let (ci_low, ci_high) = wilson_interval(successes, samples, confidence)?;
        Ok(McEstimate {
            successes,
            samples,
            estimate: successes as f64 / samples as f64,
            confidence,
            ci_low,
            ci_high,
        })
    }

    pub fn half_width(&self) -> f64 {
        (self.ci_high - self.ci_low) / 2.0
    }

    /// True when `value` lies inside the interval.
    pub fn covers(&self, value: f64) -> bool {
        self.ci_low <= value && value <= self.ci_high
    }
}

/// Wilson score interval for `successes` hits in `samples` Bernoulli trials.
pub fn wilson_interval(successes: u64, samples: u64, confidence: f64) -> Result<(f64, f64)> {
    if samples == 0 {
        return Err(Error::NoSamples);
    }
    if successes > samples {
        return Err(Error::OutOfRange {
            what: "success count",
            value: successes.to_string(),
            range: "0..=samples",
        });
    }
    if !(confidence > 0.0 && confidence < 1.0) {
        return Err(Error::BadConfidence(confidence));
    }
    let z = Normal::standard().inverse_cdf(1.0 - (1.0 - confidence) / 2.0);
    let n = samples as f64;
    let p = successes as f64 / n;
    let zz = z * z;
    let denom = 1.0 + zz / n;
    let center = (p + zz / (2.0 * n)) / denom;
    let half = z * (p * (1.0 - p) / n + zz / (4.0 * n * n)).sqrt() / denom;
    Ok(((center - half).max(0.0), (center + half).min(1.0)))
}

/// Runs `samples` independent trials of `trial` in parallel and wraps the hit
/// count in a Wilson interval. Sample `i` sees the generator
/// `sample_rng(seed, i)`.
pub fn run_trials<F>(samples: u64, seed: u64, confidence: f64, trial: F) -> Result<McEstimate>
where
    F: Fn(u64, &mut ChaCha12Rng) -> bool + Sync,
{
    if samples == 0 {
        return Err(Error::NoSamples);
    }
    let successes = (0..samples)
        .into_par_iter()
        .filter(|&i| {
            let mut rng = sample_rng(seed, i);
            trial(i, &mut rng)
        })
        .count() as u64;
    McEstimate::from_counts(successes, samples, confidence)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    #[test]
    fn wilson_matches_reference_values() {
        let close = |a: f64, b: f64| (a - b).abs() < 1e-12;
        let (lo, hi) = wilson_interval(8, 10, 0.95).unwrap();
        assert!(close(lo, 0.49016247153664183), "lo = {lo}");
        assert!(close(hi, 0.9433178485456247), "hi = {hi}");
        let (lo, hi) = wilson_interval(0, 50, 0.95).unwrap();
        assert!(close(lo, 0.0));
        assert!(close(hi, 0.07134759913335868));
        let (lo, hi) = wilson_interval(50, 50, 0.95).unwrap();
        assert!(close(lo, 0.9286524008666414));
        assert!(close(hi, 1.0));
        let (lo, hi) = wilson_interval(120, 300, 0.99).unwrap();
        assert!(close(lo, 0.33006837048370297));
        assert!(close(hi, 0.47425918432142045));
    }

    #[test]
    fn wilson_rejects_bad_inputs() {
        assert!(matches!(wilson_interval(0, 0, 0.95), Err(Error::NoSamples)));
        assert!(wilson_interval(5, 4, 0.95).is_err());
        assert!(matches!(
            wilson_interval(1, 4, 1.0),
            Err(Error::BadConfidence(_))
        ));
        assert!(matches!(
            wilson_interval(1, 4, 0.0),
            Err(Error::BadConfidence(_))
        ));
    }

    #[test]
    fn estimate_covers_its_own_point() {
        let e = McEstimate::from_counts(33, 100, 0.95).unwrap();
        assert!(e.covers(e.estimate));
        assert!(e.ci_low < e.estimate && e.estimate < e.ci_high);
        assert!(e.half_width() > 0.0);
    }

    #[test]
    fn per_sample_rng_is_reproducible_and_stream_separated() {
        let a: Vec<u64> = {
            let mut r = sample_rng(42, 7);
            (0..4).map(|_| r.gen()).collect()
        };
        let b: Vec<u64> = {
            let mut r = sample_rng(42, 7);
            (0..4).map(|_| r.gen()).collect()
        };
        assert_eq!(a, b);
        let c: Vec<u64> = {
            let mut r = sample_rng(42, 8);
            (0..4).map(|_| r.gen()).collect()
        };
        assert_ne!(a, c);
    }

    #[test]
    fn trial_runs_are_deterministic_across_worker_counts() {
        let run = |threads: usize| {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .unwrap();
            pool.install(|| {
                run_trials(2000, 9, 0.95, |_, rng| rng.gen_range(0..6u32) == 0).unwrap()
            })
        };
        let one = run(1);
        let four = run(4);
        assert_eq!(one, four);
        assert!(one.covers(1.0 / 6.0));
    }
}
