//! Reproducible Monte Carlo estimation.
//!
//! Trials are split into fixed-size chunks. Chunk `c` draws from a ChaCha8
//! stream keyed by `(seed, c)`, so the set of samples is fixed by the
//! configuration alone and the integer success counts can be summed in any
//! order. Estimates are therefore bit-identical for any number of threads.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::Exp1;
use rayon::prelude::*;

use crate::error::{domain, Error, Result};
use crate::stats::{binomial_sigma, wilson_interval, Z_95};

pub const DEFAULT_CHUNK_SIZE: u64 = 1 << 16;

/// Stick lengths sorted ascending, each in `[0, 1]`.
#[derive(Clone, Debug, PartialEq)]
pub struct StickSample {
    values: Vec<f64>,
}

impl StickSample {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if let Some(x) = values.iter().find(|x| !(0.0..=1.0).contains(*x)) {
            return Err(domain(format!("stick length {x} outside [0, 1]")));
        }
        if !is_sorted(&values) {
            return Err(Error::Contract("stick lengths must be sorted ascending".into()));
        }
        Ok(Self { values })
    }

    pub fn from_unsorted(mut values: Vec<f64>) -> Result<Self> {
        values.sort_by(f64::total_cmp);
        Self::new(values)
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

fn is_sorted(values: &[f64]) -> bool {
    values.windows(2).all(|w| w[0] <= w[1])
}

/// `n + 1` unit-rate exponential draws and their sum.
#[derive(Clone, Debug, PartialEq)]
pub struct SpacingsSample {
    spacings: Vec<f64>,
    total: f64,
}

impl SpacingsSample {
    pub fn new(spacings: Vec<f64>) -> Result<Self> {
        if spacings.len() < 2 {
            return Err(domain("need at least two spacings"));
        }
        if let Some(x) = spacings.iter().find(|x| !(x.is_finite() && **x > 0.0)) {
            return Err(domain(format!("spacing {x} is not positive")));
        }
        let total = spacings.iter().sum();
        Ok(Self { spacings, total })
    }

    pub fn spacings(&self) -> &[f64] {
        &self.spacings
    }

    pub fn total(&self) -> f64 {
        self.total
    }

    /// `(X_1 + ... + X_i) / S` for `i = 1..=n`.
    pub fn order_statistics(&self) -> StickSample {
        let n = self.spacings.len() - 1;
        let mut cumulative = 0.0;
        let values = self.spacings[..n]
            .iter()
            .map(|x| {
                cumulative += x;
                (cumulative / self.total).min(1.0)
            })
            .collect();
        StickSample { values }
    }
}

/// True when every window of `k` consecutive sorted lengths satisfies
/// `values[i] + ... + values[i+k-2] <= values[i+k-1]`.
pub fn no_kgon_indicator(sample: &StickSample, k: usize) -> Result<bool> {
    if k < 3 {
        return Err(domain(format!("polygon size k must be >= 3, got {k}")));
    }
    Ok(windows_hold(&sample.values, k))
}

#[inline]
fn windows_hold(sorted: &[f64], k: usize) -> bool {
    sorted
        .windows(k)
        .all(|w| w[..k - 1].iter().sum::<f64>() <= w[k - 1])
}

/// True when the longest stick is strictly shorter than the rest combined.
pub fn can_form_ngon(sample: &StickSample) -> Result<bool> {
    if sample.len() < 3 {
        return Err(domain("an n-gon needs n >= 3 sticks"));
    }
    Ok(ngon_closes(&sample.values))
}

#[inline]
fn ngon_closes(sorted: &[f64]) -> bool {
    let (longest, rest) = sorted.split_last().expect("non-empty");
    *longest < rest.iter().sum::<f64>()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TrialConfig {
    pub n: usize,
    pub k: usize,
    pub trials: u64,
    pub seed: u64,
    pub chunk_size: u64,
}

impl TrialConfig {
    pub fn new(n: usize, k: usize, trials: u64, seed: u64) -> Result<Self> {
        Self::with_chunk_size(n, k, trials, seed, DEFAULT_CHUNK_SIZE)
    }

    pub fn with_chunk_size(n: usize, k: usize, trials: u64, seed: u64, chunk_size: u64) -> Result<Self> {
        let config = Self { n, k, trials, seed, chunk_size };
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n < 1 {
            return Err(domain("number of sticks n must be >= 1"));
        }
        if self.k < 3 {
            return Err(domain(format!("polygon size k must be >= 3, got {}", self.k)));
        }
        if self.trials < 1 {
            return Err(domain("trials must be >= 1"));
        }
        if self.chunk_size < 1 {
            return Err(domain("chunk_size must be >= 1"));
        }
        Ok(())
    }
}

/// Point estimate with a 95% Wilson score interval.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Estimate {
    pub p_hat: f64,
    pub successes: u64,
    pub trials: u64,
    pub ci_low: f64,
    pub ci_high: f64,
}

impl Estimate {
    fn from_counts(successes: u64, trials: u64) -> Self {
        let (ci_low, ci_high) = wilson_interval(successes, trials, Z_95);
        Self {
            p_hat: successes as f64 / trials as f64,
            successes,
            trials,
            ci_low,
            ci_high,
        }
    }

    fn certain(trials: u64) -> Self {
        Self { p_hat: 1.0, successes: trials, trials, ci_low: 1.0, ci_high: 1.0 }
    }

    /// `|p_hat - exact|` in units of the binomial standard error at `exact`.
    /// Zero-variance targets give 0 on an exact match and infinity otherwise.
    pub fn sigmas_from(&self, exact: f64) -> f64 {
        let diff = (self.p_hat - exact).abs();
        let sigma = binomial_sigma(exact, self.trials);
        if sigma == 0.0 {
            if diff == 0.0 { 0.0 } else { f64::INFINITY }
        } else {
            diff / sigma
        }
    }
}

fn chunk_rng(seed: u64, chunk: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(chunk);
    rng
}

fn count_successes<F>(n: usize, trials: u64, seed: u64, chunk_size: u64, event: F) -> u64
where
    F: Fn(&[f64]) -> bool + Sync,
{
    let chunks = trials.div_ceil(chunk_size);
    (0..chunks)
        .into_par_iter()
        .map(|chunk| {
            let mut rng = chunk_rng(seed, chunk);
            let len = chunk_size.min(trials - chunk * chunk_size);
            let mut buf = vec![0.0f64; n];
            let mut hits = 0u64;
            for _ in 0..len {
                for x in buf.iter_mut() {
                    *x = rng.random::<f64>();
                }
                buf.sort_unstable_by(f64::total_cmp);
                hits += u64::from(event(&buf));
            }
            hits
        })
        .sum()
}

/// Estimates the probability that no `k` of `n` uniform sticks form a `k`-gon.
pub fn estimate(config: &TrialConfig) -> Result<Estimate> {
    config.validate()?;
    if config.n < config.k {
        return Ok(Estimate::certain(config.trials));
    }
    let k = config.k;
    let successes = count_successes(config.n, config.trials, config.seed, config.chunk_size, |s| {
        windows_hold(s, k)
    });
    Ok(Estimate::from_counts(successes, config.trials))
}

/// Estimates the probability that `n` uniform sticks can form an `n`-gon.
pub fn estimate_ngon_formable(n: usize, trials: u64, seed: u64, chunk_size: u64) -> Result<Estimate> {
    if n < 3 {
        return Err(domain("an n-gon needs n >= 3 sticks"));
    }
    if trials < 1 || chunk_size < 1 {
        return Err(domain("trials and chunk_size must be >= 1"));
    }
    let successes = count_successes(n, trials, seed, chunk_size, ngon_closes);
    Ok(Estimate::from_counts(successes, trials))
}

/// One draw of `n` sorted uniforms by each of the two samplers.
pub fn spacings_equivalence_sample(n: usize, seed: u64) -> Result<(StickSample, SpacingsSample)> {
    let (mut direct, mut spacings) = spacings_equivalence_batch(n, 1, seed)?;
    Ok((direct.pop().expect("one replicate"), spacings.pop().expect("one replicate")))
}

/// `replicates` independent draws from each sampler: sorting `n` uniforms,
/// and `n + 1` exponential spacings (see [`SpacingsSample::order_statistics`]).
/// The two samplers use separate streams of the same seed.
pub fn spacings_equivalence_batch(
    n: usize,
    replicates: usize,
    seed: u64,
) -> Result<(Vec<StickSample>, Vec<SpacingsSample>)> {
    if n < 1 {
        return Err(domain("number of sticks n must be >= 1"));
    }
    let mut direct_rng = chunk_rng(seed, 0);
    let mut spacing_rng = chunk_rng(seed, 1);
    let mut direct = Vec::with_capacity(replicates);
    let mut spacings = Vec::with_capacity(replicates);
    for _ in 0..replicates {
        let values: Vec<f64> = (0..n).map(|_| direct_rng.random::<f64>()).collect();
        direct.push(StickSample::from_unsorted(values)?);
        let draws: Vec<f64> = (0..=n).map(|_| positive_exp(&mut spacing_rng)).collect();
        spacings.push(SpacingsSample::new(draws)?);
    }
    Ok((direct, spacings))
}

fn positive_exp(rng: &mut ChaCha8Rng) -> f64 {
    loop {
        let x: f64 = rng.sample(Exp1);
        if x > 0.0 {
            return x;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample(xs: &[f64]) -> StickSample {
        StickSample::new(xs.to_vec()).unwrap()
    }

    #[test]
    fn indicator_examples() {
        assert!(no_kgon_indicator(&sample(&[0.1, 0.2, 0.5]), 3).unwrap());
        assert!(!no_kgon_indicator(&sample(&[0.1, 0.2, 0.25]), 3).unwrap());
        assert!(no_kgon_indicator(&sample(&[0.05, 0.1, 0.2, 0.4]), 4).unwrap());
        // vacuous
        assert!(no_kgon_indicator(&sample(&[0.9, 0.95]), 3).unwrap());
        assert!(no_kgon_indicator(&sample(&[0.1]), 2).is_err());
    }

    #[test]
    fn indicator_ties_count_as_no_kgon() {
        assert!(no_kgon_indicator(&sample(&[0.25, 0.25, 0.5]), 3).unwrap());
    }

    #[test]
    fn unsorted_input_is_rejected() {
        assert!(matches!(StickSample::new(vec![0.3, 0.1]), Err(Error::Contract(_))));
        assert!(matches!(StickSample::new(vec![0.1, 1.5]), Err(Error::Domain(_))));
        assert_eq!(StickSample::from_unsorted(vec![0.3, 0.1]).unwrap().values(), &[0.1, 0.3]);
    }

    #[test]
    fn ngon_examples() {
        assert!(can_form_ngon(&sample(&[0.2, 0.3, 0.4])).unwrap());
        assert!(!can_form_ngon(&sample(&[0.1, 0.2, 0.9])).unwrap());
        assert!(!can_form_ngon(&sample(&[0.25, 0.25, 0.25, 0.75])).unwrap());
        assert!(can_form_ngon(&sample(&[0.2, 0.3])).is_err());
    }

    #[test]
    fn config_validation() {
        assert!(TrialConfig::new(0, 3, 10, 1).is_err());
        assert!(TrialConfig::new(3, 2, 10, 1).is_err());
        assert!(TrialConfig::new(3, 3, 0, 1).is_err());
        assert!(TrialConfig::with_chunk_size(3, 3, 10, 1, 0).is_err());
    }

    #[test]
    fn vacuous_estimate_is_exactly_one() {
        let e = estimate(&TrialConfig::new(2, 3, 1234, 9).unwrap()).unwrap();
        assert_eq!(e.p_hat, 1.0);
        assert_eq!((e.successes, e.trials), (1234, 1234));
        assert_eq!((e.ci_low, e.ci_high), (1.0, 1.0));
    }

    #[test]
    fn chunking_covers_every_trial() {
        // 1000 trials in chunks of 64: the last chunk is partial
        let e = estimate(&TrialConfig::with_chunk_size(3, 3, 1000, 5, 64).unwrap()).unwrap();
        assert_eq!(e.trials, 1000);
        assert!(e.ci_low <= e.p_hat && e.p_hat <= e.ci_high);
        let again = estimate(&TrialConfig::with_chunk_size(3, 3, 1000, 5, 64).unwrap()).unwrap();
        assert_eq!(e, again);
    }

    #[test]
    fn single_spacings_sample_is_consistent() {
        let (direct, spacings) = spacings_equivalence_sample(4, 11).unwrap();
        assert_eq!(direct.len(), 4);
        assert_eq!(spacings.spacings().len(), 5);
        let sum: f64 = spacings.spacings().iter().sum();
        assert_eq!(sum, spacings.total());
        let stats = spacings.order_statistics();
        assert_eq!(stats.len(), 4);
        assert!(stats.values().iter().all(|x| (0.0..=1.0).contains(x)));
    }

    #[test]
    fn spacings_sample_rejects_non_positive() {
        assert!(SpacingsSample::new(vec![1.0, 0.0]).is_err());
        assert!(SpacingsSample::new(vec![1.0]).is_err());
    }

    #[test]
    fn sigmas_from_handles_degenerate_targets() {
        let e = Estimate::certain(10);
        assert_eq!(e.sigmas_from(1.0), 0.0);
        assert!(e.sigmas_from(0.5).is_finite());
        assert_eq!(Estimate::from_counts(5, 10).sigmas_from(1.0), f64::INFINITY);
    }
}
