//! Symbol-level Monte Carlo simulation of the impulsive channels.
//!
//! Each symbol draws `k ~ Poisson(A)`, then Gaussian noise with the Channel I
//! or II variance for that `k`; a bit error occurs when the noise crosses the
//! decision distance `√(E_b/2)`. That event has probability exactly
//! `Q(√(E_b/(2σ_k²)))`, so the estimate is an independent check of the
//! analytic BER sums.
//!
//! Symbols are split into `n_streams` contiguous blocks, one random substream
//! each. Results depend on `(seed, n_streams)` only; thread scheduling never
//! changes them.

mod poisson;
mod rng;

use std::collections::BTreeMap;

use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::channel::{noise_variance, ChannelKind, ChannelParams};
use crate::error::{Error, Result};
use crate::numerics::Probability;

pub use poisson::PoissonSampler;
pub use rng::{block, substream, StreamRng};

pub const DEFAULT_STREAMS: u32 = 8;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SimConfig {
    pub kind: ChannelKind,
    pub params: ChannelParams,
    pub n_symbols: u64,
    pub seed: u64,
    pub n_streams: u32,
}

impl SimConfig {
    pub fn new(kind: ChannelKind, params: ChannelParams, n_symbols: u64, seed: u64) -> Self {
        SimConfig {
            kind,
            params,
            n_symbols,
            seed,
            n_streams: DEFAULT_STREAMS,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_symbols == 0 {
            return Err(Error::param("n_symbols", 0.0, "must be at least 1"));
        }
        if self.n_streams == 0 {
            return Err(Error::param("n_streams", 0.0, "must be at least 1"));
        }
        Ok(())
    }

    fn streams(&self) -> impl ParallelIterator<Item = (StreamRng, u64)> + '_ {
        let s = u64::from(self.n_streams);
        (0..s).into_par_iter().map(move |i| {
            let (lo, hi) = block(self.n_symbols, s, i);
            (substream(self.seed, i), hi - lo)
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BerEstimate {
    pub errors: u64,
    pub trials: u64,
    pub p_hat: Probability,
    /// Normal-approximation 95% half-width; `3/trials` (rule of three) when
    /// no errors were seen.
    pub ci_halfwidth_95: f64,
    pub seed: u64,
}

impl BerEstimate {
    pub fn from_counts(errors: u64, trials: u64, seed: u64) -> Self {
        let p = errors as f64 / trials as f64;
        let ci_halfwidth_95 = if errors == 0 {
            3.0 / trials as f64
        } else {
            1.96 * (p * (1.0 - p) / trials as f64).sqrt()
        };
        BerEstimate {
            errors,
            trials,
            p_hat: Probability::new(p).expect("errors ≤ trials"),
            ci_halfwidth_95,
            seed,
        }
    }

    /// Whether `reference` lies within `multiple` half-widths of `p_hat`.
    pub fn agrees_with(&self, reference: f64, multiple: f64) -> bool {
        (self.p_hat.value() - reference).abs() <= multiple * self.ci_halfwidth_95
    }
}

fn impulses_and_variance(config: &SimConfig) -> (PoissonSampler, impl Fn(u64) -> f64 + Sync + '_) {
    let sampler = PoissonSampler::new(config.params.a());
    (sampler, move |k| {
        noise_variance(config.kind, &config.params, k)
    })
}

/// Estimate the BER by direct simulation.
pub fn simulate_ber(config: &SimConfig) -> Result<BerEstimate> {
    config.validate()?;
    let threshold = (config.params.eb() / 2.0).sqrt();
    let (sampler, variance) = impulses_and_variance(config);
    let errors: u64 = config
        .streams()
        .map(|(mut rng, count)| {
            let mut errors = 0u64;
            for _ in 0..count {
                let k = sampler.sample(&mut rng);
                let z: f64 = rng.sample(StandardNormal);
                if z * variance(k).sqrt() > threshold {
                    errors += 1;
                }
            }
            errors
        })
        .sum();
    Ok(BerEstimate::from_counts(
        errors,
        config.n_symbols,
        config.seed,
    ))
}

/// One support point of the sampled conditional variance.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VarianceAtom {
    pub k: u64,
    pub variance: f64,
    pub mass: f64,
}

/// Normalised histogram of sampled `σ_k²` values.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VarianceHistogram {
    /// `bins + 1` increasing edges.
    pub edges: Vec<f64>,
    /// Mass per bin; sums to 1.
    pub masses: Vec<f64>,
    /// Empirical distribution on the lattice of per-`k` variances.
    pub atoms: Vec<VarianceAtom>,
    pub mean: f64,
    pub variance: f64,
    pub samples: u64,
}

/// Sample `n_symbols` impulse counts and histogram their conditional noise
/// variances into `bins` equal-width bins.
pub fn empirical_variance_histogram(config: &SimConfig, bins: usize) -> Result<VarianceHistogram> {
    config.validate()?;
    if bins == 0 {
        return Err(Error::param("bins", 0.0, "must be at least 1"));
    }
    let (sampler, variance) = impulses_and_variance(config);
    let counts = config
        .streams()
        .map(|(mut rng, count)| {
            let mut local = BTreeMap::new();
            for _ in 0..count {
                *local.entry(sampler.sample(&mut rng)).or_insert(0u64) += 1;
            }
            local
        })
        .reduce(BTreeMap::new, |mut acc, part| {
            for (k, c) in part {
                *acc.entry(k).or_insert(0) += c;
            }
            acc
        });

    let n = config.n_symbols as f64;
    let atoms: Vec<VarianceAtom> = counts
        .iter()
        .map(|(&k, &c)| VarianceAtom {
            k,
            variance: variance(k),
            mass: c as f64 / n,
        })
        .collect();
    let mean: f64 = atoms.iter().map(|at| at.mass * at.variance).sum();
    let spread: f64 = atoms
        .iter()
        .map(|at| at.mass * (at.variance - mean).powi(2))
        .sum();

    let lo = atoms.first().expect("n_symbols ≥ 1").variance;
    let hi = atoms.last().expect("n_symbols ≥ 1").variance;
    let width = if hi > lo {
        (hi - lo) / bins as f64
    } else {
        lo.abs().max(f64::MIN_POSITIVE) * 1e-9
    };
    let edges: Vec<f64> = (0..=bins).map(|i| lo + i as f64 * width).collect();
    let mut masses = vec![0.0; bins];
    for at in &atoms {
        let idx = (((at.variance - lo) / width) as usize).min(bins - 1);
        masses[idx] += at.mass;
    }

    Ok(VarianceHistogram {
        edges,
        masses,
        atoms,
        mean,
        variance: spread,
        samples: config.n_symbols,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ber::ber_analytic;
    use crate::numerics::DEFAULT_EPSILON;

    #[test]
    fn fair_coin_when_noise_dominates() {
        let params = ChannelParams::new(1e-9, 1e6, 0.0, 1.0).unwrap();
        let est = simulate_ber(&SimConfig::new(ChannelKind::ChannelI, params, 400_000, 5)).unwrap();
        assert!(est.agrees_with(0.5, 4.0), "{est:?}");
    }

    #[test]
    fn deterministic_for_fixed_seed() {
        let cfg = SimConfig::new(
            ChannelKind::ChannelII,
            ChannelParams::default(),
            200_000,
            42,
        );
        let a = simulate_ber(&cfg).unwrap();
        let b = simulate_ber(&cfg).unwrap();
        assert_eq!(a, b);
        let other = simulate_ber(&SimConfig { seed: 43, ..cfg }).unwrap();
        assert_ne!(a.errors, other.errors);
    }

    #[test]
    fn deterministic_under_different_thread_pools() {
        let cfg = SimConfig::new(
            ChannelKind::ChannelI,
            ChannelParams::with_defaults_at(3.0).unwrap(),
            300_000,
            8,
        );
        let one = rayon::ThreadPoolBuilder::new()
            .num_threads(1)
            .build()
            .unwrap();
        let four = rayon::ThreadPoolBuilder::new()
            .num_threads(4)
            .build()
            .unwrap();
        let a = one.install(|| simulate_ber(&cfg).unwrap());
        let b = four.install(|| simulate_ber(&cfg).unwrap());
        assert_eq!(a, b);
        let ha = one.install(|| empirical_variance_histogram(&cfg, 16).unwrap());
        let hb = four.install(|| empirical_variance_histogram(&cfg, 16).unwrap());
        assert_eq!(ha, hb);
    }

    #[test]
    fn agrees_with_analytic_sum() {
        let a = 1.0;
        let params = ChannelParams::with_defaults_at(a).unwrap();
        let cfg = SimConfig::new(ChannelKind::ChannelII, params, 2_000_000, 1234);
        let est = simulate_ber(&cfg).unwrap();
        let exact = ber_analytic(ChannelKind::ChannelII, &params, DEFAULT_EPSILON)
            .unwrap()
            .value();
        assert!(est.agrees_with(exact, 4.0), "{est:?} vs {exact}");
    }

    #[test]
    fn zero_error_interval_uses_rule_of_three() {
        let est = BerEstimate::from_counts(0, 1000, 1);
        assert_eq!(est.p_hat.value(), 0.0);
        assert_eq!(est.ci_halfwidth_95, 0.003);
        let est = BerEstimate::from_counts(100, 10_000, 1);
        assert!((est.ci_halfwidth_95 - 1.96 * (0.01f64 * 0.99 / 1e4).sqrt()).abs() < 1e-15);
    }

    #[test]
    fn rejects_empty_runs() {
        let mut cfg = SimConfig::new(ChannelKind::ChannelI, ChannelParams::default(), 0, 1);
        assert!(simulate_ber(&cfg).is_err());
        cfg.n_symbols = 10;
        cfg.n_streams = 0;
        assert!(simulate_ber(&cfg).is_err());
        cfg.n_streams = 1;
        assert!(empirical_variance_histogram(&cfg, 0).is_err());
    }

    #[test]
    fn small_a_histogram_concentrates_on_background() {
        let params = ChannelParams::with_defaults_at(0.01).unwrap();
        let cfg = SimConfig::new(ChannelKind::ChannelI, params, 500_000, 3);
        let h = empirical_variance_histogram(&cfg, 20).unwrap();
        assert_eq!(h.atoms[0].k, 0);
        assert_eq!(h.atoms[0].variance, params.sigma_g2());
        assert!(h.atoms[0].mass >= 0.98);
        assert!((h.masses.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        assert!((h.atoms.iter().map(|a| a.mass).sum::<f64>() - 1.0).abs() < 1e-12);
        assert_eq!(h.edges.len(), 21);
        assert!(h.masses[0] >= 0.98);
    }

    #[test]
    fn large_a_histogram_mean() {
        let params = ChannelParams::with_defaults_at(100.0).unwrap();
        let cfg = SimConfig::new(ChannelKind::ChannelI, params, 500_000, 4);
        let h = empirical_variance_histogram(&cfg, 50).unwrap();
        assert!(((h.mean - params.average_variance()) / params.average_variance()).abs() < 0.01);
        // atoms sit on the lattice σ_g² + k·σ_f²/A
        for at in &h.atoms {
            let expect = params.sigma_g2() + at.k as f64 * params.sigma_f2() / 100.0;
            assert_eq!(at.variance, expect);
        }
    }

    #[test]
    fn single_atom_histogram() {
        let params = ChannelParams::with_defaults_at(1e-9).unwrap();
        let cfg = SimConfig::new(ChannelKind::ChannelI, params, 1000, 3);
        let h = empirical_variance_histogram(&cfg, 4).unwrap();
        assert_eq!(h.masses[0], 1.0);
        assert_eq!(h.variance, 0.0);
    }
}
