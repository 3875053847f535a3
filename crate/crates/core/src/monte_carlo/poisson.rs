//! Exact Poisson variate generation.
//!
//! Means up to 10 use inversion by sequential search of the CDF. Larger
//! means use Hörmann's PTRS transformed rejection with squeeze, which is
//! exact and runs in constant expected time.

use rand::Rng;

const INVERSION_MAX_MEAN: f64 = 10.0;

#[derive(Debug, Clone, Copy)]
pub enum PoissonSampler {
    Inversion {
        exp_neg_mean: f64,
        mean: f64,
    },
    Ptrs {
        mean: f64,
        ln_mean: f64,
        a: f64,
        b: f64,
        inv_alpha: f64,
        v_r: f64,
    },
}

impl PoissonSampler {
    /// `mean` must be positive and finite.
    pub fn new(mean: f64) -> Self {
        debug_assert!(mean > 0.0 && mean.is_finite());
        if mean <= INVERSION_MAX_MEAN {
            PoissonSampler::Inversion {
                exp_neg_mean: (-mean).exp(),
                mean,
            }
        } else {
            let b = 0.931 + 2.53 * mean.sqrt();
            PoissonSampler::Ptrs {
                mean,
                ln_mean: mean.ln(),
                a: -0.059 + 0.02483 * b,
                b,
                inv_alpha: 1.1239 + 1.1328 / (b - 3.4),
                v_r: 0.9277 - 3.6224 / (b - 2.0),
            }
        }
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> u64 {
        match *self {
            PoissonSampler::Inversion { exp_neg_mean, mean } => {
                let u: f64 = rng.random();
                let mut k = 0u64;
                let mut p = exp_neg_mean;
                let mut cdf = p;
                while u > cdf {
                    k += 1;
                    p *= mean / k as f64;
                    if p == 0.0 {
                        // u landed in the last ulp below 1
                        break;
                    }
                    cdf += p;
                }
                k
            }
            PoissonSampler::Ptrs {
                mean,
                ln_mean,
                a,
                b,
                inv_alpha,
                v_r,
            } => loop {
                let u: f64 = rng.random::<f64>() - 0.5;
                let v: f64 = rng.random();
                let us = 0.5 - u.abs();
                let k = ((2.0 * a / us + b) * u + mean + 0.43).floor();
                if us >= 0.07 && v <= v_r {
                    return k as u64;
                }
                if k < 0.0 || (us < 0.013 && v > us) {
                    continue;
                }
                let lhs = v.ln() + inv_alpha.ln() - (a / (us * us) + b).ln();
                let rhs = -mean + k * ln_mean - libm::lgamma(k + 1.0);
                if lhs <= rhs {
                    return k as u64;
                }
            },
        }
    }
}
