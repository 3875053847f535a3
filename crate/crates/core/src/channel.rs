//! The two impulsive channel models.
//!
//! Each symbol sees Gaussian background noise of variance `σ_g²` plus `k`
//! Gaussian impulses, with `k ~ Poisson(A)`. Channel I scales each impulse
//! by `1/A` so the average total variance stays at `σ_g² + σ_f²`; Channel II
//! does not, so its average grows like `σ_g² + A·σ_f²`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{q_function, Probability};

pub const DEFAULT_EB: f64 = 7.28e-3;
pub const DEFAULT_SIGMA_G2: f64 = 7.28e-7;
pub const DEFAULT_SIGMA_F2: f64 = 7.28e-4;
pub const DEFAULT_A: f64 = 1.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ChannelKind {
    /// Variance `σ_g² + k·σ_f²/A`.
    #[serde(rename = "I")]
    ChannelI,
    /// Variance `σ_g² + k·σ_f²`.
    #[serde(rename = "II")]
    ChannelII,
}

impl ChannelKind {
    pub const ALL: [ChannelKind; 2] = [ChannelKind::ChannelI, ChannelKind::ChannelII];
}

impl fmt::Display for ChannelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ChannelKind::ChannelI => "I",
            ChannelKind::ChannelII => "II",
        })
    }
}

impl FromStr for ChannelKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "I" | "1" => Ok(ChannelKind::ChannelI),
            "II" | "2" => Ok(ChannelKind::ChannelII),
            other => Err(format!("unknown channel kind `{other}` (expected I or II)")),
        }
    }
}

/// Physical parameters shared by every formula.
///
/// `E_b/σ²` ratios are used as plain numbers, the same way the BER formulas
/// use them; no symbol-time normalisation is applied.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChannelParams {
    eb: f64,
    sigma_g2: f64,
    sigma_f2: f64,
    a: f64,
}

impl Default for ChannelParams {
    fn default() -> Self {
        ChannelParams {
            eb: DEFAULT_EB,
            sigma_g2: DEFAULT_SIGMA_G2,
            sigma_f2: DEFAULT_SIGMA_F2,
            a: DEFAULT_A,
        }
    }
}

fn positive(name: &'static str, v: f64) -> Result<f64> {
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(Error::param(name, v, "must be positive and finite"))
    }
}

impl ChannelParams {
    pub fn new(eb: f64, sigma_g2: f64, sigma_f2: f64, a: f64) -> Result<Self> {
        if !(sigma_f2 >= 0.0 && sigma_f2.is_finite()) {
            return Err(Error::param(
                "sigma_f2",
                sigma_f2,
                "must be non-negative and finite",
            ));
        }
        Ok(ChannelParams {
            eb: positive("eb", eb)?,
            sigma_g2: positive("sigma_g2", sigma_g2)?,
            sigma_f2,
            a: positive("a", a)?,
        })
    }

    /// Default constants with the given Poisson mean.
    pub fn with_defaults_at(a: f64) -> Result<Self> {
        ChannelParams::default().with_a(a)
    }

    pub fn with_a(self, a: f64) -> Result<Self> {
        ChannelParams::new(self.eb, self.sigma_g2, self.sigma_f2, a)
    }

    pub fn with_eb(self, eb: f64) -> Result<Self> {
        ChannelParams::new(eb, self.sigma_g2, self.sigma_f2, self.a)
    }

    pub fn with_sigma_g2(self, sigma_g2: f64) -> Result<Self> {
        ChannelParams::new(self.eb, sigma_g2, self.sigma_f2, self.a)
    }

    pub fn with_sigma_f2(self, sigma_f2: f64) -> Result<Self> {
        ChannelParams::new(self.eb, self.sigma_g2, sigma_f2, self.a)
    }

    pub fn eb(&self) -> f64 {
        self.eb
    }

    pub fn sigma_g2(&self) -> f64 {
        self.sigma_g2
    }

    pub fn sigma_f2(&self) -> f64 {
        self.sigma_f2
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    /// `σ_g² + σ_f²`, the mean Channel-I noise variance.
    pub fn average_variance(&self) -> f64 {
        self.sigma_g2 + self.sigma_f2
    }

    /// `10·log10(E_b/σ_g²)`.
    pub fn snr_db(&self) -> f64 {
        10.0 * (self.eb / self.sigma_g2).log10()
    }
}

/// Total noise variance given `k` impulses.
pub fn noise_variance(kind: ChannelKind, params: &ChannelParams, k: u64) -> f64 {
    let k = k as f64;
    match kind {
        ChannelKind::ChannelI => params.sigma_g2 + k * params.sigma_f2 / params.a,
        ChannelKind::ChannelII => params.sigma_g2 + k * params.sigma_f2,
    }
}

/// Bit-flip probability of a hard-decision coherent 2-FSK detector at the
/// given noise variance, `Q(√(E_b / 2σ²))`. Underflows to 0 for very clean
/// states.
pub fn flip_probability(eb: f64, variance: f64) -> Probability {
    q_function((eb / (2.0 * variance)).sqrt()).expect("positive parameters give a finite argument")
}

/// `q(k)`, the transition probability conditioned on `k` impulses.
pub fn transition_probability(kind: ChannelKind, params: &ChannelParams, k: u64) -> Probability {
    flip_probability(params.eb, noise_variance(kind, params, k))
}

/// Variance over `k` of the Channel-I conditional noise variance,
/// `Var[σ_g² + k·σ_f²/A] = σ_f⁴/A`.
pub fn conditional_variance_spread(params: &ChannelParams) -> f64 {
    params.sigma_f2 * params.sigma_f2 / params.a
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{truncate_poisson, DEFAULT_EPSILON};

    #[test]
    fn rejects_invalid_params() {
        assert!(ChannelParams::new(0.0, 1.0, 1.0, 1.0).is_err());
        assert!(ChannelParams::new(1.0, 0.0, 1.0, 1.0).is_err());
        assert!(ChannelParams::new(1.0, 1.0, -1.0, 1.0).is_err());
        assert!(ChannelParams::new(1.0, 1.0, 1.0, 0.0).is_err());
        assert!(ChannelParams::new(1.0, 1.0, f64::NAN, 1.0).is_err());
        assert!(ChannelParams::new(1.0, 1.0, 0.0, 1.0).is_ok());
        match ChannelParams::new(1.0, 1.0, 1.0, -3.0) {
            Err(Error::InvalidParameter { name, .. }) => assert_eq!(name, "a"),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn variance_substitution() {
        let p = ChannelParams::default();
        for kind in ChannelKind::ALL {
            assert_eq!(noise_variance(kind, &p, 0), 7.28e-7);
        }
        let v = noise_variance(ChannelKind::ChannelI, &p, 1);
        assert!((v - 7.28728e-4).abs() < 1e-18);
        let v = noise_variance(ChannelKind::ChannelII, &p, 3);
        assert!((v - (7.28e-7 + 3.0 * 7.28e-4)).abs() < 1e-18);
    }

    #[test]
    fn transition_probability_values() {
        let p = ChannelParams::default();
        // Q(√5000) is far below the smallest double
        for kind in ChannelKind::ALL {
            assert_eq!(transition_probability(kind, &p, 0).value(), 0.0);
        }
        // Q(√(E_b/(2(σ_g²+σ_f²)))) = Q(√4.99500...), 40-digit reference
        let q1 = transition_probability(ChannelKind::ChannelI, &p, 1).value();
        assert!((q1 - 0.012_710_290_086_115_778).abs() < 1e-15);
        let q_far = transition_probability(ChannelKind::ChannelII, &p, 1_000_000_000).value();
        assert!(q_far < 0.5 && q_far > 0.4999);
    }

    #[test]
    fn transition_probability_strictly_increasing() {
        for a in [0.01, 1.0, 100.0] {
            let p = ChannelParams::with_defaults_at(a).unwrap();
            for kind in ChannelKind::ALL {
                let t = truncate_poisson(a, DEFAULT_EPSILON).unwrap();
                // k = 0 sits at the underflow floor; compare from k = 1 on
                for k in 1..t.k_max() + 5 {
                    let lo = transition_probability(kind, &p, k);
                    let hi = transition_probability(kind, &p, k + 1);
                    assert!(lo < hi, "{kind} a={a} k={k}");
                    assert!(hi.value() < 0.5);
                }
            }
        }
    }

    #[test]
    fn channels_coincide_at_unit_mean() {
        let p = ChannelParams::with_defaults_at(1.0).unwrap();
        for k in 0..200 {
            assert_eq!(
                noise_variance(ChannelKind::ChannelI, &p, k),
                noise_variance(ChannelKind::ChannelII, &p, k)
            );
            assert_eq!(
                transition_probability(ChannelKind::ChannelI, &p, k),
                transition_probability(ChannelKind::ChannelII, &p, k)
            );
        }
    }

    #[test]
    fn variance_at_mean_count_is_average() {
        for a in [1.0, 5.0, 40.0, 300.0] {
            let p = ChannelParams::with_defaults_at(a).unwrap();
            let v = noise_variance(ChannelKind::ChannelI, &p, a.round() as u64);
            let step = p.sigma_f2() / a;
            assert!((v - p.average_variance()).abs() <= step);
        }
    }

    #[test]
    fn spread_matches_brute_force_moment() {
        for a in [0.01, 0.1, 1.0, 10.0, 100.0] {
            let p = ChannelParams::with_defaults_at(a).unwrap();
            let t = truncate_poisson(a, 1e-15).unwrap();
            let mean = t.expect(|k| noise_variance(ChannelKind::ChannelI, &p, k));
            let second = t.expect(|k| {
                let d = noise_variance(ChannelKind::ChannelI, &p, k) - mean;
                d * d
            });
            let analytic = conditional_variance_spread(&p);
            assert!(((second - analytic) / analytic).abs() < 1e-10, "a={a}");
        }
        let p = ChannelParams::default();
        assert!((conditional_variance_spread(&p) - 5.299_84e-7).abs() < 1e-18);
        let p = ChannelParams::with_defaults_at(1e12).unwrap();
        assert!(conditional_variance_spread(&p) < 1e-18);
    }

    #[test]
    fn kind_parsing() {
        assert_eq!("I".parse::<ChannelKind>().unwrap(), ChannelKind::ChannelI);
        assert_eq!("II".parse::<ChannelKind>().unwrap(), ChannelKind::ChannelII);
        assert!("III".parse::<ChannelKind>().is_err());
    }
}
