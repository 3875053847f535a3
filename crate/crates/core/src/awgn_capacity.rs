//! Gaussian-input capacity of the impulsive AWGN channel under the four
//! combinations of transmitter and receiver knowledge of `k`.
//!
//! With `h(v)` the Gaussian differential entropy, `σ_k² = σ_g² + k·σ_f²/A`,
//! `σ_AV² = σ_g² + σ_f²` and input power spectral density `S`:
//!
//! ```text
//! C(+,+) = h(S + σ_AV²)       - Σ P(k)·h(σ_k²)
//! C(+,-) = h(S + σ_AV²)       - h(σ_AV²)
//! C(-,+) = Σ P(k)·h(S + σ_k²) - Σ P(k)·h(σ_k²)
//! C(-,-) = Σ P(k)·h(S + σ_k²) - h(σ_AV²)
//! ```
//!
//! An informed transmitter reaches output entropy `h(S + σ_AV²)`; an
//! uninformed one gets the state average. An informed receiver pays the
//! state-averaged noise entropy; an uninformed one pays `h(σ_AV²)`.
//! Every capacity is output entropy minus noise entropy, so the `2πe` in `h`
//! cancels.
//!
//! `C(-,-)` is not clamped. For an input spectral density that is small next
//! to the impulsive spread it can go negative, which marks the limit of the
//! Gaussian-average form rather than a real capacity.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::channel::{ChannelKind, ChannelParams, DEFAULT_EB};
use crate::error::{Error, Result};
use crate::numerics::{gaussian_diff_entropy, truncate_poisson, Bits};

/// Default input spectral density `P/2B`, equal to the default `E_b` so that
/// `S/σ_AV² ≈ 10`.
pub const DEFAULT_PSD: f64 = DEFAULT_EB;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AwgnParams {
    psd: f64,
    channel: ChannelParams,
}

impl AwgnParams {
    pub fn new(psd: f64, channel: ChannelParams) -> Result<Self> {
        if !(psd > 0.0 && psd.is_finite()) {
            return Err(Error::param("psd", psd, "must be positive and finite"));
        }
        Ok(AwgnParams { psd, channel })
    }

    pub fn with_defaults_at(a: f64) -> Result<Self> {
        AwgnParams::new(DEFAULT_PSD, ChannelParams::with_defaults_at(a)?)
    }

    pub fn with_a(self, a: f64) -> Result<Self> {
        AwgnParams::new(self.psd, self.channel.with_a(a)?)
    }

    pub fn with_psd(self, psd: f64) -> Result<Self> {
        AwgnParams::new(psd, self.channel)
    }

    pub fn psd(&self) -> f64 {
        self.psd
    }

    pub fn channel(&self) -> &ChannelParams {
        &self.channel
    }

    pub fn a(&self) -> f64 {
        self.channel.a()
    }
}

/// Who knows the realised impulse count: `(transmitter, receiver)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct KnowledgeScenario {
    pub transmitter_informed: bool,
    pub receiver_informed: bool,
}

impl KnowledgeScenario {
    pub const PP: KnowledgeScenario = KnowledgeScenario::new(true, true);
    pub const PM: KnowledgeScenario = KnowledgeScenario::new(true, false);
    pub const MP: KnowledgeScenario = KnowledgeScenario::new(false, true);
    pub const MM: KnowledgeScenario = KnowledgeScenario::new(false, false);
    pub const ALL: [KnowledgeScenario; 4] = [Self::PP, Self::PM, Self::MP, Self::MM];

    pub const fn new(transmitter_informed: bool, receiver_informed: bool) -> Self {
        KnowledgeScenario {
            transmitter_informed,
            receiver_informed,
        }
    }

    /// Two-character code, e.g. `+-`.
    pub fn code(&self) -> &'static str {
        match (self.transmitter_informed, self.receiver_informed) {
            (true, true) => "++",
            (true, false) => "+-",
            (false, true) => "-+",
            (false, false) => "--",
        }
    }

    /// Column-safe name, e.g. `c_pm`.
    pub fn column(&self) -> &'static str {
        match (self.transmitter_informed, self.receiver_informed) {
            (true, true) => "c_pp",
            (true, false) => "c_pm",
            (false, true) => "c_mp",
            (false, false) => "c_mm",
        }
    }
}

impl fmt::Display for KnowledgeScenario {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sign = |b: bool| if b { '+' } else { '-' };
        write!(
            f,
            "C({},{})",
            sign(self.transmitter_informed),
            sign(self.receiver_informed)
        )
    }
}

impl FromStr for KnowledgeScenario {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        KnowledgeScenario::ALL
            .into_iter()
            .find(|sc| sc.code() == s)
            .ok_or_else(|| format!("unknown scenario `{s}` (expected ++, +-, -+ or --)"))
    }
}

/// The four entropy terms every scenario is assembled from.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct EntropyTerms {
    /// `h(S + σ_AV²)`
    output_informed: f64,
    /// `Σ P(k)·h(S + σ_k²)`
    output_averaged: f64,
    /// `Σ P(k)·h(σ_k²)`
    noise_informed: f64,
    /// `h(σ_AV²)`
    noise_averaged: f64,
}

impl EntropyTerms {
    /// Build the terms with an arbitrary variance-entropy map `h`.
    ///
    /// Averages are taken over the truncation window and renormalised by its
    /// captured mass, so a single-state channel reproduces its classical
    /// capacity exactly.
    pub(crate) fn with_entropy<H>(params: &AwgnParams, epsilon: f64, h: H) -> Result<Self>
    where
        H: Fn(f64) -> Result<f64>,
    {
        let ch = params.channel();
        let s = params.psd();
        let avg = ch.average_variance();
        let (output_averaged, noise_informed) = if ch.sigma_f2() == 0.0 {
            (h(s + ch.sigma_g2())?, h(ch.sigma_g2())?)
        } else {
            let window = truncate_poisson(ch.a(), epsilon)?;
            let mass = window.captured_mass();
            let (mut out, mut noise) = (0.0, 0.0);
            for (k, w) in window.terms().filter(|&(_, w)| w > 0.0) {
                let var = crate::channel::noise_variance(ChannelKind::ChannelI, ch, k);
                out += w * h(s + var)?;
                noise += w * h(var)?;
            }
            (out / mass, noise / mass)
        };
        Ok(EntropyTerms {
            output_informed: h(s + avg)?,
            output_averaged,
            noise_informed,
            noise_averaged: h(avg)?,
        })
    }

    pub(crate) fn new(params: &AwgnParams, epsilon: f64) -> Result<Self> {
        Self::with_entropy(params, epsilon, |v| Ok(gaussian_diff_entropy(v)?.value()))
    }

    pub(crate) fn capacity(&self, scenario: KnowledgeScenario) -> f64 {
        let output = if scenario.transmitter_informed {
            self.output_informed
        } else {
            self.output_averaged
        };
        let noise = if scenario.receiver_informed {
            self.noise_informed
        } else {
            self.noise_averaged
        };
        output - noise
    }

    fn receiver_gap(&self) -> f64 {
        self.noise_averaged - self.noise_informed
    }

    fn transmitter_gap(&self) -> f64 {
        self.output_informed - self.output_averaged
    }
}

/// Capacity in bits per transmission for one knowledge scenario.
pub fn awgn_capacity(
    scenario: KnowledgeScenario,
    params: &AwgnParams,
    epsilon: f64,
) -> Result<Bits> {
    Bits::new(EntropyTerms::new(params, epsilon)?.capacity(scenario))
}

/// Common large-`A` value of all four scenarios, `½·log2(1 + S/σ_AV²)`.
pub fn capacity_limit_large_a(params: &AwgnParams) -> Bits {
    let ratio = params.psd() / params.channel().average_variance();
    Bits::new(0.5 * ratio.ln_1p() / std::f64::consts::LN_2).expect("finite")
}

/// Capacity gained by telling the receiver `k`:
/// `h(σ_AV²) - Σ P(k)·h(σ_k²)`, never negative.
pub fn receiver_knowledge_gap(params: &AwgnParams, epsilon: f64) -> Result<Bits> {
    Bits::new(EntropyTerms::new(params, epsilon)?.receiver_gap())
}

/// Capacity gained by telling the transmitter `k`:
/// `h(S + σ_AV²) - Σ P(k)·h(S + σ_k²)`, never negative.
pub fn transmitter_knowledge_gap(params: &AwgnParams, epsilon: f64) -> Result<Bits> {
    Bits::new(EntropyTerms::new(params, epsilon)?.transmitter_gap())
}

/// One grid point of an AWGN sweep: capacities in the order of the requested
/// scenarios.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AwgnSweepRow {
    pub a: f64,
    pub capacities: Vec<(KnowledgeScenario, Bits)>,
}

fn check_ordering(a: f64, terms: &EntropyTerms) -> Result<()> {
    use KnowledgeScenario as K;
    let c = |s| terms.capacity(s);
    // both gaps are Jensen gaps of a concave function; allow rounding only
    let tol = 1e-12;
    let ok = c(K::PP) + tol >= c(K::PM)
        && c(K::PM) + tol >= c(K::MM)
        && c(K::PP) + tol >= c(K::MP)
        && c(K::MP) + tol >= c(K::MM);
    if ok {
        Ok(())
    } else {
        Err(Error::Ordering {
            a,
            detail: format!(
                "C(+,+)={} C(+,-)={} C(-,+)={} C(-,-)={}",
                c(K::PP),
                c(K::PM),
                c(K::MP),
                c(K::MM)
            ),
        })
    }
}

/// The requested scenarios at every `A` of the grid, in grid order.
pub fn awgn_sweep(
    base: &AwgnParams,
    grid: &[f64],
    scenarios: &[KnowledgeScenario],
    epsilon: f64,
) -> Vec<Result<AwgnSweepRow>> {
    grid.par_iter()
        .map(|&a| {
            let params = base.with_a(a)?;
            let terms = EntropyTerms::new(&params, epsilon)?;
            check_ordering(a, &terms)?;
            let capacities = scenarios
                .iter()
                .map(|&s| Ok((s, Bits::new(terms.capacity(s))?)))
                .collect::<Result<_>>()?;
            Ok(AwgnSweepRow { a, capacities })
        })
        .collect()
}
