//! Special functions shared by the channel, BER and capacity code.
//!
//! The Gaussian tail goes through `libm::erfc`, a port of the FreeBSD msun
//! routine. Its rational approximations are accurate to within about one ulp
//! of `erfc` on the whole real line, which puts the relative error of
//! [`q_function`] below 1e-14 on [-8, 8]. Past x ≈ 37.5 the tail underflows
//! and is returned as exactly 0.

use std::f64::consts::{E, LN_2, PI, SQRT_2};
use std::fmt;
use std::ops::{Add, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default mass left outside a Poisson truncation window.
pub const DEFAULT_EPSILON: f64 = 1e-12;

/// A value in `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct Probability(f64);

impl Probability {
    pub const ZERO: Probability = Probability(0.0);
    pub const HALF: Probability = Probability(0.5);
    pub const ONE: Probability = Probability(1.0);

    pub fn new(value: f64) -> Result<Self> {
        if (0.0..=1.0).contains(&value) {
            Ok(Probability(value))
        } else {
            Err(Error::Domain {
                what: "probability",
                value,
            })
        }
    }

    #[inline]
    pub fn value(self) -> f64 {
        self.0
    }

    pub fn complement(self) -> Self {
        Probability(1.0 - self.0)
    }
}

impl TryFrom<f64> for Probability {
    type Error = Error;

    fn try_from(value: f64) -> Result<Self> {
        Probability::new(value)
    }
}

impl From<Probability> for f64 {
    fn from(p: Probability) -> f64 {
        p.0
    }
}

impl fmt::Display for Probability {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.0, f)
    }
}

/// An information quantity in bits per transmission. Differential entropies
/// may be negative; the value is always finite.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct Bits(f64);

impl Bits {
    pub fn new(value: f64) -> Result<Self> {
        if value.is_finite() {
            Ok(Bits(value))
        } else {
            Err(Error::Domain {
                what: "bits",
                value,
            })
        }
    }

    #[inline]
    pub fn value(self) -> f64 {
        self.0
    }
}

impl TryFrom<f64> for Bits {
    type Error = Error;

    fn try_from(value: f64) -> Result<Self> {
        Bits::new(value)
    }
}

impl From<Bits> for f64 {
    fn from(b: Bits) -> f64 {
        b.0
    }
}

impl Add for Bits {
    type Output = Bits;

    fn add(self, rhs: Bits) -> Bits {
        Bits(self.0 + rhs.0)
    }
}

impl Sub for Bits {
    type Output = Bits;

    fn sub(self, rhs: Bits) -> Bits {
        Bits(self.0 - rhs.0)
    }
}

impl fmt::Display for Bits {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.0, f)
    }
}

/// Upper tail of the standard normal distribution, `Q(x) = ½·erfc(x/√2)`.
pub fn q_function(x: f64) -> Result<Probability> {
    if !x.is_finite() {
        return Err(Error::Domain {
            what: "Q-function argument",
            value: x,
        });
    }
    Ok(Probability(0.5 * libm::erfc(x / SQRT_2)))
}

/// Binary entropy in bits, with `H(0) = H(1) = 0`.
pub fn binary_entropy(p: Probability) -> Bits {
    let p = p.value();
    if p == 0.0 || p == 1.0 {
        return Bits(0.0);
    }
    // ln_1p keeps the (1-p) term accurate when p is tiny
    let h = -p * p.log2() - (1.0 - p) * (-p).ln_1p() / LN_2;
    Bits(h)
}

/// Differential entropy of a Gaussian with the given variance,
/// `½·log2(2πe·σ²)` bits.
pub fn gaussian_diff_entropy(variance: f64) -> Result<Bits> {
    if !(variance > 0.0) || !variance.is_finite() {
        return Err(Error::Domain {
            what: "variance",
            value: variance,
        });
    }
    Ok(Bits(0.5 * (2.0 * PI * E * variance).log2()))
}

fn check_mean(a: f64) -> Result<()> {
    if a > 0.0 && a.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain {
            what: "Poisson mean",
            value: a,
        })
    }
}

#[inline]
fn pmf_unchecked(k: u64, a: f64) -> f64 {
    let k = k as f64;
    (k * a.ln() - a - libm::lgamma(k + 1.0)).exp()
}

/// Poisson probability mass `a^k e^{-a} / k!`, evaluated in log space.
pub fn poisson_pmf(k: u64, a: f64) -> Result<Probability> {
    check_mean(a)?;
    Ok(Probability(pmf_unchecked(k, a).min(1.0)))
}

/// A finite window `0..=k_max` of a Poisson distribution together with a
/// certified upper bound on the mass beyond it.
#[derive(Debug, Clone, PartialEq)]
pub struct PoissonTruncation {
    a: f64,
    k_max: u64,
    tail_bound: f64,
    weights: Vec<f64>,
}

// relative allowance for rounding in the log-space pmf terms
const TAIL_SLACK: f64 = 1e-10;

impl PoissonTruncation {
    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn k_max(&self) -> u64 {
        self.k_max
    }

    /// Upper bound on `Σ_{k > k_max} P(k)`.
    pub fn tail_bound(&self) -> f64 {
        self.tail_bound
    }

    /// `Σ_{k ≤ k_max} P(k)`.
    pub fn captured_mass(&self) -> f64 {
        self.weights.iter().sum()
    }

    /// `(k, P(k))` for every k in the window.
    pub fn terms(&self) -> impl Iterator<Item = (u64, f64)> + '_ {
        self.weights.iter().enumerate().map(|(k, &w)| (k as u64, w))
    }

    /// `Σ_{k ≤ k_max} P(k)·f(k)`.
    pub fn expect<F: FnMut(u64) -> f64>(&self, mut f: F) -> f64 {
        self.terms()
            .filter(|&(_, w)| w > 0.0)
            .map(|(k, w)| w * f(k))
            .sum()
    }
}

/// Smallest window `0..=k_max` whose Poisson mass is at least `1 - epsilon`.
///
/// Tail masses are summed from the far end, and everything past the last
/// computed term is bounded by a geometric series (past the mode the ratio
/// `P(k+1)/P(k) = a/(k+1)` is below one), so `tail_bound` is an upper
/// bound rather than `1 - Σ` computed by cancellation.
pub fn truncate_poisson(a: f64, epsilon: f64) -> Result<PoissonTruncation> {
    check_mean(a)?;
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(Error::Domain {
            what: "truncation epsilon",
            value: epsilon,
        });
    }

    let far_target = epsilon * 1e-6;
    let mut pmf = Vec::new();
    let mut k: u64 = 0;
    let far_bound = loop {
        pmf.push(pmf_unchecked(k, a));
        if (k + 2) as f64 > a {
            let next = pmf_unchecked(k + 1, a);
            let bound = next / (1.0 - a / (k + 2) as f64);
            if bound <= far_target {
                break bound;
            }
        }
        k += 1;
    };

    // tails[i] bounds the mass strictly above index i
    let mut tails = vec![0.0; pmf.len()];
    let mut acc = far_bound;
    for i in (0..pmf.len()).rev() {
        tails[i] = acc * (1.0 + TAIL_SLACK);
        acc += pmf[i];
    }

    let k_max = tails
        .iter()
        .position(|&t| t <= epsilon)
        .expect("far bound is below epsilon");
    pmf.truncate(k_max + 1);

    Ok(PoissonTruncation {
        a,
        k_max: k_max as u64,
        tail_bound: tails[k_max].max(f64::MIN_POSITIVE),
        weights: pmf,
    })
}
