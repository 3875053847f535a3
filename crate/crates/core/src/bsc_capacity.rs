//! Capacity of the impulsive BSC with and without channel-state knowledge at
//! the receiver.
//!
//! A receiver that does not see `k` faces a plain BSC with crossover equal to
//! the average BER, so `C = 1 - H(BER)`. A receiver that sees `k` gets the
//! state-averaged capacity `1 - Σ_k P(k)·H(q(k))`. Concavity of `H` puts the
//! informed curve on or above the non-informed one.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::ber::{average_over_states, ber_analytic};
use crate::channel::{ChannelKind, ChannelParams};
use crate::error::{Error, Result};
use crate::numerics::{binary_entropy, Bits};

/// Slack allowed when post-checking `c_noninformed ≤ c_informed`.
pub const ORDERING_SLACK: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BscCapacityPoint {
    pub a: f64,
    pub c_informed: Bits,
    pub c_noninformed: Bits,
}

fn unit_capacity(value: f64) -> Bits {
    Bits::new(value.clamp(0.0, 1.0)).expect("finite")
}

/// `1 - H(BER)`.
pub fn capacity_noninformed(
    kind: ChannelKind,
    params: &ChannelParams,
    epsilon: f64,
) -> Result<Bits> {
    let ber = ber_analytic(kind, params, epsilon)?;
    Ok(unit_capacity(1.0 - binary_entropy(ber).value()))
}

/// `1 - Σ_k P(k)·H(q(k))`. The truncated tail costs at most `epsilon` bits.
pub fn capacity_informed(kind: ChannelKind, params: &ChannelParams, epsilon: f64) -> Result<Bits> {
    let noise = average_over_states(kind, params, epsilon, |q| binary_entropy(q).value())?;
    Ok(unit_capacity(1.0 - noise))
}

/// Both capacities at one parameter set, with the ordering post-check.
pub fn capacity_point(
    kind: ChannelKind,
    params: &ChannelParams,
    epsilon: f64,
) -> Result<BscCapacityPoint> {
    let c_informed = capacity_informed(kind, params, epsilon)?;
    let c_noninformed = capacity_noninformed(kind, params, epsilon)?;
    if c_noninformed.value() > c_informed.value() + ORDERING_SLACK {
        return Err(Error::Ordering {
            a: params.a(),
            detail: format!("non-informed {c_noninformed} exceeds informed {c_informed}"),
        });
    }
    Ok(BscCapacityPoint {
        a: params.a(),
        c_informed,
        c_noninformed,
    })
}

/// Both capacities along a grid of `A` values, in grid order.
pub fn capacity_sweep(
    kind: ChannelKind,
    base: &ChannelParams,
    grid: &[f64],
    epsilon: f64,
) -> Vec<Result<BscCapacityPoint>> {
    grid.par_iter()
        .map(|&a| capacity_point(kind, &base.with_a(a)?, epsilon))
        .collect()
}

// bracket growth factor for the forward scan
const SCAN_FACTOR: f64 = 1.25;
const SCAN_LIMIT: f64 = 1e6;
const BISECTION_RTOL: f64 = 1e-6;

/// Smallest `A ≥ start_a` at which the informed capacity falls to `target`.
///
/// The informed curve is scanned forward geometrically from `start_a`; it
/// must decrease strictly between scan points until the target is crossed,
/// otherwise the search reports [`Error::NotMonotone`]. A curve that already
/// equals the target at `start_a` (within 1e-12) returns `start_a`. A curve
/// that starts below the target, or turns upward before reaching it, has no
/// solution.
pub fn informed_a_for_capacity(
    kind: ChannelKind,
    base: &ChannelParams,
    target: f64,
    start_a: f64,
    epsilon: f64,
) -> Result<f64> {
    let informed =
        |a: f64| -> Result<f64> { Ok(capacity_informed(kind, &base.with_a(a)?, epsilon)?.value()) };

    let c_start = informed(start_a)?;
    if (c_start - target).abs() <= ORDERING_SLACK {
        return Ok(start_a);
    }
    if c_start < target {
        return Err(Error::NoSolution { target });
    }

    let (mut lo, mut c_lo) = (start_a, c_start);
    let (mut hi, mut c_hi) = loop {
        let next = lo * SCAN_FACTOR;
        if next > SCAN_LIMIT {
            return Err(Error::NoSolution { target });
        }
        let c_next = informed(next)?;
        if c_next <= target {
            if c_next >= c_lo {
                return Err(Error::NotMonotone { a: next });
            }
            break (next, c_next);
        }
        if c_next >= c_lo {
            // curve turned upward before reaching the target
            return Err(Error::NoSolution { target });
        }
        lo = next;
        c_lo = c_next;
    };

    while (hi - lo) / lo > BISECTION_RTOL {
        let mid = 0.5 * (lo + hi);
        let c_mid = informed(mid)?;
        if !(c_hi <= c_mid && c_mid <= c_lo) {
            return Err(Error::NotMonotone { a: mid });
        }
        if c_mid > target {
            lo = mid;
            c_lo = c_mid;
        } else {
            hi = mid;
            c_hi = c_mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// The `A` at which an informed receiver has the same capacity a
/// non-informed receiver has at `a_noninformed`.
pub fn equal_performance_shift(
    kind: ChannelKind,
    base: &ChannelParams,
    a_noninformed: f64,
    epsilon: f64,
) -> Result<f64> {
    let target = capacity_noninformed(kind, &base.with_a(a_noninformed)?, epsilon)?.value();
    informed_a_for_capacity(kind, base, target, a_noninformed, epsilon)
}
