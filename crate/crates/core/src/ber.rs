//! Average bit-error rate of the impulsive channels, its limiting forms,
//! and BER sweeps over `A` or over SNR.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::channel::{flip_probability, transition_probability, ChannelKind, ChannelParams};
use crate::error::{Error, Result};
use crate::numerics::{truncate_poisson, Probability};

/// One point of a BER curve. `x` is either `A` or the SNR in dB, depending on
/// the sweep axis.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BerCurvePoint {
    pub x: f64,
    pub ber: Probability,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepAxis {
    /// Poisson mean `A`.
    A,
    /// `10·log10(E_b/σ_g²)`, varied through `σ_g²`.
    SnrDb,
}

/// `Σ_k P(k)·f(q(k))` over the certified truncation. With `σ_f² = 0` every
/// state is identical and the sum collapses to `f(q(0))`.
pub(crate) fn average_over_states<F>(
    kind: ChannelKind,
    params: &ChannelParams,
    epsilon: f64,
    f: F,
) -> Result<f64>
where
    F: Fn(Probability) -> f64,
{
    if params.sigma_f2() == 0.0 {
        return Ok(f(transition_probability(kind, params, 0)));
    }
    let window = truncate_poisson(params.a(), epsilon)?;
    Ok(window.expect(|k| f(transition_probability(kind, params, k))))
}

/// Average BER `Σ_k P(k)·q(k)`. The neglected tail contributes at most
/// `epsilon / 2`.
pub fn ber_analytic(
    kind: ChannelKind,
    params: &ChannelParams,
    epsilon: f64,
) -> Result<Probability> {
    let ber = average_over_states(kind, params, epsilon, Probability::value)?;
    Probability::new(ber)
}

/// Large-`A` limit: `Q(√(E_b/(2(σ_g²+σ_f²))))` for Channel I, `½` for
/// Channel II.
pub fn ber_limit_large_a(kind: ChannelKind, params: &ChannelParams) -> Probability {
    match kind {
        ChannelKind::ChannelI => flip_probability(params.eb(), params.average_variance()),
        ChannelKind::ChannelII => Probability::HALF,
    }
}

/// Small-`A` closed forms, evaluated as written:
///
/// * Channel I: `e^{-A}·Q(√(E_b/2σ_g²)) + A/2`
/// * Channel II: `(1-A)·Q(√(E_b/2σ_g²)) + A·Q(√(E_b/(2(σ_g²+σ_f²))))`
///
/// Only meaningful for `A ≪ 1`; the result is clamped into `[0, 1]`.
pub fn ber_limit_small_a(kind: ChannelKind, params: &ChannelParams) -> Probability {
    let a = params.a();
    let background = flip_probability(params.eb(), params.sigma_g2()).value();
    let value = match kind {
        ChannelKind::ChannelI => (-a).exp() * background + a / 2.0,
        ChannelKind::ChannelII => {
            let hit = flip_probability(params.eb(), params.average_variance()).value();
            (1.0 - a) * background + a * hit
        }
    };
    Probability::new(value.clamp(0.0, 1.0)).expect("clamped")
}

/// Parameters for one grid value along `axis`. For the SNR axis,
/// `σ_g² = E_b / 10^(dB/10)`.
pub(crate) fn params_on_axis(
    base: &ChannelParams,
    axis: SweepAxis,
    x: f64,
) -> Result<ChannelParams> {
    match axis {
        SweepAxis::A => base.with_a(x),
        SweepAxis::SnrDb => {
            if !x.is_finite() {
                return Err(Error::param("snr_db", x, "must be finite"));
            }
            base.with_sigma_g2(base.eb() / 10f64.powf(x / 10.0))
        }
    }
}

/// BER at every grid value. Invalid grid values produce an error entry in
/// place; output order always follows the grid.
pub fn ber_sweep(
    kind: ChannelKind,
    base: &ChannelParams,
    axis: SweepAxis,
    grid: &[f64],
    epsilon: f64,
) -> Vec<Result<BerCurvePoint>> {
    grid.par_iter()
        .map(|&x| {
            let params = params_on_axis(base, axis, x)?;
            let ber = ber_analytic(kind, &params, epsilon)?;
            Ok(BerCurvePoint { x, ber })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::noise_variance;
    use crate::numerics::{q_function, DEFAULT_EPSILON};

    const EPS: f64 = DEFAULT_EPSILON;

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    // 40-digit references computed independently by direct summation
    const BER_I: [(f64, f64); 5] = [
        (0.001, 4.715_823_182_224_547_8e-4),
        (0.01, 4.096_088_492_946_058_7e-3),
        (1.0, 2.380_308_901_764_888_6e-2),
        (10.0, 1.445_379_634_170_030_5e-2),
        (1000.0, 1.272_854_677_416_770_1e-2),
    ];
    const BER_II: [(f64, f64); 3] = [
        (0.01, 1.286_745_696_773_040_1e-4),
        (1.0, 2.380_308_901_764_888_6e-2),
        (100.0, 4.112_070_028_342_120_1e-1),
    ];

    // references are full infinite sums; the window drops at most EPS/2
    fn close(got: f64, want: f64) -> bool {
        (got - want).abs() <= 0.5 * EPS + 1e-12 * want
    }

    #[test]
    fn matches_reference_values() {
        for (a, want) in BER_I {
            let p = ChannelParams::with_defaults_at(a).unwrap();
            let got = ber_analytic(ChannelKind::ChannelI, &p, EPS)
                .unwrap()
                .value();
            assert!(close(got, want), "I a={a}: {got} vs {want}");
        }
        for (a, want) in BER_II {
            let p = ChannelParams::with_defaults_at(a).unwrap();
            let got = ber_analytic(ChannelKind::ChannelII, &p, EPS)
                .unwrap()
                .value();
            assert!(close(got, want), "II a={a}: {got} vs {want}");
        }
    }

    #[test]
    fn degenerate_mixture_is_fixed_bsc() {
        let p = ChannelParams::new(1.0, 0.3, 0.0, 0.7).unwrap();
        let q0 = q_function((1.0f64 / 0.6).sqrt()).unwrap();
        for kind in ChannelKind::ALL {
            assert_eq!(ber_analytic(kind, &p, EPS).unwrap(), q0);
            assert_eq!(ber_limit_large_a(ChannelKind::ChannelI, &p), q0);
        }
    }

    #[test]
    fn large_a_limits() {
        let p = ChannelParams::default();
        let lim = ber_limit_large_a(ChannelKind::ChannelI, &p).value();
        assert!((lim - 0.012_710_290_086_115_778).abs() < 1e-15);
        assert_eq!(ber_limit_large_a(ChannelKind::ChannelII, &p).value(), 0.5);

        let p = ChannelParams::with_defaults_at(1000.0).unwrap();
        let ber = ber_analytic(ChannelKind::ChannelI, &p, EPS)
            .unwrap()
            .value();
        assert!(rel(ber, lim) < 0.01);

        // Channel II creeps toward ½ only slowly at these constants
        let mut last = 0.0;
        for a in [1.0, 10.0, 100.0, 1e4, 1e5] {
            let p = ChannelParams::with_defaults_at(a).unwrap();
            let ber = ber_analytic(ChannelKind::ChannelII, &p, 1e-9)
                .unwrap()
                .value();
            assert!(ber > last && ber < 0.5);
            last = ber;
        }
        assert!(last > 0.49);
    }

    #[test]
    fn small_a_limits() {
        let p = ChannelParams::with_defaults_at(0.01).unwrap();
        let l1 = ber_limit_small_a(ChannelKind::ChannelI, &p).value();
        assert!((l1 - 0.005).abs() < 1e-15);
        let l2 = ber_limit_small_a(ChannelKind::ChannelII, &p).value();
        assert!(rel(l2, 0.01 * 0.012_710_290_086_115_778) < 1e-3);

        let tiny = ChannelParams::with_defaults_at(1e-12)
            .unwrap()
            .with_sigma_g2(0.01)
            .unwrap();
        let background = q_function((7.28e-3f64 / 0.02).sqrt()).unwrap().value();
        for kind in ChannelKind::ALL {
            let l = ber_limit_small_a(kind, &tiny).value();
            assert!(rel(l, background) < 1e-9);
        }
    }

    #[test]
    fn small_a_limit_tracks_exact_sum() {
        // Channel II is within 5% up to A = 0.01
        for a in [1e-4, 1e-3, 1e-2] {
            let p = ChannelParams::with_defaults_at(a).unwrap();
            let exact = ber_analytic(ChannelKind::ChannelII, &p, EPS)
                .unwrap()
                .value();
            let lim = ber_limit_small_a(ChannelKind::ChannelII, &p).value();
            assert!(rel(lim, exact) <= 0.05, "a={a}");
        }
        // Channel I's A/2 term assumes q(1) ≈ ½, which at these constants
        // only holds once σ_f²/A dwarfs E_b, i.e. A ≲ 1e-4
        for a in [1e-6, 1e-5, 1e-4] {
            let p = ChannelParams::with_defaults_at(a).unwrap();
            let exact = ber_analytic(ChannelKind::ChannelI, &p, EPS)
                .unwrap()
                .value();
            let lim = ber_limit_small_a(ChannelKind::ChannelI, &p).value();
            assert!(rel(lim, exact) <= 0.05, "a={a}");
        }
    }

    #[test]
    fn channel_i_bounded_between_q0_and_half() {
        for a in [1e-3, 0.03, 0.3, 3.0, 30.0, 300.0] {
            let p = ChannelParams::with_defaults_at(a)
                .unwrap()
                .with_sigma_g2(1e-3)
                .unwrap();
            let ber = ber_analytic(ChannelKind::ChannelI, &p, EPS).unwrap();
            assert!(ber >= transition_probability(ChannelKind::ChannelI, &p, 0));
            assert!(ber.value() <= 0.5);
        }
    }

    #[test]
    fn jensen_direction_above_unit_mean() {
        let p = ChannelParams::default();
        let at_mean = flip_probability(p.eb(), p.average_variance());
        for a in [1.0, 3.0, 10.0] {
            let p = p.with_a(a).unwrap();
            let ber = ber_analytic(ChannelKind::ChannelI, &p, EPS).unwrap();
            assert!(ber >= at_mean, "a={a}");
        }
    }

    #[test]
    fn halving_epsilon_moves_less_than_tail_bound() {
        for kind in ChannelKind::ALL {
            for a in [0.01, 1.0, 50.0] {
                let p = ChannelParams::with_defaults_at(a).unwrap();
                for eps in [1e-4, 1e-8] {
                    let coarse = ber_analytic(kind, &p, eps).unwrap().value();
                    let fine = ber_analytic(kind, &p, eps / 2.0).unwrap().value();
                    let bound = truncate_poisson(a, eps).unwrap().tail_bound();
                    assert!((coarse - fine).abs() <= bound * 0.5 + 1e-16);
                }
            }
        }
    }

    #[test]
    fn sweep_over_a_rises_to_plateau() {
        let grid: Vec<f64> = (0..=16)
            .map(|i| 10f64.powf(-3.0 + 0.25 * i as f64))
            .collect();
        let pts = ber_sweep(
            ChannelKind::ChannelI,
            &ChannelParams::default(),
            SweepAxis::A,
            &grid,
            EPS,
        );
        let bers: Vec<f64> = pts
            .iter()
            .map(|p| p.as_ref().unwrap().ber.value())
            .collect();
        // rises monotonically through the small-A regime
        let peak = bers
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.total_cmp(b.1))
            .unwrap()
            .0;
        assert!(bers[..=peak].windows(2).all(|w| w[0] < w[1]));
        let plateau = ber_limit_large_a(ChannelKind::ChannelI, &ChannelParams::default()).value();
        assert!(rel(*bers.last().unwrap(), plateau) < 0.15);
        for (pt, x) in pts.iter().zip(&grid) {
            assert_eq!(pt.as_ref().unwrap().x, *x);
        }
    }

    #[test]
    fn snr_sweep_reaches_error_floor() {
        let grid: Vec<f64> = (0..=80).map(f64::from).collect();
        for a in [0.01, 0.1, 1.0] {
            let base = ChannelParams::with_defaults_at(a).unwrap();
            let pts = ber_sweep(ChannelKind::ChannelI, &base, SweepAxis::SnrDb, &grid, EPS);
            let bers: Vec<f64> = pts
                .iter()
                .map(|p| p.as_ref().unwrap().ber.value())
                .collect();
            assert!(bers.windows(2).all(|w| w[1] <= w[0]));
            // floor without background noise: Σ_{k≥1} P(k)·Q(√(E_b/(2kσ_f²/A)))
            let window = truncate_poisson(a, EPS).unwrap();
            let floor: f64 = window
                .terms()
                .skip(1)
                .map(|(k, w)| {
                    let var = k as f64 * base.sigma_f2() / a;
                    w * q_function((base.eb() / (2.0 * var)).sqrt())
                        .unwrap()
                        .value()
                })
                .sum();
            let high = *bers.last().unwrap();
            assert!(rel(high, floor) < 1e-5, "a={a}: {high} vs floor {floor}");
        }
    }

    #[test]
    fn snr_axis_sets_background_variance() {
        let base = ChannelParams::default();
        let p = params_on_axis(&base, SweepAxis::SnrDb, 40.0).unwrap();
        assert!(rel(p.sigma_g2(), 7.28e-7) < 1e-12);
        assert!((p.snr_db() - 40.0).abs() < 1e-12);
        assert_eq!(noise_variance(ChannelKind::ChannelI, &p, 0), p.sigma_g2());
    }

    #[test]
    fn sweep_reports_bad_points_and_continues() {
        let grid = [0.1, -1.0, 0.0, 2.0];
        let pts = ber_sweep(
            ChannelKind::ChannelII,
            &ChannelParams::default(),
            SweepAxis::A,
            &grid,
            EPS,
        );
        assert!(pts[0].is_ok() && pts[3].is_ok());
        assert!(pts[1].is_err() && pts[2].is_err());
        let pts = ber_sweep(
            ChannelKind::ChannelI,
            &ChannelParams::default(),
            SweepAxis::SnrDb,
            &[f64::NAN, 10.0],
            EPS,
        );
        assert!(pts[0].is_err() && pts[1].is_ok());
    }

    #[test]
    fn single_point_sweep_equals_scalar_call() {
        let base = ChannelParams::default();
        let pts = ber_sweep(ChannelKind::ChannelI, &base, SweepAxis::A, &[0.37], EPS);
        let scalar = ber_analytic(ChannelKind::ChannelI, &base.with_a(0.37).unwrap(), EPS).unwrap();
        assert_eq!(pts[0].as_ref().unwrap().ber, scalar);
    }
}
