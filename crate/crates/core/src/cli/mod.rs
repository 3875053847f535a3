//! Command-line front end: argument resolution, evaluation and CSV output.

pub mod args;
pub mod output;
pub mod spec;

use anyhow::Context;

use crate::awgn_capacity::{awgn_capacity, awgn_sweep, AwgnParams};
use crate::ber::{ber_analytic, ber_limit_large_a, ber_limit_small_a, ber_sweep, SweepAxis};
use crate::bsc_capacity::{capacity_point, capacity_sweep};
use crate::channel::ChannelParams;
use crate::monte_carlo::{empirical_variance_histogram, simulate_ber, SimConfig};
use output::{Cell, Table};
use spec::{Command, RunSpec};

fn channel_params(spec: &RunSpec, a: f64) -> crate::Result<ChannelParams> {
    ChannelParams::new(spec.eb, spec.sigma_g2, spec.sigma_f2, a)
}

fn status<E: std::fmt::Display>(e: E) -> Cell {
    Cell::Text(e.to_string())
}

/// Evaluate a resolved spec. Scalar commands fail on invalid parameters;
/// sweeps keep going and report per-row failures in a `status` column.
pub fn run(spec: &RunSpec) -> anyhow::Result<Table> {
    let what = spec.command.name();
    let eps = spec.epsilon;
    let kind = spec.kind;
    let table = match spec.command {
        Command::Ber => {
            let params = channel_params(spec, spec.a).context(what)?;
            let ber = ber_analytic(kind, &params, eps).context(what)?;
            let mut t = Table::new(vec!["a", "ber", "ber_limit_small_a", "ber_limit_large_a"]);
            t.push(vec![
                spec.a.into(),
                ber.value().into(),
                ber_limit_small_a(kind, &params).value().into(),
                ber_limit_large_a(kind, &params).value().into(),
            ]);
            t
        }
        Command::BerSweep => {
            let grid = spec.grid.values();
            match spec.axis {
                SweepAxis::A => {
                    let base = channel_params(spec, spec.a).context(what)?;
                    let mut t = Table::new(vec!["a", "ber", "status"]);
                    for (x, r) in grid
                        .iter()
                        .zip(ber_sweep(kind, &base, SweepAxis::A, &grid, eps))
                    {
                        t.push(match r {
                            Ok(p) => vec![p.x.into(), p.ber.value().into(), "ok".into()],
                            Err(e) => vec![(*x).into(), Cell::Empty, status(e)],
                        });
                    }
                    t
                }
                SweepAxis::SnrDb => {
                    let mut t = Table::new(vec!["a", "snr_db", "ber", "status"]);
                    for a in spec.a_values() {
                        let base = channel_params(spec, a).context(what)?;
                        let rows = ber_sweep(kind, &base, SweepAxis::SnrDb, &grid, eps);
                        for (x, r) in grid.iter().zip(rows) {
                            t.push(match r {
                                Ok(p) => {
                                    vec![a.into(), p.x.into(), p.ber.value().into(), "ok".into()]
                                }
                                Err(e) => vec![a.into(), (*x).into(), Cell::Empty, status(e)],
                            });
                        }
                    }
                    t
                }
            }
        }
        Command::Capacity => {
            let params = channel_params(spec, spec.a).context(what)?;
            let p = capacity_point(kind, &params, eps).context(what)?;
            let mut t = Table::new(vec!["a", "c_informed", "c_noninformed"]);
            t.push(vec![
                p.a.into(),
                p.c_informed.value().into(),
                p.c_noninformed.value().into(),
            ]);
            t
        }
        Command::CapacitySweep => {
            let base = channel_params(spec, spec.a).context(what)?;
            let grid = spec.grid.values();
            let mut t = Table::new(vec!["a", "c_informed", "c_noninformed", "status"]);
            for (x, r) in grid.iter().zip(capacity_sweep(kind, &base, &grid, eps)) {
                t.push(match r {
                    Ok(p) => vec![
                        p.a.into(),
                        p.c_informed.value().into(),
                        p.c_noninformed.value().into(),
                        "ok".into(),
                    ],
                    Err(e) => vec![(*x).into(), Cell::Empty, Cell::Empty, status(e)],
                });
            }
            t
        }
        Command::AwgnCapacity => {
            let params = AwgnParams::new(spec.psd, channel_params(spec, spec.a).context(what)?)
                .context(what)?;
            let mut t = Table::new(vec!["a", "scenario", "capacity_bits"]);
            for &s in &spec.scenarios {
                let c = awgn_capacity(s, &params, eps).context(what)?;
                t.push(vec![spec.a.into(), s.code().into(), c.value().into()]);
            }
            t
        }
        Command::AwgnSweep => {
            let base = AwgnParams::new(spec.psd, channel_params(spec, spec.a).context(what)?)
                .context(what)?;
            let grid = spec.grid.values();
            let mut header = vec!["a"];
            header.extend(spec.scenarios.iter().map(|s| s.column()));
            header.push("status");
            let mut t = Table::new(header);
            for (x, r) in grid
                .iter()
                .zip(awgn_sweep(&base, &grid, &spec.scenarios, eps))
            {
                let mut row = vec![Cell::from(*x)];
                match r {
                    Ok(r) => {
                        row.extend(r.capacities.iter().map(|(_, c)| Cell::from(c.value())));
                        row.push("ok".into());
                    }
                    Err(e) => {
                        row.extend(spec.scenarios.iter().map(|_| Cell::Empty));
                        row.push(status(e));
                    }
                }
                t.push(row);
            }
            t
        }
        Command::Simulate => {
            let params = channel_params(spec, spec.a).context(what)?;
            let mut cfg = SimConfig::new(kind, params, spec.n_symbols, spec.seed);
            cfg.n_streams = spec.n_streams;
            let est = simulate_ber(&cfg).context(what)?;
            let reference = ber_analytic(kind, &params, eps).context(what)?;
            let mut t = Table::new(vec![
                "kind",
                "a",
                "n_symbols",
                "seed",
                "n_streams",
                "errors",
                "p_hat",
                "ci_halfwidth_95",
                "ber_analytic",
            ]);
            t.push(vec![
                Cell::Text(kind.to_string()),
                spec.a.into(),
                est.trials.into(),
                est.seed.into(),
                u64::from(spec.n_streams).into(),
                est.errors.into(),
                est.p_hat.value().into(),
                est.ci_halfwidth_95.into(),
                reference.value().into(),
            ]);
            t
        }
        Command::VarianceHist => {
            let mut t = Table::new(vec!["a", "bin_lo", "bin_hi", "mass"]);
            for a in spec.a_values() {
                let params = channel_params(spec, a).context(what)?;
                let mut cfg = SimConfig::new(kind, params, spec.n_symbols, spec.seed);
                cfg.n_streams = spec.n_streams;
                let h = empirical_variance_histogram(&cfg, spec.bins).context(what)?;
                for (i, m) in h.masses.iter().enumerate() {
                    t.push(vec![
                        a.into(),
                        h.edges[i].into(),
                        h.edges[i + 1].into(),
                        (*m).into(),
                    ]);
                }
            }
            t
        }
    };
    Ok(table)
}
