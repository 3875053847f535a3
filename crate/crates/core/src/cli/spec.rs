//! Fully resolved run descriptions and the figure presets.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::awgn_capacity::{KnowledgeScenario, DEFAULT_PSD};
use crate::ber::SweepAxis;
use crate::channel::{ChannelKind, DEFAULT_A, DEFAULT_EB, DEFAULT_SIGMA_F2, DEFAULT_SIGMA_G2};
use crate::monte_carlo::DEFAULT_STREAMS;
use crate::numerics::DEFAULT_EPSILON;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    Ber,
    BerSweep,
    Capacity,
    CapacitySweep,
    AwgnCapacity,
    AwgnSweep,
    Simulate,
    VarianceHist,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Ber => "ber",
            Command::BerSweep => "ber-sweep",
            Command::Capacity => "capacity",
            Command::CapacitySweep => "capacity-sweep",
            Command::AwgnCapacity => "awgn-capacity",
            Command::AwgnSweep => "awgn-sweep",
            Command::Simulate => "simulate",
            Command::VarianceHist => "variance-hist",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Scale {
    Lin,
    Log,
}

/// Sweep grid: an explicit list, or `count` points from `start` to `stop`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Grid {
    List(Vec<f64>),
    Range {
        start: f64,
        stop: f64,
        count: usize,
        scale: Scale,
    },
}

impl Grid {
    pub fn log(start: f64, stop: f64, count: usize) -> Self {
        Grid::Range {
            start,
            stop,
            count,
            scale: Scale::Log,
        }
    }

    pub fn lin(start: f64, stop: f64, count: usize) -> Self {
        Grid::Range {
            start,
            stop,
            count,
            scale: Scale::Lin,
        }
    }

    pub fn values(&self) -> Vec<f64> {
        match self {
            Grid::List(v) => v.clone(),
            Grid::Range {
                start,
                stop,
                count,
                scale,
            } => {
                if *count == 1 {
                    return vec![*start];
                }
                let steps = (*count - 1) as f64;
                (0..*count)
                    .map(|i| {
                        if i + 1 == *count {
                            return *stop;
                        }
                        let t = i as f64 / steps;
                        match scale {
                            Scale::Lin => start + t * (stop - start),
                            Scale::Log => start * (stop / start).powf(t),
                        }
                    })
                    .collect()
            }
        }
    }
}

impl FromStr for Grid {
    type Err = String;

    /// `v1,v2,...` or `start:stop:count[:lin|log]`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let num = |t: &str| {
            t.trim()
                .parse::<f64>()
                .map_err(|_| format!("bad grid value `{t}`"))
        };
        if s.contains(':') {
            let parts: Vec<&str> = s.split(':').collect();
            if !(3..=4).contains(&parts.len()) {
                return Err(format!(
                    "bad grid `{s}` (expected start:stop:count[:lin|log])"
                ));
            }
            let count: usize = parts[2]
                .trim()
                .parse()
                .map_err(|_| format!("bad grid count `{}`", parts[2]))?;
            if count == 0 {
                return Err("grid count must be at least 1".into());
            }
            let scale = match parts.get(3).map(|p| p.trim()) {
                None | Some("lin") => Scale::Lin,
                Some("log") => Scale::Log,
                Some(other) => {
                    return Err(format!("bad grid scale `{other}` (expected lin or log)"))
                }
            };
            let (start, stop) = (num(parts[0])?, num(parts[1])?);
            if scale == Scale::Log && !(start > 0.0 && stop > 0.0) {
                return Err("log grid bounds must be positive".into());
            }
            Ok(Grid::Range {
                start,
                stop,
                count,
                scale,
            })
        } else {
            let values = s.split(',').map(num).collect::<Result<Vec<_>, _>>()?;
            Ok(Grid::List(values))
        }
    }
}

impl fmt::Display for Grid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Grid::List(v) => {
                let parts: Vec<String> = v.iter().map(f64::to_string).collect();
                f.write_str(&parts.join(","))
            }
            Grid::Range {
                start,
                stop,
                count,
                scale,
            } => {
                let scale = match scale {
                    Scale::Lin => "lin",
                    Scale::Log => "log",
                };
                write!(f, "{start}:{stop}:{count}:{scale}")
            }
        }
    }
}

/// Everything needed to reproduce one output file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunSpec {
    pub command: Command,
    /// Preset this spec came from, if any.
    pub figure: Option<String>,
    pub kind: ChannelKind,
    pub eb: f64,
    pub sigma_g2: f64,
    pub sigma_f2: f64,
    pub a: f64,
    pub psd: f64,
    pub epsilon: f64,
    pub scenarios: Vec<KnowledgeScenario>,
    pub seed: u64,
    pub n_symbols: u64,
    pub n_streams: u32,
    pub grid: Grid,
    pub axis: SweepAxis,
    /// Several `A` values for SNR sweeps and histograms; empty means `[a]`.
    pub series: Vec<f64>,
    pub bins: usize,
}

pub const DEFAULT_SEED: u64 = 42;
pub const DEFAULT_SYMBOLS: u64 = 1_000_000;
pub const DEFAULT_BINS: usize = 50;

impl RunSpec {
    pub fn new(command: Command) -> Self {
        RunSpec {
            command,
            figure: None,
            kind: ChannelKind::ChannelI,
            eb: DEFAULT_EB,
            sigma_g2: DEFAULT_SIGMA_G2,
            sigma_f2: DEFAULT_SIGMA_F2,
            a: DEFAULT_A,
            psd: DEFAULT_PSD,
            epsilon: DEFAULT_EPSILON,
            scenarios: KnowledgeScenario::ALL.to_vec(),
            seed: DEFAULT_SEED,
            n_symbols: DEFAULT_SYMBOLS,
            n_streams: DEFAULT_STREAMS,
            grid: Grid::log(1e-3, 1e3, 41),
            axis: SweepAxis::A,
            series: Vec::new(),
            bins: DEFAULT_BINS,
        }
    }

    /// `series`, or `[a]` when it is empty.
    pub fn a_values(&self) -> Vec<f64> {
        if self.series.is_empty() {
            vec![self.a]
        } else {
            self.series.clone()
        }
    }
}

pub const FIGURES: [&str; 9] = [
    "fig3", "fig4", "fig5", "fig6", "fig7", "fig8", "fig10", "fig11", "fig12",
];

/// Canonical run for each reproducible figure.
///
/// `A` grids are 41 log-spaced points over `[1e-3, 1e3]` (fig4 stops at 10);
/// fig5 sweeps 0..80 dB in 1 dB steps for `A ∈ {0.01, 0.1, 1}`; fig3 samples
/// 10⁶ impulse counts for `A ∈ {0.1, 1, 10, 100}`.
pub fn figure_preset(name: &str) -> Result<RunSpec, String> {
    use KnowledgeScenario as K;
    let mut spec = match name {
        "fig3" => {
            let mut s = RunSpec::new(Command::VarianceHist);
            s.series = vec![0.1, 1.0, 10.0, 100.0];
            s
        }
        "fig4" => {
            let mut s = RunSpec::new(Command::BerSweep);
            s.grid = Grid::log(1e-3, 1e1, 41);
            s
        }
        "fig5" => {
            let mut s = RunSpec::new(Command::BerSweep);
            s.axis = SweepAxis::SnrDb;
            s.grid = Grid::lin(0.0, 80.0, 81);
            s.series = vec![0.01, 0.1, 1.0];
            s
        }
        "fig6" => {
            let mut s = RunSpec::new(Command::BerSweep);
            s.kind = ChannelKind::ChannelII;
            s
        }
        "fig7" => RunSpec::new(Command::CapacitySweep),
        "fig8" => {
            let mut s = RunSpec::new(Command::CapacitySweep);
            s.kind = ChannelKind::ChannelII;
            s
        }
        "fig10" | "fig11" | "fig12" => {
            let mut s = RunSpec::new(Command::AwgnSweep);
            s.scenarios = match name {
                "fig10" => vec![K::PP, K::PM],
                "fig11" => vec![K::MP, K::MM],
                _ => vec![K::PM, K::MM],
            };
            s
        }
        other => {
            return Err(format!(
                "unknown figure `{other}` (valid: {})",
                FIGURES.join(", ")
            ))
        }
    };
    spec.figure = Some(name.to_string());
    Ok(spec)
}
