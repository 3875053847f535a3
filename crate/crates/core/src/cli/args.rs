//! Command-line flags, the key=value config file, and their resolution into
//! a [`RunSpec`].

use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};

use super::spec::{figure_preset, Command, Grid, RunSpec};
use crate::awgn_capacity::KnowledgeScenario;
use crate::ber::SweepAxis;
use crate::channel::ChannelKind;

#[derive(Debug, Parser)]
#[command(
    name = "poisson-bsc",
    version,
    about = "BER and capacity of channels with Poisson-distributed impulsive noise"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: CliCommand,
}

#[derive(Debug, Subcommand)]
pub enum CliCommand {
    /// Average BER and its limiting forms at one parameter set.
    Ber(Overrides),
    /// BER over a grid of A values or SNRs.
    BerSweep(Overrides),
    /// Informed and non-informed BSC capacity at one parameter set.
    Capacity(Overrides),
    /// BSC capacities over a grid of A values.
    CapacitySweep(Overrides),
    /// Gaussian-channel capacity for the selected knowledge scenarios.
    AwgnCapacity(Overrides),
    /// Gaussian-channel capacities over a grid of A values.
    AwgnSweep(Overrides),
    /// Monte Carlo BER estimate.
    Simulate(Overrides),
    /// Histogram of sampled conditional noise variances.
    VarianceHist(Overrides),
    /// Run a named figure preset (fig3..fig8, fig10..fig12).
    Figure {
        name: String,
        #[command(flatten)]
        overrides: Overrides,
    },
    /// Re-run the spec stored in a metadata sidecar.
    Replay {
        meta: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum AxisArg {
    A,
    Snr,
}

impl From<AxisArg> for SweepAxis {
    fn from(a: AxisArg) -> Self {
        match a {
            AxisArg::A => SweepAxis::A,
            AxisArg::Snr => SweepAxis::SnrDb,
        }
    }
}

/// Parameter overrides shared by every subcommand. Unset flags fall back to
/// the config file, then to the command's defaults.
#[derive(Debug, Clone, Default, Args)]
pub struct Overrides {
    /// Energy per bit.
    #[arg(long, allow_negative_numbers = true)]
    pub eb: Option<f64>,
    /// Background noise variance.
    #[arg(long = "sigma-g2", allow_negative_numbers = true)]
    pub sigma_g2: Option<f64>,
    /// Average impulsive noise variance.
    #[arg(long = "sigma-f2", allow_negative_numbers = true)]
    pub sigma_f2: Option<f64>,
    /// Poisson mean of the impulse count.
    #[arg(long, allow_negative_numbers = true)]
    pub a: Option<f64>,
    /// Input power spectral density P/2B.
    #[arg(long, allow_negative_numbers = true)]
    pub psd: Option<f64>,
    /// Poisson tail mass left out of every sum.
    #[arg(long, allow_negative_numbers = true)]
    pub epsilon: Option<f64>,
    /// Channel model: I or II.
    #[arg(long)]
    pub kind: Option<ChannelKind>,
    /// Knowledge scenario (++, +-, -+, --); repeatable. Write `--scenario=--`
    /// for the all-uninformed case.
    #[arg(long = "scenario", allow_hyphen_values = true)]
    pub scenarios: Vec<KnowledgeScenario>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long = "n-symbols")]
    pub n_symbols: Option<u64>,
    #[arg(long = "n-streams")]
    pub n_streams: Option<u32>,
    /// `v1,v2,...` or `start:stop:count[:lin|log]`.
    #[arg(long, allow_negative_numbers = true)]
    pub grid: Option<Grid>,
    /// Sweep axis for ber-sweep.
    #[arg(long, value_enum)]
    pub axis: Option<AxisArg>,
    /// Comma-separated A values for SNR sweeps and histograms.
    #[arg(long, allow_negative_numbers = true)]
    pub series: Option<Grid>,
    /// Histogram bins.
    #[arg(long)]
    pub bins: Option<usize>,
    /// key=value configuration file; flags take precedence.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Output CSV path; a `.meta.json` sidecar is written next to it.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

impl Overrides {
    /// Fields set here win over those set in `lower`.
    fn over(self, lower: Overrides) -> Overrides {
        Overrides {
            eb: self.eb.or(lower.eb),
            sigma_g2: self.sigma_g2.or(lower.sigma_g2),
            sigma_f2: self.sigma_f2.or(lower.sigma_f2),
            a: self.a.or(lower.a),
            psd: self.psd.or(lower.psd),
            epsilon: self.epsilon.or(lower.epsilon),
            kind: self.kind.or(lower.kind),
            scenarios: if self.scenarios.is_empty() {
                lower.scenarios
            } else {
                self.scenarios
            },
            seed: self.seed.or(lower.seed),
            n_symbols: self.n_symbols.or(lower.n_symbols),
            n_streams: self.n_streams.or(lower.n_streams),
            grid: self.grid.or(lower.grid),
            axis: self.axis.or(lower.axis),
            series: self.series.or(lower.series),
            bins: self.bins.or(lower.bins),
            config: self.config,
            out: self.out.or(lower.out),
        }
    }

    fn apply(&self, spec: &mut RunSpec) {
        macro_rules! set {
            ($($field:ident),*) => {
                $(if let Some(v) = self.$field.clone() { spec.$field = v.into(); })*
            };
        }
        set!(
            eb, sigma_g2, sigma_f2, a, psd, epsilon, kind, seed, n_symbols, n_streams, grid, axis,
            bins
        );
        if let Some(series) = &self.series {
            spec.series = series.values();
        }
        if !self.scenarios.is_empty() {
            spec.scenarios = self.scenarios.clone();
        }
    }
}

/// Parse a key=value configuration file. Keys are the long flag names
/// without dashes prefix (`sigma-g2`, `n-symbols`, ...); `#` starts a comment.
pub fn parse_config(text: &str) -> anyhow::Result<Overrides> {
    let mut o = Overrides::default();
    for (no, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| anyhow!("config line {}: expected key=value", no + 1))?;
        let (key, value) = (key.trim(), value.trim());
        let ctx = || format!("config line {}: invalid value for `{key}`", no + 1);
        fn p<T: std::str::FromStr>(v: &str) -> anyhow::Result<T>
        where
            T::Err: std::fmt::Display,
        {
            v.parse::<T>().map_err(|e| anyhow!("{e}"))
        }
        match key {
            "eb" => o.eb = Some(p(value).with_context(ctx)?),
            "sigma-g2" => o.sigma_g2 = Some(p(value).with_context(ctx)?),
            "sigma-f2" => o.sigma_f2 = Some(p(value).with_context(ctx)?),
            "a" => o.a = Some(p(value).with_context(ctx)?),
            "psd" => o.psd = Some(p(value).with_context(ctx)?),
            "epsilon" => o.epsilon = Some(p(value).with_context(ctx)?),
            "kind" => o.kind = Some(p(value).with_context(ctx)?),
            "scenario" => {
                for s in value.split(',') {
                    o.scenarios.push(p(s.trim()).with_context(ctx)?);
                }
            }
            "seed" => o.seed = Some(p(value).with_context(ctx)?),
            "n-symbols" => o.n_symbols = Some(p(value).with_context(ctx)?),
            "n-streams" => o.n_streams = Some(p(value).with_context(ctx)?),
            "grid" => o.grid = Some(p(value).with_context(ctx)?),
            "series" => o.series = Some(p(value).with_context(ctx)?),
            "bins" => o.bins = Some(p(value).with_context(ctx)?),
            "axis" => {
                o.axis = Some(match value {
                    "a" => AxisArg::A,
                    "snr" => AxisArg::Snr,
                    _ => bail!("{}: expected a or snr", ctx()),
                })
            }
            other => bail!("config line {}: unknown key `{other}`", no + 1),
        }
    }
    Ok(o)
}

fn load_config(path: &Path) -> anyhow::Result<Overrides> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("reading config file {}", path.display()))?;
    parse_config(&text)
}

/// What the binary should do after parsing.
#[derive(Debug, Clone, PartialEq)]
pub struct Invocation {
    pub spec: RunSpec,
    pub out: Option<PathBuf>,
}

/// Resolve parsed arguments: preset or command defaults, then the config
/// file, then explicit flags.
pub fn resolve(command: CliCommand) -> anyhow::Result<Invocation> {
    let (base, overrides) = match command {
        CliCommand::Ber(o) => (RunSpec::new(Command::Ber), o),
        CliCommand::BerSweep(o) => (RunSpec::new(Command::BerSweep), o),
        CliCommand::Capacity(o) => (RunSpec::new(Command::Capacity), o),
        CliCommand::CapacitySweep(o) => (RunSpec::new(Command::CapacitySweep), o),
        CliCommand::AwgnCapacity(o) => (RunSpec::new(Command::AwgnCapacity), o),
        CliCommand::AwgnSweep(o) => (RunSpec::new(Command::AwgnSweep), o),
        CliCommand::Simulate(o) => (RunSpec::new(Command::Simulate), o),
        CliCommand::VarianceHist(o) => (RunSpec::new(Command::VarianceHist), o),
        CliCommand::Figure { name, overrides } => {
            (figure_preset(&name).map_err(|e| anyhow!(e))?, overrides)
        }
        CliCommand::Replay { meta, out } => {
            let spec = super::output::read_sidecar(&meta)?;
            return Ok(Invocation { spec, out });
        }
    };
    let merged = match &overrides.config {
        Some(path) => overrides.clone().over(load_config(path)?),
        None => overrides,
    };
    let mut spec = base;
    // SNR sweeps default to 0..80 dB unless a grid was given
    if merged.axis == Some(AxisArg::Snr) && merged.grid.is_none() {
        spec.grid = Grid::lin(0.0, 80.0, 81);
    }
    merged.apply(&mut spec);
    Ok(Invocation {
        spec,
        out: merged.out,
    })
}

/// Parse an argument vector (including the program name) into an
/// [`Invocation`].
pub fn parse_invocation<I, T>(args: I) -> anyhow::Result<Invocation>
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = Cli::try_parse_from(args)?;
    resolve(cli.command)
}
