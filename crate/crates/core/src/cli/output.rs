//! CSV rendering, the metadata sidecar and atomic file output.

use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::Context;
use serde::{Deserialize, Serialize};

use super::spec::RunSpec;
use crate::ber::SweepAxis;

pub const TOOL: &str = env!("CARGO_PKG_NAME");
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Int(u64),
    Text(String),
    Empty,
}

impl Cell {
    fn render(&self) -> String {
        match self {
            Cell::Num(x) => format_number(*x),
            Cell::Int(n) => n.to_string(),
            // keep the column count intact
            Cell::Text(s) => s.replace([',', '\n', '\r'], ";"),
            Cell::Empty => String::new(),
        }
    }
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Num(x)
    }
}

impl From<u64> for Cell {
    fn from(n: u64) -> Self {
        Cell::Int(n)
    }
}

impl From<&str> for Cell {
    fn from(s: &str) -> Self {
        Cell::Text(s.to_string())
    }
}

/// 16 significant digits in scientific notation.
pub fn format_number(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.15e}")
    } else {
        "NaN".to_string()
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Table {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(header: Vec<&'static str>) -> Self {
        Table {
            header,
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn column(&self, name: &str) -> Option<usize> {
        self.header.iter().position(|h| *h == name)
    }
}

/// Structured sidecar stored next to every CSV.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Metadata {
    pub tool: String,
    pub version: String,
    pub spec: RunSpec,
}

impl Metadata {
    pub fn for_spec(spec: &RunSpec) -> Self {
        Metadata {
            tool: TOOL.to_string(),
            version: VERSION.to_string(),
            spec: spec.clone(),
        }
    }
}

/// Sorted `key=value` pairs for the CSV comment block.
fn spec_pairs(spec: &RunSpec) -> Vec<(&'static str, String)> {
    let list = |v: &[f64]| {
        v.iter()
            .map(|x| format!("{x:?}"))
            .collect::<Vec<_>>()
            .join(";")
    };
    let scenarios: Vec<&str> = spec.scenarios.iter().map(|s| s.code()).collect();
    let axis = match spec.axis {
        SweepAxis::A => "a",
        SweepAxis::SnrDb => "snr",
    };
    let mut pairs = vec![
        ("a", format!("{:?}", spec.a)),
        ("axis", axis.to_string()),
        ("bins", spec.bins.to_string()),
        ("command", spec.command.name().to_string()),
        ("eb", format!("{:?}", spec.eb)),
        ("epsilon", format!("{:?}", spec.epsilon)),
        ("figure", spec.figure.clone().unwrap_or_default()),
        ("grid", spec.grid.to_string().replace(',', ";")),
        ("kind", spec.kind.to_string()),
        ("n_streams", spec.n_streams.to_string()),
        ("n_symbols", spec.n_symbols.to_string()),
        ("psd", format!("{:?}", spec.psd)),
        ("scenarios", scenarios.join(";")),
        ("seed", spec.seed.to_string()),
        ("series", list(&spec.series)),
        ("sigma_f2", format!("{:?}", spec.sigma_f2)),
        ("sigma_g2", format!("{:?}", spec.sigma_g2)),
    ];
    pairs.sort();
    pairs
}

/// CSV text: a `#` comment block with the resolved parameters, the header
/// row, then one line per data row.
pub fn render_csv(spec: &RunSpec, table: &Table) -> String {
    let mut out = String::new();
    out.push_str(&format!("# tool={TOOL} version={VERSION}\n"));
    for (k, v) in spec_pairs(spec) {
        out.push_str(&format!("# {k}={v}\n"));
    }
    out.push_str(&table.header.join(","));
    out.push('\n');
    for row in &table.rows {
        let cells: Vec<String> = row.iter().map(Cell::render).collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out
}

pub fn render_sidecar(spec: &RunSpec) -> String {
    let mut text = serde_json::to_string_pretty(&Metadata::for_spec(spec)).expect("serialises");
    text.push('\n');
    text
}

/// `out.csv` → `out.csv.meta.json`.
pub fn sidecar_path(out: &Path) -> PathBuf {
    let mut name = out.as_os_str().to_owned();
    name.push(".meta.json");
    PathBuf::from(name)
}

/// Write through a temporary file in the destination directory, then rename.
pub fn write_atomic(path: &Path, contents: &str) -> anyhow::Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)
        .with_context(|| format!("creating temporary file in {}", dir.display()))?;
    tmp.write_all(contents.as_bytes())?;
    tmp.flush()?;
    tmp.persist(path)
        .with_context(|| format!("writing {}", path.display()))?;
    Ok(())
}

pub fn read_sidecar(path: &Path) -> anyhow::Result<RunSpec> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("reading metadata {}", path.display()))?;
    let meta: Metadata = serde_json::from_str(&text)
        .with_context(|| format!("parsing metadata {}", path.display()))?;
    Ok(meta.spec)
}
