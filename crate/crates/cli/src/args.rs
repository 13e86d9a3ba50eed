use std::path::PathBuf;

use cavity_bell::{InitialCase, RabiSubcase, SchemeKind};
use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "cavity-bell", version, about = "Bell sums for Rydberg atom pairs entangled through a cavity mode")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Maximum Bell sum for every case x scheme x subcase combination.
    Table1(Common),
    /// Tabulate sin(eta2 sqrt2) cos(eta2).
    Fig1(Common),
    /// Restricted Bloch-scheme maximum of case III as a function of eta2.
    Fig2(Fig2Args),
    /// Correlation at a single point, generic and closed form.
    Correlate(CorrelateArgs),
    /// Sweep driven by a key=value config file.
    Scan(ScanArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum Format {
    #[default]
    Csv,
    Tsv,
}

impl Format {
    pub fn delimiter(self) -> u8 {
        match self {
            Format::Csv => b',',
            Format::Tsv => b'\t',
        }
    }
}

#[derive(Debug, Clone, Args, Default)]
pub struct Output {
    /// Output file (standard output when omitted).
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Also draw the curve(s) as SVG.
    #[arg(long, value_name = "PATH")]
    pub plot: Option<PathBuf>,
}

#[derive(Debug, Clone, Args, Default)]
pub struct Common {
    #[command(flatten)]
    pub output: Output,
    /// Coarse grid step in eta (the two-angle scan uses ten times this).
    #[arg(long)]
    pub step: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub eta_min: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub eta_max: Option<f64>,
    /// Comma-separated photon numbers.
    #[arg(long, value_parser = parse_n_list)]
    pub n: Option<NList>,
    #[arg(long, value_parser = parse_case)]
    pub case: Option<InitialCase>,
    #[arg(long, value_parser = parse_scheme)]
    pub scheme: Option<SchemeKind>,
    #[arg(long, value_parser = parse_subcase)]
    pub subcase: Option<RabiSubcase>,
    /// Search all four measurement settings instead of the restricted Bloch family.
    #[arg(long)]
    pub unrestricted: bool,
    /// Evaluate grids on the calling thread only.
    #[arg(long)]
    pub sequential: bool,
}

#[derive(Debug, Clone, Args)]
pub struct Fig2Args {
    #[command(flatten)]
    pub common: Common,
    /// First atom's Rabi angle (default pi/(4 sqrt2)).
    #[arg(long, allow_hyphen_values = true)]
    pub eta1: Option<f64>,
}

#[derive(Debug, Clone, Args)]
pub struct CorrelateArgs {
    #[command(flatten)]
    pub common: Common,
    /// Rabi angle of both atoms, unless --eta1/--eta2 are given.
    #[arg(long, allow_hyphen_values = true)]
    pub eta: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub eta1: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub eta2: Option<f64>,
    /// Phase or Bloch angle of the first atom.
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub angle1: f64,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub angle2: f64,
}

#[derive(Debug, Clone, Args)]
pub struct ScanArgs {
    /// Config file of key = value lines.
    pub config: PathBuf,
    #[command(flatten)]
    pub output: Output,
    #[arg(long)]
    pub sequential: bool,
}

/// Non-empty list of photon numbers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NList(pub Vec<u32>);

pub fn parse_n_list(s: &str) -> Result<NList, String> {
    let ns = s
        .split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| t.parse::<u32>().map_err(|_| format!("invalid photon number '{t}'")))
        .collect::<Result<Vec<_>, _>>()?;
    if ns.is_empty() {
        return Err("photon number list is empty".into());
    }
    Ok(NList(ns))
}

fn parse_case(s: &str) -> Result<InitialCase, String> {
    s.parse()
}

fn parse_scheme(s: &str) -> Result<SchemeKind, String> {
    s.parse()
}

fn parse_subcase(s: &str) -> Result<RabiSubcase, String> {
    s.parse()
}
