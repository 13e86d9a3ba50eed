//! `key = value` run configuration for the `scan` subcommand.
//!
//! ```text
//! # case III, restricted Bloch maximum along eta2
//! case = III
//! scheme = bloch
//! subcase = unequal
//! n = 1
//! eta1 = 0.5553603672697958
//! eta_max = 18.8
//! ```

use std::path::{Path, PathBuf};
use std::str::FromStr;

use cavity_bell::{EtaRange, InitialCase, RabiSubcase, SchemeKind};

use crate::args::{parse_n_list, Format};
use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    /// Bell sum at every grid point, settings optimized analytically.
    Sweep,
    /// Optimize the Rabi angles once per selector tuple.
    Optimize,
}

impl FromStr for Mode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "sweep" => Ok(Mode::Sweep),
            "optimize" => Ok(Mode::Optimize),
            other => Err(format!("unknown mode '{other}' (expected sweep or optimize)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub cases: Vec<InitialCase>,
    pub schemes: Vec<SchemeKind>,
    pub subcases: Vec<RabiSubcase>,
    pub ns: Vec<u32>,
    pub range: EtaRange,
    pub step: f64,
    pub step_2d: f64,
    /// First-atom angles swept against eta2 in unequal sweeps.
    pub eta1: Vec<f64>,
    pub mode: Mode,
    pub unrestricted: bool,
    pub output: Option<PathBuf>,
    pub format: Format,
    pub plot: Option<PathBuf>,
}

const KEYS: [&str; 13] = [
    "case",
    "scheme",
    "subcase",
    "n",
    "eta_min",
    "eta_max",
    "step",
    "step_2d",
    "eta1",
    "mode",
    "unrestricted",
    "output",
    "format",
];
const PLOT_KEY: &str = "plot";

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Config {
            path: path.display().to_string(),
            line: 0,
            message: e.to_string(),
        })?;
        Self::parse(&text).map_err(|(line, message)| CliError::Config {
            path: path.display().to_string(),
            line,
            message,
        })
    }

    /// Parses config text; errors carry a 1-based line number (0 for
    /// problems not tied to one line).
    pub fn parse(text: &str) -> Result<Self, (usize, String)> {
        let mut seen: Vec<(&str, usize)> = Vec::new();
        let mut cfg = RunConfig {
            cases: InitialCase::ALL.to_vec(),
            schemes: SchemeKind::ALL.to_vec(),
            subcases: RabiSubcase::ALL.to_vec(),
            ns: Vec::new(),
            range: EtaRange::default(),
            step: 1e-3,
            step_2d: 1e-2,
            eta1: Vec::new(),
            mode: Mode::Sweep,
            unrestricted: false,
            output: None,
            format: Format::Csv,
            plot: None,
        };
        let mut n_line = None;
        let mut range_line = 0;

        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let content = raw.split('#').next().unwrap().trim();
            if content.is_empty() {
                continue;
            }
            let (key, value) =
                content.split_once('=').ok_or((line, format!("expected key = value, got '{content}'")))?;
            let (key, value) = (key.trim(), value.trim());
            let key = KEYS
                .iter()
                .chain(std::iter::once(&PLOT_KEY))
                .find(|k| **k == key)
                .ok_or((line, format!("unknown key '{key}'")))?;
            if let Some((_, first)) = seen.iter().find(|(k, _)| k == key) {
                return Err((line, format!("duplicate key '{key}' (first set on line {first})")));
            }
            seen.push((key, line));
            let err = |m: String| (line, format!("{key}: {m}"));
            match *key {
                "case" => cfg.cases = parse_list(value).map_err(err)?,
                "scheme" => cfg.schemes = parse_list(value).map_err(err)?,
                "subcase" => cfg.subcases = parse_list(value).map_err(err)?,
                "n" => {
                    cfg.ns = parse_n_list(value).map_err(err)?.0;
                    n_line = Some(line);
                }
                "eta_min" => {
                    cfg.range.min = parse_f64(value).map_err(err)?;
                    range_line = line;
                }
                "eta_max" => {
                    cfg.range.max = parse_f64(value).map_err(err)?;
                    range_line = line;
                }
                "step" => cfg.step = parse_step(value).map_err(err)?,
                "step_2d" => cfg.step_2d = parse_step(value).map_err(err)?,
                "eta1" => cfg.eta1 = parse_list::<F64>(value).map_err(err)?.into_iter().map(|v| v.0).collect(),
                "mode" => cfg.mode = value.parse().map_err(err)?,
                "unrestricted" => {
                    cfg.unrestricted = match value {
                        "true" | "yes" | "1" => true,
                        "false" | "no" | "0" => false,
                        other => return Err(err(format!("expected true or false, got '{other}'"))),
                    }
                }
                "output" => cfg.output = Some(non_empty(value).map_err(err)?.into()),
                "format" => {
                    cfg.format = match value.to_ascii_lowercase().as_str() {
                        "csv" => Format::Csv,
                        "tsv" => Format::Tsv,
                        other => return Err(err(format!("expected csv or tsv, got '{other}'"))),
                    }
                }
                "plot" => cfg.plot = Some(non_empty(value).map_err(err)?.into()),
                _ => unreachable!(),
            }
        }

        if n_line.is_none() {
            return Err((0, "missing required key 'n'".into()));
        }
        cfg.range.validate().map_err(|e| (range_line, e.to_string()))?;
        sort_dedup(&mut cfg.cases);
        sort_dedup(&mut cfg.schemes);
        sort_dedup(&mut cfg.subcases);
        sort_dedup(&mut cfg.ns);
        cfg.eta1.sort_by(f64::total_cmp);
        cfg.eta1.dedup();
        if cfg.mode == Mode::Sweep && cfg.subcases.contains(&RabiSubcase::Unequal) && cfg.eta1.is_empty() {
            return Err((0, "sweeping the unequal subcase needs 'eta1'".into()));
        }
        Ok(cfg)
    }
}

struct F64(f64);

impl FromStr for F64 {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_f64(s).map(F64)
    }
}

fn parse_f64(s: &str) -> Result<f64, String> {
    match s.parse::<f64>() {
        Ok(v) if v.is_finite() => Ok(v),
        _ => Err(format!("invalid number '{s}'")),
    }
}

fn parse_step(s: &str) -> Result<f64, String> {
    let v = parse_f64(s)?;
    if v > 0.0 {
        Ok(v)
    } else {
        Err(format!("step must be positive, got {s}"))
    }
}

fn parse_list<T: FromStr<Err = String>>(s: &str) -> Result<Vec<T>, String> {
    let items =
        s.split(',').map(str::trim).filter(|t| !t.is_empty()).map(T::from_str).collect::<Result<Vec<_>, _>>()?;
    if items.is_empty() {
        return Err("empty list".into());
    }
    Ok(items)
}

fn non_empty(s: &str) -> Result<&str, String> {
    if s.is_empty() {
        Err("empty path".into())
    } else {
        Ok(s)
    }
}

fn sort_dedup<T: Ord>(v: &mut Vec<T>) {
    v.sort_unstable();
    v.dedup();
}
