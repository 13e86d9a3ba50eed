use cavity_bell::optimize::FIG2_ETA1;
use cavity_bell::{
    bell_sum, correlation_closed_form, correlation_generic, maximize_chsh_unrestricted, optimize_case, optimize_over_n,
    scan_curve_fig1, scan_curve_fig2, smax_bloch_restricted, smax_phase_analytic, BellResult, ChshSettings,
    CorrelationCoefficients, EtaRange, Execution, InitialCase, OptimizeOptions, RabiSubcase, Scenario, SchemeKind,
};

use crate::args::{Cli, Command, Common, CorrelateArgs, Fig2Args, Format, Output, ScanArgs};
use crate::config::{Mode, RunConfig};
use crate::output::{round2, sig6, write_svg, Curve, Table};
use crate::CliError;

/// Largest allowed gap between a reported Bell sum and the generic engine
/// evaluated at the reported settings.
pub const SUM_CHECK_TOL: f64 = 1e-9;
/// Largest allowed gap between generic and closed-form correlations.
pub const CORRELATION_CHECK_TOL: f64 = 1e-10;

pub const TABLE1_HEADER: [&str; 14] = [
    "case",
    "scheme",
    "subcase",
    "n",
    "eta1",
    "eta2",
    "a1",
    "a1p",
    "a2",
    "a2p",
    "alpha",
    "beta",
    "s_display",
    "s_value",
];
pub const ROW_HEADER: [&str; 13] =
    ["case", "scheme", "subcase", "n", "eta1", "eta2", "a1", "a1p", "a2", "a2p", "alpha", "beta", "s"];
pub const CORRELATE_HEADER: [&str; 13] = [
    "case",
    "scheme",
    "n",
    "eta1",
    "eta2",
    "angle1",
    "angle2",
    "e_generic",
    "e_closed",
    "alpha",
    "beta",
    "abs_diff",
    "check",
];

/// `(eta2, value)` samples of a curve.
pub type Points = Vec<(f64, f64)>;

pub const FIG1_RANGE: (f64, f64) = (0.0, 25.0);
pub const FIG2_RANGE: (f64, f64) = (0.0, 18.8);
pub const DEFAULT_STEP: f64 = 1e-3;

pub fn run(cli: &Cli) -> Result<(), CliError> {
    match &cli.command {
        Command::Table1(c) => cmd_table1(c),
        Command::Fig1(c) => cmd_fig1(c),
        Command::Fig2(a) => cmd_fig2(a),
        Command::Correlate(a) => cmd_correlate(a),
        Command::Scan(a) => cmd_scan(a),
    }
}

/// Table output plus the consistency failures found while computing it.
#[derive(Debug)]
pub struct Report {
    pub table: Table,
    pub failures: Vec<String>,
}

impl Report {
    fn emit(self, out: &Output, default_format: Format) -> Result<(), CliError> {
        self.table.emit(out.out.as_deref(), out.format.unwrap_or(default_format))?;
        match self.failures.first() {
            None => Ok(()),
            Some(first) => Err(CliError::Consistency(format!("{} failure(s), first: {first}", self.failures.len()))),
        }
    }
}

fn execution(sequential: bool) -> Execution {
    if sequential {
        Execution::Sequential
    } else {
        Execution::Parallel
    }
}

fn usage<E: std::fmt::Display>(e: E) -> CliError {
    CliError::Usage(e.to_string())
}

fn range_of(c: &Common, default: (f64, f64)) -> Result<EtaRange, CliError> {
    EtaRange::new(c.eta_min.unwrap_or(default.0), c.eta_max.unwrap_or(default.1)).map_err(usage)
}

fn step_of(c: &Common) -> Result<f64, CliError> {
    let step = c.step.unwrap_or(DEFAULT_STEP);
    if step.is_finite() && step > 0.0 {
        Ok(step)
    } else {
        Err(CliError::Usage(format!("--step must be positive, got {step}")))
    }
}

fn no_plot(out: &Output, what: &str) -> Result<(), CliError> {
    match out.plot {
        Some(_) => Err(CliError::Usage(format!("--plot is not available for {what}"))),
        None => Ok(()),
    }
}

fn selected<T: Copy + PartialEq>(all: &[T], pick: Option<T>) -> Vec<T> {
    all.iter().copied().filter(|x| pick.is_none_or(|p| p == *x)).collect()
}

fn settings_cells(st: &ChshSettings) -> impl Iterator<Item = String> {
    st.as_array().into_iter().map(sig6)
}

fn sum_check(r: &BellResult) -> Option<String> {
    let s = bell_sum(&r.scenario(), r.scheme, &r.settings);
    ((s - r.s_max).abs() >= SUM_CHECK_TOL).then(|| {
        format!(
            "case {} {} {} n={} eta=({}, {}): reported S={} but settings give {s}",
            r.case, r.scheme, r.subcase, r.n, r.eta1, r.eta2, r.s_max
        )
    })
}

fn result_cells(r: &BellResult) -> Vec<String> {
    let mut row = vec![
        r.case.to_string(),
        r.scheme.to_string(),
        r.subcase.to_string(),
        r.n.to_string(),
        sig6(r.eta1),
        sig6(r.eta2),
    ];
    row.extend(settings_cells(&r.settings));
    row.push(sig6(r.coefficients.alpha));
    row.push(sig6(r.coefficients.beta));
    row
}

/// Best Bell sum per case x scheme x subcase, maximized over the `--n` list.
pub fn table1(c: &Common) -> Result<Report, CliError> {
    let step = step_of(c)?;
    let opts = OptimizeOptions {
        range: range_of(c, (0.0, 25.0))?,
        step,
        step_2d: 10.0 * step,
        unrestricted: c.unrestricted,
        execution: execution(c.sequential),
        ..OptimizeOptions::default()
    };
    let ns: Vec<u32> = c.n.as_ref().map_or_else(|| (0..=6).collect(), |l| l.0.clone());
    let mut table = Table::new(&TABLE1_HEADER);
    let mut failures = Vec::new();
    for case in selected(&InitialCase::ALL, c.case) {
        for scheme in selected(&SchemeKind::ALL, c.scheme) {
            for subcase in selected(&RabiSubcase::ALL, c.subcase) {
                let r = optimize_over_n(case, scheme, subcase, &ns, &opts)?.expect("photon number list is non-empty");
                failures.extend(sum_check(&r));
                let mut row = result_cells(&r);
                row.push(round2(r.s_max));
                row.push(r.s_max.to_string());
                table.push(row);
            }
        }
    }
    Ok(Report { table, failures })
}

pub fn cmd_table1(c: &Common) -> Result<(), CliError> {
    no_plot(&c.output, "table1")?;
    table1(c)?.emit(&c.output, Format::Csv)
}

pub fn fig1(c: &Common) -> Result<Points, CliError> {
    Ok(scan_curve_fig1(&range_of(c, FIG1_RANGE)?, step_of(c)?)?)
}

pub fn cmd_fig1(c: &Common) -> Result<(), CliError> {
    let curve = fig1(c)?;
    let mut table = Table::new(&["eta2", "value"]);
    for &(x, y) in &curve {
        table.push(vec![sig6(x), sig6(y)]);
    }
    if let Some(p) = &c.output.plot {
        write_svg(p, &[Curve { label: "sin(sqrt2 eta2) cos(eta2)".into(), points: &curve }], "eta2", "value")?;
    }
    Report { table, failures: Vec::new() }.emit(&c.output, Format::Csv)
}

fn single_n(c: &Common, default: u32) -> Result<u32, CliError> {
    match c.n.as_ref().map(|l| l.0.as_slice()) {
        None => Ok(default),
        Some([n]) => Ok(*n),
        Some(_) => Err(CliError::Usage("this subcommand takes a single photon number".into())),
    }
}

/// Restricted Bloch maximum of case III along eta2, each point re-checked
/// against the generic engine.
pub fn fig2(a: &Fig2Args) -> Result<(Points, Vec<String>), CliError> {
    let c = &a.common;
    let eta1 = a.eta1.unwrap_or(FIG2_ETA1);
    let n = single_n(c, 1)?;
    let exec = execution(c.sequential);
    let curve = scan_curve_fig2(eta1, n, &range_of(c, FIG2_RANGE)?, step_of(c)?, exec)?;
    let failures = exec
        .map(curve.len(), |i| {
            let (eta2, s) = curve[i];
            let sc = Scenario::new(InitialCase::III, n, eta1, eta2);
            let k = CorrelationCoefficients::of(&sc);
            let (_, _, st) = smax_bloch_restricted(k.alpha, k.beta);
            let g = bell_sum(&sc, SchemeKind::Bloch, &st);
            ((g - s).abs() >= SUM_CHECK_TOL).then(|| format!("eta2={eta2}: S={s} but settings give {g}"))
        })
        .into_iter()
        .flatten()
        .collect();
    Ok((curve, failures))
}

pub fn cmd_fig2(a: &Fig2Args) -> Result<(), CliError> {
    let (curve, failures) = fig2(a)?;
    let mut table = Table::new(&["eta2", "smax"]);
    for &(x, y) in &curve {
        table.push(vec![sig6(x), sig6(y)]);
    }
    if let Some(p) = &a.common.output.plot {
        let bound = bound_line(&curve, 2.0);
        write_svg(
            p,
            &[Curve { label: "S max".into(), points: &curve }, Curve { label: "S = 2".into(), points: &bound }],
            "eta2",
            "S",
        )?;
    }
    Report { table, failures }.emit(&a.common.output, Format::Csv)
}

fn bound_line(curve: &[(f64, f64)], y: f64) -> Vec<(f64, f64)> {
    match (curve.first(), curve.last()) {
        (Some(a), Some(b)) => vec![(a.0, y), (b.0, y)],
        _ => Vec::new(),
    }
}

pub fn correlate(a: &CorrelateArgs) -> Result<Report, CliError> {
    let c = &a.common;
    let case = c.case.ok_or_else(|| CliError::Usage("correlate needs --case".into()))?;
    let scheme = c.scheme.ok_or_else(|| CliError::Usage("correlate needs --scheme".into()))?;
    let (eta1, eta2) = match (a.eta, a.eta1, a.eta2) {
        (_, Some(e1), Some(e2)) => (e1, e2),
        (Some(e), None, None) => (e, e),
        (Some(e), e1, e2) => (e1.unwrap_or(e), e2.unwrap_or(e)),
        _ => return Err(CliError::Usage("correlate needs --eta or both --eta1 and --eta2".into())),
    };
    let ns: Vec<u32> = c.n.as_ref().map_or_else(|| vec![0], |l| l.0.clone());
    let m = scheme.scheme(a.angle1, a.angle2);
    let mut table = Table::new(&CORRELATE_HEADER);
    let mut failures = Vec::new();
    for n in ns {
        let sc = Scenario::new(case, n, eta1, eta2);
        let generic = correlation_generic(&sc, &m);
        let closed = correlation_closed_form(&sc, &m);
        let k = CorrelationCoefficients::of(&sc);
        let diff = (generic - closed).abs();
        let pass = diff < CORRELATION_CHECK_TOL;
        if !pass {
            failures.push(format!("n={n}: generic {generic} vs closed form {closed}"));
        }
        table.push(vec![
            case.to_string(),
            scheme.to_string(),
            n.to_string(),
            sig6(eta1),
            sig6(eta2),
            sig6(a.angle1),
            sig6(a.angle2),
            sig6(generic),
            sig6(closed),
            sig6(k.alpha),
            sig6(k.beta),
            sig6(diff),
            if pass { "PASS" } else { "FAIL" }.into(),
        ]);
    }
    Ok(Report { table, failures })
}

pub fn cmd_correlate(a: &CorrelateArgs) -> Result<(), CliError> {
    no_plot(&a.common.output, "correlate")?;
    correlate(a)?.emit(&a.common.output, Format::Csv)
}

/// Analytic maximum at fixed Rabi angles, as reported by sweeps.
fn point_result(
    case: InitialCase,
    scheme: SchemeKind,
    subcase: RabiSubcase,
    n: u32,
    eta1: f64,
    eta2: f64,
    unrestricted: bool,
) -> BellResult {
    let sc = Scenario::new(case, n, eta1, eta2);
    let coefficients = CorrelationCoefficients::of(&sc);
    let (mut s_max, mut settings) = match scheme {
        SchemeKind::Phase => smax_phase_analytic(coefficients.alpha),
        SchemeKind::Bloch => {
            let (s, _, st) = smax_bloch_restricted(coefficients.alpha, coefficients.beta);
            (s, st)
        }
    };
    if unrestricted {
        let (s, st) = maximize_chsh_unrestricted(&sc, scheme);
        if s > s_max {
            (s_max, settings) = (s, st);
        }
    }
    BellResult { case, scheme, subcase, n, eta1, eta2, settings, coefficients, s_max }
}

/// Rows for a parsed config, in selector order, plus one curve per swept
/// selector tuple.
pub fn scan(cfg: &RunConfig, exec: Execution) -> Result<(Report, Vec<(String, Points)>), CliError> {
    let mut table = Table::new(&ROW_HEADER);
    let mut failures = Vec::new();
    let mut curves = Vec::new();
    let grid = cfg.range.grid(cfg.step)?;
    let opts = OptimizeOptions {
        range: cfg.range,
        step: cfg.step,
        step_2d: cfg.step_2d,
        unrestricted: cfg.unrestricted,
        execution: exec,
        ..OptimizeOptions::default()
    };
    let mut push = |r: &BellResult, table: &mut Table| {
        failures.extend(sum_check(r));
        let mut row = result_cells(r);
        row.push(sig6(r.s_max));
        table.push(row);
    };
    for &case in &cfg.cases {
        for &scheme in &cfg.schemes {
            for &subcase in &cfg.subcases {
                for &n in &cfg.ns {
                    if cfg.mode == Mode::Optimize {
                        push(&optimize_case(case, scheme, subcase, n, &opts)?, &mut table);
                        continue;
                    }
                    let eta1s: Vec<Option<f64>> = match subcase {
                        RabiSubcase::Equal => vec![None],
                        RabiSubcase::Unequal => cfg.eta1.iter().copied().map(Some).collect(),
                    };
                    for eta1 in eta1s {
                        let rows = exec.map(grid.len(), |i| {
                            let eta2 = grid.point(i);
                            point_result(case, scheme, subcase, n, eta1.unwrap_or(eta2), eta2, cfg.unrestricted)
                        });
                        let mut label = format!("{case} {scheme} {subcase} n={n}");
                        if let Some(e) = eta1 {
                            label += &format!(" eta1={}", sig6(e));
                        }
                        curves.push((label, rows.iter().map(|r| (r.eta2, r.s_max)).collect()));
                        for r in &rows {
                            push(r, &mut table);
                        }
                    }
                }
            }
        }
    }
    Ok((Report { table, failures }, curves))
}

pub fn cmd_scan(a: &ScanArgs) -> Result<(), CliError> {
    let cfg = RunConfig::load(&a.config)?;
    let out = Output {
        out: a.output.out.clone().or_else(|| cfg.output.clone()),
        format: a.output.format.or(Some(cfg.format)),
        plot: a.output.plot.clone().or_else(|| cfg.plot.clone()),
    };
    if out.plot.is_some() && cfg.mode == Mode::Optimize {
        return Err(CliError::Usage("plots are only drawn for sweeps".into()));
    }
    let (report, curves) = scan(&cfg, execution(a.sequential))?;
    if let Some(p) = &out.plot {
        let curves: Vec<Curve> = curves.iter().map(|(l, pts)| Curve { label: l.clone(), points: pts }).collect();
        write_svg(p, &curves, "eta2", "S")?;
    }
    report.emit(&out, Format::Csv)
}
