//! Maximizing the Bell sum over Rabi angles.
//!
//! Every search is a uniform grid followed by golden-section refinement
//! around the best grid point. Grid ties (within
//! [`TIE_TOLERANCE`](crate::exec::TIE_TOLERANCE)) resolve to the smallest
//! angle, so results do not depend on the execution mode.

use std::f64::consts::SQRT_2;
use std::fmt;
use std::str::FromStr;

use crate::bell::{maximize_chsh_unrestricted, smax_bloch_restricted, smax_phase_analytic, ChshSettings, SchemeKind};
use crate::cavity::{first_atom_factors, second_atom_factors, InitialCase, Scenario};
use crate::correlators::{CoefficientKernel, CorrelationCoefficients};
use crate::exec::Execution;
use crate::{Error, Result};

/// Whether both atoms see the same Rabi angle.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum RabiSubcase {
    /// (i): `eta1 = eta2`.
    Equal,
    /// (ii): `eta1`, `eta2` independent.
    Unequal,
}

impl RabiSubcase {
    pub const ALL: [RabiSubcase; 2] = [RabiSubcase::Equal, RabiSubcase::Unequal];

    pub fn numeral(self) -> &'static str {
        match self {
            RabiSubcase::Equal => "i",
            RabiSubcase::Unequal => "ii",
        }
    }
}

impl fmt::Display for RabiSubcase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RabiSubcase::Equal => "equal",
            RabiSubcase::Unequal => "unequal",
        })
    }
}

impl FromStr for RabiSubcase {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "equal" | "i" => Ok(RabiSubcase::Equal),
            "unequal" | "ii" => Ok(RabiSubcase::Unequal),
            other => Err(format!("unknown subcase '{other}' (expected equal or unequal)")),
        }
    }
}

/// Closed interval of Rabi angles.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EtaRange {
    pub min: f64,
    pub max: f64,
}

impl Default for EtaRange {
    fn default() -> Self {
        Self { min: 0.0, max: 25.0 }
    }
}

impl EtaRange {
    pub fn new(min: f64, max: f64) -> Result<Self> {
        let r = Self { min, max };
        r.validate()?;
        Ok(r)
    }

    pub fn validate(&self) -> Result<()> {
        if self.min.is_finite() && self.max.is_finite() && self.min < self.max {
            Ok(())
        } else {
            Err(Error::EmptyRange { min: self.min, max: self.max })
        }
    }

    /// Uniform grid from `min` with spacing `step`, including `max` when it
    /// falls on the grid.
    pub fn grid(&self, step: f64) -> Result<Grid> {
        self.validate()?;
        if !(step.is_finite() && step > 0.0) {
            return Err(Error::InvalidStep(step));
        }
        let count = ((self.max - self.min) / step + 1e-9).floor() as usize + 1;
        Ok(Grid { min: self.min, max: self.max, step, count })
    }

    fn clamp(&self, x: f64) -> f64 {
        x.clamp(self.min, self.max)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    min: f64,
    max: f64,
    step: f64,
    count: usize,
}

impl Grid {
    pub fn len(&self) -> usize {
        self.count
    }

    pub fn is_empty(&self) -> bool {
        self.count == 0
    }

    pub fn point(&self, i: usize) -> f64 {
        (self.min + i as f64 * self.step).min(self.max)
    }

    pub fn points(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.count).map(|i| self.point(i))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OptimizeOptions {
    pub range: EtaRange,
    /// Coarse step of one-dimensional scans.
    pub step: f64,
    /// Coarse step of the `(eta1, eta2)` scan.
    pub step_2d: f64,
    /// Refinement tolerance in eta for one-dimensional scans.
    pub tol: f64,
    pub tol_2d: f64,
    /// Also search all four measurement settings at the optimum instead of
    /// only the restricted Bloch family.
    pub unrestricted: bool,
    pub execution: Execution,
}

impl Default for OptimizeOptions {
    fn default() -> Self {
        Self {
            range: EtaRange::default(),
            step: 1e-3,
            step_2d: 1e-2,
            tol: 1e-6,
            tol_2d: 1e-5,
            unrestricted: false,
            execution: Execution::default(),
        }
    }
}

/// Best Bell sum found for one (case, scheme, subcase, n) combination.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BellResult {
    pub case: InitialCase,
    pub scheme: SchemeKind,
    pub subcase: RabiSubcase,
    pub n: u32,
    pub eta1: f64,
    pub eta2: f64,
    pub settings: ChshSettings,
    pub coefficients: CorrelationCoefficients,
    pub s_max: f64,
}

impl BellResult {
    pub fn scenario(&self) -> Scenario {
        Scenario::new(self.case, self.n, self.eta1, self.eta2)
    }
}

const INV_PHI: f64 = 0.618_033_988_749_894_9;

/// Golden-section search for a maximum of `f` on `[lo, hi]`.
pub fn golden_section_max<F: Fn(f64) -> f64>(f: F, mut lo: f64, mut hi: f64, tol: f64) -> (f64, f64) {
    let mut x1 = hi - INV_PHI * (hi - lo);
    let mut x2 = lo + INV_PHI * (hi - lo);
    let (mut f1, mut f2) = (f(x1), f(x2));
    while hi - lo > tol {
        if f1 >= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - INV_PHI * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + INV_PHI * (hi - lo);
            f2 = f(x2);
        }
    }
    let x = 0.5 * (lo + hi);
    (x, f(x))
}

/// Golden-section refinement within one grid step of `x0`; never returns a
/// point worse than `x0`.
fn refine_1d<F: Fn(f64) -> f64>(f: &F, x0: f64, step: f64, range: &EtaRange, tol: f64) -> (f64, f64) {
    let f0 = f(x0);
    let (x, fx) = golden_section_max(f, range.clamp(x0 - step), range.clamp(x0 + step), tol);
    if fx > f0 {
        (x, fx)
    } else {
        (x0, f0)
    }
}

/// Grid scan plus refinement of a one-dimensional objective.
pub fn maximize_1d<F>(f: F, range: &EtaRange, step: f64, tol: f64, exec: Execution) -> Result<(f64, f64)>
where
    F: Fn(f64) -> f64 + Sync + Send,
{
    let grid = range.grid(step)?;
    let (i, _) = exec.argmax(grid.len(), |i| f(grid.point(i))).expect("grid is never empty");
    Ok(refine_1d(&f, grid.point(i), step, range, tol))
}

/// Phase-scheme objective `|alpha|` over a single Rabi angle.
fn phase_equal(case: InitialCase, n: u32, opts: &OptimizeOptions) -> Result<(f64, f64)> {
    let kernel = CoefficientKernel::new(case);
    let alpha =
        move |eta: f64| kernel.eval(&first_atom_factors(case, n, eta), &second_atom_factors(case, n, eta)).alpha.abs();
    let (eta, _) = maximize_1d(alpha, &opts.range, opts.step, opts.tol, opts.execution)?;
    Ok((eta, eta))
}

/// `alpha` factorizes into a first-atom and a second-atom part, so each Rabi
/// angle is maximized on its own.
fn phase_unequal(case: InitialCase, n: u32, opts: &OptimizeOptions) -> Result<(f64, f64)> {
    let kernel = CoefficientKernel::new(case);
    let first = move |eta: f64| kernel.alpha_first(&first_atom_factors(case, n, eta)).abs();
    let second = move |eta: f64| kernel.alpha_second(&second_atom_factors(case, n, eta)).abs();
    let (eta1, _) = maximize_1d(first, &opts.range, opts.step, opts.tol, opts.execution)?;
    let (eta2, _) = maximize_1d(second, &opts.range, opts.step, opts.tol, opts.execution)?;
    Ok((eta1, eta2))
}

fn bloch_objective(k: CorrelationCoefficients) -> f64 {
    4.0 * k.alpha.hypot(k.beta)
}

fn bloch_equal(case: InitialCase, n: u32, opts: &OptimizeOptions) -> Result<(f64, f64)> {
    let kernel = CoefficientKernel::new(case);
    let s = move |eta: f64| {
        bloch_objective(kernel.eval(&first_atom_factors(case, n, eta), &second_atom_factors(case, n, eta)))
    };
    let (eta, _) = maximize_1d(s, &opts.range, opts.step, opts.tol, opts.execution)?;
    Ok((eta, eta))
}

/// Full `(eta1, eta2)` grid, then alternating golden-section refinement.
fn bloch_unequal(case: InitialCase, n: u32, opts: &OptimizeOptions) -> Result<(f64, f64)> {
    let range = opts.range;
    let grid = range.grid(opts.step_2d)?;
    let kernel = CoefficientKernel::new(case);
    let firsts = opts.execution.map(grid.len(), |i| first_atom_factors(case, n, grid.point(i)));
    let seconds = opts.execution.map(grid.len(), |j| second_atom_factors(case, n, grid.point(j)));
    let (i, j, _) = opts
        .execution
        .argmax_2d(grid.len(), grid.len(), |i, j| bloch_objective(kernel.eval(&firsts[i], &seconds[j])))
        .expect("grid is never empty");

    let s = |e1: f64, e2: f64| {
        bloch_objective(kernel.eval(&first_atom_factors(case, n, e1), &second_atom_factors(case, n, e2)))
    };
    let (mut e1, mut e2) = (grid.point(i), grid.point(j));
    let tol = opts.tol_2d * 0.1;
    for _ in 0..200 {
        let (prev1, prev2) = (e1, e2);
        e1 = refine_1d(&|x| s(x, e2), e1, opts.step_2d, &range, tol).0;
        e2 = refine_1d(&|y| s(e1, y), e2, opts.step_2d, &range, tol).0;
        if (e1 - prev1).abs() < opts.tol_2d && (e2 - prev2).abs() < opts.tol_2d {
            break;
        }
    }
    Ok((e1, e2))
}

/// Maximizes the Bell sum for one case, scheme, subcase and photon number.
///
/// The Rabi angles are searched within `opts.range`; the sum at the optimum
/// is `4 sqrt2 |alpha|` for phase pulses and `4 sqrt(alpha^2 + beta^2)` for
/// Bloch rotations (settings restricted to `theta1 = 0`, `theta1' = pi/2`,
/// `theta2' = -theta2` unless `opts.unrestricted`).
pub fn optimize_case(
    case: InitialCase,
    scheme: SchemeKind,
    subcase: RabiSubcase,
    n: u32,
    opts: &OptimizeOptions,
) -> Result<BellResult> {
    opts.range.validate()?;
    let (eta1, eta2) = match (scheme, subcase) {
        (SchemeKind::Phase, RabiSubcase::Equal) => phase_equal(case, n, opts)?,
        (SchemeKind::Phase, RabiSubcase::Unequal) => phase_unequal(case, n, opts)?,
        (SchemeKind::Bloch, RabiSubcase::Equal) => bloch_equal(case, n, opts)?,
        (SchemeKind::Bloch, RabiSubcase::Unequal) => bloch_unequal(case, n, opts)?,
    };
    let sc = Scenario::new(case, n, eta1, eta2);
    let coefficients = CorrelationCoefficients::of(&sc);
    let (mut s_max, mut settings) = match scheme {
        SchemeKind::Phase => smax_phase_analytic(coefficients.alpha),
        SchemeKind::Bloch => {
            let (s, _, st) = smax_bloch_restricted(coefficients.alpha, coefficients.beta);
            (s, st)
        }
    };
    if opts.unrestricted {
        let (s, st) = maximize_chsh_unrestricted(&sc, scheme);
        if s > s_max {
            (s_max, settings) = (s, st);
        }
    }
    Ok(BellResult { case, scheme, subcase, n, eta1, eta2, settings, coefficients, s_max })
}

/// Best result over several photon numbers; ties go to the first `n` listed.
pub fn optimize_over_n(
    case: InitialCase,
    scheme: SchemeKind,
    subcase: RabiSubcase,
    ns: &[u32],
    opts: &OptimizeOptions,
) -> Result<Option<BellResult>> {
    let mut best: Option<BellResult> = None;
    for &n in ns {
        let r = optimize_case(case, scheme, subcase, n, opts)?;
        if best.is_none_or(|b| r.s_max > b.s_max + crate::exec::TIE_TOLERANCE) {
            best = Some(r);
        }
    }
    Ok(best)
}

/// `sin(eta2 sqrt2) cos(eta2)`: the second-atom factor of alpha for case III
/// with one photon initially in the cavity.
pub fn fig1_value(eta2: f64) -> f64 {
    (eta2 * SQRT_2).sin() * eta2.cos()
}

/// Tabulates [`fig1_value`] on a uniform grid.
pub fn scan_curve_fig1(range: &EtaRange, step: f64) -> Result<Vec<(f64, f64)>> {
    Ok(range.grid(step)?.points().map(|x| (x, fig1_value(x))).collect())
}

/// Restricted Bloch-scheme maximum of case III as a function of `eta2`, with
/// `eta1` and `n` fixed.
pub fn scan_curve_fig2(eta1: f64, n: u32, range: &EtaRange, step: f64, exec: Execution) -> Result<Vec<(f64, f64)>> {
    let grid = range.grid(step)?;
    Ok(exec.map(grid.len(), |i| {
        let eta2 = grid.point(i);
        let k = CorrelationCoefficients::of(&Scenario::new(InitialCase::III, n, eta1, eta2));
        (eta2, smax_bloch_restricted(k.alpha, k.beta).0)
    }))
}

/// First-atom Rabi angle of the case III curve, `pi / (4 sqrt2)`.
pub const FIG2_ETA1: f64 = std::f64::consts::PI / (4.0 * SQRT_2);

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_includes_endpoint() {
        let g = EtaRange::default().grid(1e-3).unwrap();
        assert_eq!(g.len(), 25_001);
        assert_eq!(g.point(0), 0.0);
        assert!((g.point(25_000) - 25.0).abs() < 1e-12);
        let g = EtaRange::new(0.0, 1.0).unwrap().grid(0.3).unwrap();
        assert_eq!(g.points().collect::<Vec<_>>().len(), 4);
    }

    #[test]
    fn bad_ranges_and_steps() {
        assert!(matches!(EtaRange::new(1.0, 1.0), Err(Error::EmptyRange { .. })));
        assert!(matches!(EtaRange::new(2.0, 1.0), Err(Error::EmptyRange { .. })));
        assert!(matches!(EtaRange::default().grid(0.0), Err(Error::InvalidStep(_))));
        assert!(matches!(EtaRange::default().grid(f64::NAN), Err(Error::InvalidStep(_))));
        let opts = OptimizeOptions { range: EtaRange { min: 3.0, max: 3.0 }, ..Default::default() };
        assert!(optimize_case(InitialCase::I, SchemeKind::Phase, RabiSubcase::Equal, 1, &opts).is_err());
    }

    #[test]
    fn golden_section_finds_cosine_peak() {
        let (x, fx) = golden_section_max(|x: f64| (x - 1.0).cos(), 0.0, 2.5, 1e-7);
        assert!((x - 1.0).abs() < 1e-6);
        assert!((fx - 1.0).abs() < 1e-15);
    }

    #[test]
    fn degenerate_ground_state_case() {
        let opts = OptimizeOptions::default();
        let r = optimize_case(InitialCase::I, SchemeKind::Bloch, RabiSubcase::Unequal, 0, &opts).unwrap();
        assert_eq!(r.s_max, 2.0);
        assert_eq!((r.eta1, r.eta2), (0.0, 0.0));
        let r = optimize_case(InitialCase::I, SchemeKind::Phase, RabiSubcase::Equal, 0, &opts).unwrap();
        assert_eq!(r.s_max, 0.0);
        assert_eq!(r.eta1, 0.0);
    }

    #[test]
    fn case_two_phase_equal_empty_cavity() {
        let r = optimize_case(InitialCase::II, SchemeKind::Phase, RabiSubcase::Equal, 0, &Default::default()).unwrap();
        assert!((r.s_max - 2.18).abs() < 0.01, "{r:?}");
        assert!(r.s_max <= 4.0 * SQRT_2 * 2.0 * 3f64.sqrt() / 9.0 + 1e-6);
    }

    #[test]
    fn execution_modes_agree() {
        let seq = OptimizeOptions {
            execution: Execution::Sequential,
            range: EtaRange::new(0.0, 6.0).unwrap(),
            ..Default::default()
        };
        let par = OptimizeOptions { execution: Execution::Parallel, ..seq };
        for scheme in SchemeKind::ALL {
            for subcase in RabiSubcase::ALL {
                let a = optimize_case(InitialCase::III, scheme, subcase, 1, &seq).unwrap();
                let b = optimize_case(InitialCase::III, scheme, subcase, 1, &par).unwrap();
                assert_eq!(a, b);
            }
        }
    }

    #[test]
    fn fig2_curve_starts_at_zero() {
        let pts = scan_curve_fig2(FIG2_ETA1, 1, &EtaRange::new(0.0, 1.0).unwrap(), 0.5, Execution::Sequential).unwrap();
        assert_eq!(pts.len(), 3);
        // alpha and beta both vanish at eta2 = 0 for this eta1
        assert!(pts[0].1.abs() < 1e-15);
    }

    #[test]
    fn fig2_without_first_rotation() {
        // first atom passes unchanged: alpha = 0 and beta = -cos(2 eta2) / 2
        let pts = scan_curve_fig2(0.0, 1, &EtaRange::new(0.0, 10.0).unwrap(), 0.25, Execution::Sequential).unwrap();
        for (eta2, s) in &pts {
            assert!((s - 2.0 * (2.0 * eta2).cos().abs()).abs() < 1e-12);
        }
    }

    #[test]
    fn fig1_values() {
        assert_eq!(fig1_value(0.0), 0.0);
        let pts = scan_curve_fig1(&EtaRange::new(3.2, 3.4).unwrap(), 1e-3).unwrap();
        assert!(pts.iter().any(|(_, v)| v.abs() > 0.98));
    }
}
