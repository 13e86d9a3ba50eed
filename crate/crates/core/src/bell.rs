//! CHSH Bell sum `S = |E(a1,a2) + E(a1,a2') + E(a1',a2) - E(a1',a2')|`.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};
use std::fmt;
use std::str::FromStr;

use crate::cavity::Scenario;
use crate::correlators::{
    closed_form_with, correlation_generic, correlation_mixture, CorrelationCoefficients, MeasurementScheme,
};

/// Which classical-field action sets the measurement settings.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SchemeKind {
    /// (A): pi/2 pulse with adjustable phase.
    Phase,
    /// (B): Bloch-vector rotation through an adjustable angle.
    Bloch,
}

impl SchemeKind {
    pub const ALL: [SchemeKind; 2] = [SchemeKind::Phase, SchemeKind::Bloch];

    pub fn scheme(self, x1: f64, x2: f64) -> MeasurementScheme {
        match self {
            SchemeKind::Phase => MeasurementScheme::Phase { phi1: x1, phi2: x2 },
            SchemeKind::Bloch => MeasurementScheme::Bloch { theta1: x1, theta2: x2 },
        }
    }

    pub fn letter(self) -> &'static str {
        match self {
            SchemeKind::Phase => "A",
            SchemeKind::Bloch => "B",
        }
    }
}

impl fmt::Display for SchemeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SchemeKind::Phase => "phase",
            SchemeKind::Bloch => "bloch",
        })
    }
}

impl FromStr for SchemeKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "phase" | "a" => Ok(SchemeKind::Phase),
            "bloch" | "b" => Ok(SchemeKind::Bloch),
            other => Err(format!("unknown scheme '{other}' (expected phase or bloch)")),
        }
    }
}

/// Settings `(a1, a1', a2, a2')`: phases or Bloch angles depending on the scheme.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ChshSettings {
    pub a1: f64,
    pub a1p: f64,
    pub a2: f64,
    pub a2p: f64,
}

impl ChshSettings {
    pub fn new(a1: f64, a1p: f64, a2: f64, a2p: f64) -> Self {
        Self { a1, a1p, a2, a2p }
    }

    pub fn as_array(&self) -> [f64; 4] {
        [self.a1, self.a1p, self.a2, self.a2p]
    }

    fn from_array(a: [f64; 4]) -> Self {
        Self::new(a[0], a[1], a[2], a[3])
    }
}

/// Signed CHSH combination for an arbitrary correlation function.
pub fn chsh_combination<F: Fn(f64, f64) -> f64>(corr: F, st: &ChshSettings) -> f64 {
    corr(st.a1, st.a2) + corr(st.a1, st.a2p) + corr(st.a1p, st.a2) - corr(st.a1p, st.a2p)
}

/// Bell sum from the generic expectation values.
pub fn bell_sum(sc: &Scenario, kind: SchemeKind, st: &ChshSettings) -> f64 {
    chsh_combination(|x, y| correlation_generic(sc, &kind.scheme(x, y)), st).abs()
}

/// Bell sum with all interference between branches discarded.
pub fn bell_sum_mixture(sc: &Scenario, kind: SchemeKind, st: &ChshSettings) -> f64 {
    chsh_combination(|x, y| correlation_mixture(sc, &kind.scheme(x, y)), st).abs()
}

/// Bell sum from the closed-form correlations.
pub fn bell_sum_closed_form(k: CorrelationCoefficients, kind: SchemeKind, st: &ChshSettings) -> f64 {
    chsh_combination(|x, y| closed_form_with(k, &kind.scheme(x, y)), st).abs()
}

/// Phase-scheme maximum `4 sqrt2 |alpha|`, reached at phases `(0, pi/2, pi/4, -pi/4)`.
pub fn smax_phase_analytic(alpha: f64) -> (f64, ChshSettings) {
    (4.0 * std::f64::consts::SQRT_2 * alpha.abs(), ChshSettings::new(0.0, FRAC_PI_2, FRAC_PI_4, -FRAC_PI_4))
}

/// Bloch-scheme maximum with `theta1 = 0`, `theta1' = pi/2`, `theta2' = -theta2`.
///
/// Then `S = 4 |alpha sin(theta2) + beta cos(theta2)|`, maximal at
/// `theta2 = atan2(alpha, beta)` with value `4 sqrt(alpha^2 + beta^2)`.
pub fn smax_bloch_restricted(alpha: f64, beta: f64) -> (f64, f64, ChshSettings) {
    let theta2 = alpha.atan2(beta);
    (4.0 * alpha.hypot(beta), theta2, ChshSettings::new(0.0, FRAC_PI_2, theta2, -theta2))
}

/// Maximizes the Bell sum over all four settings by coordinate ascent.
///
/// With three settings held fixed the signed combination is
/// `A cos x + B sin x + C` in the fourth, for both schemes, so each
/// coordinate step is solved exactly. Several deterministic starts are tried
/// for both signs of the combination.
pub fn maximize_chsh_unrestricted(sc: &Scenario, kind: SchemeKind) -> (f64, ChshSettings) {
    let k = CorrelationCoefficients::of(sc);
    let corr = |x: f64, y: f64| closed_form_with(k, &kind.scheme(x, y));
    let mut best = (f64::NEG_INFINITY, ChshSettings::default());
    for sign in [1.0, -1.0] {
        let objective = |a: &[f64; 4]| sign * chsh_combination(corr, &ChshSettings::from_array(*a));
        for start in 0..8 {
            let base = start as f64 * PI / 8.0;
            let mut a = [base, base + 1.1, base + 0.4, base - 0.7];
            let mut value = objective(&a);
            for _ in 0..500 {
                let before = value;
                for i in 0..4 {
                    let at = |x: f64| {
                        let mut b = a;
                        b[i] = x;
                        objective(&b)
                    };
                    let (f0, f90, f180) = (at(0.0), at(FRAC_PI_2), at(PI));
                    let c = 0.5 * (f0 + f180);
                    let (ca, sb) = (f0 - c, f90 - c);
                    a[i] = sb.atan2(ca);
                    value = objective(&a);
                }
                if value - before < 1e-15 {
                    break;
                }
            }
            if value > best.0 + 1e-12 {
                best = (value, ChshSettings::from_array(a));
            }
        }
    }
    best
}
