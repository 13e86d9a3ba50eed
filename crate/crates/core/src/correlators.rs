//! Detector correlations `E` for the two measurement schemes.
//!
//! Each correlation is available two ways: as the expectation of a product
//! of single-atom observables in the two-pass state
//! ([`correlation_generic`]), and from the closed forms
//!
//! ```text
//! phase pulses:     E(phi1, phi2)     = 2 alpha cos(phi2 - phi1)
//! Bloch rotations:  E(theta1, theta2) = 2 alpha sin(theta1) sin(theta2) + 2 beta cos(theta1) cos(theta2)
//! ```
//!
//! ([`correlation_closed_form`]). `beta` is half the `sigma_z x sigma_z`
//! expectation, summed branch by branch over the two-pass state.

use num_complex::Complex64;

use crate::cavity::{build_psi2, first_atom_factors, second_atom_factors, InitialCase, Scenario};
use crate::fock::{expectation, Amplitude, Atom, AtomOperator};

/// Measurement settings for one correlation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MeasurementScheme {
    /// pi/2 pulses with phases `phi1`, `phi2`.
    Phase { phi1: f64, phi2: f64 },
    /// Bloch-vector rotations through `2 theta1`, `2 theta2`.
    Bloch { theta1: f64, theta2: f64 },
}

impl MeasurementScheme {
    pub fn operators(&self) -> (AtomOperator, AtomOperator) {
        match *self {
            MeasurementScheme::Phase { phi1, phi2 } => {
                (phase_operator(phi1, Atom::First), phase_operator(phi2, Atom::Second))
            }
            MeasurementScheme::Bloch { theta1, theta2 } => {
                (bloch_operator(theta1, Atom::First), bloch_operator(theta2, Atom::Second))
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CorrelationCoefficients {
    pub alpha: f64,
    pub beta: f64,
}

impl CorrelationCoefficients {
    pub fn of(sc: &Scenario) -> Self {
        let f = first_atom_factors(sc.case, sc.n, sc.eta1);
        let g = second_atom_factors(sc.case, sc.n, sc.eta2);
        CoefficientKernel::new(sc.case).eval(&f, &g)
    }
}

/// Evaluates `(alpha, beta)` from per-atom branch factors (see
/// [`first_atom_factors`]); the grid scans feed it precomputed factor tables.
#[derive(Debug, Clone, Copy)]
pub struct CoefficientKernel {
    /// Branches exchanged by `sigma_x x sigma_x` at equal photon number, and
    /// the sign their overlap picks up from the branch phases.
    pair: (usize, usize),
    pair_sign: f64,
    /// `sigma_z x sigma_z` eigenvalue of each branch.
    parity: [f64; 4],
}

impl CoefficientKernel {
    pub fn new(case: InitialCase) -> Self {
        let (pair, pair_sign) = match case {
            InitialCase::I | InitialCase::II => ((1, 2), 1.0),
            InitialCase::III => ((0, 3), -1.0),
        };
        let layout = case.branch_layout();
        let parity = std::array::from_fn(|k| layout[k].0.sigma_z() * layout[k].1.sigma_z());
        Self { pair, pair_sign, parity }
    }

    /// The first atom's share of `alpha`: `+-sin cos` of its Rabi angle.
    #[inline]
    pub fn alpha_first(&self, f: &[f64; 4]) -> f64 {
        self.pair_sign * f[self.pair.0] * f[self.pair.1]
    }

    #[inline]
    pub fn alpha_second(&self, g: &[f64; 4]) -> f64 {
        g[self.pair.0] * g[self.pair.1]
    }

    #[inline]
    pub fn eval(&self, f: &[f64; 4], g: &[f64; 4]) -> CorrelationCoefficients {
        let mut beta = 0.0;
        for k in 0..4 {
            let amp = f[k] * g[k];
            beta += self.parity[k] * amp * amp;
        }
        CorrelationCoefficients { alpha: self.alpha_first(f) * self.alpha_second(g), beta: 0.5 * beta }
    }
}

/// Closed-form `alpha`: the product of the first atom's `s c` at one offset
/// and the second atom's `s c` at two offsets, negated for case III.
pub fn alpha_coefficient(sc: &Scenario) -> f64 {
    CorrelationCoefficients::of(sc).alpha
}

pub fn beta_coefficient(sc: &Scenario) -> f64 {
    CorrelationCoefficients::of(sc).beta
}

/// `U = (1/sqrt2) [[1, -e^{i phi}], [e^{-i phi}, 1]]`, the pi/2 pulse of phase `phi`.
pub fn phase_pulse(phi: f64, atom: Atom) -> AtomOperator {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let e = Complex64::from_polar(1.0, phi);
    AtomOperator::new(atom, [[Amplitude::new(h, 0.0), -e * h], [e.conj() * h, Amplitude::new(h, 0.0)]])
}

/// `L = U^dagger sigma_z U = [[0, -e^{i phi}], [-e^{-i phi}, 0]]`.
pub fn phase_operator(phi: f64, atom: Atom) -> AtomOperator {
    let e = Complex64::from_polar(1.0, phi);
    AtomOperator::new(atom, [[Amplitude::default(), -e], [-e.conj(), Amplitude::default()]])
}

/// `O = cos(theta) sigma_z + sin(theta) sigma_x`.
pub fn bloch_operator(theta: f64, atom: Atom) -> AtomOperator {
    let (s, c) = theta.sin_cos();
    AtomOperator::from_real(atom, [[c, s], [s, -c]])
}

/// Expectation of the two-atom observable in the two-pass state.
pub fn correlation_generic(sc: &Scenario, m: &MeasurementScheme) -> f64 {
    let (a, b) = m.operators();
    expectation((&a, &b), &build_psi2(sc)).expect("measurement operators are self-adjoint")
}

pub fn correlation_closed_form(sc: &Scenario, m: &MeasurementScheme) -> f64 {
    let k = CorrelationCoefficients::of(sc);
    closed_form_with(k, m)
}

#[inline]
pub(crate) fn closed_form_with(k: CorrelationCoefficients, m: &MeasurementScheme) -> f64 {
    match *m {
        MeasurementScheme::Phase { phi1, phi2 } => 2.0 * k.alpha * (phi2 - phi1).cos(),
        MeasurementScheme::Bloch { theta1, theta2 } => {
            2.0 * k.alpha * theta1.sin() * theta2.sin() + 2.0 * k.beta * theta1.cos() * theta2.cos()
        }
    }
}

/// Correlation after all coherence between the branches of the two-pass
/// state is discarded: each branch contributes its probability times the
/// diagonal matrix element of the observable.
pub fn correlation_mixture(sc: &Scenario, m: &MeasurementScheme) -> f64 {
    let (a, b) = m.operators();
    build_psi2(sc)
        .iter()
        .map(|(ket, amp)| {
            let i = ket.atom1.index();
            let j = ket.atom2.index();
            amp.norm_sqr() * (a.matrix[i][i] * b.matrix[j][j]).re
        })
        .sum()
}
