//! Resonant Jaynes-Cummings cavity passes.
//!
//! An atom crossing the cavity with Rabi angle `eta` maps
//!
//! ```text
//! |e, n> -> cos(eta sqrt(n+1)) |e, n>  - i sin(eta sqrt(n+1)) |g, n+1>
//! |g, n> -> cos(eta sqrt(n))   |g, n>  - i sin(eta sqrt(n))   |e, n-1>
//! ```
//!
//! and the `|e, -1>` branch of `|g, 0>` is never generated.

use std::fmt;
use std::str::FromStr;

use crate::fock::{Accumulator, Amplitude, Atom, BasisKet, Level, StateVector};

/// Atom levels before the first atom enters the cavity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum InitialCase {
    /// `|g1, g2>`
    I,
    /// `|e1, e2>`
    II,
    /// `|e1, g2>`
    III,
}

impl InitialCase {
    pub const ALL: [InitialCase; 3] = [InitialCase::I, InitialCase::II, InitialCase::III];

    pub fn levels(self) -> (Level, Level) {
        match self {
            InitialCase::I => (Level::Ground, Level::Ground),
            InitialCase::II => (Level::Excited, Level::Excited),
            InitialCase::III => (Level::Excited, Level::Ground),
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            InitialCase::I => "I",
            InitialCase::II => "II",
            InitialCase::III => "III",
        }
    }

    /// Offset `j` of the first atom's `cos/sin(eta1 sqrt(n+j))`.
    fn first_offset(self) -> i64 {
        match self {
            InitialCase::I => 0,
            InitialCase::II | InitialCase::III => 1,
        }
    }

    /// Offsets of the second atom's coefficients: `(j for branches 0 and 1, j for branches 2 and 3)`.
    fn second_offsets(self) -> (i64, i64) {
        match self {
            InitialCase::I => (0, -1),
            InitialCase::II => (1, 2),
            InitialCase::III => (0, 1),
        }
    }

    /// Atom levels and photon shift of the four branches of the state after
    /// both passes, in the order (stay, stay), (stay, flip), (flip, stay), (flip, flip).
    pub fn branch_layout(self) -> [(Level, Level, i64); 4] {
        use Level::{Excited as E, Ground as G};
        match self {
            InitialCase::I => [(G, G, 0), (G, E, -1), (E, G, -1), (E, E, -2)],
            InitialCase::II => [(E, E, 0), (E, G, 1), (G, E, 1), (G, G, 2)],
            InitialCase::III => [(E, G, 0), (E, E, -1), (G, G, 1), (G, E, 0)],
        }
    }
}

impl fmt::Display for InitialCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for InitialCase {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_uppercase().as_str() {
            "I" | "1" => Ok(InitialCase::I),
            "II" | "2" => Ok(InitialCase::II),
            "III" | "3" => Ok(InitialCase::III),
            other => Err(format!("unknown case '{other}' (expected I, II or III)")),
        }
    }
}

/// Initial case, initial photon number and the two Rabi angles.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Scenario {
    pub case: InitialCase,
    pub n: u32,
    pub eta1: f64,
    pub eta2: f64,
}

impl Scenario {
    pub fn new(case: InitialCase, n: u32, eta1: f64, eta2: f64) -> Self {
        debug_assert!(eta1.is_finite() && eta2.is_finite());
        Self { case, n, eta1, eta2 }
    }

    /// Same Rabi angle for both atoms.
    pub fn equal(case: InitialCase, n: u32, eta: f64) -> Self {
        Self::new(case, n, eta, eta)
    }

    /// No state reachable from this scenario carries more photons than this.
    pub fn photon_cap(&self) -> u32 {
        self.n + 2
    }
}

/// `c_j = cos(eta sqrt(n+j))`, `s_j = sin(eta sqrt(n+j))` for `j` in `-1..=2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrigCoefficients {
    pub eta: f64,
    pub n: u32,
    values: [Option<(f64, f64)>; 4],
}

impl TrigCoefficients {
    pub fn new(eta: f64, n: u32) -> Self {
        let mut values = [None; 4];
        for (slot, j) in values.iter_mut().zip(-1_i64..=2) {
            *slot = rabi_trig(eta, i64::from(n) + j);
        }
        Self { eta, n, values }
    }

    fn get(&self, j: i64) -> Option<(f64, f64)> {
        assert!((-1..=2).contains(&j), "coefficient index {j} outside -1..=2");
        self.values[(j + 1) as usize]
    }

    /// `None` when `n + j < 0`.
    pub fn c(&self, j: i64) -> Option<f64> {
        self.get(j).map(|(c, _)| c)
    }

    pub fn s(&self, j: i64) -> Option<f64> {
        self.get(j).map(|(_, s)| s)
    }
}

fn rabi_trig(eta: f64, photons: i64) -> Option<(f64, f64)> {
    (photons >= 0).then(|| {
        let (s, c) = (eta * (photons as f64).sqrt()).sin_cos();
        (c, s)
    })
}

/// `(cos, sin)` at offset `j`; zero when the index is negative, which only ever
/// multiplies a branch that is absent anyway.
fn trig_or_zero(eta: f64, n: u32, j: i64) -> (f64, f64) {
    rabi_trig(eta, i64::from(n) + j).unwrap_or((0.0, 0.0))
}

/// Sends one atom through the cavity.
///
/// The photon number is read from each term, so the same map serves the
/// second pass where branches carry different photon numbers.
pub fn cavity_pass(s: &StateVector, atom: Atom, eta: f64) -> StateVector {
    let minus_i = Amplitude::new(0.0, -1.0);
    let mut acc = Accumulator::default();
    for (ket, amp) in s.iter() {
        let m = ket.photons;
        match ket.level(atom) {
            Level::Excited => {
                let (sin, cos) = (eta * f64::from(m + 1).sqrt()).sin_cos();
                acc.add(*ket, amp * cos);
                let emitted = BasisKet { photons: m + 1, ..ket.with_level(atom, Level::Ground) };
                acc.add(emitted, amp * minus_i * sin);
            }
            Level::Ground => {
                let (sin, cos) = (eta * f64::from(m).sqrt()).sin_cos();
                acc.add(*ket, amp * cos);
                if m > 0 {
                    let absorbed = BasisKet { photons: m - 1, ..ket.with_level(atom, Level::Excited) };
                    acc.add(absorbed, amp * minus_i * sin);
                }
            }
        }
    }
    acc.finish()
}

pub fn build_psi0(sc: &Scenario) -> StateVector {
    let (a1, a2) = sc.case.levels();
    StateVector::basis(BasisKet::new(a1, a2, sc.n))
}

/// State after the first atom has left the cavity.
pub fn build_psi1(sc: &Scenario) -> StateVector {
    cavity_pass(&build_psi0(sc), Atom::First, sc.eta1)
}

/// State after both atoms have crossed the cavity.
pub fn build_psi2(sc: &Scenario) -> StateVector {
    let psi2 = cavity_pass(&build_psi1(sc), Atom::Second, sc.eta2);
    debug_assert!(psi2.max_photons().is_none_or(|m| m <= sc.photon_cap()));
    psi2
}

/// Real magnitudes of the first atom's share of each branch amplitude.
///
/// The amplitude of branch `k` (ordered as in [`InitialCase::branch_layout`]) is
/// `BRANCH_PHASES[k] * first[k] * second[k]`.
pub fn first_atom_factors(case: InitialCase, n: u32, eta1: f64) -> [f64; 4] {
    let (c, s) = trig_or_zero(eta1, n, case.first_offset());
    [c, c, s, s]
}

pub fn second_atom_factors(case: InitialCase, n: u32, eta2: f64) -> [f64; 4] {
    let (ja, jb) = case.second_offsets();
    let (ca, sa) = trig_or_zero(eta2, n, ja);
    let (cb, sb) = trig_or_zero(eta2, n, jb);
    [ca, sa, cb, sb]
}

/// Phases `1, -i, -i, -1` shared by all three cases.
pub const BRANCH_PHASES: [Amplitude; 4] =
    [Amplitude::new(1.0, 0.0), Amplitude::new(0.0, -1.0), Amplitude::new(0.0, -1.0), Amplitude::new(-1.0, 0.0)];

/// The two-pass state written out term by term from the closed-form
/// trigonometric products, with negative-photon terms left out.
pub fn psi2_closed_form(sc: &Scenario) -> StateVector {
    let f = first_atom_factors(sc.case, sc.n, sc.eta1);
    let g = second_atom_factors(sc.case, sc.n, sc.eta2);
    let mut acc = Accumulator::default();
    for (k, (a1, a2, shift)) in sc.case.branch_layout().into_iter().enumerate() {
        let photons = i64::from(sc.n) + shift;
        if photons < 0 {
            continue;
        }
        acc.add(BasisKet::new(a1, a2, photons as u32), BRANCH_PHASES[k] * f[k] * g[k]);
    }
    acc.finish()
}
