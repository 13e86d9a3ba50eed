//! Product basis `{e, g} x {e, g} x {0, 1, ...}` for two atoms and one cavity
//! mode, sparse state vectors over it, and operators acting on one atom.

use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;

use crate::{Error, Result};

pub type Amplitude = Complex64;

/// Amplitudes with modulus below this are dropped from a [`StateVector`].
pub const PRUNE_THRESHOLD: f64 = 1e-15;

/// Absolute per-component tolerance for comparing states and operators.
pub const STATE_TOLERANCE: f64 = 1e-12;

/// Internal level of a two-level atom.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Level {
    Excited,
    Ground,
}

impl Level {
    /// Row/column of this level in the 2x2 matrices (`|e> = (1, 0)`, `|g> = (0, 1)`).
    pub fn index(self) -> usize {
        match self {
            Level::Excited => 0,
            Level::Ground => 1,
        }
    }

    pub fn from_index(i: usize) -> Self {
        match i {
            0 => Level::Excited,
            1 => Level::Ground,
            _ => panic!("level index {i} out of range"),
        }
    }

    /// Detector outcome: +1 for `e`, -1 for `g`.
    pub fn sigma_z(self) -> f64 {
        match self {
            Level::Excited => 1.0,
            Level::Ground => -1.0,
        }
    }

    pub fn flipped(self) -> Self {
        match self {
            Level::Excited => Level::Ground,
            Level::Ground => Level::Excited,
        }
    }
}

impl fmt::Display for Level {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Level::Excited => "e",
            Level::Ground => "g",
        })
    }
}

/// Which of the two atoms an operator or cavity pass addresses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Atom {
    First,
    Second,
}

impl Atom {
    pub fn number(self) -> u8 {
        match self {
            Atom::First => 1,
            Atom::Second => 2,
        }
    }
}

/// `|atom1, atom2, photons>`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BasisKet {
    pub atom1: Level,
    pub atom2: Level,
    pub photons: u32,
}

impl BasisKet {
    pub const fn new(atom1: Level, atom2: Level, photons: u32) -> Self {
        Self { atom1, atom2, photons }
    }

    pub fn level(&self, atom: Atom) -> Level {
        match atom {
            Atom::First => self.atom1,
            Atom::Second => self.atom2,
        }
    }

    pub fn with_level(mut self, atom: Atom, level: Level) -> Self {
        match atom {
            Atom::First => self.atom1 = level,
            Atom::Second => self.atom2 = level,
        }
        self
    }

    /// Atoms in `e` plus photons; conserved by the resonant interaction.
    pub fn excitations(&self) -> u32 {
        let up = |l: Level| u32::from(l == Level::Excited);
        up(self.atom1) + up(self.atom2) + self.photons
    }
}

impl fmt::Display for BasisKet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "|{},{},{}>", self.atom1, self.atom2, self.photons)
    }
}

/// Finite superposition of basis kets.
///
/// Terms are kept in ket order so iteration (and anything printed from it) is
/// deterministic. Amplitudes below [`PRUNE_THRESHOLD`] are never stored.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct StateVector {
    terms: BTreeMap<BasisKet, Amplitude>,
}

impl StateVector {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn basis(ket: BasisKet) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(ket, Amplitude::new(1.0, 0.0));
        Self { terms }
    }

    /// Sums repeated kets and prunes vanishing amplitudes.
    pub fn from_terms<I>(terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (BasisKet, Amplitude)>,
    {
        let mut acc = Accumulator::default();
        for (ket, amp) in terms {
            if !(amp.re.is_finite() && amp.im.is_finite()) {
                return Err(Error::NonFinite(ket));
            }
            acc.add(ket, amp);
        }
        Ok(acc.finish())
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn amplitude(&self, ket: &BasisKet) -> Amplitude {
        self.terms.get(ket).copied().unwrap_or_default()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&BasisKet, &Amplitude)> {
        self.terms.iter()
    }

    pub fn kets(&self) -> impl Iterator<Item = &BasisKet> {
        self.terms.keys()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.terms.values().map(|a| a.norm_sqr()).sum()
    }

    pub fn max_photons(&self) -> Option<u32> {
        self.terms.keys().map(|k| k.photons).max()
    }

    pub fn scale(&self, c: Amplitude) -> Self {
        let mut acc = Accumulator::default();
        for (k, a) in &self.terms {
            acc.add(*k, a * c);
        }
        acc.finish()
    }

    pub fn add(&self, other: &StateVector) -> Self {
        let mut acc = Accumulator::default();
        for (k, a) in self.terms.iter().chain(other.terms.iter()) {
            acc.add(*k, *a);
        }
        acc.finish()
    }

    /// Largest per-component deviation between two states.
    pub fn max_deviation(&self, other: &StateVector) -> f64 {
        self.terms
            .keys()
            .chain(other.terms.keys())
            .map(|k| {
                let d = self.amplitude(k) - other.amplitude(k);
                d.re.abs().max(d.im.abs())
            })
            .fold(0.0, f64::max)
    }

    pub fn approx_eq(&self, other: &StateVector, tol: f64) -> bool {
        self.max_deviation(other) <= tol
    }
}

impl fmt::Display for StateVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (k, a)) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            write!(f, "({:.6}{:+.6}i){}", a.re, a.im, k)?;
        }
        Ok(())
    }
}

/// Collects contributions to a state before pruning.
#[derive(Default)]
pub(crate) struct Accumulator {
    terms: BTreeMap<BasisKet, Amplitude>,
}

impl Accumulator {
    pub(crate) fn add(&mut self, ket: BasisKet, amp: Amplitude) {
        *self.terms.entry(ket).or_default() += amp;
    }

    pub(crate) fn finish(mut self) -> StateVector {
        self.terms.retain(|_, a| a.norm() >= PRUNE_THRESHOLD);
        StateVector { terms: self.terms }
    }
}

/// `<a|b>`, conjugate-linear in `a`.
pub fn inner_product(a: &StateVector, b: &StateVector) -> Amplitude {
    // iterate the shorter map, look up in the longer one
    let (short, long, conj_short) = if a.len() <= b.len() { (a, b, true) } else { (b, a, false) };
    short
        .terms
        .iter()
        .filter_map(|(k, x)| long.terms.get(k).map(|y| if conj_short { x.conj() * y } else { y.conj() * x }))
        .sum()
}

/// A 2x2 matrix acting on one atom's level, in the `(e, g)` basis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AtomOperator {
    pub matrix: [[Amplitude; 2]; 2],
    pub atom: Atom,
}

impl AtomOperator {
    pub fn new(atom: Atom, matrix: [[Amplitude; 2]; 2]) -> Self {
        Self { matrix, atom }
    }

    pub fn from_real(atom: Atom, m: [[f64; 2]; 2]) -> Self {
        let c = |x: f64| Amplitude::new(x, 0.0);
        Self::new(atom, [[c(m[0][0]), c(m[0][1])], [c(m[1][0]), c(m[1][1])]])
    }

    pub fn identity(atom: Atom) -> Self {
        Self::from_real(atom, [[1.0, 0.0], [0.0, 1.0]])
    }

    pub fn sigma_z(atom: Atom) -> Self {
        Self::from_real(atom, [[1.0, 0.0], [0.0, -1.0]])
    }

    pub fn sigma_x(atom: Atom) -> Self {
        Self::from_real(atom, [[0.0, 1.0], [1.0, 0.0]])
    }

    pub fn adjoint(&self) -> Self {
        let m = &self.matrix;
        Self::new(self.atom, [[m[0][0].conj(), m[1][0].conj()], [m[0][1].conj(), m[1][1].conj()]])
    }

    /// Matrix product `self * rhs`; both must address the same atom.
    pub fn compose(&self, rhs: &AtomOperator) -> Self {
        assert_eq!(self.atom, rhs.atom, "composing operators on different atoms");
        let (a, b) = (&self.matrix, &rhs.matrix);
        let mut out = [[Amplitude::default(); 2]; 2];
        for (i, row) in out.iter_mut().enumerate() {
            for (j, cell) in row.iter_mut().enumerate() {
                *cell = a[i][0] * b[0][j] + a[i][1] * b[1][j];
            }
        }
        Self::new(self.atom, out)
    }

    /// Largest deviation of the matrix from its own adjoint.
    pub fn hermiticity_defect(&self) -> f64 {
        let adj = self.adjoint();
        self.max_deviation(&adj)
    }

    pub fn max_deviation(&self, other: &AtomOperator) -> f64 {
        let mut worst = 0.0_f64;
        for i in 0..2 {
            for j in 0..2 {
                worst = worst.max((self.matrix[i][j] - other.matrix[i][j]).norm());
            }
        }
        worst
    }

    pub fn apply(&self, s: &StateVector) -> StateVector {
        apply_atom_operator(self, s)
    }
}

/// Applies a single-atom operator; photon number and the other atom are untouched.
pub fn apply_atom_operator(op: &AtomOperator, s: &StateVector) -> StateVector {
    let mut acc = Accumulator::default();
    for (ket, amp) in s.iter() {
        let col = ket.level(op.atom).index();
        for row in 0..2 {
            let m = op.matrix[row][col];
            if m != Amplitude::default() {
                acc.add(ket.with_level(op.atom, Level::from_index(row)), m * amp);
            }
        }
    }
    acc.finish()
}

/// `Re <s| A B |s>` for a product of two single-atom observables.
///
/// Both operators must be self-adjoint within [`STATE_TOLERANCE`].
pub fn expectation(ops: (&AtomOperator, &AtomOperator), s: &StateVector) -> Result<f64> {
    for op in [ops.0, ops.1] {
        let deviation = op.hermiticity_defect();
        if deviation > STATE_TOLERANCE {
            return Err(Error::NonHermitian { atom: op.atom.number(), deviation });
        }
    }
    let image = apply_atom_operator(ops.0, &apply_atom_operator(ops.1, s));
    let value = inner_product(s, &image);
    debug_assert!(value.im.abs() < 1e-10, "expectation has imaginary part {}", value.im);
    Ok(value.re)
}
