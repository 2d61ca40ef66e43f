//! Pauli operators in the symplectic binary representation.
//!
//! An operator is `i^phase · σ(x_0, z_0) ⊗ … ⊗ σ(x_{n-1}, z_{n-1})` where
//! `σ(0,0) = I`, `σ(1,0) = X`, `σ(0,1) = Z` and `σ(1,1) = Y`. With `Y` as a
//! letter in its own right, an operator is Hermitian exactly when its phase
//! is real (`+1` or `-1`).

use std::fmt;
use std::str::FromStr;

use crate::bits::Bits;
use crate::error::{Error, Result};

/// Single-qubit Pauli letter.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Letter {
    I,
    X,
    Y,
    Z,
}

impl Letter {
    pub fn from_bits(x: bool, z: bool) -> Letter {
        match (x, z) {
            (false, false) => Letter::I,
            (true, false) => Letter::X,
            (true, true) => Letter::Y,
            (false, true) => Letter::Z,
        }
    }

    pub fn bits(self) -> (bool, bool) {
        match self {
            Letter::I => (false, false),
            Letter::X => (true, false),
            Letter::Y => (true, true),
            Letter::Z => (false, true),
        }
    }

    pub fn as_char(self) -> char {
        match self {
            Letter::I => 'I',
            Letter::X => 'X',
            Letter::Y => 'Y',
            Letter::Z => 'Z',
        }
    }
}

/// Power of `i` multiplying a Pauli string, stored mod 4.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub struct Phase(u8);

impl Phase {
    pub const PLUS_ONE: Phase = Phase(0);
    pub const PLUS_I: Phase = Phase(1);
    pub const MINUS_ONE: Phase = Phase(2);
    pub const MINUS_I: Phase = Phase(3);

    pub fn from_exponent(k: i64) -> Phase {
        Phase(k.rem_euclid(4) as u8)
    }

    pub fn exponent(self) -> u8 {
        self.0
    }

    pub fn is_real(self) -> bool {
        self.0.is_multiple_of(2)
    }

    fn symbol(self) -> &'static str {
        ["+", "+i", "-", "-i"][self.0 as usize]
    }
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PauliOperator {
    phase: Phase,
    x: Bits,
    z: Bits,
}

impl PauliOperator {
    pub fn identity(n: usize) -> Self {
        PauliOperator { phase: Phase::PLUS_ONE, x: Bits::zeros(n), z: Bits::zeros(n) }
    }

    pub fn from_parts(phase: Phase, x: Bits, z: Bits) -> Self {
        assert_eq!(x.len(), z.len(), "x and z masks must have equal length");
        PauliOperator { phase, x, z }
    }

    pub fn from_letters(phase: Phase, letters: &[Letter]) -> Self {
        let n = letters.len();
        let mut x = Bits::zeros(n);
        let mut z = Bits::zeros(n);
        for (q, l) in letters.iter().enumerate() {
            let (xb, zb) = l.bits();
            x.set(q, xb);
            z.set(q, zb);
        }
        PauliOperator { phase, x, z }
    }

    /// `letter` on qubit `q`, identity elsewhere.
    pub fn single(n: usize, q: usize, letter: Letter) -> Self {
        let mut p = PauliOperator::identity(n);
        p.set_letter(q, letter);
        p
    }

    /// Product of `X` on every qubit of `qubits`.
    pub fn x_string(n: usize, qubits: &[usize]) -> Self {
        PauliOperator::from_parts(Phase::PLUS_ONE, Bits::from_indices(n, qubits.iter().copied()), Bits::zeros(n))
    }

    pub fn n(&self) -> usize {
        self.x.len()
    }

    pub fn phase(&self) -> Phase {
        self.phase
    }

    pub fn x_mask(&self) -> &Bits {
        &self.x
    }

    pub fn z_mask(&self) -> &Bits {
        &self.z
    }

    pub fn letter(&self, q: usize) -> Letter {
        Letter::from_bits(self.x.get(q), self.z.get(q))
    }

    pub fn letters(&self) -> Vec<Letter> {
        (0..self.n()).map(|q| self.letter(q)).collect()
    }

    pub fn set_letter(&mut self, q: usize, letter: Letter) {
        let (xb, zb) = letter.bits();
        self.x.set(q, xb);
        self.z.set(q, zb);
    }

    pub fn with_phase(mut self, phase: Phase) -> Self {
        self.phase = phase;
        self
    }

    pub fn negated(mut self) -> Self {
        self.phase = Phase::from_exponent(self.phase.0 as i64 + 2);
        self
    }

    pub fn is_hermitian(&self) -> bool {
        self.phase.is_real()
    }

    /// `+1` or `-1` for Hermitian operators.
    pub fn sign(&self) -> Option<i8> {
        match self.phase {
            Phase::PLUS_ONE => Some(1),
            Phase::MINUS_ONE => Some(-1),
            _ => None,
        }
    }

    pub fn is_identity_string(&self) -> bool {
        self.x.is_zero() && self.z.is_zero()
    }

    /// Number of non-identity letters.
    pub fn weight(&self) -> usize {
        (0..self.n()).filter(|&q| self.x.get(q) || self.z.get(q)).count()
    }

    /// Same letters, ignoring phase.
    pub fn same_string(&self, other: &PauliOperator) -> bool {
        self.x == other.x && self.z == other.z
    }

    /// Symplectic vector `(x | z)` of length `2n`.
    pub fn symplectic(&self) -> Bits {
        self.x.concat(&self.z)
    }

    fn check_dims(&self, other: &PauliOperator) -> Result<()> {
        if self.n() != other.n() {
            return Err(Error::DimensionMismatch { left: self.n(), right: other.n() });
        }
        Ok(())
    }

    /// Exact product `self · other`.
    pub fn multiply(&self, other: &PauliOperator) -> Result<PauliOperator> {
        self.check_dims(other)?;
        Ok(self.mul_unchecked(other))
    }

    pub(crate) fn mul_unchecked(&self, other: &PauliOperator) -> PauliOperator {
        // Write σ(x,z) = i^{x·z} X^x Z^z, commute Z^{z1} past X^{x2} for a
        // factor (-1)^{z1·x2}, then convert back to the Y-letter form.
        let x = self.x.xor(&other.x);
        let z = self.z.xor(&other.z);
        let k = self.phase.0 as i64
            + other.phase.0 as i64
            + self.x.and_count(&self.z) as i64
            + other.x.and_count(&other.z) as i64
            + 2 * self.z.and_count(&other.x) as i64
            - x.and_count(&z) as i64;
        PauliOperator { phase: Phase::from_exponent(k), x, z }
    }

    /// Symplectic inner product test.
    pub fn commutes(&self, other: &PauliOperator) -> Result<bool> {
        self.check_dims(other)?;
        Ok(self.commutes_unchecked(other))
    }

    pub(crate) fn commutes_unchecked(&self, other: &PauliOperator) -> bool {
        (self.x.and_count(&other.z) + self.z.and_count(&other.x)).is_multiple_of(2)
    }

    /// Same operator on `n` qubits, padding with identities.
    pub fn extended(&self, n: usize) -> PauliOperator {
        assert!(n >= self.n());
        PauliOperator { phase: self.phase, x: self.x.resized(n), z: self.z.resized(n) }
    }
}

/// Free-function form of [`PauliOperator::multiply`].
pub fn multiply(p: &PauliOperator, q: &PauliOperator) -> Result<PauliOperator> {
    p.multiply(q)
}

/// Free-function form of [`PauliOperator::commutes`].
pub fn commutes(p: &PauliOperator, q: &PauliOperator) -> Result<bool> {
    p.commutes(q)
}

impl fmt::Display for PauliOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.phase.symbol())?;
        for q in 0..self.n() {
            write!(f, "{}", self.letter(q).as_char())?;
        }
        Ok(())
    }
}

impl fmt::Debug for PauliOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for PauliOperator {
    type Err = Error;

    /// Optional sign (`+`, `-`, `i`, `+i`, `-i`) followed by letters `IXYZ`,
    /// qubit 0 first.
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        let (phase, body) = if let Some(rest) = t.strip_prefix("+i").or_else(|| t.strip_prefix('i')) {
            (Phase::PLUS_I, rest)
        } else if let Some(rest) = t.strip_prefix("-i") {
            (Phase::MINUS_I, rest)
        } else if let Some(rest) = t.strip_prefix('-') {
            (Phase::MINUS_ONE, rest)
        } else if let Some(rest) = t.strip_prefix('+') {
            (Phase::PLUS_ONE, rest)
        } else {
            (Phase::PLUS_ONE, t)
        };
        if body.is_empty() {
            return Err(Error::PauliParse(s.to_string()));
        }
        let letters = body
            .chars()
            .map(|c| match c {
                'I' => Ok(Letter::I),
                'X' => Ok(Letter::X),
                'Y' => Ok(Letter::Y),
                'Z' => Ok(Letter::Z),
                _ => Err(Error::PauliParse(s.to_string())),
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(PauliOperator::from_letters(phase, &letters))
    }
}
