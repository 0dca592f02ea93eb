//! Pauli strings and weighted Pauli sums: the working basis for every algebra
//! in the toolkit and the sparse form of the simulator's observables.

use crate::error::{Error, Result};
use crate::kernel::{CMat, C_I, C_ONE};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum PauliLetter {
    I,
    X,
    Y,
    Z,
}

impl PauliLetter {
    pub fn from_char(c: char) -> Result<Self> {
        match c {
            'I' => Ok(Self::I),
            'X' => Ok(Self::X),
            'Y' => Ok(Self::Y),
            'Z' => Ok(Self::Z),
            other => Err(Error::Parse(format!("invalid Pauli letter `{other}`"))),
        }
    }

    pub fn as_char(self) -> char {
        match self {
            Self::I => 'I',
            Self::X => 'X',
            Self::Y => 'Y',
            Self::Z => 'Z',
        }
    }

    pub fn matrix(self) -> CMat {
        match self {
            Self::I => CMat::identity(2, 2),
            Self::X => CMat::from_row_slice(2, 2, &[0.0.into(), C_ONE, C_ONE, 0.0.into()]),
            Self::Y => CMat::from_row_slice(2, 2, &[0.0.into(), -C_I, C_I, 0.0.into()]),
            Self::Z => CMat::from_row_slice(2, 2, &[C_ONE, 0.0.into(), 0.0.into(), -C_ONE]),
        }
    }
}

/// Product of two single-qubit Paulis: returns (letter, phase exponent) with
/// the phase as a power of `i`, i.e. `a · b = i^k · c`.
fn letter_mul(a: PauliLetter, b: PauliLetter) -> (PauliLetter, u8) {
    use PauliLetter::*;
    match (a, b) {
        (I, x) | (x, I) => (x, 0),
        (X, X) | (Y, Y) | (Z, Z) => (I, 0),
        (X, Y) => (Z, 1),
        (Y, X) => (Z, 3),
        (Y, Z) => (X, 1),
        (Z, Y) => (X, 3),
        (Z, X) => (Y, 1),
        (X, Z) => (Y, 3),
    }
}

/// A tensor product of single-qubit Paulis with a phase in `{±1, ±i}`,
/// stored as a quarter-turn exponent of `i`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PauliString {
    letters: Vec<PauliLetter>,
    phase_quarter_turns: u8,
}

impl PauliString {
    pub fn new(letters: Vec<PauliLetter>) -> Self {
        Self {
            letters,
            phase_quarter_turns: 0,
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        let letters = s
            .chars()
            .map(PauliLetter::from_char)
            .collect::<Result<Vec<_>>>()?;
        if letters.is_empty() {
            return Err(Error::Parse("empty Pauli string".into()));
        }
        Ok(Self::new(letters))
    }

    pub fn identity(n_qubits: usize) -> Self {
        Self::new(vec![PauliLetter::I; n_qubits])
    }

    pub fn qubit_count(&self) -> usize {
        self.letters.len()
    }

    pub fn letters(&self) -> &[PauliLetter] {
        &self.letters
    }

    pub fn is_identity(&self) -> bool {
        self.letters.iter().all(|&l| l == PauliLetter::I)
    }

    pub fn phase(&self) -> Complex64 {
        match self.phase_quarter_turns % 4 {
            0 => C_ONE,
            1 => C_I,
            2 => -C_ONE,
            _ => -C_I,
        }
    }

    /// Single-qubit string on `n_qubits` with `letter` at `qubit`.
    pub fn single(n_qubits: usize, qubit: usize, letter: PauliLetter) -> Self {
        let mut letters = vec![PauliLetter::I; n_qubits];
        letters[qubit] = letter;
        Self::new(letters)
    }

    /// Two-qubit string, e.g. `X_i X_j` on an `n_qubits` register.
    pub fn two_site(n_qubits: usize, i: usize, j: usize, a: PauliLetter, b: PauliLetter) -> Self {
        let mut letters = vec![PauliLetter::I; n_qubits];
        letters[i] = a;
        letters[j] = b;
        Self::new(letters)
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.qubit_count(), other.qubit_count());
        let mut phase = self.phase_quarter_turns + other.phase_quarter_turns;
        let letters = self
            .letters
            .iter()
            .zip(other.letters.iter())
            .map(|(&a, &b)| {
                let (c, k) = letter_mul(a, b);
                phase += k;
                c
            })
            .collect();
        Self {
            letters,
            phase_quarter_turns: phase % 4,
        }
    }

    pub fn commutes_with(&self, other: &Self) -> bool {
        let anticommuting = self
            .letters
            .iter()
            .zip(other.letters.iter())
            .filter(|(&a, &b)| {
                a != PauliLetter::I && b != PauliLetter::I && a != b
            })
            .count();
        anticommuting % 2 == 0
    }

    /// Dense matrix realization (phase times the Kronecker product of the
    /// letters, qubit 0 as the most significant factor).
    pub fn matrix(&self) -> CMat {
        let dim = 1usize << self.qubit_count();
        let mut out = CMat::zeros(dim, dim);
        let phase = self.phase();
        for col in 0..dim {
            let (row, coeff) = self.column_action(col);
            out[(row, col)] = phase * coeff;
        }
        out
    }

    /// Action on a computational basis state: `P |col⟩ = coeff |row⟩`.
    /// Phase of the string is *not* included here.
    #[inline]
    pub fn column_action(&self, col: usize) -> (usize, Complex64) {
        let n = self.qubit_count();
        let mut row = col;
        let mut coeff = C_ONE;
        for (k, &letter) in self.letters.iter().enumerate() {
            let bit = (col >> (n - 1 - k)) & 1;
            match letter {
                PauliLetter::I => {}
                PauliLetter::X => row ^= 1 << (n - 1 - k),
                PauliLetter::Y => {
                    row ^= 1 << (n - 1 - k);
                    coeff *= if bit == 0 { C_I } else { -C_I };
                }
                PauliLetter::Z => {
                    if bit == 1 {
                        coeff = -coeff;
                    }
                }
            }
        }
        (row, coeff)
    }

    /// `out += weight · P |ψ⟩` for a dense statevector.
    pub fn accumulate_apply(&self, weight: Complex64, psi: &[Complex64], out: &mut [Complex64]) {
        let w = weight * self.phase();
        for (col, &amp) in psi.iter().enumerate() {
            if amp == Complex64::new(0.0, 0.0) {
                continue;
            }
            let (row, coeff) = self.column_action(col);
            out[row] += w * coeff * amp;
        }
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let prefix = match self.phase_quarter_turns % 4 {
            0 => "",
            1 => "i",
            2 => "-",
            _ => "-i",
        };
        write!(f, "{prefix}")?;
        for l in &self.letters {
            write!(f, "{}", l.as_char())?;
        }
        Ok(())
    }
}

/// Weighted sum of Pauli strings.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PauliSum {
    pub n_qubits: usize,
    pub terms: Vec<(Complex64, PauliString)>,
}

impl PauliSum {
    pub fn new(n_qubits: usize) -> Self {
        Self {
            n_qubits,
            terms: Vec::new(),
        }
    }

    pub fn add(&mut self, coeff: Complex64, string: PauliString) {
        assert_eq!(string.qubit_count(), self.n_qubits);
        self.terms.push((coeff, string));
    }

    pub fn matrix(&self) -> CMat {
        let dim = 1usize << self.n_qubits;
        let mut out = CMat::zeros(dim, dim);
        for (coeff, string) in &self.terms {
            let w = *coeff * string.phase();
            for col in 0..dim {
                let (row, c) = string.column_action(col);
                out[(row, col)] += w * c;
            }
        }
        out
    }

    /// `H |ψ⟩` without densifying the operator.
    pub fn apply(&self, psi: &[Complex64]) -> Vec<Complex64> {
        let mut out = vec![Complex64::new(0.0, 0.0); psi.len()];
        for (coeff, string) in &self.terms {
            string.accumulate_apply(*coeff, psi, &mut out);
        }
        out
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        // Hermitian iff every effective coefficient (coeff x phase) is real,
        // assuming terms are distinct strings; fall back to the dense check
        // when duplicates might cancel.
        let mut seen = std::collections::HashSet::new();
        let mut duplicates = false;
        for (_, s) in &self.terms {
            let key: String = s.letters.iter().map(|l| l.as_char()).collect();
            duplicates |= !seen.insert(key);
        }
        if !duplicates {
            self.terms
                .iter()
                .all(|(c, s)| (*c * s.phase()).im.abs() <= tol)
        } else {
            crate::kernel::is_hermitian(&self.matrix(), tol)
        }
    }
}

/// Formats a list of `(coefficient, Pauli word)` pairs as `i(0.5 XI + 0.5 IX)`;
/// coefficients are rounded at 1e-9 for display.
pub fn format_pauli_combination(terms: &[(f64, String)]) -> String {
    let mut out = String::from("i(");
    let mut first = true;
    for (coeff, word) in terms {
        if coeff.abs() < 1e-9 {
            continue;
        }
        let rounded = (coeff * 1e9).round() / 1e9;
        if first {
            if rounded < 0.0 {
                out.push('-');
            }
        } else if rounded < 0.0 {
            out.push_str(" - ");
        } else {
            out.push_str(" + ");
        }
        let mag = rounded.abs();
        if (mag - 1.0).abs() > 1e-12 {
            let formatted = format!("{mag}");
            out.push_str(&formatted);
            out.push(' ');
        }
        out.push_str(word);
        first = false;
    }
    out.push(')');
    if first {
        "0".into()
    } else {
        out
    }
}
