use super::Statevector;
use crate::error::{Error, Result};
use crate::kernel::{hermiticity_residual, CMat};
use crate::pauli::{PauliLetter, PauliString, PauliSum};
use num_complex::Complex64;

/// A Hermitian observable: either a weighted Pauli sum or a dense matrix.
#[derive(Debug, Clone)]
pub enum Observable {
    Paulis(PauliSum),
    Dense(CMat),
}

impl Observable {
    pub fn n_qubits(&self) -> usize {
        match self {
            Observable::Paulis(p) => p.n_qubits,
            Observable::Dense(m) => m.nrows().trailing_zeros() as usize,
        }
    }

    pub fn check_hermitian(&self, tol: f64) -> Result<()> {
        let ok = match self {
            Observable::Paulis(p) => p.is_hermitian(tol),
            Observable::Dense(m) => hermiticity_residual(m) <= tol,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::NotHermitian {
                residual: f64::NAN,
                tol,
            })
        }
    }

    pub fn dense(&self) -> CMat {
        match self {
            Observable::Paulis(p) => p.matrix(),
            Observable::Dense(m) => m.clone(),
        }
    }

    /// `H |ψ⟩` as a raw amplitude vector.
    pub fn apply(&self, state: &Statevector) -> Vec<Complex64> {
        match self {
            Observable::Paulis(p) => p.apply(state.amplitudes()),
            Observable::Dense(m) => {
                let v = nalgebra::DVector::from_column_slice(state.amplitudes());
                (m * v).iter().cloned().collect()
            }
        }
    }

    /// `⟨ψ|H|ψ⟩`; fails when the imaginary part survives the Hermiticity
    /// tolerance.
    pub fn expectation(&self, state: &Statevector) -> Result<f64> {
        let hv = self.apply(state);
        let val: Complex64 = state
            .amplitudes()
            .iter()
            .zip(hv.iter())
            .map(|(a, b)| a.conj() * b)
            .sum();
        if val.im.abs() > 1e-10 * val.re.abs().max(1.0) {
            return Err(Error::NotHermitian {
                residual: val.im.abs(),
                tol: 1e-10,
            });
        }
        Ok(val.re)
    }
}

/// Total-spin observable `S² = Σ_α (Σ_i σ_i^α)²` as a Pauli sum:
/// `3 n · I + 2 Σ_{i<j} Σ_α σ_i^α σ_j^α`.
pub fn total_spin_observable(n_qubits: usize) -> Observable {
    assert!(n_qubits >= 1);
    let mut sum = PauliSum::new(n_qubits);
    sum.add(
        Complex64::new(3.0 * n_qubits as f64, 0.0),
        PauliString::identity(n_qubits),
    );
    for i in 0..n_qubits {
        for j in (i + 1)..n_qubits {
            for axis in [PauliLetter::X, PauliLetter::Y, PauliLetter::Z] {
                sum.add(
                    Complex64::new(2.0, 0.0),
                    PauliString::two_site(n_qubits, i, j, axis, axis),
                );
            }
        }
    }
    Observable::Paulis(sum)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sim::{initial_state, InitialState};

    #[test]
    fn z_expectation_on_zero_state() {
        let mut sum = PauliSum::new(1);
        sum.add(Complex64::new(1.0, 0.0), PauliString::parse("Z").unwrap());
        let obs = Observable::Paulis(sum);
        let s = initial_state(InitialState::Zeros, 1).unwrap();
        assert!((obs.expectation(&s).unwrap() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn total_spin_values() {
        // single qubit: S² = 3 I
        let s1 = initial_state(InitialState::Zeros, 1).unwrap();
        assert!((total_spin_observable(1).expectation(&s1).unwrap() - 3.0).abs() < 1e-12);

        // two qubits: singlet 0, triplet 8
        let singlet = initial_state(InitialState::BellSingletProduct, 2).unwrap();
        assert!(total_spin_observable(2).expectation(&singlet).unwrap().abs() < 1e-12);
        let triplet = initial_state(InitialState::BellTripletProduct, 2).unwrap();
        assert!((total_spin_observable(2).expectation(&triplet).unwrap() - 8.0).abs() < 1e-12);

        // |0...0> on 8 qubits: n² + 2n = 80
        let z8 = initial_state(InitialState::Zeros, 8).unwrap();
        assert!((total_spin_observable(8).expectation(&z8).unwrap() - 80.0).abs() < 1e-10);

        // singlet product on 8 qubits has total spin zero
        let s8 = initial_state(InitialState::BellSingletProduct, 8).unwrap();
        assert!(total_spin_observable(8).expectation(&s8).unwrap().abs() < 1e-10);
    }

    #[test]
    fn dense_and_pauli_agree() {
        let obs = total_spin_observable(3);
        let dense = Observable::Dense(obs.dense());
        let s = initial_state(InitialState::HaarRandom(7), 3).unwrap();
        let a = obs.expectation(&s).unwrap();
        let b = dense.expectation(&s).unwrap();
        assert!((a - b).abs() < 1e-10);
    }
}
