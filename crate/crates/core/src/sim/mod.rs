//! Dense statevector engine: gate application by tensor contraction on the
//! targeted qubit axes, initial-state constructors, observables, and exact
//! analytic gradients for bricklayer circuits.

mod circuit;
mod observable;

pub use circuit::{BrickCircuit, Boundary};
pub use observable::{total_spin_observable, Observable};

use crate::error::{Error, Result};
use crate::kernel::{unitarity_residual, CMat};
use num_complex::Complex64;
use rand::SeedableRng;
use rand_distr::{Distribution, StandardNormal};

/// A normalized state of `n_qubits` qubits; qubit 0 is the most significant
/// bit of the amplitude index (leftmost tensor factor).
#[derive(Debug, Clone)]
pub struct Statevector {
    n_qubits: usize,
    amps: Vec<Complex64>,
}

impl Statevector {
    pub fn from_amplitudes(n_qubits: usize, amps: Vec<Complex64>) -> Self {
        assert_eq!(amps.len(), 1 << n_qubits);
        Self { n_qubits, amps }
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn inner(&self, other: &Statevector) -> Complex64 {
        self.amps
            .iter()
            .zip(other.amps.iter())
            .map(|(a, b)| a.conj() * b)
            .sum()
    }
}

/// Initial-state constructors.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub enum InitialState {
    /// `|0...0>`
    Zeros,
    /// Pairwise singlets `(|01> - |10>)/sqrt(2)` on qubits (0,1), (2,3), ...
    BellSingletProduct,
    /// Pairwise triplets `(|01> + |10>)/sqrt(2)`.
    BellTripletProduct,
    /// Normalized complex Gaussian vector from a seeded generator.
    HaarRandom(u64),
}

pub fn initial_state(kind: InitialState, n_qubits: usize) -> Result<Statevector> {
    let dim = 1usize << n_qubits;
    match kind {
        InitialState::Zeros => {
            let mut amps = vec![Complex64::new(0.0, 0.0); dim];
            amps[0] = Complex64::new(1.0, 0.0);
            Ok(Statevector::from_amplitudes(n_qubits, amps))
        }
        InitialState::BellSingletProduct | InitialState::BellTripletProduct => {
            if n_qubits % 2 != 0 {
                return Err(Error::OddQubits(n_qubits));
            }
            let sign = if kind == InitialState::BellSingletProduct {
                -1.0
            } else {
                1.0
            };
            let pairs = n_qubits / 2;
            let coeff = (1.0f64 / 2.0f64).sqrt().powi(pairs as i32);
            let mut amps = vec![Complex64::new(0.0, 0.0); dim];
            for idx in 0..dim {
                let mut weight = 1.0;
                let mut valid = true;
                for p in 0..pairs {
                    let hi = (idx >> (n_qubits - 1 - 2 * p)) & 1;
                    let lo = (idx >> (n_qubits - 2 - 2 * p)) & 1;
                    match (hi, lo) {
                        (0, 1) => {}
                        (1, 0) => weight *= sign,
                        _ => {
                            valid = false;
                            break;
                        }
                    }
                }
                if valid {
                    amps[idx] = Complex64::new(weight * coeff, 0.0);
                }
            }
            Ok(Statevector::from_amplitudes(n_qubits, amps))
        }
        InitialState::HaarRandom(seed) => {
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let normal = StandardNormal;
            let mut amps: Vec<Complex64> = (0..dim)
                .map(|_| Complex64::new(normal.sample(&mut rng), normal.sample(&mut rng)))
                .collect();
            let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
            for a in &mut amps {
                *a /= Complex64::new(norm, 0.0);
            }
            Ok(Statevector::from_amplitudes(n_qubits, amps))
        }
    }
}

/// Applies a dense `2^k x 2^k` unitary to the listed qubits.
pub fn apply_gate(state: &mut Statevector, u: &CMat, qubits: &[usize]) -> Result<()> {
    let residual = unitarity_residual(u);
    if residual > 1e-9 * (u.nrows() as f64) {
        return Err(Error::NonUnitary {
            residual,
            tol: 1e-9,
        });
    }
    apply_matrix_unchecked(state, u, qubits)
}

/// Same contraction without the unitarity check; used for algebra elements
/// (effective generators) during gradient assembly.
pub fn apply_matrix_unchecked(state: &mut Statevector, u: &CMat, qubits: &[usize]) -> Result<()> {
    let n = state.n_qubits;
    let k = qubits.len();
    assert_eq!(u.nrows(), 1 << k);
    let mut seen = std::collections::HashSet::new();
    for &q in qubits {
        if q >= n {
            return Err(Error::QubitRange {
                qubit: q,
                n_qubits: n,
            });
        }
        if !seen.insert(q) {
            return Err(Error::QubitRange {
                qubit: q,
                n_qubits: n,
            });
        }
    }

    // bit position (from the least significant end) of each target qubit
    let shifts: Vec<usize> = qubits.iter().map(|&q| n - 1 - q).collect();
    let target_mask: usize = shifts.iter().map(|&s| 1usize << s).sum();
    let dim = 1usize << n;
    let sub = 1usize << k;

    let mut gathered = vec![Complex64::new(0.0, 0.0); sub];
    let mut base = 0usize;
    loop {
        // gather amplitudes for every pattern of the target bits
        for pattern in 0..sub {
            let mut idx = base;
            for (bit, &s) in shifts.iter().enumerate() {
                if (pattern >> (k - 1 - bit)) & 1 == 1 {
                    idx |= 1 << s;
                }
            }
            gathered[pattern] = state.amps[idx];
        }
        for (row, amp_out) in (0..sub).map(|r| {
            let mut acc = Complex64::new(0.0, 0.0);
            for col in 0..sub {
                acc += u[(r, col)] * gathered[col];
            }
            (r, acc)
        }) {
            let mut idx = base;
            for (bit, &s) in shifts.iter().enumerate() {
                if (row >> (k - 1 - bit)) & 1 == 1 {
                    idx |= 1 << s;
                }
            }
            state.amps[idx] = amp_out;
        }
        // advance `base` over the non-target bits
        let mut next = (base | target_mask) + 1;
        next &= !target_mask;
        if next >= dim {
            break;
        }
        base = next;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gates::cnot;
    use crate::kernel::{identity, kron};

    #[test]
    fn identity_leaves_state_unchanged() {
        let mut s = initial_state(InitialState::HaarRandom(3), 3).unwrap();
        let before = s.amps.clone();
        apply_gate(&mut s, &identity(4), &[0, 2]).unwrap();
        for (a, b) in s.amps.iter().zip(before.iter()) {
            assert!((a - b).norm() < 1e-14);
        }
    }

    #[test]
    fn cnot_on_10_gives_11() {
        let mut amps = vec![Complex64::new(0.0, 0.0); 4];
        amps[0b10] = Complex64::new(1.0, 0.0);
        let mut s = Statevector::from_amplitudes(2, amps);
        apply_gate(&mut s, &cnot(0, 1), &[0, 1]).unwrap();
        assert!((s.amps[0b11].re - 1.0).abs() < 1e-14);
    }

    #[test]
    fn embedded_application_matches_dense_kron() {
        // apply a random 2-qubit unitary on qubits (1, 2) of 3 and compare
        // against the dense I ⊗ U action
        let gen = crate::catalog::ip("XY").scale(0.3)
            + crate::catalog::ip("ZI").scale(0.2)
            + crate::catalog::ip("YZ").scale(-0.4);
        let u = crate::kernel::expm_skew(&gen).unwrap();
        let mut s = initial_state(InitialState::HaarRandom(9), 3).unwrap();
        let dense = kron(&identity(2), &u);
        let expect: Vec<Complex64> = {
            let m = &dense
                * nalgebra::DVector::from_column_slice(s.amplitudes());
            m.iter().cloned().collect()
        };
        apply_gate(&mut s, &u, &[1, 2]).unwrap();
        for (a, b) in s.amps.iter().zip(expect.iter()) {
            assert!((a - b).norm() < 1e-12);
        }
        assert!((s.norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn reversed_qubit_order_swaps_roles() {
        // CNOT with control=1, target=0 applied as qubits [1, 0] equals
        // cnot(0, 1) on qubits [0, 1] with the wires relabeled
        let mut a = initial_state(InitialState::HaarRandom(5), 2).unwrap();
        let mut b = a.clone();
        apply_gate(&mut a, &cnot(0, 1), &[1, 0]).unwrap();
        apply_gate(&mut b, &cnot(1, 0), &[0, 1]).unwrap();
        for (x, y) in a.amps.iter().zip(b.amps.iter()) {
            assert!((x - y).norm() < 1e-14);
        }
    }

    #[test]
    fn qubit_range_and_unitarity_errors() {
        let mut s = initial_state(InitialState::Zeros, 2).unwrap();
        assert!(matches!(
            apply_gate(&mut s, &identity(2), &[5]),
            Err(Error::QubitRange { .. })
        ));
        let bad = identity(2).scale(2.0);
        assert!(matches!(
            apply_gate(&mut s, &bad, &[0]),
            Err(Error::NonUnitary { .. })
        ));
    }

    #[test]
    fn bell_product_states() {
        let s = initial_state(InitialState::BellSingletProduct, 2).unwrap();
        let r = 0.5f64.sqrt();
        assert!((s.amps[0b01].re - r).abs() < 1e-14);
        assert!((s.amps[0b10].re + r).abs() < 1e-14);
        assert!(s.amps[0b00].norm() < 1e-14 && s.amps[0b11].norm() < 1e-14);

        let t = initial_state(InitialState::BellTripletProduct, 4).unwrap();
        assert!((t.norm() - 1.0).abs() < 1e-13);
        assert!((t.amps[0b0101].re - 0.5).abs() < 1e-13);
        assert!((t.amps[0b1010].re - 0.5).abs() < 1e-13);

        assert!(matches!(
            initial_state(InitialState::BellSingletProduct, 3),
            Err(Error::OddQubits(3))
        ));
    }

    #[test]
    fn haar_random_is_seeded_and_normalized() {
        let a = initial_state(InitialState::HaarRandom(42), 4).unwrap();
        let b = initial_state(InitialState::HaarRandom(42), 4).unwrap();
        assert_eq!(a.amplitudes(), b.amplitudes());
        assert!((a.norm() - 1.0).abs() < 1e-12);
        let c = initial_state(InitialState::HaarRandom(43), 4).unwrap();
        assert!(a.inner(&c).norm() < 0.99);
    }
}
