use super::{apply_gate, apply_matrix_unchecked, Observable, Statevector};
use crate::error::{Error, Result};
use crate::gates::GateSpec;
use crate::kernel::CMat;
use num_complex::Complex64;
use std::sync::Arc;

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum Boundary {
    Open,
    Periodic,
}

/// A layered circuit of identical parameterized blocks on disjoint qubit
/// sets, with the bricklayer constructor alternating the pairing offset
/// between layers. Parameters are laid out layer-major, then block
/// left-to-right, then local index.
#[derive(Debug, Clone)]
pub struct BrickCircuit {
    pub n_qubits: usize,
    pub boundary: Boundary,
    layers: Vec<Vec<(Arc<GateSpec>, Vec<usize>)>>,
    param_count: usize,
}

impl BrickCircuit {
    /// Alternating-offset bricklayer of two-qubit blocks.
    pub fn bricklayer(
        n_qubits: usize,
        depth: usize,
        gate: GateSpec,
        boundary: Boundary,
    ) -> Self {
        assert!(n_qubits >= 2);
        assert_eq!(gate.qubit_span, 2, "bricklayer blocks act on qubit pairs");
        let gate = Arc::new(gate);
        let mut layers = Vec::with_capacity(depth);
        for l in 0..depth {
            let offset = l % 2;
            let mut blocks = Vec::new();
            let mut start = offset;
            loop {
                let a = start;
                let b = start + 1;
                match boundary {
                    Boundary::Open => {
                        if b >= n_qubits {
                            break;
                        }
                        blocks.push((gate.clone(), vec![a, b]));
                    }
                    Boundary::Periodic => {
                        if a >= n_qubits {
                            break;
                        }
                        blocks.push((gate.clone(), vec![a % n_qubits, b % n_qubits]));
                    }
                }
                start += 2;
            }
            layers.push(blocks);
        }
        let param_count = layers
            .iter()
            .map(|blocks| {
                blocks
                    .iter()
                    .map(|(g, _)| g.param_count())
                    .sum::<usize>()
            })
            .sum();
        Self {
            n_qubits,
            boundary,
            layers,
            param_count,
        }
    }

    /// A single placed gate; used for small fixtures and tests.
    pub fn single_gate(n_qubits: usize, gate: GateSpec, qubits: &[usize]) -> Self {
        let param_count = gate.param_count();
        Self {
            n_qubits,
            boundary: Boundary::Open,
            layers: vec![vec![(Arc::new(gate), qubits.to_vec())]],
            param_count,
        }
    }

    pub fn depth(&self) -> usize {
        self.layers.len()
    }

    pub fn param_count(&self) -> usize {
        self.param_count
    }

    pub fn blocks_in_layer(&self, layer: usize) -> &[(Arc<GateSpec>, Vec<usize>)] {
        &self.layers[layer]
    }

    fn check_len(&self, theta: &[f64]) -> Result<()> {
        if theta.len() != self.param_count {
            return Err(Error::ParamLengthMismatch {
                expected: self.param_count,
                got: theta.len(),
            });
        }
        Ok(())
    }

    /// Applies all layers in order to `psi0`.
    pub fn state(&self, theta: &[f64], psi0: &Statevector) -> Result<Statevector> {
        self.check_len(theta)?;
        let mut state = psi0.clone();
        let mut offset = 0;
        for blocks in &self.layers {
            for (gate, qubits) in blocks {
                let p = gate.param_count();
                let u = gate.unitary(&theta[offset..offset + p])?;
                apply_gate(&mut state, &u, qubits)?;
                offset += p;
            }
        }
        Ok(state)
    }

    /// Energy expectation `⟨ψ(θ)|H|ψ(θ)⟩`.
    pub fn expectation(
        &self,
        theta: &[f64],
        psi0: &Statevector,
        h: &Observable,
    ) -> Result<f64> {
        h.expectation(&self.state(theta, psi0)?)
    }

    /// Exact analytic gradient via effective generators and one
    /// forward/backward sweep: `∂_j E = 2 Re ⟨λ_l | Ω_j^{ emb } | ψ_{l-1}⟩`
    /// with `λ` pulled back through layer adjoints, so the total cost is
    /// O(depth) circuit applications independent of the parameter count.
    pub fn expectation_and_gradient(
        &self,
        theta: &[f64],
        psi0: &Statevector,
        h: &Observable,
    ) -> Result<(f64, Vec<f64>)> {
        self.check_len(theta)?;
        let depth = self.layers.len();

        // forward sweep, caching the state before each layer
        let mut states = Vec::with_capacity(depth + 1);
        states.push(psi0.clone());
        let mut offset = 0;
        let mut layer_ops: Vec<Vec<(CMat, Vec<CMat>, Vec<usize>)>> = Vec::with_capacity(depth);
        for blocks in &self.layers {
            let mut state = states.last().unwrap().clone();
            let mut ops = Vec::with_capacity(blocks.len());
            for (gate, qubits) in blocks {
                let p = gate.param_count();
                let (u, omegas) = gate.unitary_and_effective_generators(&theta[offset..offset + p])?;
                apply_gate(&mut state, &u, qubits)?;
                ops.push((u, omegas, qubits.clone()));
                offset += p;
            }
            layer_ops.push(ops);
            states.push(state);
        }

        let psi = states.last().unwrap();
        let energy = h.expectation(psi)?;

        // backward sweep
        let mut lambda = Statevector::from_amplitudes(self.n_qubits, h.apply(psi));
        let mut grad = vec![0.0f64; self.param_count];
        let mut grad_end = self.param_count;
        for l in (0..depth).rev() {
            // τ = U_l† λ
            for (u, _, qubits) in &layer_ops[l] {
                apply_matrix_unchecked(&mut lambda, &u.adjoint(), qubits)?;
            }
            let before = &states[l];
            let layer_params: usize = layer_ops[l].iter().map(|(_, o, _)| o.len()).sum();
            let mut block_offset = grad_end - layer_params;
            for (_, omegas, qubits) in &layer_ops[l] {
                let w = cross_matrix(&lambda, before, qubits, self.n_qubits);
                for (j, omega) in omegas.iter().enumerate() {
                    let mut acc = Complex64::new(0.0, 0.0);
                    for s in 0..omega.nrows() {
                        for t in 0..omega.ncols() {
                            acc += omega[(s, t)] * w[(s, t)];
                        }
                    }
                    grad[block_offset + j] = 2.0 * acc.re;
                }
                block_offset += omegas.len();
            }
            grad_end -= layer_params;
        }
        Ok((energy, grad))
    }
}

/// Cross matrix `W[s, t] = Σ_rest conj(τ[idx(s)]) ψ[idx(t)]` over the target
/// qubit patterns, so that `⟨τ|M^{emb}|ψ⟩ = Σ M[s,t] W[s,t]` for any block
/// matrix `M`.
fn cross_matrix(tau: &Statevector, psi: &Statevector, qubits: &[usize], n: usize) -> CMat {
    let k = qubits.len();
    let sub = 1usize << k;
    let shifts: Vec<usize> = qubits.iter().map(|&q| n - 1 - q).collect();
    let target_mask: usize = shifts.iter().map(|&s| 1usize << s).sum();
    let dim = 1usize << n;

    let mut w = CMat::zeros(sub, sub);
    let mut idx = vec![0usize; sub];
    let mut base = 0usize;
    loop {
        for pattern in 0..sub {
            let mut i = base;
            for (bit, &s) in shifts.iter().enumerate() {
                if (pattern >> (k - 1 - bit)) & 1 == 1 {
                    i |= 1 << s;
                }
            }
            idx[pattern] = i;
        }
        for s in 0..sub {
            let ts = tau.amplitudes()[idx[s]].conj();
            if ts == Complex64::new(0.0, 0.0) {
                continue;
            }
            for t in 0..sub {
                w[(s, t)] += ts * psi.amplitudes()[idx[t]];
            }
        }
        let mut next = (base | target_mask) + 1;
        next &= !target_mask;
        if next >= dim {
            break;
        }
        base = next;
    }
    w
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gates::{gate_catalog, equivariant_catalog};
    use crate::pauli::{PauliString, PauliSum};
    use crate::sim::{initial_state, total_spin_observable, InitialState};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn zero_parameters_preserve_the_input() {
        let gate = gate_catalog("su4/u3").unwrap();
        let circuit = BrickCircuit::bricklayer(4, 3, gate, Boundary::Periodic);
        let psi0 = initial_state(InitialState::HaarRandom(2), 4).unwrap();
        let out = circuit
            .state(&vec![0.0; circuit.param_count()], &psi0)
            .unwrap();
        for (a, b) in out.amplitudes().iter().zip(psi0.amplitudes().iter()) {
            assert!((a - b).norm() < 1e-12);
        }
    }

    #[test]
    fn block_counts_respect_boundary() {
        let gate = gate_catalog("su4/u3").unwrap();
        let periodic = BrickCircuit::bricklayer(8, 2, gate.clone(), Boundary::Periodic);
        assert_eq!(periodic.blocks_in_layer(0).len(), 4);
        assert_eq!(periodic.blocks_in_layer(1).len(), 4);
        assert_eq!(periodic.blocks_in_layer(1)[3].1, vec![7, 0]);
        let open = BrickCircuit::bricklayer(8, 2, gate, Boundary::Open);
        assert_eq!(open.blocks_in_layer(0).len(), 4);
        assert_eq!(open.blocks_in_layer(1).len(), 3);
    }

    #[test]
    fn single_block_matches_dense_gate() {
        let gate = gate_catalog("su4/u3").unwrap();
        let theta: Vec<f64> = vec![0.1, -0.2, 0.3, 0.05, -0.15, 0.2];
        let u = gate.unitary(&theta).unwrap();
        let circuit = BrickCircuit::single_gate(2, gate, &[0, 1]);
        let psi0 = initial_state(InitialState::Zeros, 2).unwrap();
        let out = circuit.state(&theta, &psi0).unwrap();
        for (i, a) in out.amplitudes().iter().enumerate() {
            assert!((a - u[(i, 0)]).norm() < 1e-12);
        }
    }

    #[test]
    fn norm_preserved_through_deep_circuits() {
        let gate = gate_catalog("su4/su2-spin-half").unwrap();
        let circuit = BrickCircuit::bricklayer(6, 6, gate, Boundary::Periodic);
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let theta: Vec<f64> = (0..circuit.param_count())
            .map(|_| rng.gen_range(-0.5..0.5))
            .collect();
        let psi0 = initial_state(InitialState::HaarRandom(1), 6).unwrap();
        let out = circuit.state(&theta, &psi0).unwrap();
        assert!((out.norm() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn gradient_matches_finite_differences_across_gate_kinds() {
        let mut rng = ChaCha8Rng::seed_from_u64(77);
        let h = {
            let mut sum = PauliSum::new(4);
            for (c, w) in [(0.7, "ZZII"), (-0.4, "IXXI"), (0.25, "YIIY"), (0.5, "ZIZI")] {
                sum.add(Complex64::new(c, 0.0), PauliString::parse(w).unwrap());
            }
            Observable::Paulis(sum)
        };
        for id in ["su4/su2-spin-half", "su4/u3", "su4/full"] {
            let gate = gate_catalog(id).unwrap();
            let circuit = BrickCircuit::bricklayer(4, 2, gate, Boundary::Periodic);
            check_fd(&circuit, &h, &mut rng, id);
        }
        let eq = equivariant_catalog("su4/su2-spin-half").unwrap();
        let circuit = BrickCircuit::bricklayer(4, 2, eq, Boundary::Periodic);
        check_fd(&circuit, &h, &mut rng, "equivariant");
        let kak = crate::gates::kak_catalog("su4/su2xsu2").unwrap();
        let circuit = BrickCircuit::bricklayer(4, 2, kak, Boundary::Periodic);
        check_fd(&circuit, &h, &mut rng, "kak");
    }

    fn check_fd(circuit: &BrickCircuit, h: &Observable, rng: &mut ChaCha8Rng, label: &str) {
        let psi0 = initial_state(InitialState::HaarRandom(11), 4).unwrap();
        let theta: Vec<f64> = (0..circuit.param_count())
            .map(|_| rng.gen_range(-0.4..0.4))
            .collect();
        let (_, grad) = circuit.expectation_and_gradient(&theta, &psi0, h).unwrap();
        let step = 1e-5;
        let scale = grad.iter().map(|g| g.abs()).fold(1e-8, f64::max);
        for j in 0..theta.len() {
            let mut plus = theta.clone();
            plus[j] += step;
            let mut minus = theta.clone();
            minus[j] -= step;
            let fd = (circuit.expectation(&plus, &psi0, h).unwrap()
                - circuit.expectation(&minus, &psi0, h).unwrap())
                / (2.0 * step);
            let rel = (grad[j] - fd).abs() / scale;
            assert!(rel < 1e-6, "{label}: param {j} rel error {rel:.3e}");
        }
    }

    #[test]
    fn bloch_gate_analytic_gradient() {
        // E(t) = ⟨0| U† Z U |0⟩ = cos(2t) for U = exp(i t X), so dE/dt = -2 sin(2t)
        let gate = gate_catalog("bloch").unwrap();
        let circuit = BrickCircuit::single_gate(1, gate, &[0]);
        let mut sum = PauliSum::new(1);
        sum.add(Complex64::new(1.0, 0.0), PauliString::parse("Z").unwrap());
        let h = Observable::Paulis(sum);
        let psi0 = initial_state(InitialState::Zeros, 1).unwrap();
        for t in [0.2, 0.9, -0.6] {
            let (e, grad) = circuit
                .expectation_and_gradient(&[t, 0.0], &psi0, &h)
                .unwrap();
            assert!((e - (2.0 * t).cos()).abs() < 1e-12);
            assert!((grad[0] + 2.0 * (2.0 * t).sin()).abs() < 1e-11);
        }
    }

    #[test]
    fn stationary_gradient_for_commuting_hamiltonian() {
        // at θ = 0 every direction with H commuting with the generators is flat
        let gate = equivariant_catalog("su4/su2-spin-half").unwrap();
        let circuit = BrickCircuit::bricklayer(4, 2, gate, Boundary::Periodic);
        let h = total_spin_observable(4);
        let psi0 = initial_state(InitialState::Zeros, 4).unwrap();
        let (_, grad) = circuit
            .expectation_and_gradient(&vec![0.0; circuit.param_count()], &psi0, &h)
            .unwrap();
        for g in grad {
            assert!(g.abs() < 1e-10);
        }
    }

    #[test]
    fn equivariant_circuit_preserves_total_spin() {
        let gate = equivariant_catalog("su4/su2-spin-half").unwrap();
        let circuit = BrickCircuit::bricklayer(4, 3, gate, Boundary::Periodic);
        let s2 = total_spin_observable(4);
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        for trial in 0..5 {
            let psi0 = initial_state(InitialState::HaarRandom(trial), 4).unwrap();
            let before = s2.expectation(&psi0).unwrap();
            let theta: Vec<f64> = (0..circuit.param_count())
                .map(|_| rng.gen_range(-1.0..1.0))
                .collect();
            let out = circuit.state(&theta, &psi0).unwrap();
            let after = s2.expectation(&out).unwrap();
            assert!((before - after).abs() < 1e-9, "ΔS² = {:.2e}", before - after);
        }
    }
}
