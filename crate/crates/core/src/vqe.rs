//! Hamiltonian builders, the exact-diagonalization oracle, gradient-based
//! optimization loops, and paired-run experiment records.

use crate::error::{Error, Result};
use crate::kernel::{herm_eig, CMat};
use crate::pauli::{PauliLetter, PauliString, PauliSum};
use crate::sim::{initial_state, Boundary, BrickCircuit, InitialState, Observable, Statevector};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum HamiltonianKind {
    HeisenbergUniform,
    HeisenbergRandom { seed: u64 },
    Gue { seed: u64 },
    Goe { seed: u64 },
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct HamiltonianSpec {
    pub kind: HamiltonianKind,
    pub n_qubits: usize,
    pub boundary: Boundary,
}

impl HamiltonianSpec {
    pub fn describe(&self) -> String {
        let b = match self.boundary {
            Boundary::Open => "open",
            Boundary::Periodic => "periodic",
        };
        match self.kind {
            HamiltonianKind::HeisenbergUniform => {
                format!("heisenberg_uniform(n={}, {b})", self.n_qubits)
            }
            HamiltonianKind::HeisenbergRandom { seed } => {
                format!("heisenberg_random(n={}, {b}, seed={seed})", self.n_qubits)
            }
            HamiltonianKind::Gue { seed } => format!("gue(n={}, seed={seed})", self.n_qubits),
            HamiltonianKind::Goe { seed } => format!("goe(n={}, seed={seed})", self.n_qubits),
        }
    }
}

/// Builds the observable for a Hamiltonian specification. Heisenberg kinds
/// expand to Pauli sums with coefficient `h_i/4` per bond per axis; the
/// random-matrix kinds produce dense Hermitian (GUE) or real symmetric (GOE)
/// matrices from a seeded generator.
pub fn build_hamiltonian(spec: &HamiltonianSpec) -> Result<Observable> {
    let n = spec.n_qubits;
    if n < 2 {
        return Err(Error::TooFewQubits(n));
    }
    match spec.kind {
        HamiltonianKind::HeisenbergUniform => {
            Ok(Observable::Paulis(heisenberg(n, spec.boundary, |_| 1.0)))
        }
        HamiltonianKind::HeisenbergRandom { seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let bonds = bond_count(n, spec.boundary);
            let couplings: Vec<f64> = (0..bonds)
                .map(|_| StandardNormal.sample(&mut rng))
                .collect();
            Ok(Observable::Paulis(heisenberg(n, spec.boundary, |b| {
                couplings[b]
            })))
        }
        HamiltonianKind::Gue { seed } => {
            let dim = 1usize << n;
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let a = CMat::from_fn(dim, dim, |_, _| {
                Complex64::new(
                    StandardNormal.sample(&mut rng),
                    StandardNormal.sample(&mut rng),
                )
            });
            Ok(Observable::Dense((&a + a.adjoint()).scale(0.5)))
        }
        HamiltonianKind::Goe { seed } => {
            let dim = 1usize << n;
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let a = CMat::from_fn(dim, dim, |_, _| {
                Complex64::new(StandardNormal.sample(&mut rng), 0.0)
            });
            Ok(Observable::Dense((&a + a.transpose()).scale(0.5)))
        }
    }
}

fn bond_count(n: usize, boundary: Boundary) -> usize {
    match boundary {
        Boundary::Open => n - 1,
        Boundary::Periodic => n,
    }
}

fn heisenberg(n: usize, boundary: Boundary, coupling: impl Fn(usize) -> f64) -> PauliSum {
    let mut sum = PauliSum::new(n);
    for b in 0..bond_count(n, boundary) {
        let (i, j) = (b, (b + 1) % n);
        let w = coupling(b) / 4.0;
        for axis in [PauliLetter::X, PauliLetter::Y, PauliLetter::Z] {
            sum.add(
                Complex64::new(w, 0.0),
                PauliString::two_site(n, i, j, axis, axis),
            );
        }
    }
    sum
}

/// Extreme eigenvalues and a ground eigenvector via dense diagonalization.
pub fn exact_ground_energy(h: &Observable) -> Result<(f64, f64, Statevector)> {
    let dense = h.dense();
    let n_qubits = dense.nrows().trailing_zeros() as usize;
    let (vals, vecs) = herm_eig(&dense, 1e-8)?;
    let ground = vecs.column(0).iter().cloned().collect::<Vec<_>>();
    Ok((
        vals[0],
        vals[vals.len() - 1],
        Statevector::from_amplitudes(n_qubits, ground),
    ))
}

/// Normalized energy `Ē = (E - E_min) / (E_max - E_min)`.
pub fn relative_error(e: f64, e_min: f64, e_max: f64) -> Result<f64> {
    let width = e_max - e_min;
    if width < 1e-9 {
        return Err(Error::DegenerateSpectrum { width });
    }
    Ok((e - e_min) / width)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum OptimizerKind {
    GradientDescent,
    Adam,
    /// Limited-memory BFGS with Armijo backtracking; `learning_rate` caps
    /// the initial trial step.
    Lbfgs,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct OptimizerConfig {
    pub algorithm: OptimizerKind,
    pub learning_rate: f64,
    pub max_iters: usize,
    pub beta1: f64,
    pub beta2: f64,
    pub epsilon: f64,
    /// Scale of the seeded normal perturbation added to the zero
    /// initialization, breaking the θ = 0 stationary point.
    pub init_scale: f64,
    pub init_seed: u64,
    /// Multiplicative per-iteration decay of the learning rate (1.0 = none).
    pub lr_decay: f64,
    /// Iteration at which the decay schedule starts.
    pub lr_decay_after: usize,
    /// Number of initial iterations run with plain Adam before switching to
    /// the configured algorithm (only meaningful for Lbfgs).
    pub warmup_iters: usize,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        Self {
            algorithm: OptimizerKind::Adam,
            learning_rate: 0.05,
            max_iters: 500,
            beta1: 0.9,
            beta2: 0.999,
            epsilon: 1e-8,
            init_scale: 1e-3,
            init_seed: 0,
            lr_decay: 1.0,
            lr_decay_after: 0,
            warmup_iters: 0,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct IterationRecord {
    pub iter: usize,
    pub energy: f64,
    pub delta_e: f64,
    pub s2: Option<f64>,
    pub grad_norm: f64,
}

/// Configuration echo stored in every run artifact.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunSetup {
    pub hamiltonian: String,
    pub gate: String,
    pub n_qubits: usize,
    pub depth: usize,
    pub boundary: Boundary,
    pub initial_state: InitialState,
    pub optimizer: OptimizerConfig,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunRecord {
    pub setup: RunSetup,
    pub e_ground: f64,
    pub e_max: f64,
    pub trajectory: Vec<IterationRecord>,
    pub final_theta: Vec<f64>,
    pub wall_time_s: f64,
}

impl RunRecord {
    pub fn final_energy(&self) -> f64 {
        self.trajectory.last().map(|r| r.energy).unwrap_or(f64::NAN)
    }

    pub fn final_delta_e(&self) -> f64 {
        self.trajectory.last().map(|r| r.delta_e).unwrap_or(f64::NAN)
    }

    pub fn best_delta_e(&self) -> f64 {
        self.trajectory
            .iter()
            .map(|r| r.delta_e)
            .fold(f64::INFINITY, f64::min)
    }

    pub fn final_relative_error(&self) -> Result<f64> {
        relative_error(self.final_energy(), self.e_ground, self.e_max)
    }

    /// Trajectory as CSV with the stable header
    /// `iter,energy,delta_e,s2,grad_norm`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("iter,energy,delta_e,s2,grad_norm\n");
        for r in &self.trajectory {
            let s2 = r.s2.map(|v| v.to_string()).unwrap_or_default();
            out.push_str(&format!(
                "{},{},{},{},{}\n",
                r.iter, r.energy, r.delta_e, s2, r.grad_norm
            ));
        }
        out
    }
}

/// Runs the optimization loop: exact gradients, Adam or plain gradient
/// descent, trajectory recording, stop at `max_iters` or when the gradient
/// norm drops below 1e-8. Deterministic for fixed seeds.
pub fn run_vqe(
    hamiltonian: &Observable,
    circuit: &BrickCircuit,
    psi0_kind: InitialState,
    opt: &OptimizerConfig,
    track_spin: bool,
    setup: RunSetup,
) -> Result<RunRecord> {
    let start = std::time::Instant::now();
    let (e_ground, e_max, _) = exact_ground_energy(hamiltonian)?;
    let psi0 = initial_state(psi0_kind, circuit.n_qubits)?;
    let s2_obs = track_spin.then(|| crate::sim::total_spin_observable(circuit.n_qubits));

    let mut rng = ChaCha8Rng::seed_from_u64(opt.init_seed);
    let mut theta: Vec<f64> = (0..circuit.param_count())
        .map(|_| {
            let z: f64 = StandardNormal.sample(&mut rng);
            z * opt.init_scale
        })
        .collect();

    let mut adam_m = vec![0.0f64; theta.len()];
    let mut adam_v = vec![0.0f64; theta.len()];
    let mut lbfgs: Vec<(Vec<f64>, Vec<f64>)> = Vec::new();
    let mut prev_point: Option<(Vec<f64>, Vec<f64>)> = None;
    const LBFGS_MEMORY: usize = 12;
    let mut trajectory = Vec::with_capacity(opt.max_iters);

    for iter in 0..opt.max_iters {
        let (energy, grad) = circuit.expectation_and_gradient(&theta, &psi0, hamiltonian)?;
        let grad_norm = grad.iter().map(|g| g * g).sum::<f64>().sqrt();
        let s2 = match &s2_obs {
            Some(obs) => Some(obs.expectation(&circuit.state(&theta, &psi0)?)?),
            None => None,
        };
        trajectory.push(IterationRecord {
            iter,
            energy,
            delta_e: energy - e_ground,
            s2,
            grad_norm,
        });
        if grad_norm < 1e-8 {
            break;
        }
        let lr = opt.learning_rate
            * opt
                .lr_decay
                .powi(iter.saturating_sub(opt.lr_decay_after) as i32);
        let algorithm = if iter < opt.warmup_iters && opt.algorithm == OptimizerKind::Lbfgs {
            OptimizerKind::Adam
        } else {
            opt.algorithm
        };
        if iter == opt.warmup_iters && opt.algorithm == OptimizerKind::Lbfgs {
            lbfgs.clear();
            prev_point = None;
        }
        match algorithm {
            OptimizerKind::GradientDescent => {
                for (t, g) in theta.iter_mut().zip(grad.iter()) {
                    *t -= lr * g;
                }
            }
            OptimizerKind::Adam => {
                let step = iter as f64 + 1.0;
                for j in 0..theta.len() {
                    adam_m[j] = opt.beta1 * adam_m[j] + (1.0 - opt.beta1) * grad[j];
                    adam_v[j] = opt.beta2 * adam_v[j] + (1.0 - opt.beta2) * grad[j] * grad[j];
                    let m_hat = adam_m[j] / (1.0 - opt.beta1.powf(step));
                    let v_hat = adam_v[j] / (1.0 - opt.beta2.powf(step));
                    theta[j] -= lr * m_hat / (v_hat.sqrt() + opt.epsilon);
                }
            }
            OptimizerKind::Lbfgs => {
                if let Some((theta_prev, grad_prev)) = prev_point.take() {
                    let s: Vec<f64> = theta
                        .iter()
                        .zip(theta_prev.iter())
                        .map(|(a, b)| a - b)
                        .collect();
                    let y: Vec<f64> = grad
                        .iter()
                        .zip(grad_prev.iter())
                        .map(|(a, b)| a - b)
                        .collect();
                    if dot(&s, &y) > 1e-12 {
                        lbfgs.push((s, y));
                        if lbfgs.len() > LBFGS_MEMORY {
                            lbfgs.remove(0);
                        }
                    }
                }
                let direction = lbfgs_direction(&grad, &lbfgs);
                let slope = dot(&direction, &grad);
                let (direction, slope) = if slope < 0.0 {
                    (direction, slope)
                } else {
                    (grad.iter().map(|g| -g).collect(), -grad_norm * grad_norm)
                };
                // strong-Wolfe line search from the quasi-Newton unit step;
                // the very first step is a plain gradient step scaled by the
                // learning rate
                let step0 = if lbfgs.is_empty() {
                    (lr / grad_norm.max(1e-12)).min(1.0)
                } else {
                    1.0
                };
                let eval = |alpha: f64| -> Result<(f64, Vec<f64>, Vec<f64>)> {
                    let trial: Vec<f64> = theta
                        .iter()
                        .zip(direction.iter())
                        .map(|(t, d)| t + alpha * d)
                        .collect();
                    let (e, g) = circuit.expectation_and_gradient(&trial, &psi0, hamiltonian)?;
                    Ok((e, g, trial))
                };
                let mut accepted: Option<Vec<f64>> = None;
                let mut alpha = step0;
                let (c1, c2) = (1e-4, 0.9);
                for _ in 0..25 {
                    let (e_trial, g_trial, trial) = eval(alpha)?;
                    if e_trial > energy + c1 * alpha * slope {
                        alpha *= 0.5;
                        continue;
                    }
                    let slope_trial = dot(&g_trial, &direction);
                    if slope_trial.abs() <= c2 * slope.abs() || alpha >= 8.0 * step0 {
                        accepted = Some(trial);
                        break;
                    }
                    if slope_trial < 0.0 {
                        // still descending: lengthen while Armijo holds
                        let longer = alpha * 2.0;
                        let (e_longer, _, _) = eval(longer)?;
                        if e_longer <= energy + c1 * longer * slope {
                            alpha = longer;
                            continue;
                        }
                    }
                    accepted = Some(trial);
                    break;
                }
                match accepted {
                    Some(trial) => {
                        prev_point = Some((theta.clone(), grad.clone()));
                        theta = trial;
                    }
                    None => {
                        // stuck: clear memory and take a tiny gradient step
                        lbfgs.clear();
                        prev_point = Some((theta.clone(), grad.clone()));
                        for (t, g) in theta.iter_mut().zip(grad.iter()) {
                            *t -= 1e-4 * g;
                        }
                    }
                }
            }
        }
    }

    Ok(RunRecord {
        setup,
        e_ground,
        e_max,
        trajectory,
        final_theta: theta,
        wall_time_s: start.elapsed().as_secs_f64(),
    })
}

/// Result of a paired A/B experiment on the same Hamiltonian and layout.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ComparisonRecord {
    pub run_a: RunRecord,
    pub run_b: RunRecord,
    /// `Ē_A - Ē_B` at the final iteration.
    pub delta_relative_error_final: f64,
}

/// Runs two gate configurations against the same Hamiltonian and reports the
/// signed difference of their final normalized energies.
pub fn compare_experiment(
    hamiltonian: &Observable,
    circuit_a: &BrickCircuit,
    circuit_b: &BrickCircuit,
    psi0_kind: InitialState,
    opt: &OptimizerConfig,
    setup_a: RunSetup,
    setup_b: RunSetup,
) -> Result<ComparisonRecord> {
    let run_a = run_vqe(hamiltonian, circuit_a, psi0_kind, opt, false, setup_a)?;
    let run_b = run_vqe(hamiltonian, circuit_b, psi0_kind, opt, false, setup_b)?;
    let ea = run_a.final_relative_error()?;
    let eb = run_b.final_relative_error()?;
    Ok(ComparisonRecord {
        run_a,
        run_b,
        delta_relative_error_final: ea - eb,
    })
}

/// Minimum energy of `H` restricted to the total-spin eigensector containing
/// `psi` (which must be an S² eigenstate). Used as the reachability oracle
/// for equivariant circuits.
pub fn sector_ground_energy(h: &Observable, psi: &Statevector) -> Result<f64> {
    let n = psi.n_qubits();
    let s2 = crate::sim::total_spin_observable(n);
    let target = s2.expectation(psi)?;
    let dense_h = h.dense();
    let dense_s2 = s2.dense();
    let (s2_vals, s2_vecs) = herm_eig(&dense_s2, 1e-8)?;
    // columns spanning the sector
    let cols: Vec<usize> = (0..s2_vals.len())
        .filter(|&j| (s2_vals[j] - target).abs() < 1e-6)
        .collect();
    if cols.is_empty() {
        return Err(Error::Parse(format!(
            "state is not in a total-spin eigensector (⟨S²⟩ = {target})"
        )));
    }
    let dim = dense_h.nrows();
    let mut basis = CMat::zeros(dim, cols.len());
    for (dst, &src) in cols.iter().enumerate() {
        basis.set_column(dst, &s2_vecs.column(src));
    }
    let compressed = basis.adjoint() * dense_h * basis;
    let (vals, _) = herm_eig(&compressed, 1e-7)?;
    Ok(vals[0])
}

pub fn setup_for(
    spec: &HamiltonianSpec,
    gate_label: &str,
    depth: usize,
    psi0: InitialState,
    opt: &OptimizerConfig,
) -> RunSetup {
    RunSetup {
        hamiltonian: spec.describe(),
        gate: gate_label.to_string(),
        n_qubits: spec.n_qubits,
        depth,
        boundary: spec.boundary,
        initial_state: psi0,
        optimizer: *opt,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gates::gate_catalog;

    #[test]
    fn two_site_heisenberg_spectrum() {
        let spec = HamiltonianSpec {
            kind: HamiltonianKind::HeisenbergUniform,
            n_qubits: 2,
            boundary: Boundary::Open,
        };
        let h = build_hamiltonian(&spec).unwrap();
        let (e_min, e_max, ground) = exact_ground_energy(&h).unwrap();
        assert!((e_min + 0.75).abs() < 1e-12);
        assert!((e_max - 0.25).abs() < 1e-12);
        // ground state is the singlet
        let singlet = initial_state(InitialState::BellSingletProduct, 2).unwrap();
        let overlap = ground.inner(&singlet).norm();
        assert!((overlap - 1.0).abs() < 1e-10);
    }

    #[test]
    fn pauli_z_oracle() {
        let mut sum = PauliSum::new(1);
        sum.add(Complex64::new(1.0, 0.0), PauliString::parse("Z").unwrap());
        let (e_min, e_max, ground) = exact_ground_energy(&Observable::Paulis(sum)).unwrap();
        assert!((e_min + 1.0).abs() < 1e-14 && (e_max - 1.0).abs() < 1e-14);
        assert!((ground.amplitudes()[1].norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn hamiltonians_are_seeded_and_hermitian() {
        for kind in [
            HamiltonianKind::HeisenbergRandom { seed: 5 },
            HamiltonianKind::Gue { seed: 5 },
            HamiltonianKind::Goe { seed: 5 },
        ] {
            let spec = HamiltonianSpec {
                kind,
                n_qubits: 3,
                boundary: Boundary::Periodic,
            };
            let a = build_hamiltonian(&spec).unwrap().dense();
            let b = build_hamiltonian(&spec).unwrap().dense();
            assert!(crate::kernel::max_abs_diff(&a, &b) < 1e-15);
            assert!(crate::kernel::hermiticity_residual(&a) < 1e-12);
        }
        assert!(matches!(
            build_hamiltonian(&HamiltonianSpec {
                kind: HamiltonianKind::HeisenbergUniform,
                n_qubits: 1,
                boundary: Boundary::Open
            }),
            Err(Error::TooFewQubits(1))
        ));
    }

    #[test]
    fn relative_error_endpoints() {
        assert!((relative_error(-1.0, -1.0, 3.0).unwrap()).abs() < 1e-15);
        assert!((relative_error(3.0, -1.0, 3.0).unwrap() - 1.0).abs() < 1e-15);
        assert!((relative_error(1.0, -1.0, 3.0).unwrap() - 0.5).abs() < 1e-15);
        assert!(matches!(
            relative_error(0.0, 1.0, 1.0),
            Err(Error::DegenerateSpectrum { .. })
        ));
    }

    fn small_problem() -> (Observable, BrickCircuit, HamiltonianSpec) {
        let spec = HamiltonianSpec {
            kind: HamiltonianKind::HeisenbergUniform,
            n_qubits: 4,
            boundary: Boundary::Periodic,
        };
        let h = build_hamiltonian(&spec).unwrap();
        let gate = gate_catalog("su4/su2-spin-half").unwrap();
        let circuit = BrickCircuit::bricklayer(4, 4, gate, Boundary::Periodic);
        (h, circuit, spec)
    }

    #[test]
    fn stationary_start_stays_put() {
        // ψ0 already the exact ground state and θ = 0: ΔE = 0 from the start
        let spec = HamiltonianSpec {
            kind: HamiltonianKind::HeisenbergUniform,
            n_qubits: 2,
            boundary: Boundary::Open,
        };
        let h = build_hamiltonian(&spec).unwrap();
        let gate = gate_catalog("su4/su2-spin-half").unwrap();
        let circuit = BrickCircuit::bricklayer(2, 1, gate, Boundary::Open);
        let opt = OptimizerConfig {
            max_iters: 20,
            init_scale: 0.0,
            ..Default::default()
        };
        let setup = setup_for(&spec, "su4/su2-spin-half", 1, InitialState::BellSingletProduct, &opt);
        let record = run_vqe(
            &h,
            &circuit,
            InitialState::BellSingletProduct,
            &opt,
            false,
            setup,
        )
        .unwrap();
        for r in &record.trajectory {
            assert!(r.delta_e.abs() < 1e-10, "iter {}: ΔE = {:.2e}", r.iter, r.delta_e);
        }
    }

    #[test]
    fn gradient_descent_is_monotone_for_small_rates() {
        let (h, circuit, spec) = small_problem();
        let opt = OptimizerConfig {
            algorithm: OptimizerKind::GradientDescent,
            learning_rate: 1e-2,
            max_iters: 60,
            init_scale: 0.05,
            init_seed: 3,
            ..Default::default()
        };
        let setup = setup_for(&spec, "su4/su2-spin-half", 4, InitialState::Zeros, &opt);
        let record = run_vqe(&h, &circuit, InitialState::Zeros, &opt, false, setup).unwrap();
        for pair in record.trajectory.windows(2) {
            assert!(
                pair[1].energy <= pair[0].energy + 1e-9,
                "energy increased: {} -> {}",
                pair[0].energy,
                pair[1].energy
            );
        }
        // variational principle
        for r in &record.trajectory {
            assert!(r.delta_e >= -1e-9);
        }
    }

    #[test]
    fn trajectories_are_bitwise_deterministic() {
        let (h, circuit, spec) = small_problem();
        let opt = OptimizerConfig {
            max_iters: 25,
            init_seed: 9,
            ..Default::default()
        };
        let setup = setup_for(&spec, "su4/su2-spin-half", 4, InitialState::Zeros, &opt);
        let a = run_vqe(&h, &circuit, InitialState::Zeros, &opt, true, setup.clone()).unwrap();
        let b = run_vqe(&h, &circuit, InitialState::Zeros, &opt, true, setup).unwrap();
        assert_eq!(a.final_theta, b.final_theta);
        for (x, y) in a.trajectory.iter().zip(b.trajectory.iter()) {
            assert_eq!(x.energy.to_bits(), y.energy.to_bits());
            assert_eq!(x.grad_norm.to_bits(), y.grad_norm.to_bits());
            assert_eq!(x.s2.map(f64::to_bits), y.s2.map(f64::to_bits));
        }
    }

    #[test]
    fn csv_has_stable_header() {
        let (h, circuit, spec) = small_problem();
        let opt = OptimizerConfig {
            max_iters: 3,
            ..Default::default()
        };
        let setup = setup_for(&spec, "su4/su2-spin-half", 4, InitialState::Zeros, &opt);
        let record = run_vqe(&h, &circuit, InitialState::Zeros, &opt, true, setup).unwrap();
        let csv = record.to_csv();
        assert!(csv.starts_with("iter,energy,delta_e,s2,grad_norm\n"));
        assert_eq!(csv.lines().count(), 4);
    }

    #[test]
    fn identical_pair_has_zero_gap() {
        let (h, circuit, spec) = small_problem();
        let opt = OptimizerConfig {
            max_iters: 10,
            ..Default::default()
        };
        let setup = setup_for(&spec, "su4/su2-spin-half", 4, InitialState::Zeros, &opt);
        let cmp = compare_experiment(
            &h,
            &circuit,
            &circuit,
            InitialState::Zeros,
            &opt,
            setup.clone(),
            setup,
        )
        .unwrap();
        assert!(cmp.delta_relative_error_final.abs() < 1e-15);
    }

    #[test]
    fn sector_oracle_matches_full_ground_for_singlet_start() {
        // for the 4-site uniform chain the ground state lives in the S = 0
        // sector, so the sector oracle equals the global minimum there
        let (h, _, _) = small_problem();
        let singlet = initial_state(InitialState::BellSingletProduct, 4).unwrap();
        let sector = sector_ground_energy(&h, &singlet).unwrap();
        let (e0, _, _) = exact_ground_energy(&h).unwrap();
        assert!((sector - e0).abs() < 1e-9);
        // the fully polarized sector sits strictly above
        let zeros = initial_state(InitialState::Zeros, 4).unwrap();
        let polarized = sector_ground_energy(&h, &zeros).unwrap();
        assert!(polarized > e0 + 0.1);
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b.iter()).map(|(x, y)| x * y).sum()
}

/// Two-loop recursion for the L-BFGS search direction `-H ∇f`.
fn lbfgs_direction(grad: &[f64], history: &[(Vec<f64>, Vec<f64>)]) -> Vec<f64> {
    let mut q: Vec<f64> = grad.to_vec();
    let mut alphas = Vec::with_capacity(history.len());
    for (s, y) in history.iter().rev() {
        let rho = 1.0 / dot(s, y);
        let alpha = rho * dot(s, &q);
        for (qj, yj) in q.iter_mut().zip(y.iter()) {
            *qj -= alpha * yj;
        }
        alphas.push((alpha, rho));
    }
    if let Some((s, y)) = history.last() {
        let gamma = dot(s, y) / dot(y, y);
        for qj in q.iter_mut() {
            *qj *= gamma;
        }
    }
    for ((s, y), (alpha, rho)) in history.iter().zip(alphas.into_iter().rev()) {
        let beta = rho * dot(y, &q);
        for (qj, sj) in q.iter_mut().zip(s.iter()) {
            *qj += (alpha - beta) * sj;
        }
    }
    q.iter().map(|v| -v).collect()
}
