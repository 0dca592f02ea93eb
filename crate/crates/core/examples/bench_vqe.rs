use horizon_core::gates::gate_catalog;
use horizon_core::sim::{BrickCircuit, Boundary, InitialState};
use horizon_core::vqe::*;

fn main() {
    let n = 8; let depth = 8;
    for scale in [0.05, 0.3, 0.6] {
        for seed in [7u64, 8, 10] {
            let opt = OptimizerConfig { algorithm: OptimizerKind::Lbfgs, init_scale: scale, max_iters: 800, ..Default::default() };
            let spec = HamiltonianSpec { kind: HamiltonianKind::Gue { seed }, n_qubits: n, boundary: Boundary::Periodic };
            let h = build_hamiltonian(&spec).unwrap();
            let ca = BrickCircuit::bricklayer(n, depth, gate_catalog("su4/u3").unwrap(), Boundary::Periodic);
            let cb = BrickCircuit::bricklayer(n, depth, gate_catalog("su4/full").unwrap(), Boundary::Periodic);
            let sa = setup_for(&spec, "su4/u3", depth, InitialState::Zeros, &opt);
            let sb = setup_for(&spec, "su4/full", depth, InitialState::Zeros, &opt);
            let cmp = compare_experiment(&h, &ca, &cb, InitialState::Zeros, &opt, sa, sb).unwrap();
            println!("scale {scale} GUE seed {seed}: Ē_hor {:.4} Ē_full {:.4} ΔĒ {:+.4}",
                cmp.run_a.final_relative_error().unwrap(), cmp.run_b.final_relative_error().unwrap(), cmp.delta_relative_error_final);
        }
    }
}
