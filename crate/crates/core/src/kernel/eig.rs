use super::{fro_norm, hermiticity_residual, identity, CMat, C_I};
use crate::error::{Error, Result};
use nalgebra::DVector;
use num_complex::Complex64;

/// Hermitian eigendecomposition by cyclic complex Jacobi rotations, with
/// deterministic ascending ordering.
///
/// Jacobi is quadratically convergent, unconditionally stable, and — unlike
/// tridiagonalization-based solvers — has no deflation corner cases on
/// reducible matrices, which matters because block-sparse Pauli combinations
/// are the common case here. Returns `(eigenvalues, eigenvectors)` with
/// `H = V diag(λ) V†`.
pub fn herm_eig(h: &CMat, tol: f64) -> Result<(DVector<f64>, CMat)> {
    let residual = hermiticity_residual(h);
    if !h.is_square() || residual > tol {
        return Err(Error::NotHermitian { residual, tol });
    }
    let n = h.nrows();
    let mut a = (h + h.adjoint()).scale(0.5);
    let mut v = CMat::identity(n, n);

    let scale = fro_norm(&a).max(f64::MIN_POSITIVE);
    const MAX_SWEEPS: usize = 64;
    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[(p, q)];
                if apq.norm() <= 1e-15 * scale {
                    continue;
                }
                rotated = true;
                let app = a[(p, p)].re;
                let aqq = a[(q, q)].re;
                // unitary 2x2 that annihilates the (p, q) entry
                let phase = apq / apq.norm();
                let zeta = (aqq - app) / (2.0 * apq.norm());
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let cs = 1.0 / (1.0 + t * t).sqrt();
                let sn = cs * t;
                // columns: [a_p, a_q] <- [a_p, a_q] · J with
                // J = [[cs, s·phase], [-s·phase*, cs]] pattern matched so that
                // J† A2 J is diagonal for the 2x2 Hermitian block A2.
                for r in 0..n {
                    let arp = a[(r, p)];
                    let arq = a[(r, q)];
                    a[(r, p)] = arp * cs - arq * phase.conj() * sn;
                    a[(r, q)] = arp * phase * sn + arq * cs;
                }
                for r in 0..n {
                    let apr = a[(p, r)];
                    let aqr = a[(q, r)];
                    a[(p, r)] = apr * cs - aqr * phase * sn;
                    a[(q, r)] = apr * phase.conj() * sn + aqr * cs;
                }
                for r in 0..n {
                    let vrp = v[(r, p)];
                    let vrq = v[(r, q)];
                    v[(r, p)] = vrp * cs - vrq * phase.conj() * sn;
                    v[(r, q)] = vrp * phase * sn + vrq * cs;
                }
            }
        }
        if !rotated {
            break;
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&x, &y| {
        a[(x, x)]
            .re
            .partial_cmp(&a[(y, y)].re)
            .unwrap()
            .then(x.cmp(&y))
    });
    let values = DVector::from_iterator(n, order.iter().map(|&i| a[(i, i)].re));
    let mut vectors = CMat::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        vectors.set_column(dst, &v.column(src));
    }
    Ok((values, vectors))
}

/// Eigendecomposition of a unitary matrix: `U = V diag(e^{iφ}) V†` with
/// eigenphases in `(-π, π]`.
///
/// Diagonalizes the Hermitian part `(U+U†)/2` first and then splits each
/// eigenvalue cluster with the compressed anti-Hermitian part, which
/// separates conjugate phase pairs that share a cosine.
pub fn unitary_eig(u: &CMat, tol: f64) -> Result<(DVector<f64>, CMat)> {
    let n = u.nrows();
    let residual = fro_norm(&(u.adjoint() * u - identity(n)));
    if !u.is_square() || residual > tol * (n as f64).sqrt() {
        return Err(Error::NonUnitary { residual, tol });
    }

    let cos_part = (u + u.adjoint()).scale(0.5);
    let sin_part = (u - u.adjoint()).map(|c| c / (2.0 * C_I));
    let (cos_vals, mut vectors) = herm_eig(&cos_part, 1e-8)?;

    // Cluster equal cosines and re-diagonalize each block with the sine part.
    const CLUSTER_TOL: f64 = 1e-8;
    let mut start = 0;
    while start < n {
        let mut end = start + 1;
        while end < n && (cos_vals[end] - cos_vals[start]).abs() < CLUSTER_TOL {
            end += 1;
        }
        if end - start > 1 {
            let block = vectors.columns(start, end - start).into_owned();
            let compressed = block.adjoint() * &sin_part * &block;
            let (_, rot) = herm_eig(&compressed, 1e-8)?;
            let rotated = block * rot;
            for (offset, col) in rotated.column_iter().enumerate() {
                vectors.set_column(start + offset, &col);
            }
        }
        start = end;
    }

    let mut phases = DVector::zeros(n);
    for j in 0..n {
        let v = vectors.column(j);
        let lambda: Complex64 = (v.adjoint() * u * v)[(0, 0)];
        phases[j] = lambda.im.atan2(lambda.re);
    }
    Ok((phases, vectors))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::{max_abs_diff, C_ONE, C_ZERO};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn reconstruct(vals: &DVector<f64>, vecs: &CMat) -> CMat {
        let lam = CMat::from_diagonal(&DVector::from_iterator(
            vals.len(),
            vals.iter().map(|&v| Complex64::new(v, 0.0)),
        ));
        vecs * lam * vecs.adjoint()
    }

    #[test]
    fn pauli_z_spectrum() {
        let z = CMat::from_row_slice(2, 2, &[C_ONE, C_ZERO, C_ZERO, -C_ONE]);
        let (vals, vecs) = herm_eig(&z, 1e-12).unwrap();
        assert!((vals[0] + 1.0).abs() < 1e-14);
        assert!((vals[1] - 1.0).abs() < 1e-14);
        assert!(max_abs_diff(&reconstruct(&vals, &vecs), &z) < 1e-14);
    }

    #[test]
    fn pauli_x_eigenvectors() {
        let x = CMat::from_row_slice(2, 2, &[C_ZERO, C_ONE, C_ONE, C_ZERO]);
        let (vals, vecs) = herm_eig(&x, 1e-12).unwrap();
        assert!((vals[0] + 1.0).abs() < 1e-14 && (vals[1] - 1.0).abs() < 1e-14);
        // eigenvectors are (|0⟩∓|1⟩)/√2 up to phase
        for (col, sign) in [(0usize, -1.0), (1usize, 1.0)] {
            let v = vecs.column(col);
            let ratio = v[1] / v[0];
            assert!((ratio - Complex64::new(sign, 0.0)).norm() < 1e-12);
        }
    }

    #[test]
    fn rejects_non_hermitian() {
        let m = CMat::from_row_slice(2, 2, &[C_ONE, C_ONE, C_ZERO, C_ONE]);
        assert!(matches!(
            herm_eig(&m, 1e-9),
            Err(Error::NotHermitian { .. })
        ));
    }

    #[test]
    fn random_hermitian_reconstruction() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for n in [3usize, 8, 17] {
            let raw = CMat::from_fn(n, n, |_, _| {
                Complex64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5)
            });
            let h = (&raw + raw.adjoint()).scale(0.5);
            let (vals, vecs) = herm_eig(&h, 1e-9).unwrap();
            assert!(max_abs_diff(&reconstruct(&vals, &vecs), &h) < 1e-12);
            assert!(fro_norm(&(vecs.adjoint() * &vecs - identity(n))) < 1e-12);
            for w in vals.as_slice().windows(2) {
                assert!(w[0] <= w[1]);
            }
        }
    }

    #[test]
    fn reducible_block_matrices_are_handled() {
        // anti-diagonal + middle-block coupling: two decoupled 2x2 blocks,
        // the structure produced by XX/YY/ZZ combinations
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..50 {
            let (c1, c2, c3) = (
                rng.gen_range(-1.0..1.0),
                rng.gen_range(-1.0..1.0),
                rng.gen_range(-1.0..1.0f64),
            );
            let mut h = CMat::zeros(4, 4);
            h[(0, 0)] = Complex64::new(c3, 0.0);
            h[(1, 1)] = Complex64::new(-c3, 0.0);
            h[(2, 2)] = Complex64::new(-c3, 0.0);
            h[(3, 3)] = Complex64::new(c3, 0.0);
            h[(0, 3)] = Complex64::new(c1 - c2, 0.0);
            h[(3, 0)] = Complex64::new(c1 - c2, 0.0);
            h[(1, 2)] = Complex64::new(c1 + c2, 0.0);
            h[(2, 1)] = Complex64::new(c1 + c2, 0.0);
            let (vals, vecs) = herm_eig(&h, 1e-9).unwrap();
            assert!(max_abs_diff(&reconstruct(&vals, &vecs), &h) < 1e-13);
        }
    }

    #[test]
    fn unitary_eig_separates_conjugate_phases() {
        let theta = 0.73f64;
        let u = CMat::from_row_slice(
            2,
            2,
            &[
                Complex64::new(theta.cos(), 0.0),
                Complex64::new(0.0, theta.sin()),
                Complex64::new(0.0, theta.sin()),
                Complex64::new(theta.cos(), 0.0),
            ],
        );
        let (phases, vecs) = unitary_eig(&u, 1e-9).unwrap();
        let mut sorted: Vec<f64> = phases.iter().cloned().collect();
        sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
        assert!((sorted[0] + theta).abs() < 1e-10);
        assert!((sorted[1] - theta).abs() < 1e-10);
        let lam = CMat::from_diagonal(&DVector::from_iterator(
            2,
            phases.iter().map(|&p| Complex64::from_polar(1.0, p)),
        ));
        assert!(max_abs_diff(&(&vecs * lam * vecs.adjoint()), &u) < 1e-10);
    }
}
