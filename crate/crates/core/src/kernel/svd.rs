use super::{CMat, CVec, Tolerance, C_ONE};
use num_complex::Complex64;

/// Singular value decomposition computed by one-sided (Hestenes) Jacobi
/// rotations.
///
/// Unlike bidiagonalization-based thin SVDs, this keeps the full right factor,
/// so the columns of `v` spanning the kernel are available even for wide or
/// rank-deficient inputs. Column pairs are processed in a fixed cyclic order,
/// which makes the output deterministic.
pub struct JacobiSvd {
    /// Singular values, descending.
    pub singular_values: Vec<f64>,
    /// Left singular vectors for the non-negligible singular values.
    pub u: CMat,
    /// Full right factor; column `j` pairs with `singular_values[j]`.
    pub v: CMat,
}

pub fn svd_jacobi(m: &CMat) -> JacobiSvd {
    let cols = m.ncols();
    let mut work = m.clone();
    let mut v = CMat::identity(cols, cols);

    const MAX_SWEEPS: usize = 60;
    const OFF_TOL: f64 = 1e-15;
    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..cols {
            for q in (p + 1)..cols {
                let a: f64 = work.column(p).iter().map(|c| c.norm_sqr()).sum();
                let b: f64 = work.column(q).iter().map(|c| c.norm_sqr()).sum();
                let c: Complex64 = work
                    .column(p)
                    .iter()
                    .zip(work.column(q).iter())
                    .map(|(x, y)| x.conj() * y)
                    .sum();
                if c.norm() <= OFF_TOL * (a * b).sqrt().max(f64::MIN_POSITIVE) {
                    continue;
                }
                rotated = true;
                // Unitary 2x2 rotation zeroing the off-diagonal Gram entry.
                let phase = c / c.norm();
                let zeta = (b - a) / (2.0 * c.norm());
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let cs = 1.0 / (1.0 + t * t).sqrt();
                let sn = cs * t;
                for row in 0..work.nrows() {
                    let wp = work[(row, p)];
                    let wq = work[(row, q)];
                    work[(row, p)] = wp * cs - wq * phase.conj() * sn;
                    work[(row, q)] = wp * phase * sn + wq * cs;
                }
                for row in 0..cols {
                    let vp = v[(row, p)];
                    let vq = v[(row, q)];
                    v[(row, p)] = vp * cs - vq * phase.conj() * sn;
                    v[(row, q)] = vp * phase * sn + vq * cs;
                }
            }
        }
        if !rotated {
            break;
        }
    }

    let mut norms: Vec<(f64, usize)> = (0..cols)
        .map(|j| {
            (
                work.column(j)
                    .iter()
                    .map(|c| c.norm_sqr())
                    .sum::<f64>()
                    .sqrt(),
                j,
            )
        })
        .collect();
    norms.sort_by(|x, y| y.0.partial_cmp(&x.0).unwrap().then(x.1.cmp(&y.1)));

    let singular_values: Vec<f64> = norms.iter().map(|(s, _)| *s).collect();
    let mut v_sorted = CMat::zeros(cols, cols);
    let mut u = CMat::zeros(m.nrows(), cols);
    for (dst, &(sigma, src)) in norms.iter().enumerate() {
        v_sorted.set_column(dst, &v.column(src));
        if sigma > 0.0 {
            let scaled = work.column(src).map(|c| c / Complex64::new(sigma, 0.0));
            u.set_column(dst, &scaled);
        }
    }
    JacobiSvd {
        singular_values,
        u,
        v: v_sorted,
    }
}

/// Orthonormal basis of the kernel `{ v : Mv = 0 }`.
///
/// Singular values below `tol.rank_tol` relative to the largest one count as
/// zero; `tol.rank_tol` also acts as an absolute floor so that a numerically
/// zero matrix (all entries at rounding scale) keeps its full kernel. An
/// empty kernel yields an empty list.
pub fn null_space(m: &CMat, tol: &Tolerance) -> Vec<CVec> {
    assert!(m.ncols() > 0, "null_space needs a nonempty matrix");
    if m.nrows() == 0 {
        return (0..m.ncols())
            .map(|j| {
                let mut e = CVec::zeros(m.ncols());
                e[j] = C_ONE;
                e
            })
            .collect();
    }
    let svd = svd_jacobi(m);
    let sigma_max = svd.singular_values[0];
    let cutoff = (tol.rank_tol * sigma_max).max(tol.rank_tol);
    svd.singular_values
        .iter()
        .enumerate()
        .filter(|(_, &s)| s < cutoff)
        .map(|(j, _)| svd.v.column(j).into_owned())
        .collect()
}
