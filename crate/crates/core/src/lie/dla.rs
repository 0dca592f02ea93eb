use super::AlgebraBasis;
use crate::error::{Error, Result};
use crate::kernel::{commutator, fro_norm, trace_dot, CMat, Tolerance};
use num_complex::Complex64;

/// Generates the dynamical Lie algebra: the smallest Lie algebra containing
/// the given skew-Hermitian generators, built breadth-first from nested
/// commutators with on-the-fly orthonormalization. Terminates when a full
/// round of commutators adds no new direction.
pub fn generate_dla(generators: &[CMat], tol: &Tolerance) -> Result<AlgebraBasis> {
    if generators.is_empty() {
        return Err(Error::EmptySubspace);
    }
    let n = generators[0].nrows();
    for g in generators {
        let residual = crate::kernel::skew_hermiticity_residual(g);
        if residual > tol.eq_tol {
            return Err(Error::NotSkewHermitian {
                residual,
                tol: tol.eq_tol,
            });
        }
    }
    let max_dim = n * n - 1 + 1; // u(n) bound, in case generators are not traceless

    let mut basis: Vec<CMat> = Vec::new();
    for g in generators {
        try_add(&mut basis, g.clone());
    }
    if basis.is_empty() {
        return Err(Error::EmptySubspace);
    }

    let mut frontier_start = 0;
    loop {
        let frontier_end = basis.len();
        if frontier_start == frontier_end {
            break;
        }
        let mut added = false;
        for i in 0..frontier_end {
            let j_start = i.max(frontier_start);
            for j in j_start..frontier_end {
                if i == j {
                    continue;
                }
                let comm = commutator(&basis[i], &basis[j]);
                if try_add(&mut basis, comm) {
                    added = true;
                }
                if basis.len() >= max_dim {
                    break;
                }
            }
        }
        frontier_start = frontier_end;
        if !added || basis.len() >= max_dim {
            // one more closure round over everything new has already happened;
            // stop when nothing was added
            if !added {
                break;
            }
        }
    }

    AlgebraBasis::new(basis, tol)
}

/// Projects out existing directions (two Gram-Schmidt passes) and appends the
/// remainder when it is numerically independent.
fn try_add(basis: &mut Vec<CMat>, candidate: CMat) -> bool {
    let scale = fro_norm(&candidate);
    if scale < 1e-12 {
        return false;
    }
    let mut v = candidate;
    for _ in 0..2 {
        for b in basis.iter() {
            let overlap = trace_dot(b, &v);
            v -= b.map(|c| c * overlap);
        }
    }
    let norm = fro_norm(&v);
    if norm > 1e-8 * scale.max(1.0) {
        basis.push(v.map(|c| c / Complex64::new(norm, 0.0)));
        true
    } else {
        false
    }
}
