use super::{
    orthonormalize_rows, real_null_space, rows_to_matrix, Decomposition, DecompositionReport,
    Subspace,
};
use crate::error::{Error, Result};
use crate::kernel::{commutator, CMat, Tolerance};
use nalgebra::{DMatrix, DVector};

/// Orthogonal complement of `k` inside its ambient algebra: the kernel of the
/// coordinate matrix of `k`.
pub fn horizontal_complement(k: &Subspace, tol: &Tolerance) -> Subspace {
    let rows = real_null_space(k.coords(), tol);
    Subspace::from_coord_rows(k.ambient().clone(), rows, tol)
        .expect("null space rows are orthonormal")
}

/// Adjoint matrix of `y` acting on the ambient basis: column `i` holds the
/// ambient coordinates of `[y, X_i]`.
fn adjoint_matrix(y: &CMat, ambient: &super::AlgebraBasis) -> DMatrix<f64> {
    let dim = ambient.dim();
    let mut out = DMatrix::zeros(dim, dim);
    for i in 0..dim {
        let comm = commutator(y, ambient.element(i));
        let (coords, residual) = ambient.expand(&comm).expect("shapes match");
        debug_assert!(
            residual < 1e-8,
            "commutator leaves the ambient algebra (residual {residual:.3e})"
        );
        out.set_column(i, &coords);
    }
    out
}

/// Commutant `g^k = { X ∈ g : [X, Y] = 0 for all Y ∈ k }`, computed as the
/// joint kernel of the stacked adjoint matrices of the `k` basis.
pub fn commutant(k: &Subspace, tol: &Tolerance) -> Subspace {
    let ambient = k.ambient();
    let dim_g = ambient.dim();
    let mut stacked = DMatrix::zeros(k.dim() * dim_g, dim_g);
    for j in 0..k.dim() {
        let ad = adjoint_matrix(&k.basis_matrix(j), ambient);
        stacked.rows_mut(j * dim_g, dim_g).copy_from(&ad);
    }
    let rows = real_null_space(&stacked, tol);
    Subspace::from_coord_rows(ambient.clone(), rows, tol)
        .expect("null space rows are orthonormal")
}

/// Center `z(k) = { X ∈ k : [X, Y] = 0 for all Y ∈ k }`. Fails with
/// `NotSubalgebra` when `k` is not closed under the commutator.
pub fn center(k: &Subspace, tol: &Tolerance) -> Result<Subspace> {
    k.verify_subalgebra(tol)?;
    let dim_k = k.dim();
    let mats = k.basis_matrices();
    // adjoint matrices restricted to k, in k-coordinates
    let mut stacked = DMatrix::zeros(dim_k * dim_k, dim_k);
    for j in 0..dim_k {
        for i in 0..dim_k {
            let comm = commutator(&mats[j], &mats[i]);
            let (coords, _) = k.ambient().expand(&comm)?;
            let (inside, _) = k.project(&coords);
            stacked.column_mut(i).rows_mut(j * dim_k, dim_k).copy_from(&inside);
        }
    }
    let kernel_rows = real_null_space(&stacked, tol);
    // lift back to ambient coordinates
    let lifted = &kernel_rows * k.coords();
    Subspace::from_coord_rows(k.ambient().clone(), lifted, tol)
}

/// Intersection of a subspace with a target: orthonormalized projections of
/// `source` basis rows onto `target`.
fn project_subspace(source: &Subspace, target: &Subspace, tol: &Tolerance) -> Subspace {
    let mut rows: Vec<DVector<f64>> = Vec::new();
    for j in 0..source.dim() {
        let row = source.coords().row(j).transpose();
        let (inside, _) = target.project(&row);
        rows.push(target.coords().transpose() * inside);
    }
    let ortho = orthonormalize_rows(&rows, tol);
    Subspace::from_coord_rows(
        source.ambient().clone(),
        rows_to_matrix(&ortho, source.ambient().dim()),
        tol,
    )
    .expect("projected rows orthonormalized")
}

/// Joint orthogonal complement of a list of subspaces.
fn complement_of_union(parts: &[&Subspace], tol: &Tolerance) -> Subspace {
    let ambient = parts[0].ambient().clone();
    let total: usize = parts.iter().map(|p| p.dim()).sum();
    let mut stacked = DMatrix::zeros(total, ambient.dim());
    let mut offset = 0;
    for p in parts {
        stacked
            .rows_mut(offset, p.dim())
            .copy_from(p.coords());
        offset += p.dim();
    }
    let rows = real_null_space(&stacked, tol);
    Subspace::from_coord_rows(ambient, rows, tol).expect("null space rows are orthonormal")
}

/// Full four-subspace decomposition `g = r ⊕ g^k_o ⊕ z(k) ⊕ k_o` for a
/// verified subalgebra `k`:
/// `g^k_o = g^k ∩ k^⊥`, `z(k) = g^k ∩ k`, `r` the complement of `g^k_o` in
/// `m`, and `k_o` the complement of `z(k)` in `k`.
pub fn full_decomposition(k: &Subspace, tol: &Tolerance) -> Result<Decomposition> {
    let kk_closure = k.verify_subalgebra(tol)?;
    let m = horizontal_complement(k, tol);
    let gk = commutant(k, tol);

    let z_k = project_subspace(&gk, k, tol);
    let gk_o = project_subspace(&gk, &m, tol);
    let r = complement_of_union(&[k, &gk_o], tol);
    let k_o = complement_of_union(&[&m, &z_k], tol);

    let dim_g = k.ambient().dim();
    let total = r.dim() + gk_o.dim() + z_k.dim() + k_o.dim();
    if total != dim_g {
        return Err(Error::Parse(format!(
            "decomposition dimensions sum to {total}, ambient has {dim_g}"
        )));
    }
    if gk_o.dim() + z_k.dim() != gk.dim() {
        return Err(Error::Parse(
            "commutant does not split cleanly into z(k) and g^k_o".into(),
        ));
    }

    let mut orthogonality: f64 = 0.0;
    let parts = [&r, &gk_o, &z_k, &k_o];
    for (a, pa) in parts.iter().enumerate() {
        for pb in parts.iter().skip(a + 1) {
            let cross = pa.coords() * pb.coords().transpose();
            orthogonality = orthogonality.max(cross.amax());
        }
    }

    let km_into_m = k.commutator_residual(&m, &m);

    Ok(Decomposition {
        r,
        gk_o,
        z_k,
        k_o,
        m,
        gk,
        k: k.clone(),
        verification: DecompositionReport {
            kk_closure,
            km_into_m,
            orthogonality,
        },
    })
}

/// Maximal Abelian subalgebra of `m`, grown by intersecting kernels of the
/// adjoint maps of the elements picked so far, restricted to `m`.
///
/// `seed_order[0]` indexes the basis vector of `m` used as the first element;
/// later elements are the first kernel-basis vectors (in SVD output order)
/// outside the current span, which makes the construction deterministic.
pub fn cartan_subalgebra(m: &Subspace, seed_order: &[usize], tol: &Tolerance) -> Result<Subspace> {
    if m.dim() == 0 {
        return Err(Error::EmptySubspace);
    }
    let seed = *seed_order.first().unwrap_or(&0);
    let first = m.coords().row(seed).transpose();
    grow_cartan(m, first, tol)
}

/// Same iteration, seeded with an explicit element of `m`.
pub fn cartan_subalgebra_seeded(m: &Subspace, seed: &CMat, tol: &Tolerance) -> Result<Subspace> {
    if m.dim() == 0 {
        return Err(Error::EmptySubspace);
    }
    let (coords, residual) = m.ambient().expand(seed)?;
    let (inside, outside) = m.project(&coords);
    if residual > tol.eq_tol || outside > tol.eq_tol * coords.norm().max(1.0) {
        return Err(Error::Parse(format!(
            "cartan seed lies outside m (residual {:.3e})",
            residual.max(outside)
        )));
    }
    let ambient_coords = m.coords().transpose() * inside;
    grow_cartan(m, ambient_coords.normalize(), tol)
}

fn grow_cartan(m: &Subspace, first: DVector<f64>, tol: &Tolerance) -> Result<Subspace> {
    let ambient = m.ambient().clone();
    let dim_g = ambient.dim();
    let dim_m = m.dim();
    let mut h_rows: Vec<DVector<f64>> = vec![first.normalize()];

    loop {
        // joint kernel of ad_{h_i} restricted to m, in m-coordinates
        let mut stacked = DMatrix::zeros(h_rows.len() * dim_g, dim_m);
        for (idx, h) in h_rows.iter().enumerate() {
            let h_mat = ambient.realize(h);
            for j in 0..dim_m {
                let comm = commutator(&h_mat, &m.basis_matrix(j));
                let (coords, _) = ambient.expand(&comm)?;
                stacked
                    .column_mut(j)
                    .rows_mut(idx * dim_g, dim_g)
                    .copy_from(&coords);
            }
        }
        let kernel = real_null_space(&stacked, tol);
        // current h in m-coordinates
        let h_in_m: Vec<DVector<f64>> = h_rows.iter().map(|h| m.coords() * h).collect();
        let mut extended = false;
        for row in 0..kernel.nrows() {
            let mut v = kernel.row(row).transpose();
            for b in &h_in_m {
                let overlap = b.dot(&v);
                v -= b * overlap;
            }
            if v.norm() > 1e-6 {
                let v = v.normalize();
                h_rows.push(m.coords().transpose() * v);
                extended = true;
                break;
            }
        }
        if !extended {
            break;
        }
        if h_rows.len() > dim_m {
            return Err(Error::Parse("cartan iteration failed to terminate".into()));
        }
    }

    let ortho = orthonormalize_rows(&h_rows, tol);
    Subspace::from_coord_rows(ambient, rows_to_matrix(&ortho, dim_g), tol)
}

#[derive(Debug, Clone, Copy)]
pub struct AdInvarianceReport {
    pub invariant: bool,
    pub worst_residual: f64,
}

/// Checks `Ad(k) m ⊆ m` for a concrete unitary `k_sample`: conjugates each
/// basis element of `m` and measures the worst component outside `m`.
pub fn is_ad_invariant(k_sample: &CMat, m: &Subspace, tol: &Tolerance) -> AdInvarianceReport {
    let mut worst: f64 = 0.0;
    for j in 0..m.dim() {
        let conj = k_sample * m.basis_matrix(j) * k_sample.adjoint();
        let (coords, expand_res) = m
            .ambient()
            .expand(&conj)
            .expect("conjugation preserves shape");
        let (_, outside) = m.project(&coords);
        worst = worst.max((expand_res.powi(2) + outside.powi(2)).sqrt());
    }
    AdInvarianceReport {
        invariant: worst <= tol.eq_tol,
        worst_residual: worst,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::{expm_skew, C_I};
    use crate::lie::AlgebraBasis;
    use crate::pauli::PauliString;
    use std::sync::Arc;

    fn ip(word: &str) -> CMat {
        PauliString::parse(word).unwrap().matrix().map(|c| c * C_I)
    }

    fn su2_k_z() -> (Arc<AlgebraBasis>, Subspace) {
        let tol = Tolerance::default();
        let g = Arc::new(AlgebraBasis::su(1));
        let k = Subspace::from_span_matrices(g.clone(), &[ip("Z")], &tol).unwrap();
        (g, k)
    }

    #[test]
    fn bloch_complement_is_xy() {
        let tol = Tolerance::default();
        let (g, k) = su2_k_z();
        let m = horizontal_complement(&k, &tol);
        assert_eq!(m.dim(), 2);
        let expect =
            Subspace::from_span_matrices(g, &[ip("X"), ip("Y")], &tol).unwrap();
        assert!(m.span_distance(&expect) < 1e-10);
    }

    #[test]
    fn bloch_commutant_is_z() {
        let tol = Tolerance::default();
        let (_, k) = su2_k_z();
        let gk = commutant(&k, &tol);
        assert_eq!(gk.dim(), 1);
        assert!(gk.span_distance(&k) < 1e-10);
        // abelian k: center equals k
        let z = center(&k, &tol).unwrap();
        assert!(z.span_distance(&k) < 1e-10);
    }

    #[test]
    fn bloch_full_decomposition_dims() {
        let tol = Tolerance::default();
        let (_, k) = su2_k_z();
        let d = full_decomposition(&k, &tol).unwrap();
        assert_eq!(d.dims(), (2, 0, 1, 0));
        assert!(d.verification.orthogonality < 1e-10);
    }

    #[test]
    fn spin_half_tensor_rep_decomposition() {
        let tol = Tolerance::default();
        let g = Arc::new(AlgebraBasis::su(2));
        let k = Subspace::from_span_matrices(
            g.clone(),
            &[
                ip("XI") + ip("IX"),
                ip("YI") + ip("IY"),
                ip("ZI") + ip("IZ"),
            ],
            &tol,
        )
        .unwrap();
        let d = full_decomposition(&k, &tol).unwrap();
        assert_eq!(d.dims(), (11, 1, 0, 3));
        assert_eq!(d.m.dim(), 12);

        // the single equivariant direction is the traceless part of SWAP
        let swap_traceless = (ip("XX") + ip("YY") + ip("ZZ")).scale(0.5);
        let expect = Subspace::from_span_matrices(g, &[swap_traceless], &tol).unwrap();
        assert!(d.gk.span_distance(&expect) < 1e-9);

        // m contains all nine two-body words and the three differences
        let (_, residual) = d.m.contains(&ip("XY"), &tol).unwrap();
        assert!(residual < 1e-9);
        let (_, residual) = d.m.contains(&(ip("XI") - ip("IX")), &tol).unwrap();
        assert!(residual < 1e-9);
    }

    #[test]
    fn cartan_subalgebra_bloch_and_two_qubit() {
        let tol = Tolerance::default();
        let (g, k) = su2_k_z();
        let m = horizontal_complement(&k, &tol);
        let h = cartan_subalgebra_seeded(&m, &ip("Y"), &tol).unwrap();
        assert_eq!(h.dim(), 1);
        let expect = Subspace::from_span_matrices(g, &[ip("Y")], &tol).unwrap();
        assert!(h.span_distance(&expect) < 1e-10);

        // SU(4)/(SU(2)xSU(2)): h = i span{XX, YY, ZZ}
        let g4 = Arc::new(AlgebraBasis::su(2));
        let k4 = Subspace::from_span_matrices(
            g4.clone(),
            &[ip("XI"), ip("YI"), ip("ZI"), ip("IX"), ip("IY"), ip("IZ")],
            &tol,
        )
        .unwrap();
        let m4 = horizontal_complement(&k4, &tol);
        assert_eq!(m4.dim(), 9);
        let h4 = cartan_subalgebra_seeded(&m4, &ip("XX"), &tol).unwrap();
        assert_eq!(h4.dim(), 3);
        let expect =
            Subspace::from_span_matrices(g4, &[ip("XX"), ip("YY"), ip("ZZ")], &tol).unwrap();
        assert!(h4.span_distance(&expect) < 1e-9);
    }

    #[test]
    fn ad_invariance_detects_leakage() {
        let tol = Tolerance::default();
        let (_, k) = su2_k_z();
        let m = horizontal_complement(&k, &tol);
        for phi in [0.3, 1.7] {
            let u = expm_skew(&ip("Z").scale(phi)).unwrap();
            let report = is_ad_invariant(&u, &m, &tol);
            assert!(report.invariant, "residual {}", report.worst_residual);
            assert!(report.worst_residual < 1e-10);
        }
        // an element outside K leaks
        let g4 = Arc::new(AlgebraBasis::su(2));
        let k4 = Subspace::from_span_matrices(
            g4.clone(),
            &[
                ip("XI") + ip("IX"),
                ip("YI") + ip("IY"),
                ip("ZI") + ip("IZ"),
            ],
            &tol,
        )
        .unwrap();
        let m4 = horizontal_complement(&k4, &tol);
        let good = expm_skew(&((ip("XI") + ip("IX")).scale(0.2) + (ip("ZI") + ip("IZ")).scale(0.5)))
            .unwrap();
        assert!(is_ad_invariant(&good, &m4, &tol).invariant);
        let bad = expm_skew(&ip("XX").scale(0.4)).unwrap();
        let report = is_ad_invariant(&bad, &m4, &tol);
        assert!(!report.invariant);
        assert!(report.worst_residual > 1e-3);
    }
}
