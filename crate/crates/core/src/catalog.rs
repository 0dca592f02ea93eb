//! Named homogeneous spaces: ambient algebra, symmetry subalgebra, involution
//! where one exists, and published reference bases used as regression
//! fixtures.

use crate::error::{Error, Result};
use crate::kernel::{CMat, CVec, Tolerance, C_I, C_ONE};
use crate::lie::{full_decomposition, real_null_space, AlgebraBasis, Decomposition, Subspace};
use crate::pauli::PauliString;
use crate::symmetric::{EntryOp, Involution};
use nalgebra::DMatrix;
use num_complex::Complex64;
use std::sync::Arc;

/// A catalog entry: everything needed to decompose, verify, and build gates
/// for one homogeneous space G/K.
#[derive(Debug, Clone)]
pub struct HomogeneousSpace {
    pub id: &'static str,
    pub group: &'static str,
    pub subgroup: &'static str,
    pub g: Arc<AlgebraBasis>,
    pub k: Subspace,
    /// Whether the pair satisfies `[m, m] ⊆ k`.
    pub symmetric: bool,
    pub involution: Option<Involution>,
    /// Preferred first element for the Cartan iteration.
    pub cartan_seed: Option<CMat>,
    /// Reference basis of the horizontal space, when one is published.
    pub published_m: Vec<CMat>,
    /// Reference Cartan subalgebra.
    pub published_h: Vec<CMat>,
    /// Reference basis of the symmetry subalgebra (for spaces where the
    /// subalgebra itself is the fixture).
    pub published_k: Vec<CMat>,
    /// Reference basis of the commutant g^k.
    pub published_commutant: Vec<CMat>,
    /// Expected `(dim r, dim g^k_o, dim z(k), dim k_o)`.
    pub expected_dims: Option<(usize, usize, usize, usize)>,
}

impl HomogeneousSpace {
    pub fn decomposition(&self, tol: &Tolerance) -> Result<Decomposition> {
        full_decomposition(&self.k, tol)
    }
}

/// Pauli word times `i`, the bare paper-scale generator.
pub fn ip(word: &str) -> CMat {
    PauliString::parse(word).unwrap().matrix().map(|c| c * C_I)
}

/// `i` times a real linear combination of Pauli words.
fn combo(terms: &[(f64, &str)]) -> CMat {
    let n = terms[0].1.len();
    let dim = 1usize << n;
    let mut out = CMat::zeros(dim, dim);
    for &(c, word) in terms {
        out += PauliString::parse(word)
            .unwrap()
            .matrix()
            .map(|v| v * Complex64::new(c, 0.0));
    }
    out.map(|v| v * C_I)
}

fn basis_vector(dim: usize, idx: usize) -> CVec {
    let mut v = CVec::zeros(dim);
    v[idx] = C_ONE;
    v
}

/// How a set of states pins down its stabilizer.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StabilizerMode {
    /// The spanned subspace is preserved as a set: `P_⊥ A P_S = 0`.
    Setwise,
    /// Every listed vector is annihilated: `A v = 0`.
    Pointwise,
}

/// Subalgebra of `g` stabilizing the span of the given vectors.
pub fn stabilizer_subalgebra(
    g: &Arc<AlgebraBasis>,
    span: &[CVec],
    mode: StabilizerMode,
    tol: &Tolerance,
) -> Result<Subspace> {
    let n = g.matrix_dim();
    let dim_g = g.dim();
    // orthonormal projector onto the span
    let mut v = CMat::zeros(n, span.len());
    for (j, s) in span.iter().enumerate() {
        v.set_column(j, &(s / Complex64::new(s.norm(), 0.0)));
    }
    let p_s = &v * v.adjoint();
    let p_perp = CMat::identity(n, n) - &p_s;

    let mut constraints = DMatrix::<f64>::zeros(2 * n * n, dim_g);
    for i in 0..dim_g {
        let constrained = match mode {
            StabilizerMode::Setwise => &p_perp * g.element(i) * &p_s,
            StabilizerMode::Pointwise => g.element(i) * &p_s,
        };
        for (flat, value) in constrained.iter().enumerate() {
            constraints[(2 * flat, i)] = value.re;
            constraints[(2 * flat + 1, i)] = value.im;
        }
    }
    let rows = real_null_space(&constraints, tol);
    if rows.nrows() == 0 {
        return Err(Error::EmptySubspace);
    }
    Subspace::from_coord_rows(g.clone(), rows, tol)
}

pub const SPACE_IDS: &[&str] = &[
    "su2/u1",
    "su4/su2-spin-half",
    "su4/su2xsu2",
    "su4/u3",
    "so4/so3",
    "su4/su2-spin-three-half",
    "su4/sp2",
    "so4/su2",
    "so4/1xso2x1",
    "su8/su2xu6",
    "so4/u2",
];

/// Ids of the ten tabulated spaces used by the dimension suite.
pub const TABLE_SPACE_IDS: &[&str] = &[
    "su2/u1",
    "su4/su2-spin-half",
    "su4/su2xsu2",
    "su4/u3",
    "so4/so3",
    "su4/su2-spin-three-half",
    "su4/sp2",
    "so4/su2",
    "so4/1xso2x1",
    "su8/su2xu6",
];

pub fn resolve_alias(id: &str) -> &str {
    match id {
        "bloch" => "su2/u1",
        "so4/o3" => "so4/so3",
        other => other,
    }
}

/// Builds a catalog space by id. Aliases: `bloch` for `su2/u1`, `so4/o3`
/// for `so4/so3`.
pub fn space(id: &str) -> Result<HomogeneousSpace> {
    let tol = Tolerance::default();
    match resolve_alias(id) {
        "su2/u1" => bloch_space(&tol),
        "su4/su2-spin-half" => spin_half_space(&tol),
        "su4/su2xsu2" => single_qubit_orbit_space(&tol),
        "su4/u3" => su4_u3_space(&tol),
        "so4/so3" => so4_so3_space(&tol),
        "su4/su2-spin-three-half" => spin_three_half_space(&tol),
        "su4/sp2" => sp2_space(&tol),
        "so4/su2" => so4_su2_space(&tol),
        "so4/1xso2x1" => charge_preserving_space(&tol),
        "su8/su2xu6" => grassmannian_space(&tol),
        "so4/u2" => so4_u2_space(&tol),
        other => Err(Error::UnknownSpace(other.to_string())),
    }
}

fn bloch_space(tol: &Tolerance) -> Result<HomogeneousSpace> {
    let g = Arc::new(AlgebraBasis::su(1));
    let k = Subspace::from_span_matrices(g.clone(), &[ip("Z")], tol)?;
    let x = PauliString::parse("X").unwrap().matrix();
    Ok(HomogeneousSpace {
        id: "su2/u1",
        group: "SU(2)",
        subgroup: "U(1)",
        g,
        k,
        symmetric: true,
        involution: Some(Involution::custom("custom:bloch", x, EntryOp::Transpose, -1.0)),
        cartan_seed: Some(ip("Y")),
        published_m: vec![ip("X"), ip("Y")],
        published_h: vec![ip("Y")],
        published_k: vec![ip("Z")],
        published_commutant: vec![ip("Z")],
        expected_dims: Some((2, 0, 1, 0)),
    })
}

fn spin_half_space(tol: &Tolerance) -> Result<HomogeneousSpace> {
    let g = Arc::new(AlgebraBasis::su(2));
    let k = Subspace::from_span_matrices(
        g.clone(),
        &[
            ip("XI") + ip("IX"),
            ip("YI") + ip("IY"),
            ip("ZI") + ip("IZ"),
        ],
        tol,
    )?;
    let mut published_m: Vec<CMat> = ["XX", "XY", "XZ", "YX", "YY", "YZ", "ZX", "ZY", "ZZ"]
        .iter()
        .map(|w| ip(w))
        .collect();
    published_m.push(ip("XI") - ip("IX"));
    published_m.push(ip("YI") - ip("IY"));
    published_m.push(ip("ZI") - ip("IZ"));
    // single equivariant direction: the traceless part of SWAP
    let swap_traceless = (ip("XX") + ip("YY") + ip("ZZ")).scale(0.5);
    Ok(HomogeneousSpace {
        id: "su4/su2-spin-half",
        group: "SU(4)",
        subgroup: "SU(2), spin-1/2 tensor representation",
        g,
        k,
        symmetric: false,
        involution: None,
        cartan_seed: None,
        published_m,
        published_h: vec![],
        published_k: vec![],
        published_commutant: vec![swap_traceless],
        expected_dims: Some((11, 1, 0, 3)),
    })
}

fn single_qubit_orbit_space(tol: &Tolerance) -> Result<HomogeneousSpace> {
    let g = Arc::new(AlgebraBasis::su(2));
    let k = Subspace::from_span_matrices(
        g.clone(),
        &[ip("XI"), ip("YI"), ip("ZI"), ip("IX"), ip("IY"), ip("IZ")],
        tol,
    )?;
    let yy = PauliString::parse("YY").unwrap().matrix();
    Ok(HomogeneousSpace {
        id: "su4/su2xsu2",
        group: "SU(4)",
        subgroup: "SU(2) x SU(2)",
        g,
        k,
        symmetric: true,
        involution: Some(Involution::custom("custom:yy", yy, EntryOp::Transpose, -1.0)),
        cartan_seed: Some(ip("XX")),
        published_m: ["XX", "YY", "ZZ", "XY", "XZ", "YX", "YZ", "ZX", "ZY"]
            .iter()
            .map(|w| ip(w))
            .collect(),
        published_h: vec![ip("XX"), ip("YY"), ip("ZZ")],
        published_k: ["XI", "YI", "ZI", "IX", "IY", "IZ"].iter().map(|w| ip(w)).collect(),
        published_commutant: vec![],
        expected_dims: Some((9, 0, 0, 6)),
    })
}

fn su4_u3_space(tol: &Tolerance) -> Result<HomogeneousSpace> {
    let g = Arc::new(AlgebraBasis::su(2));
    let k = stabilizer_subalgebra(&g, &[basis_vector(4, 0)], StabilizerMode::Setwise, tol)?;
    // block generators [[0, x], [-x†, 0]] for x = e_j and x = i e_j
    let mut published_m = Vec::new();
    for j in 1..4 {
        let mut real = CMat::zeros(4, 4);
        real[(0, j)] = C_ONE;
        real[(j, 0)] = -C_ONE;
        published_m.push(real);
        let mut imag = CMat::zeros(4, 4);
        imag[(0, j)] = C_I;
        imag[(j, 0)] = C_I;
        published_m.push(imag);
    }
    Ok(HomogeneousSpace {
        id: "su4/u3",
        group: "SU(4)",
        subgroup: "U(3), stabilizer of the coset [|00>]",
        g,
        k,
        symmetric: true,
        involution: Some(Involution::type_aiii(1, 3)?),
        cartan_seed: None,
        published_m,
        published_h: vec![],
        published_k: vec![],
        published_commutant: vec![],
        // The commutant of this u(3) equals its one-dimensional center, so
        // the equivariant block sits inside k: (6, 0, 1, 8).
        expected_dims: Some((6, 0, 1, 8)),
    })
}

fn so4_so3_space(tol: &Tolerance) -> Result<HomogeneousSpace> {
    let g = Arc::new(AlgebraBasis::so4());
    let k = stabilizer_subalgebra(&g, &[basis_vector(4, 0)], StabilizerMode::Setwise, tol)?;
    Ok(HomogeneousSpace {
        id: "so4/so3",
        group: "SO(4)",
        subgroup: "SO(3), stabilizer of the coset [|00>] over the reals",
        g,
        k,
        symmetric: true,
        involution: Some(Involution::type_bdi(1, 3)?),
        cartan_seed: None,
        published_m: vec![],
        published_h: vec![],
        published_k: vec![],
        published_commutant: vec![],
        expected_dims: Some((3, 0, 0, 3)),
    })
}

fn spin_three_half_space(tol: &Tolerance) -> Result<HomogeneousSpace> {
    let g = Arc::new(AlgebraBasis::su(2));
    let s3 = 3.0f64.sqrt();
    let sx = CMat::from_row_slice(
        4,
        4,
        &[
            0.0.into(), s3.into(), 0.0.into(), 0.0.into(),
            s3.into(), 0.0.into(), 2.0.into(), 0.0.into(),
            0.0.into(), 2.0.into(), 0.0.into(), s3.into(),
            0.0.into(), 0.0.into(), s3.into(), 0.0.into(),
        ],
    );
    let sy = CMat::from_row_slice(
        4,
        4,
        &[
            0.0.into(), -s3 * C_I, 0.0.into(), 0.0.into(),
            s3 * C_I, 0.0.into(), -2.0 * C_I, 0.0.into(),
            0.0.into(), 2.0 * C_I, 0.0.into(), -s3 * C_I,
            0.0.into(), 0.0.into(), s3 * C_I, 0.0.into(),
        ],
    );
    let sz = CMat::from_diagonal(&nalgebra::DVector::from_vec(vec![
        3.0.into(),
        1.0.into(),
        (-1.0).into(),
        (-3.0).into(),
    ]));
    let k = Subspace::from_span_matrices(
        g.clone(),
        &[
            sx.map(|c| c * C_I),
            sy.map(|c| c * C_I),
            sz.map(|c| c * C_I),
        ],
        tol,
    )?;

    let a = 1.0 / 5.0f64.sqrt();
    let b = (5.0 + 15.0f64.sqrt()) / 10.0;
    let c = (5.0 - 15.0f64.sqrt()) / 10.0;
    let d = 2.0 / 5.0f64.sqrt();
    let mut published_m = vec![
        combo(&[(a, "IX"), (-b, "XX"), (c, "YY")]),
        combo(&[(a, "IY"), (b, "XY"), (c, "YX")]),
        combo(&[(-a, "IY"), (c, "XY"), (b, "YX")]),
        combo(&[(-a, "IX"), (-c, "XX"), (b, "YY")]),
        combo(&[(-d, "IZ"), (a, "ZI")]),
    ];
    for w in ["XI", "XZ", "YI", "YZ", "ZX", "ZY", "ZZ"] {
        published_m.push(ip(w));
    }
    Ok(HomogeneousSpace {
        id: "su4/su2-spin-three-half",
        group: "SU(4)",
        subgroup: "SU(2), spin-3/2 representation",
        g,
        k,
        symmetric: false,
        involution: None,
        cartan_seed: None,
        published_m,
        published_h: vec![],
        published_k: vec![],
        published_commutant: vec![],
        expected_dims: Some((12, 0, 0, 3)),
    })
}

fn sp2_space(tol: &Tolerance) -> Result<HomogeneousSpace> {
    let g = Arc::new(AlgebraBasis::su(2));
    let k_words = ["IY", "XI", "XX", "XZ", "YI", "YX", "YZ", "ZI", "ZX", "ZZ"];
    let published_k: Vec<CMat> = k_words.iter().map(|w| ip(w)).collect();
    let k = Subspace::from_span_matrices(g.clone(), &published_k, tol)?;
    Ok(HomogeneousSpace {
        id: "su4/sp2",
        group: "SU(4)",
        subgroup: "Sp(2)",
        g,
        k,
        symmetric: true,
        involution: Some(Involution::type_aii(2)?),
        cartan_seed: Some(ip("IX")),
        published_m: ["IX", "IZ", "XY", "YY", "ZY"].iter().map(|w| ip(w)).collect(),
        published_h: vec![ip("IX")],
        published_k,
        published_commutant: vec![],
        expected_dims: Some((5, 0, 0, 10)),
    })
}

fn so4_su2_space(tol: &Tolerance) -> Result<HomogeneousSpace> {
    // so(4) = su(2) ⊕ su(2) with ideals spanned by {IY, YX, YZ} and
    // {YI, XY, ZY}; the diagonal su(2) has trivial commutant, matching the
    // tabulated dimensions.
    let g = Arc::new(AlgebraBasis::so4());
    let k = Subspace::from_span_matrices(
        g.clone(),
        &[
            ip("IY") + ip("YI"),
            ip("YX") + ip("XY"),
            ip("YZ") + ip("ZY"),
        ],
        tol,
    )?;
    Ok(HomogeneousSpace {
        id: "so4/su2",
        group: "SO(4)",
        subgroup: "SU(2), diagonal embedding",
        g,
        k,
        symmetric: true,
        involution: None,
        cartan_seed: None,
        published_m: vec![
            ip("IY") - ip("YI"),
            ip("YX") - ip("XY"),
            ip("YZ") - ip("ZY"),
        ],
        published_h: vec![],
        published_k: vec![],
        published_commutant: vec![],
        expected_dims: Some((3, 0, 0, 3)),
    })
}

fn charge_preserving_space(tol: &Tolerance) -> Result<HomogeneousSpace> {
    let g = Arc::new(AlgebraBasis::so4());
    // pointwise stabilizer of |00> and |11>: rotations inside span{|01>, |10>}
    let k = stabilizer_subalgebra(
        &g,
        &[basis_vector(4, 0), basis_vector(4, 3)],
        StabilizerMode::Pointwise,
        tol,
    )?;
    let s2 = 2.0f64.sqrt();
    Ok(HomogeneousSpace {
        id: "so4/1xso2x1",
        group: "SO(4)",
        subgroup: "1 x SO(2) x 1, Givens rotations on the half-filled sector",
        g,
        k,
        symmetric: false,
        involution: None,
        cartan_seed: None,
        published_m: vec![
            ip("YI"),
            ip("YZ"),
            ip("ZY"),
            combo(&[(s2, "IY"), (1.0, "XY"), (1.0, "YX")]),
            combo(&[(-s2, "IY"), (1.0, "XY"), (1.0, "YX")]),
        ],
        published_h: vec![ip("XY"), ip("YX")],
        published_k: vec![ip("XY") - ip("YX")],
        published_commutant: vec![ip("XY") - ip("YX"), ip("XY") + ip("YX")],
        expected_dims: Some((4, 1, 1, 0)),
    })
}

fn grassmannian_space(tol: &Tolerance) -> Result<HomogeneousSpace> {
    let g = Arc::new(AlgebraBasis::su(3));
    let k = stabilizer_subalgebra(
        &g,
        &[basis_vector(8, 0), basis_vector(8, 1)],
        StabilizerMode::Setwise,
        tol,
    )?;

    let published_k = vec![
        ip("IIX"), ip("ZIX"), ip("IIZ"), ip("ZIZ"),
        combo(&[(-1.0, "IXX"), (1.0, "ZXX")]),
        combo(&[(-1.0, "IXZ"), (1.0, "ZXZ")]),
        combo(&[(-1.0, "IYX"), (1.0, "ZYX")]),
        combo(&[(-1.0, "IYZ"), (1.0, "ZYZ")]),
        ip("IZX"), ip("ZZX"), ip("IZZ"), ip("ZZZ"),
        combo(&[(-1.0, "XIX"), (1.0, "XZX")]),
        combo(&[(-1.0, "XIZ"), (1.0, "XZZ")]),
        combo(&[(-1.0, "XXX"), (-1.0, "YYX")]),
        combo(&[(-1.0, "XXZ"), (-1.0, "YYZ")]),
        combo(&[(-1.0, "XYX"), (1.0, "YXX")]),
        combo(&[(-1.0, "XYZ"), (1.0, "YXZ")]),
        combo(&[(-1.0, "XIY"), (1.0, "XZY")]),
        combo(&[(-1.0, "XXI"), (-1.0, "YYI")]),
        combo(&[(-1.0, "YIX"), (1.0, "YZX")]),
        combo(&[(-1.0, "YIZ"), (1.0, "YZZ")]),
        combo(&[(-1.0, "XYY"), (1.0, "YXY")]),
        combo(&[(1.0, "XII"), (-1.0, "XZI")]),
        combo(&[(1.0, "XXY"), (1.0, "YYY")]),
        combo(&[(1.0, "XYI"), (-1.0, "YXI")]),
        combo(&[(-1.0, "YIY"), (1.0, "YZY")]),
        combo(&[(-1.0, "YII"), (1.0, "YZI")]),
        ip("IIY"), ip("ZIY"),
        combo(&[(-1.0, "IXI"), (1.0, "ZXI")]),
        combo(&[(-1.0, "IXY"), (1.0, "ZXY")]),
        combo(&[(-1.0, "IYI"), (1.0, "ZYI")]),
        combo(&[(-1.0, "IYY"), (1.0, "ZYY")]),
        ip("IZI"), ip("ZZI"), ip("IZY"), ip("ZZY"), ip("ZII"),
    ];
    let published_m = vec![
        combo(&[(-1.0, "IXI"), (-1.0, "ZXI")]),
        combo(&[(-1.0, "IXY"), (-1.0, "ZXY")]),
        combo(&[(-1.0, "IYI"), (-1.0, "ZYI")]),
        combo(&[(-1.0, "IYY"), (-1.0, "ZYY")]),
        combo(&[(-1.0, "XII"), (-1.0, "XZI")]),
        combo(&[(-1.0, "XIY"), (-1.0, "XZY")]),
        combo(&[(-1.0, "XXI"), (1.0, "YYI")]),
        combo(&[(-1.0, "XXY"), (1.0, "YYY")]),
        combo(&[(-1.0, "XYI"), (-1.0, "YXI")]),
        combo(&[(-1.0, "XYY"), (-1.0, "YXY")]),
        combo(&[(1.0, "XIX"), (1.0, "XZX")]),
        combo(&[(1.0, "XIZ"), (1.0, "XZZ")]),
        combo(&[(-1.0, "YII"), (-1.0, "YZI")]),
        combo(&[(-1.0, "YIY"), (-1.0, "YZY")]),
        combo(&[(1.0, "XYX"), (1.0, "YXX")]),
        combo(&[(1.0, "XYZ"), (1.0, "YXZ")]),
        combo(&[(-1.0, "XXX"), (1.0, "YYX")]),
        combo(&[(-1.0, "XXZ"), (1.0, "YYZ")]),
        combo(&[(1.0, "YIX"), (1.0, "YZX")]),
        combo(&[(1.0, "YIZ"), (1.0, "YZZ")]),
        combo(&[(1.0, "IXX"), (1.0, "ZXX")]),
        combo(&[(1.0, "IXZ"), (1.0, "ZXZ")]),
        combo(&[(1.0, "IYX"), (1.0, "ZYX")]),
        combo(&[(1.0, "IYZ"), (1.0, "ZYZ")]),
    ];
    Ok(HomogeneousSpace {
        id: "su8/su2xu6",
        group: "SU(8)",
        subgroup: "S(U(2) x U(6)), stabilizer of a 2-plane",
        g,
        k,
        symmetric: true,
        involution: Some(Involution::type_aiii(2, 6)?),
        cartan_seed: None,
        published_m,
        published_h: vec![],
        published_k,
        published_commutant: vec![],
        // s(u(2) ⊕ u(6)) carries a one-dimensional center, i(ZII + IZI + ZZI),
        // inside k: the commutant equals that center, so (24, 0, 1, 38).
        expected_dims: Some((24, 0, 1, 38)),
    })
}

fn so4_u2_space(tol: &Tolerance) -> Result<HomogeneousSpace> {
    let g = Arc::new(AlgebraBasis::so4());
    let published_k: Vec<CMat> = ["IY", "YI", "YX", "YZ"].iter().map(|w| ip(w)).collect();
    let k = Subspace::from_span_matrices(g.clone(), &published_k, tol)?;
    Ok(HomogeneousSpace {
        id: "so4/u2",
        group: "SO(4)",
        subgroup: "U(2)",
        g,
        k,
        symmetric: true,
        involution: Some(Involution::type_diii(2)?),
        cartan_seed: Some(ip("XY")),
        published_m: vec![ip("XY"), ip("ZY")],
        published_h: vec![],
        published_k,
        published_commutant: vec![ip("YI")],
        expected_dims: Some((2, 0, 1, 3)),
    })
}
