//! Parameterized gate families generated by subspaces of a Lie algebra:
//! horizontal and equivariant exponentials, conjugated-exponential (KAK)
//! forms with circuit decompositions, and block-embedded stabilizer gates.

use crate::catalog::{self, HomogeneousSpace};
use crate::error::{Error, Result};
use crate::kernel::{
    expm_skew, kron, trace_dot, CMat, ExpDerivative, Tolerance, C_I, C_ONE, C_ZERO,
};
use crate::lie::Subspace;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum GateKind {
    Horizontal,
    Equivariant,
    Kak,
    Stabilizer,
    FullUnitary,
}

/// A parameterized gate: either `exp(Σ θ_j G_j)` over a fixed generator
/// basis, or the conjugated form `exp(B(α)) exp(h(φ)) exp(-B(α))`.
#[derive(Debug, Clone)]
pub struct GateSpec {
    pub kind: GateKind,
    pub space_id: String,
    /// Number of qubits the dense matrix acts on.
    pub qubit_span: usize,
    /// Generators in the published scale (pairwise orthogonal; exponential
    /// kinds only).
    generators: Vec<CMat>,
    /// Conjugating and Abelian generators for the Kak kind.
    kak_k: Vec<CMat>,
    kak_h: Vec<CMat>,
    /// The generating subspace, for projection residuals.
    subspace: Option<Subspace>,
}

/// Serializable summary (kind, space id, span, parameter count).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GateSpecInfo {
    pub kind: GateKind,
    pub space_id: String,
    pub qubit_span: usize,
    pub param_count: usize,
}

impl GateSpec {
    pub fn exponential(
        kind: GateKind,
        space_id: &str,
        generators: Vec<CMat>,
        subspace: Option<Subspace>,
    ) -> Self {
        assert!(!generators.is_empty());
        let dim = generators[0].nrows();
        assert!(dim.is_power_of_two());
        Self {
            kind,
            space_id: space_id.to_string(),
            qubit_span: dim.trailing_zeros() as usize,
            generators,
            kak_k: Vec::new(),
            kak_h: Vec::new(),
            subspace,
        }
    }

    pub fn kak(space_id: &str, kak_k: Vec<CMat>, kak_h: Vec<CMat>, subspace: Option<Subspace>) -> Self {
        assert!(!kak_k.is_empty() && !kak_h.is_empty());
        let dim = kak_k[0].nrows();
        Self {
            kind: GateKind::Kak,
            space_id: space_id.to_string(),
            qubit_span: dim.trailing_zeros() as usize,
            generators: Vec::new(),
            kak_k,
            kak_h,
            subspace,
        }
    }

    pub fn param_count(&self) -> usize {
        match self.kind {
            GateKind::Kak => self.kak_k.len() + self.kak_h.len(),
            _ => self.generators.len(),
        }
    }

    pub fn matrix_dim(&self) -> usize {
        1 << self.qubit_span
    }

    pub fn generators(&self) -> &[CMat] {
        &self.generators
    }

    pub fn subspace(&self) -> Option<&Subspace> {
        self.subspace.as_ref()
    }

    pub fn info(&self) -> GateSpecInfo {
        GateSpecInfo {
            kind: self.kind,
            space_id: self.space_id.clone(),
            qubit_span: self.qubit_span,
            param_count: self.param_count(),
        }
    }

    fn check_len(&self, theta: &[f64]) -> Result<()> {
        if theta.len() != self.param_count() {
            return Err(Error::ParamLengthMismatch {
                expected: self.param_count(),
                got: theta.len(),
            });
        }
        Ok(())
    }

    /// The algebra element `A(θ) = Σ θ_j G_j` (exponential kinds).
    pub fn generator(&self, theta: &[f64]) -> Result<CMat> {
        self.check_len(theta)?;
        assert!(self.kind != GateKind::Kak, "Kak gates have no single generator");
        Ok(linear_combination(&self.generators, theta))
    }

    /// Dense unitary of the gate at the given parameters.
    pub fn unitary(&self, theta: &[f64]) -> Result<CMat> {
        self.check_len(theta)?;
        match self.kind {
            GateKind::Kak => {
                let (alpha, phi) = theta.split_at(self.kak_k.len());
                kak_gate_unitary_from_bases(alpha, phi, &self.kak_k, &self.kak_h)
            }
            _ => expm_skew(&linear_combination(&self.generators, theta)),
        }
    }

    /// The unitary together with the effective generators
    /// `Ω_j = U† ∂_j U`, one per parameter.
    pub fn unitary_and_effective_generators(&self, theta: &[f64]) -> Result<(CMat, Vec<CMat>)> {
        self.check_len(theta)?;
        match self.kind {
            GateKind::Kak => {
                let (alpha, phi) = theta.split_at(self.kak_k.len());
                let b = linear_combination(&self.kak_k, alpha);
                let h = linear_combination(&self.kak_h, phi);
                let eb = ExpDerivative::new(&b)?;
                let eh = ExpDerivative::new(&h)?;
                let ebm = ExpDerivative::new(&b.map(|c| -c))?;
                let u = &eb.unitary * &eh.unitary * &ebm.unitary;
                let mut omegas = Vec::with_capacity(self.param_count());
                for kj in &self.kak_k {
                    let d_front = eb.directional(kj) * &eh.unitary * &ebm.unitary;
                    let d_back = &eb.unitary * &eh.unitary * ebm.directional(&kj.map(|c| -c));
                    omegas.push(u.adjoint() * (d_front + d_back));
                }
                for hj in &self.kak_h {
                    let d = &eb.unitary * eh.directional(hj) * &ebm.unitary;
                    omegas.push(u.adjoint() * d);
                }
                Ok((u, omegas))
            }
            _ => {
                let a = linear_combination(&self.generators, theta);
                let deriv = ExpDerivative::new(&a)?;
                let omegas = self
                    .generators
                    .iter()
                    .map(|g| deriv.effective_generator(g))
                    .collect();
                Ok((deriv.unitary, omegas))
            }
        }
    }
}

fn linear_combination(mats: &[CMat], coeffs: &[f64]) -> CMat {
    let mut out = CMat::zeros(mats[0].nrows(), mats[0].ncols());
    for (m, &c) in mats.iter().zip(coeffs.iter()) {
        if c != 0.0 {
            out += m.map(|v| v * Complex64::new(c, 0.0));
        }
    }
    out
}

/// `exp(B(α)) exp(h(φ)) exp(-B(α))` over explicit generator lists.
pub fn kak_gate_unitary_from_bases(
    alpha: &[f64],
    phi: &[f64],
    k_gens: &[CMat],
    h_gens: &[CMat],
) -> Result<CMat> {
    if alpha.len() != k_gens.len() || phi.len() != h_gens.len() {
        return Err(Error::ParamLengthMismatch {
            expected: k_gens.len() + h_gens.len(),
            got: alpha.len() + phi.len(),
        });
    }
    let b = linear_combination(k_gens, alpha);
    let h = linear_combination(h_gens, phi);
    let eb = expm_skew(&b)?;
    let ehm = expm_skew(&h)?;
    Ok(&eb * ehm * eb.adjoint())
}

/// Reparameterization pulled through a symmetry element: solves
/// `Σ θ'_j G_j = k† A(θ) k` exactly, so that `U(θ) · k = k · U(θ')`.
pub fn reparameterize_under_symmetry(
    spec: &GateSpec,
    k_unitary: &CMat,
    theta: &[f64],
    tol: &Tolerance,
) -> Result<Vec<f64>> {
    spec.check_len(theta)?;
    let a = linear_combination(&spec.generators, theta);
    let conjugated = k_unitary.adjoint() * &a * k_unitary;

    let n = spec.generators.len();
    let mut gram = nalgebra::DMatrix::<f64>::zeros(n, n);
    let mut rhs = nalgebra::DVector::<f64>::zeros(n);
    for i in 0..n {
        for j in 0..n {
            gram[(i, j)] = trace_dot(&spec.generators[i], &spec.generators[j]).re;
        }
        rhs[i] = trace_dot(&spec.generators[i], &conjugated).re;
    }
    let theta_prime = gram
        .lu()
        .solve(&rhs)
        .ok_or_else(|| Error::Parse("generator Gram matrix is singular".into()))?;

    let reconstructed = linear_combination(&spec.generators, theta_prime.as_slice());
    let residual = crate::kernel::fro_norm(&(&conjugated - reconstructed));
    if residual > tol.eq_tol * crate::kernel::fro_norm(&conjugated).max(1.0) {
        return Err(Error::SymmetryLeakage {
            residual,
            tol: tol.eq_tol,
        });
    }
    Ok(theta_prime.as_slice().to_vec())
}

/// Standard circuit primitives used by the two-qubit decomposition.
#[derive(Debug, Clone, Copy)]
pub enum CircuitPrimitive {
    /// `exp(-i θ X / 2)`
    Rx(f64),
    /// `exp(-i θ Y / 2)`
    Ry(f64),
    /// `exp(-i θ Z / 2)`
    Rz(f64),
    /// General SU(2) rotation `exp(i (a X + b Y + c Z))`.
    R3(f64, f64, f64),
    /// Controlled-NOT on two qubits; indices are 0 (upper) and 1 (lower).
    Cnot { control: usize, target: usize },
}

impl CircuitPrimitive {
    pub fn matrix(&self) -> CMat {
        use crate::pauli::PauliLetter;
        match *self {
            CircuitPrimitive::Rx(t) => rotation(&PauliLetter::X.matrix(), t),
            CircuitPrimitive::Ry(t) => rotation(&PauliLetter::Y.matrix(), t),
            CircuitPrimitive::Rz(t) => rotation(&PauliLetter::Z.matrix(), t),
            CircuitPrimitive::R3(a, b, c) => {
                let gen = PauliLetter::X.matrix().scale(a)
                    + PauliLetter::Y.matrix().scale(b)
                    + PauliLetter::Z.matrix().scale(c);
                expm_skew(&gen.map(|v| v * C_I)).expect("skew by construction")
            }
            CircuitPrimitive::Cnot { control, target } => cnot(control, target),
        }
    }
}

fn rotation(pauli: &CMat, theta: f64) -> CMat {
    let half = theta / 2.0;
    CMat::identity(2, 2).map(|c| c * Complex64::new(half.cos(), 0.0))
        - pauli.map(|c| c * C_I * Complex64::new(half.sin(), 0.0))
}

/// CNOT on a two-qubit register, qubit 0 as the most significant bit.
pub fn cnot(control: usize, target: usize) -> CMat {
    assert!(control < 2 && target < 2 && control != target);
    let mut m = CMat::zeros(4, 4);
    for basis in 0..4usize {
        let c_bit = (basis >> (1 - control)) & 1;
        let out = if c_bit == 1 {
            basis ^ (1 << (1 - target))
        } else {
            basis
        };
        m[(out, basis)] = C_ONE;
    }
    m
}

fn one_qubit_on(upper: bool, u: &CMat) -> CMat {
    if upper {
        kron(u, &CMat::identity(2, 2))
    } else {
        kron(&CMat::identity(2, 2), u)
    }
}

/// Middle block of the three-CNOT two-qubit decomposition: the drawn
/// skeleton CNOT(1→0) · [Rz(θ1) upper, Ry(θ2) lower] · CNOT(0→1) ·
/// [Ry(θ3) lower] · CNOT(1→0), wrapped in the fixed phase-frame gates
/// `(I ⊗ S) · skeleton · (S† ⊗ I)` that the schematic circuit absorbs into
/// its neighbors. With the frame included the block equals
/// `exp(i(c1 XX + c2 YY + c3 ZZ))` up to a global phase for every θ, with
/// `c = vatan_parameter_map(θ)`; without it the skeleton is
/// `SWAP · exp(-i(θ1 ZZ + θ2 XY + θ3 YX)/2)`, which leaves the interaction
/// span.
pub fn vatan_block(theta1: f64, theta2: f64, theta3: f64) -> CMat {
    let cnot_lu = cnot(1, 0);
    let cnot_ul = cnot(0, 1);
    let stage1 = one_qubit_on(true, &CircuitPrimitive::Rz(theta1).matrix())
        * one_qubit_on(false, &CircuitPrimitive::Ry(theta2).matrix());
    let stage2 = one_qubit_on(false, &CircuitPrimitive::Ry(theta3).matrix());
    let skeleton = &cnot_lu * stage2 * &cnot_ul * stage1 * &cnot_lu;
    let s = CMat::from_row_slice(2, 2, &[C_ONE, C_ZERO, C_ZERO, C_I]);
    let block = one_qubit_on(false, &s) * skeleton * one_qubit_on(true, &s.adjoint());
    // fix the global phase so the block lands in SU(4): the raw product has
    // determinant -1 and equals e^{-iπ/4} exp(i c·(XX,YY,ZZ))
    block.map(|c| c * Complex64::from_polar(1.0, std::f64::consts::FRAC_PI_4))
}

/// Frozen affine map from the circuit angles (θ1, θ2, θ3) of `vatan_block`
/// to the interaction coefficients (c1, c2, c3) of
/// `exp(i(c1 XX + c2 YY + c3 ZZ))`: fitted once from diagonal phases in the
/// magic basis, rounded to the exact constants the fit converges to, and
/// verified on random points.
pub const VATAN_MAP_LINEAR: [[f64; 3]; 3] = [
    [0.0, 0.0, 0.5],
    [0.0, -0.5, 0.0],
    [-0.5, 0.0, 0.0],
];
pub const VATAN_MAP_OFFSET: [f64; 3] = [
    std::f64::consts::FRAC_PI_4,
    std::f64::consts::FRAC_PI_4,
    std::f64::consts::FRAC_PI_4,
];

pub fn vatan_parameter_map(theta: [f64; 3]) -> [f64; 3] {
    let mut c = [0.0; 3];
    for i in 0..3 {
        c[i] = VATAN_MAP_OFFSET[i]
            + (0..3).map(|j| VATAN_MAP_LINEAR[i][j] * theta[j]).sum::<f64>();
    }
    c
}

/// Circuit angles that map to the given interaction coefficients (inverse of
/// `vatan_parameter_map`).
pub fn vatan_inverse_map(c: [f64; 3]) -> [f64; 3] {
    // invert the 3x3 linear part
    let lin = nalgebra::Matrix3::from_fn(|i, j| VATAN_MAP_LINEAR[i][j]);
    let rhs = nalgebra::Vector3::new(
        c[0] - VATAN_MAP_OFFSET[0],
        c[1] - VATAN_MAP_OFFSET[1],
        c[2] - VATAN_MAP_OFFSET[2],
    );
    let theta = lin.lu().solve(&rhs).expect("map is invertible");
    [theta[0], theta[1], theta[2]]
}

/// `exp(i(c1 XX + c2 YY + c3 ZZ))`.
pub fn canonical_interaction(c: [f64; 3]) -> CMat {
    let gen = catalog::ip("XX").scale(c[0])
        + catalog::ip("YY").scale(c[1])
        + catalog::ip("ZZ").scale(c[2]);
    expm_skew(&gen).expect("skew by construction")
}

/// The full two-qubit horizontal-gate circuit: equal single-qubit layers
/// `R3(a) ⊗ R3(b)` on both sides of the interaction block.
pub fn horizontal_two_qubit_circuit(a: [f64; 3], b: [f64; 3], theta: [f64; 3]) -> CMat {
    let left = one_qubit_on(true, &CircuitPrimitive::R3(a[0], a[1], a[2]).matrix())
        * one_qubit_on(false, &CircuitPrimitive::R3(b[0], b[1], b[2]).matrix());
    let block = vatan_block(theta[0], theta[1], theta[2]);
    &left * block * left.adjoint()
}

/// Generators of the `[[0, x], [-x†, 0]]` block family for SU(N)/U(N-1):
/// real and imaginary direction per component of x, giving 2N-2 parameters.
pub fn su_n_u_nm1_generators(n: usize) -> Vec<CMat> {
    assert!(n >= 2);
    let mut gens = Vec::with_capacity(2 * (n - 1));
    for j in 1..n {
        let mut real = CMat::zeros(n, n);
        real[(0, j)] = C_ONE;
        real[(j, 0)] = -C_ONE;
        gens.push(real);
        let mut imag = CMat::zeros(n, n);
        imag[(0, j)] = C_I;
        imag[(j, 0)] = C_I;
        gens.push(imag);
    }
    gens
}

/// Stabilizer gate for SU(N)/U(N-1): `exp [[0, x], [-x†, 0]]` with
/// `x ∈ C^{N-1}` as the top block row.
pub fn stabilizer_gate_su_n_u_nm1(x: &[Complex64], n: usize) -> Result<CMat> {
    if x.len() != n - 1 {
        return Err(Error::ParamLengthMismatch {
            expected: n - 1,
            got: x.len(),
        });
    }
    let mut gen = CMat::zeros(n, n);
    for (j, &xj) in x.iter().enumerate() {
        gen[(0, j + 1)] = xj;
        gen[(j + 1, 0)] = -xj.conj();
    }
    expm_skew(&gen)
}

/// Generators of the real antisymmetric block family for SO(N)/O(N-1).
pub fn so_n_o_nm1_generators(n: usize) -> Vec<CMat> {
    assert!(n >= 2);
    (1..n)
        .map(|j| {
            let mut m = CMat::zeros(n, n);
            m[(0, j)] = C_ONE;
            m[(j, 0)] = -C_ONE;
            m
        })
        .collect()
}

/// Builds the standard gate for a catalog space: the horizontal exponential
/// over the published (or computed) basis of m, with the stabilizer block
/// form for the projective-space entries.
pub fn gate_catalog(space_id: &str) -> Result<GateSpec> {
    let tol = Tolerance::default();
    match catalog::resolve_alias(space_id) {
        "su4/full" => {
            let g = crate::lie::AlgebraBasis::su(2);
            let gens = (1..16)
                .map(|code| g.element(code - 1).map(|c| c * Complex64::new(2.0, 0.0)))
                .collect();
            return Ok(GateSpec::exponential(
                GateKind::FullUnitary,
                "su4/full",
                gens,
                None,
            ));
        }
        "so4/full" => {
            let g = crate::lie::AlgebraBasis::so4();
            let gens = (0..6)
                .map(|j| g.element(j).map(|c| c * Complex64::new(2.0, 0.0)))
                .collect();
            return Ok(GateSpec::exponential(
                GateKind::FullUnitary,
                "so4/full",
                gens,
                None,
            ));
        }
        _ => {}
    }

    let space = catalog::space(space_id)?;
    let decomp = space.decomposition(&tol)?;
    let kind = match space.id {
        "su4/u3" | "so4/so3" => GateKind::Stabilizer,
        _ => GateKind::Horizontal,
    };
    let generators = horizontal_generators(&space, &decomp.m, &tol);
    Ok(GateSpec::exponential(
        kind,
        space.id,
        generators,
        Some(decomp.m),
    ))
}

fn horizontal_generators(space: &HomogeneousSpace, m: &Subspace, _tol: &Tolerance) -> Vec<CMat> {
    if space.id == "su4/u3" {
        return su_n_u_nm1_generators(4);
    }
    if space.id == "so4/so3" {
        return so_n_o_nm1_generators(4);
    }
    if !space.published_m.is_empty() {
        return space.published_m.clone();
    }
    // fall back to the computed orthonormal basis, rescaled to Pauli norm
    let scale = (m.ambient().matrix_dim() as f64).sqrt();
    m.basis_matrices()
        .into_iter()
        .map(|b| b.map(|c| c * Complex64::new(scale, 0.0)))
        .collect()
}

/// Equivariant gate for a space with a nontrivial commutant: generated by an
/// orthonormalized basis of g^k.
pub fn equivariant_catalog(space_id: &str) -> Result<GateSpec> {
    let tol = Tolerance::default();
    let space = catalog::space(space_id)?;
    let decomp = space.decomposition(&tol)?;
    if decomp.gk.dim() == 0 {
        return Err(Error::EmptySubspace);
    }
    let gens: Vec<CMat> = if !space.published_commutant.is_empty() {
        let mut out = Vec::new();
        for mat in &space.published_commutant {
            let norm = crate::kernel::fro_norm(mat);
            out.push(mat.map(|c| c / Complex64::new(norm, 0.0)));
        }
        out
    } else {
        decomp.gk.basis_matrices()
    };
    Ok(GateSpec::exponential(
        GateKind::Equivariant,
        space.id,
        gens,
        Some(decomp.gk),
    ))
}

/// KAK-form gate for a symmetric catalog space: conjugating layer over k,
/// Abelian layer over the published (or computed) Cartan subalgebra.
pub fn kak_catalog(space_id: &str) -> Result<GateSpec> {
    let tol = Tolerance::default();
    let space = catalog::space(space_id)?;
    if !space.symmetric {
        return Err(Error::Parse(format!(
            "space `{}` is not symmetric; no KAK form",
            space.id
        )));
    }
    let decomp = space.decomposition(&tol)?;
    let k_gens: Vec<CMat> = if !space.published_k.is_empty() {
        space.published_k.clone()
    } else {
        decomp.k.basis_matrices()
    };
    let h_gens: Vec<CMat> = if !space.published_h.is_empty() {
        space.published_h.clone()
    } else {
        crate::lie::cartan_subalgebra(&decomp.m, &[0], &tol)?.basis_matrices()
    };
    Ok(GateSpec::kak(space.id, k_gens, h_gens, Some(decomp.m)))
}

/// The magic basis: conjugation by this matrix maps SU(2)⊗SU(2) onto SO(4)
/// and the two-body interaction span onto real diagonals.
pub fn magic_basis() -> CMat {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let z = C_ZERO;
    let one = Complex64::new(s, 0.0);
    let i = Complex64::new(0.0, s);
    CMat::from_row_slice(
        4,
        4,
        &[
            one, i, z, z, //
            z, z, i, one, //
            z, z, i, -one, //
            one, -i, z, z,
        ],
    )
}

/// KAK factorization of `exp(X)` for `X` in the horizontal space of
/// SU(4)/(SU(2)×SU(2)): returns `(K, c)` with
/// `exp(X) = K · exp(i(c1 XX + c2 YY + c3 ZZ)) · K†` and `K ∈ SU(2)⊗SU(2)`.
pub fn kak_factorize_su4(x: &CMat) -> Result<(CMat, [f64; 3])> {
    let b = magic_basis();
    // in the magic basis, m becomes i · (real symmetric)
    let tilde = b.adjoint() * x * &b;
    let sym = tilde.map(|c| (c * (-C_I)).re);
    let residual: f64 = tilde
        .iter()
        .zip(sym.iter())
        .map(|(t, &s)| (t - Complex64::new(0.0, s)).norm_sqr())
        .sum::<f64>()
        .sqrt();
    if residual > 1e-8 * crate::kernel::fro_norm(x).max(1.0) {
        return Err(Error::Parse(format!(
            "generator is not horizontal for SU(4)/(SU(2)xSU(2)) (residual {residual:.3e})"
        )));
    }
    // Jacobi on a real symmetric matrix keeps the eigenvectors exactly real
    let real_sym = CMat::from_fn(4, 4, |r, c| {
        Complex64::new(0.5 * (sym[(r, c)] + sym[(c, r)]), 0.0)
    });
    let (eigenvalues, eigenvectors) = crate::kernel::herm_eig(&real_sym, 1e-9)?;
    let mut o = nalgebra::DMatrix::<f64>::from_fn(4, 4, |r, c| eigenvectors[(r, c)].re);
    if o.determinant() < 0.0 {
        let flipped = -o.column(0).into_owned();
        o.set_column(0, &flipped);
    }
    let o_c = CMat::from_iterator(4, 4, o.iter().map(|&v| Complex64::new(v, 0.0)));
    let k = &b * &o_c * b.adjoint();

    // the diagonal in the magic basis is an element of i span{XX, YY, ZZ}
    let d = CMat::from_diagonal(&nalgebra::DVector::from_iterator(
        4,
        eigenvalues.iter().map(|&l| Complex64::new(0.0, l)),
    ));
    let h = &b * d * b.adjoint();
    let mut c = [0.0; 3];
    for (idx, word) in ["XX", "YY", "ZZ"].iter().enumerate() {
        c[idx] = trace_dot(&catalog::ip(word), &h).re / 4.0;
    }
    Ok((k, c))
}
