//! Decision procedures for indirect controllability.
//!
//! An [`IndirectProblem`] describes a bipartite system S+A in which only the
//! auxiliary factor A is actuated: a drift on each factor, interaction terms
//! `i·S_j ⊗ σ_j`, and a control subalgebra on A. This module turns such a
//! problem into its dynamical Lie algebra, disintegrates the algebra into the
//! structured tensor-product basis (identity⊗σ block, pure-tensor blocks per
//! auxiliary basis element, and the D⊗1 block), classifies the D-block into
//! one of three cases, evaluates the partial-trace observability criterion at
//! a given auxiliary state, and constructs explicit counterexample states for
//! the non-full cases. [`check_equivalence`] runs the whole pipeline and
//! cross-checks that complete controllability and the mixed-state indirect
//! criterion agree.

use thiserror::Error;

use crate::lie::{
    ad_saturate, lie_closure, observability_space, subspace_intersect, LieBasis, LieError, Subspace,
};
use crate::linalg::{
    commutator, kron, orthonormalize, partial_trace_a, BipartiteDims, ComplexMatrix, DensityMatrix,
    LinalgError,
};
use crate::systems::gell_mann_basis;

#[derive(Debug, Error)]
pub enum ControlError {
    #[error("invalid indirect-control problem: {0}")]
    InvalidProblem(String),
    #[error("control algebra generates a {got}-dimensional algebra, expected su(n_A) of dimension {want}")]
    ControlNotFull { got: usize, want: usize },
    #[error("basis does not contain the full local auxiliary algebra 1⊗su(n_A)")]
    MissingLocalAlgebra,
    #[error(
        "disintegration failure: block dimensions sum to {found}, algebra dimension is {expected}"
    )]
    DisintegrationFailure { found: usize, expected: usize },
    #[error("rho_S must differ from the maximally mixed state")]
    MaximallyMixedRhoS,
    #[error("inputs do not commute (commutator norm {0:.3e})")]
    NonCommuting(f64),
    #[error("input is not in su(n): {0}")]
    NotSuElement(String),
    #[error("no invariant state distinct from the maximally mixed one: trivial commutant")]
    TrivialCommutant,
    #[error("requires an even auxiliary dimension (got {0})")]
    NeedsEven(usize),
    #[error("requires an odd auxiliary dimension (got {0})")]
    NeedsOdd(usize),
    #[error("diagonal position {j} out of range for dimension {n}")]
    PositionOutOfRange { j: usize, n: usize },
    #[error("operation requires case label {expected:?}, structured basis has {got:?}")]
    WrongCase { expected: CaseLabel, got: CaseLabel },
    #[error("consistency violation: {0}")]
    Inconsistency(String),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Lie(#[from] LieError),
}

/// The three possibilities for the dimension s of the D⊗1 block.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CaseLabel {
    /// s = d_S: the left factors of the local block span su(n_S).
    FullLocal,
    /// s = 0: no D⊗1 element at all.
    NoLocal,
    /// 0 < s < d_S.
    Intermediate,
}

impl std::fmt::Display for CaseLabel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CaseLabel::FullLocal => write!(f, "full-local"),
            CaseLabel::NoLocal => write!(f, "no-local"),
            CaseLabel::Intermediate => write!(f, "intermediate"),
        }
    }
}

/// The data generating the dynamical Lie algebra of an indirect control
/// scheme: drifts K (on S) and L (on A), interaction pairs (S_j, σ_j)
/// entering as `i·S_j ⊗ σ_j`, and the directly actuated directions on A.
#[derive(Debug, Clone)]
pub struct IndirectProblem {
    dims: BipartiteDims,
    drift_k: ComplexMatrix,
    drift_l: ComplexMatrix,
    couplings: Vec<(ComplexMatrix, ComplexMatrix)>,
    control_algebra: Vec<ComplexMatrix>,
    tol: f64,
}

fn check_su(m: &ComplexMatrix, n: usize, tol: f64, what: &str) -> Result<(), ControlError> {
    if m.dim() != n {
        return Err(ControlError::InvalidProblem(format!(
            "{what}: dimension {} instead of {n}",
            m.dim()
        )));
    }
    if !m.is_skew_hermitian(tol) {
        return Err(ControlError::NotSuElement(format!(
            "{what} is not skew-Hermitian"
        )));
    }
    if !m.is_traceless(tol) {
        return Err(ControlError::NotSuElement(format!(
            "{what} has a nonzero trace component"
        )));
    }
    Ok(())
}

impl IndirectProblem {
    /// Validates every structural invariant: drifts in su of the right factor,
    /// all S_j nonzero, the σ_j linearly independent, at least one coupling,
    /// and every control element in su(n_A).
    pub fn new(
        dims: BipartiteDims,
        drift_k: ComplexMatrix,
        drift_l: ComplexMatrix,
        couplings: Vec<(ComplexMatrix, ComplexMatrix)>,
        control_algebra: Vec<ComplexMatrix>,
        tol: f64,
    ) -> Result<Self, ControlError> {
        check_su(&drift_k, dims.n_s(), tol, "drift K")?;
        check_su(&drift_l, dims.n_a(), tol, "drift L")?;
        if couplings.is_empty() {
            return Err(ControlError::InvalidProblem(
                "at least one interaction pair (S_j, sigma_j) is required".into(),
            ));
        }
        for (j, (s, sigma)) in couplings.iter().enumerate() {
            check_su(s, dims.n_s(), tol, &format!("coupling S_{}", j + 1))?;
            check_su(sigma, dims.n_a(), tol, &format!("coupling sigma_{}", j + 1))?;
            if s.hs_norm() <= tol {
                return Err(ControlError::InvalidProblem(format!(
                    "coupling S_{} is zero",
                    j + 1
                )));
            }
        }
        let sigmas: Vec<ComplexMatrix> = couplings.iter().map(|(_, s)| s.clone()).collect();
        if orthonormalize(&sigmas, &[], tol).len() != sigmas.len() {
            return Err(ControlError::InvalidProblem(
                "the sigma_j are linearly dependent".into(),
            ));
        }
        for (j, b) in control_algebra.iter().enumerate() {
            check_su(b, dims.n_a(), tol, &format!("control element {}", j + 1))?;
        }
        Ok(Self {
            dims,
            drift_k,
            drift_l,
            couplings,
            control_algebra,
            tol,
        })
    }

    pub fn dims(&self) -> &BipartiteDims {
        &self.dims
    }

    pub fn drift_k(&self) -> &ComplexMatrix {
        &self.drift_k
    }

    pub fn drift_l(&self) -> &ComplexMatrix {
        &self.drift_l
    }

    pub fn couplings(&self) -> &[(ComplexMatrix, ComplexMatrix)] {
        &self.couplings
    }

    pub fn control_algebra(&self) -> &[ComplexMatrix] {
        &self.control_algebra
    }

    pub fn tol(&self) -> f64 {
        self.tol
    }

    /// The same problem seen through local unitaries: every S-side matrix is
    /// conjugated by `t_s`, every A-side matrix by `t_a`. Controllability
    /// facts and criterion verdicts are invariant under this transformation.
    pub fn locally_conjugated(
        &self,
        t_s: &ComplexMatrix,
        t_a: &ComplexMatrix,
    ) -> Result<Self, ControlError> {
        let conj_s = |m: &ComplexMatrix| &(t_s * m) * &t_s.adjoint();
        let conj_a = |m: &ComplexMatrix| &(t_a * m) * &t_a.adjoint();
        IndirectProblem::new(
            self.dims,
            conj_s(&self.drift_k),
            conj_a(&self.drift_l),
            self.couplings
                .iter()
                .map(|(s, sigma)| (conj_s(s), conj_a(sigma)))
                .collect(),
            self.control_algebra.iter().map(conj_a).collect(),
            self.tol,
        )
    }

    /// The drift generator `J = K⊗1 + 1⊗L + Σ_j i·S_j⊗σ_j`.
    pub fn drift_generator(&self) -> ComplexMatrix {
        let id_s = ComplexMatrix::identity(self.dims.n_s());
        let id_a = ComplexMatrix::identity(self.dims.n_a());
        let mut j = &kron(&self.drift_k, &id_a) + &kron(&id_s, &self.drift_l);
        for (s, sigma) in &self.couplings {
            j = &j + &kron(s, sigma).times_i();
        }
        j
    }
}

/// The generator set of the dynamical Lie algebra: `{J} ∪ {1⊗b}` over the
/// control elements, in that order.
pub fn build_generators(p: &IndirectProblem) -> Vec<ComplexMatrix> {
    let id_s = ComplexMatrix::identity(p.dims.n_s());
    let mut gens = vec![p.drift_generator()];
    for b in &p.control_algebra {
        gens.push(kron(&id_s, b));
    }
    gens
}

/// Complete controllability under the traceless convention: the closure spans
/// all of su(n_S·n_A).
pub fn is_completely_controllable(basis: &LieBasis, dims: &BipartiteDims) -> bool {
    let n = dims.total();
    basis.ambient_dim() == n && basis.dim() == n * n - 1
}

/// Simultaneously diagonalize a commuting pair of su(n) elements.
///
/// Diagonalizes x, then block-diagonalizes y within x's eigenvalue clusters.
/// Returns the eigenvalue vectors (x = U·i·diag(xs)·U†, same for ys) and U.
fn simultaneous_diagonalize(
    x: &ComplexMatrix,
    y: &ComplexMatrix,
    tol: f64,
) -> Result<(Vec<f64>, Vec<f64>, ComplexMatrix), ControlError> {
    let n = x.dim();
    let minus_i = num_complex::Complex64::new(0.0, -1.0);
    let (xs, mut u) = x.scale_c(minus_i).hermitian_eigen();

    let y_rot = &(&u.adjoint() * y) * &u;
    let h_y = y_rot.scale_c(minus_i);

    // cluster x's eigenvalues; commuting y is block-diagonal across clusters
    let cluster_tol = tol.max(1e-15).sqrt() * x.hs_norm().max(1.0);
    let mut start = 0;
    while start < n {
        let mut end = start + 1;
        while end < n && xs[end] - xs[end - 1] <= cluster_tol {
            end += 1;
        }
        let k = end - start;
        if k > 1 {
            // Hermitian sub-block, symmetrized to absorb rounding
            let block = ComplexMatrix::from_fn(k, |a, b| {
                let z = h_y.entry(start + a, start + b);
                let w = h_y.entry(start + b, start + a).conj();
                (z + w) * 0.5
            });
            let (_, bvecs) = block.hermitian_eigen();
            // rotate the corresponding columns of u
            let cols: Vec<Vec<num_complex::Complex64>> = (0..k)
                .map(|c| (0..n).map(|r| u.entry(r, start + c)).collect())
                .collect();
            for r in 0..n {
                for c in 0..k {
                    let acc = cols
                        .iter()
                        .enumerate()
                        .map(|(m, col)| col[r] * bvecs.entry(m, c))
                        .sum();
                    u.set_entry(r, start + c, acc);
                }
            }
        }
        start = end;
    }

    // read both eigenvalue vectors off the final common frame, so each
    // position pairs the x and y values of the same eigenvector even when a
    // cluster rotation has shuffled near-degenerate positions
    let diag_in_frame = |m: &ComplexMatrix| -> Vec<f64> {
        (0..n)
            .map(|p| {
                let mut acc = num_complex::Complex64::new(0.0, 0.0);
                for r in 0..n {
                    for s in 0..n {
                        acc += u.entry(r, p).conj() * m.entry(r, s) * u.entry(s, p);
                    }
                }
                (acc * minus_i).re
            })
            .collect()
    };
    let xs = diag_in_frame(x);
    let ys = diag_in_frame(y);
    Ok((xs, ys, u))
}

/// Linear-dependence test for a pair in su(n), following the commutator /
/// simultaneous-diagonalization route: a commuting pair is dependent iff the
/// eigenvalue cross-products `x_a·y_b` and `x_b·y_a` agree for every pair of
/// positions. Zero matrices are dependent with anything.
pub fn su_pair_dependent(
    x: &ComplexMatrix,
    y: &ComplexMatrix,
    tol: f64,
) -> Result<bool, ControlError> {
    check_su(x, x.dim(), tol, "dependence-test input x")?;
    check_su(y, x.dim(), tol, "dependence-test input y")?;
    if x.hs_norm() <= tol || y.hs_norm() <= tol {
        return Ok(true);
    }
    let scale = (x.hs_norm() * y.hs_norm()).max(1.0);
    let comm_norm = commutator(x, y)?.hs_norm();
    if comm_norm > tol * scale {
        return Ok(false);
    }
    let (xs, ys, _) = simultaneous_diagonalize(x, y, tol)?;
    let n = xs.len();
    for a in 0..n {
        for b in (a + 1)..n {
            if (xs[a] * ys[b] - xs[b] * ys[a]).abs() > tol * scale {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Outcome of the witness search for a commuting pair.
#[derive(Debug, Clone)]
pub enum DependenceWitness {
    /// The pair is linearly dependent; no witness exists.
    Dependent,
    /// n = 2: an independent commuting pair admits no double-bracket witness
    /// (the construction needs three distinct indices).
    DimensionTwo,
    /// A witness A with `[[A,x],[A,y]] ≠ 0`.
    Witness(ComplexMatrix),
}

fn basis_a_jk(n: usize, j: usize, k: usize) -> ComplexMatrix {
    let one = num_complex::Complex64::new(1.0, 0.0);
    let mut m = ComplexMatrix::zeros(n);
    m.set_entry(j, k, one);
    m.set_entry(k, j, -one);
    m
}

/// For an independent commuting pair, produce a matrix A certifying
/// independence through `[[A,x],[A,y]] ≠ 0`.
///
/// The search runs over the two-transposition family `A_ab + A_ga`,
/// `A_ab + A_gb` in the simultaneous eigenbasis, in lexicographic (a, b, g)
/// order, and rotates the first hit back to the original frame.
pub fn dependence_witness(
    x: &ComplexMatrix,
    y: &ComplexMatrix,
    tol: f64,
) -> Result<DependenceWitness, ControlError> {
    check_su(x, x.dim(), tol, "dependence-test input x")?;
    check_su(y, x.dim(), tol, "dependence-test input y")?;
    let scale = (x.hs_norm() * y.hs_norm()).max(1.0);
    let comm_norm = commutator(x, y)?.hs_norm();
    if comm_norm > tol * scale {
        return Err(ControlError::NonCommuting(comm_norm));
    }
    if su_pair_dependent(x, y, tol)? {
        return Ok(DependenceWitness::Dependent);
    }
    let n = x.dim();
    if n == 2 {
        return Ok(DependenceWitness::DimensionTwo);
    }
    let (_, _, u) = simultaneous_diagonalize(x, y, tol)?;
    let wtol = tol * scale;
    for a in 0..n {
        for b in 0..n {
            if b == a {
                continue;
            }
            for g in 0..n {
                if g == a || g == b {
                    continue;
                }
                let ab = basis_a_jk(n, a, b);
                for cand in [&ab + &basis_a_jk(n, g, a), &ab + &basis_a_jk(n, g, b)] {
                    let rotated = &(&u * &cand) * &u.adjoint();
                    let w = commutator(&commutator(&rotated, x)?, &commutator(&rotated, y)?)?;
                    if w.hs_norm() > wtol {
                        return Ok(DependenceWitness::Witness(rotated));
                    }
                }
            }
        }
    }
    Err(ControlError::Inconsistency(
        "independent commuting pair admitted no witness in the search family".into(),
    ))
}

/// The structured tensor-product basis of a closed algebra containing
/// 1⊗su(n_A): the local auxiliary block, per-σ_j left-factor blocks, and the
/// D⊗1 block, with the case label derived from the D-block dimension.
#[derive(Debug, Clone)]
pub struct StructuredBasis {
    dims: BipartiteDims,
    sigma_basis: Vec<ComplexMatrix>,
    local_a: Vec<ComplexMatrix>,
    coupled: Vec<Vec<ComplexMatrix>>,
    local_s: Vec<ComplexMatrix>,
    case_label: CaseLabel,
    algebra_dim: usize,
}

impl StructuredBasis {
    pub fn dims(&self) -> &BipartiteDims {
        &self.dims
    }

    /// The fixed orthonormal su(n_A) basis the coupled blocks refer to.
    pub fn sigma_basis(&self) -> &[ComplexMatrix] {
        &self.sigma_basis
    }

    /// The normalized `1⊗σ_j` elements.
    pub fn local_a(&self) -> &[ComplexMatrix] {
        &self.local_a
    }

    /// For each σ_j, the orthonormal left factors S with `i·S⊗σ_j` in the
    /// algebra.
    pub fn coupled(&self) -> &[Vec<ComplexMatrix>] {
        &self.coupled
    }

    /// The normalized left factors D with `D⊗1` in the algebra.
    pub fn local_s(&self) -> &[ComplexMatrix] {
        &self.local_s
    }

    pub fn case_label(&self) -> CaseLabel {
        self.case_label
    }

    pub fn algebra_dim(&self) -> usize {
        self.algebra_dim
    }

    pub fn coupled_dims(&self) -> Vec<usize> {
        self.coupled.iter().map(Vec::len).collect()
    }

    /// All coupled left factors, flattened in block order.
    pub fn all_left_factors(&self) -> Vec<&ComplexMatrix> {
        self.coupled.iter().flatten().collect()
    }

    pub fn block_dim_sum(&self) -> usize {
        self.local_a.len() + self.coupled.iter().map(Vec::len).sum::<usize>() + self.local_s.len()
    }
}

/// Case classification from the D⊗1 block dimension.
pub fn classify_case(s_dim: usize, dims: &BipartiteDims) -> CaseLabel {
    if s_dim == dims.d_s() {
        CaseLabel::FullLocal
    } else if s_dim == 0 {
        CaseLabel::NoLocal
    } else {
        CaseLabel::Intermediate
    }
}

/// Disintegrate a closed algebra containing 1⊗su(n_A) into the structured
/// basis, by intersecting it with the pairwise-orthogonal ambient blocks
/// `{1⊗σ}`, `{i·S⊗σ_j : S ∈ su(n_S)}` per fixed basis element σ_j, and
/// `{D⊗1 : D ∈ su(n_S)}`.
///
/// The intersections exhaust the algebra whenever it admits a pure-tensor
/// basis; the dimension-sum check enforces exactly that and reports a
/// `DisintegrationFailure` otherwise.
pub fn disintegrate(
    basis: &LieBasis,
    dims: &BipartiteDims,
    tol: f64,
) -> Result<StructuredBasis, ControlError> {
    let n = dims.total();
    if basis.ambient_dim() != n {
        return Err(ControlError::Lie(LieError::DimensionMismatch {
            left: basis.ambient_dim(),
            right: n,
        }));
    }
    let sigma_basis = gell_mann_basis(dims.n_a());
    let g_s = gell_mann_basis(dims.n_s());
    let id_s = ComplexMatrix::identity(dims.n_s());
    let id_a = ComplexMatrix::identity(dims.n_a());
    let inv_sqrt_ns = 1.0 / (dims.n_s() as f64).sqrt();
    let inv_sqrt_na = 1.0 / (dims.n_a() as f64).sqrt();

    // hypothesis: the full local auxiliary algebra is present
    let mut local_a = Vec::with_capacity(dims.d_a());
    for sigma in &sigma_basis {
        let elem = kron(&id_s, sigma).scale(inv_sqrt_ns);
        if !basis.contains(&elem, tol)? {
            return Err(ControlError::MissingLocalAlgebra);
        }
        local_a.push(elem);
    }

    let algebra_span = basis.to_subspace();

    let mut coupled = Vec::with_capacity(dims.d_a());
    for sigma in &sigma_basis {
        let plane: Vec<ComplexMatrix> = g_s.iter().map(|g| kron(g, sigma).times_i()).collect();
        let plane = Subspace::from_orthonormal(n, plane);
        let inter = subspace_intersect(&algebra_span, &plane, tol)?;
        let mut lefts = Vec::with_capacity(inter.dim());
        for m in inter.elements() {
            // M = i·S⊗σ_j with σ_j unit norm, so S = i·Tr_A(M·(1⊗σ_j))
            let s = partial_trace_a(&(m * &kron(&id_s, sigma)), dims)?.times_i();
            lefts.push(s);
        }
        let lefts = orthonormalize(&lefts, &[], tol);
        for s in &lefts {
            let recon = kron(s, sigma).times_i();
            if !basis.contains(&recon, tol)? {
                return Err(ControlError::Inconsistency(
                    "reconstructed coupled tensor element fails algebra membership".into(),
                ));
            }
        }
        coupled.push(lefts);
    }

    let d_plane: Vec<ComplexMatrix> = g_s
        .iter()
        .map(|g| kron(g, &id_a).scale(inv_sqrt_na))
        .collect();
    let d_plane = Subspace::from_orthonormal(n, d_plane);
    let inter = subspace_intersect(&algebra_span, &d_plane, tol)?;
    let mut local_s = Vec::with_capacity(inter.dim());
    for m in inter.elements() {
        let d = partial_trace_a(m, dims)?.scale(1.0 / dims.n_a() as f64);
        local_s.push(d);
    }
    let local_s = orthonormalize(&local_s, &[], tol);
    for d in &local_s {
        let recon = kron(d, &id_a).scale(inv_sqrt_na);
        if !basis.contains(&recon, tol)? {
            return Err(ControlError::Inconsistency(
                "reconstructed local tensor element fails algebra membership".into(),
            ));
        }
    }

    let found = local_a.len() + coupled.iter().map(Vec::len).sum::<usize>() + local_s.len();
    if found != basis.dim() {
        return Err(ControlError::DisintegrationFailure {
            found,
            expected: basis.dim(),
        });
    }

    let case_label = classify_case(local_s.len(), dims);
    Ok(StructuredBasis {
        dims: *dims,
        sigma_basis,
        local_a,
        coupled,
        local_s,
        case_label,
        algebra_dim: basis.dim(),
    })
}

/// Diagonal matrix with alternating ±1, traceless; requires an even dimension.
pub fn sigma_even(n_a: usize) -> Result<ComplexMatrix, ControlError> {
    if !n_a.is_multiple_of(2) {
        return Err(ControlError::NeedsEven(n_a));
    }
    let diag: Vec<f64> = (0..n_a)
        .map(|k| if k % 2 == 0 { 1.0 } else { -1.0 })
        .collect();
    Ok(ComplexMatrix::from_real_diag(&diag))
}

/// Diagonal matrix with alternating ±1 except a 0 at position `j` (0-based),
/// with the pattern arranged over the remaining positions so the trace is
/// zero; requires an odd dimension.
pub fn sigma_odd(n_a: usize, j: usize) -> Result<ComplexMatrix, ControlError> {
    if n_a % 2 != 1 {
        return Err(ControlError::NeedsOdd(n_a));
    }
    if j >= n_a {
        return Err(ControlError::PositionOutOfRange { j, n: n_a });
    }
    let mut diag = vec![0.0; n_a];
    let mut sign = 1.0;
    for (p, d) in diag.iter_mut().enumerate() {
        if p == j {
            continue;
        }
        *d = sign;
        sign = -sign;
    }
    Ok(ComplexMatrix::from_real_diag(&diag))
}

/// Necessary condition for indirect controllability given `rho_a`: the
/// partial traces of the observability space, together with the identity
/// direction carried by the seed's trace, must span all of u(n_S).
pub fn indirect_criterion(
    basis: &LieBasis,
    rho_s: &DensityMatrix,
    rho_a: &DensityMatrix,
    dims: &BipartiteDims,
    tol: f64,
) -> Result<bool, ControlError> {
    if rho_s.distance_from_mixed() <= tol {
        return Err(ControlError::MaximallyMixedRhoS);
    }
    let v = observability_space(rho_s, rho_a, basis, dims, tol)?;
    let mut traced = Vec::with_capacity(v.dim() + 1);
    for e in v.elements() {
        traced.push(partial_trace_a(e, dims)?);
    }
    traced.push(ComplexMatrix::identity(dims.n_s()).times_i());
    let dim = orthonormalize(&traced, &[], tol).len();
    Ok(dim == dims.n_s() * dims.n_s())
}

/// A counterexample state paired with how it was constructed.
#[derive(Debug, Clone)]
pub struct Counterexample {
    pub state: DensityMatrix,
    pub explanation: String,
}

/// Construct a system state witnessing the failure of indirect
/// controllability at the perfectly mixed auxiliary state, for the non-full
/// cases.
///
/// Intermediate: `rho_S = 1/n_S − α·i·D_1` with α half the distance to the
/// PSD boundary. NoLocal: a state commuting with every coupled left factor,
/// found by solving the commutant linear system; a trivial commutant is
/// reported as an error (the even/odd contradiction check applies instead).
/// The returned state is verified to make [`indirect_criterion`] false.
pub fn counterexample_state(
    sb: &StructuredBasis,
    basis: &LieBasis,
    dims: &BipartiteDims,
    tol: f64,
) -> Result<Option<Counterexample>, ControlError> {
    let n_s = dims.n_s();
    let mixed_s = DensityMatrix::maximally_mixed(n_s);
    let built = match sb.case_label() {
        CaseLabel::FullLocal => return Ok(None),
        CaseLabel::Intermediate => {
            let d1 = &sb.local_s()[0];
            let alpha = 0.5 * (1.0 / n_s as f64) / d1.hs_norm();
            let mat = &mixed_s.matrix().clone() - &d1.times_i().scale(alpha);
            Counterexample {
                state: DensityMatrix::new(mat, tol)?,
                explanation: format!(
                    "mixed state perturbed along the local left factor D_1: \
                     rho_S = 1/{n_s} - {alpha:.6}*i*D_1"
                ),
            }
        }
        CaseLabel::NoLocal => {
            let x = commutant_direction(&sb.all_left_factors(), n_s, tol)?
                .ok_or(ControlError::TrivialCommutant)?;
            let beta = 0.5 / n_s as f64; // x is unit-norm, so eigenvalues stay positive
            let mat = &mixed_s.matrix().clone() + &x.scale(beta);
            Counterexample {
                state: DensityMatrix::new(mat, tol)?,
                explanation: format!(
                    "mixed state shifted along a direction commuting with every \
                     coupled left factor: rho_S = 1/{n_s} + {beta:.6}*X"
                ),
            }
        }
    };
    let rho_a = DensityMatrix::maximally_mixed(dims.n_a());
    if indirect_criterion(basis, &built.state, &rho_a, dims, tol)? {
        return Err(ControlError::Inconsistency(
            "constructed counterexample state does not defeat the indirect criterion".into(),
        ));
    }
    Ok(Some(built))
}

/// A unit-norm traceless Hermitian matrix commuting with every given left
/// factor, or None when only multiples of the identity do.
fn commutant_direction(
    left_factors: &[&ComplexMatrix],
    n_s: usize,
    tol: f64,
) -> Result<Option<ComplexMatrix>, ControlError> {
    let herm_basis: Vec<ComplexMatrix> = gell_mann_basis(n_s)
        .iter()
        .map(|g| g.scale_c(num_complex::Complex64::new(0.0, -1.0)))
        .collect();
    let d_s = herm_basis.len();
    if left_factors.is_empty() {
        // everything commutes; any traceless Hermitian direction works
        return Ok(Some(herm_basis[0].clone()));
    }
    let rows = left_factors.len() * 2 * n_s * n_s;
    let mut m = nalgebra::DMatrix::<f64>::zeros(rows, d_s);
    for (col, h) in herm_basis.iter().enumerate() {
        for (fi, a) in left_factors.iter().enumerate() {
            let c = commutator(h, a)?;
            let v = c.to_real_vec();
            let base = fi * 2 * n_s * n_s;
            for r in 0..v.len() {
                m[(base + r, col)] = v[r];
            }
        }
    }
    let svd = m.svd(false, true);
    let v_t = svd.v_t.expect("svd requested right singular vectors");
    let smax = svd.singular_values.iter().cloned().fold(0.0f64, f64::max);
    let threshold = tol.max(1e-12) * smax.max(1.0);
    // singular values come out in descending order; nullspace directions last
    let mut best: Option<(f64, usize)> = None;
    for (k, &s) in svd.singular_values.iter().enumerate() {
        if s <= threshold && (best.is_none() || s < best.unwrap().0) {
            best = Some((s, k));
        }
    }
    // rank-deficient case: columns of V beyond the singular-value count
    let rank = svd.singular_values.len();
    let null_row = match best {
        Some((_, k)) => Some(k),
        None if rank < d_s => Some(rank),
        None => None,
    };
    let Some(row) = null_row else {
        return Ok(None);
    };
    let mut x = ComplexMatrix::zeros(n_s);
    for (col, h) in herm_basis.iter().enumerate() {
        let c = v_t[(row, col)];
        if c != 0.0 {
            x = &x + &h.scale(c);
        }
    }
    let norm = x.hs_norm();
    if norm <= tol {
        return Ok(None);
    }
    Ok(Some(x.scale(1.0 / norm)))
}

/// For a NoLocal structured basis, check whether the case is contradicted:
/// two non-commuting coupled left factors A, B would force `[A,B]⊗1` into the
/// algebra through the alternating-diagonal construction, so s = 0 cannot
/// hold. Returns true when such a contradiction is established (signalling a
/// tolerance artifact in the disintegration), false when all left factors
/// commute and the case is genuine.
pub fn verify_case2_contradiction(
    sb: &StructuredBasis,
    basis: &LieBasis,
    dims: &BipartiteDims,
    tol: f64,
) -> Result<bool, ControlError> {
    if sb.case_label() != CaseLabel::NoLocal {
        return Err(ControlError::WrongCase {
            expected: CaseLabel::NoLocal,
            got: sb.case_label(),
        });
    }
    // first non-commuting pair of left factors, in block order
    let mut pair = None;
    let factors: Vec<(usize, &ComplexMatrix)> = sb
        .coupled()
        .iter()
        .enumerate()
        .flat_map(|(j, blk)| blk.iter().map(move |s| (j, s)))
        .collect();
    'outer: for i in 0..factors.len() {
        for k in 0..i {
            let norm = commutator(factors[i].1, factors[k].1)?.hs_norm();
            if norm > tol * 10.0 {
                pair = Some((factors[k], factors[i]));
                break 'outer;
            }
        }
    }
    let Some(((ja, a), (jb, b))) = pair else {
        return Ok(false);
    };

    let n_a = dims.n_a();
    let id_s = ComplexMatrix::identity(dims.n_s());
    let id_a = ComplexMatrix::identity(n_a);
    let local_gens: Vec<ComplexMatrix> = sb.sigma_basis().iter().map(|s| kron(&id_s, s)).collect();
    let local_algebra = lie_closure(&local_gens, tol, None)?;

    // ad-saturation against 1⊗su(n_A) lifts each coupled element to every
    // auxiliary right factor, in particular the alternating diagonals
    let seed_a = kron(a, &sb.sigma_basis()[ja]).times_i();
    let seed_b = kron(b, &sb.sigma_basis()[jb]).times_i();
    let sat_a = ad_saturate(&seed_a, &local_algebra, tol)?;
    let sat_b = ad_saturate(&seed_b, &local_algebra, tol)?;

    let target = kron(&commutator(a, b)?, &id_a);
    let derived = if n_a.is_multiple_of(2) {
        let se = sigma_even(n_a)?;
        let ea = kron(a, &se);
        let eb = kron(b, &se);
        if !(sat_a.contains(&ea, tol.max(1e-8))? && sat_b.contains(&eb, tol.max(1e-8))?) {
            return Ok(false);
        }
        commutator(&ea, &eb)?
    } else {
        let mut acc = ComplexMatrix::zeros(dims.total());
        for j in 0..n_a {
            let so = sigma_odd(n_a, j)?;
            let ea = kron(a, &so);
            let eb = kron(b, &so);
            if !(sat_a.contains(&ea, tol.max(1e-8))? && sat_b.contains(&eb, tol.max(1e-8))?) {
                return Ok(false);
            }
            acc = &acc + &commutator(&ea, &eb)?;
        }
        acc.scale(1.0 / (n_a as f64 - 1.0))
    };

    // the derived element must be exactly [A,B]⊗1 and must belong to the
    // algebra the basis generates
    if (&derived - &target).hs_norm() > 1e-10 * target.hs_norm().max(1.0) {
        return Err(ControlError::Inconsistency(
            "alternating-diagonal identity failed beyond tolerance".into(),
        ));
    }
    let membership = if basis.closed() {
        basis.contains(&target, tol.max(1e-8))?
    } else {
        lie_closure(basis.elements(), tol, None)?.contains(&target, tol.max(1e-8))?
    };
    Ok(membership)
}

/// Full analysis of one problem.
#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub dims: BipartiteDims,
    /// Matrix dimension n = n_S·n_A of the joint system.
    pub ambient_dim: usize,
    pub algebra_dim: usize,
    pub closure_depth: usize,
    pub completely_controllable: bool,
    pub case_label: CaseLabel,
    pub block_local_a: usize,
    pub block_coupled: Vec<usize>,
    pub block_local_s: usize,
    /// Indirect criterion at the perfectly mixed auxiliary state, evaluated on
    /// seeded generic system states.
    pub indirect_criterion_holds: bool,
    pub criterion_seeds: Vec<u64>,
    pub criterion_per_seed: Vec<bool>,
    pub counterexample: Option<CounterexampleReport>,
    pub tol: f64,
    /// False when any relation the analysis asserts between the computed facts
    /// failed; details in `notes`.
    pub consistent: bool,
    pub notes: Vec<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CounterexampleReport {
    pub state: DensityMatrix,
    pub criterion_holds: bool,
    pub explanation: String,
}

/// End-to-end pipeline: generators → closure → disintegration → case label →
/// complete-controllability test → indirect criterion at the perfectly mixed
/// auxiliary state (three seeded generic system states, plus the constructed
/// counterexample when the case is not full-local).
///
/// Requires the control algebra to generate all of su(n_A). The equivalence
/// `completely controllable ⇔ (full-local case ∧ criterion holds)` is
/// asserted; a violation is flagged in the report, never repaired.
pub fn check_equivalence(p: &IndirectProblem, tol: f64, seed: u64) -> Result<Report, ControlError> {
    let dims = *p.dims();
    let control_closure = lie_closure(p.control_algebra(), tol, None)?;
    if control_closure.dim() != dims.d_a() {
        return Err(ControlError::ControlNotFull {
            got: control_closure.dim(),
            want: dims.d_a(),
        });
    }

    let basis = lie_closure(&build_generators(p), tol, None)?;
    let sb = disintegrate(&basis, &dims, tol)?;
    let cc = is_completely_controllable(&basis, &dims);

    let rho_a = DensityMatrix::maximally_mixed(dims.n_a());
    let seeds: Vec<u64> = (0..3).map(|k| seed.wrapping_add(k)).collect();
    let mut per_seed = Vec::with_capacity(3);
    for &s in &seeds {
        let rho_s = DensityMatrix::seeded_generic(dims.n_s(), s);
        per_seed.push(indirect_criterion(&basis, &rho_s, &rho_a, &dims, tol)?);
    }
    let criterion = per_seed[0];

    let mut notes = vec![
        "reachable set identified with e^L; the dense-subgroup distinction is not modeled"
            .to_string(),
    ];
    let mut consistent = true;

    if !per_seed.iter().all(|&c| c == criterion) {
        consistent = false;
        notes.push(format!(
            "generic-state criterion disagrees across seeds {seeds:?}: {per_seed:?}"
        ));
    }

    let counterexample = if sb.case_label() == CaseLabel::FullLocal {
        None
    } else {
        match counterexample_state(&sb, &basis, &dims, tol) {
            Ok(Some(cex)) => Some(CounterexampleReport {
                state: cex.state,
                criterion_holds: false,
                explanation: cex.explanation,
            }),
            Ok(None) => None,
            Err(ControlError::TrivialCommutant) => {
                let contradicted = verify_case2_contradiction(&sb, &basis, &dims, tol)?;
                consistent = false;
                notes.push(if contradicted {
                    "no-local case contradicted by the alternating-diagonal construction \
                     (tolerance artifact in the disintegration)"
                        .to_string()
                } else {
                    "no-local case with trivial commutant but no contradiction witness".to_string()
                });
                None
            }
            Err(e) => return Err(e),
        }
    };

    if cc != (sb.case_label() == CaseLabel::FullLocal) {
        consistent = false;
        notes.push(format!(
            "complete controllability ({cc}) disagrees with the case label ({})",
            sb.case_label()
        ));
    }
    if cc != (sb.case_label() == CaseLabel::FullLocal && criterion) {
        consistent = false;
        notes.push(
            "equivalence violated: complete controllability does not match \
             (full-local ∧ criterion)"
                .to_string(),
        );
    }

    Ok(Report {
        dims,
        ambient_dim: dims.total(),
        algebra_dim: basis.dim(),
        closure_depth: basis.depth_reached(),
        completely_controllable: cc,
        case_label: sb.case_label(),
        block_local_a: sb.local_a().len(),
        block_coupled: sb.coupled_dims(),
        block_local_s: sb.local_s().len(),
        indirect_criterion_holds: criterion,
        criterion_seeds: seeds,
        criterion_per_seed: per_seed,
        counterexample,
        tol,
        consistent,
        notes,
    })
}
