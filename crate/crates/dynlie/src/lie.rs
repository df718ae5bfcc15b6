//! Lie-algebra closures and the subspace machinery built on them.
//!
//! The central operation is [`lie_closure`]: a breadth-first commutator
//! saturation that turns a generator set into an orthonormal basis of the
//! smallest real Lie algebra containing it. On top of that sit membership
//! tests, principal-angle subspace intersection, ad-invariant saturation of a
//! seed element, and the observability space seeded at `i·ρ_S⊗ρ_A`.

use nalgebra::DMatrix;
use thiserror::Error;

use crate::linalg::{
    commutator, hs_inner, kron, orthonormalize, span_residual, BipartiteDims, ComplexMatrix,
    DensityMatrix, LinalgError,
};

#[derive(Debug, Error)]
pub enum LieError {
    #[error("generator {index} is not skew-Hermitian within tolerance")]
    NotSkewHermitian { index: usize },
    #[error("ambient dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("closure exceeded the cap of {cap} dimensions before closing (reached {reached})")]
    ClosureCapped { reached: usize, cap: usize },
    #[error("seed element is zero")]
    ZeroSeed,
    #[error("the algebra basis is not closed")]
    AlgebraNotClosed,
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// An orthonormal basis of skew-Hermitian traceless matrices spanning a Lie
/// subalgebra of su(n), together with closure metadata.
#[derive(Debug, Clone)]
pub struct LieBasis {
    ambient: usize,
    elements: Vec<ComplexMatrix>,
    closed: bool,
    depth_reached: usize,
    tol: f64,
}

impl LieBasis {
    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[ComplexMatrix] {
        &self.elements
    }

    pub fn closed(&self) -> bool {
        self.closed
    }

    /// Number of commutator generations taken before the growth loop stopped.
    pub fn depth_reached(&self) -> usize {
        self.depth_reached
    }

    pub fn tol(&self) -> f64 {
        self.tol
    }

    /// Membership: true iff the residual of `x` after projection onto the
    /// span is at most `tol·max(1, ||x||)`.
    pub fn contains(&self, x: &ComplexMatrix, tol: f64) -> Result<bool, LieError> {
        if x.dim() != self.ambient {
            return Err(LieError::DimensionMismatch {
                left: x.dim(),
                right: self.ambient,
            });
        }
        Ok(span_residual(&self.elements, x) <= tol * x.hs_norm().max(1.0))
    }

    /// The same span viewed as a plain subspace.
    pub fn to_subspace(&self) -> Subspace {
        Subspace {
            ambient: self.ambient,
            elements: self.elements.clone(),
        }
    }

    /// Wrap a spanning set as a basis without growing it: orthonormalizes the
    /// (trace-projected) elements and records whether the span is already
    /// commutator-closed. Useful for inspecting spans that are not algebras.
    pub fn from_span(span: &[ComplexMatrix], tol: f64) -> Result<LieBasis, LieError> {
        let ambient = span.first().map_or(1, ComplexMatrix::dim);
        let mut traceless = Vec::with_capacity(span.len());
        for (index, g) in span.iter().enumerate() {
            if g.dim() != ambient {
                return Err(LieError::DimensionMismatch {
                    left: g.dim(),
                    right: ambient,
                });
            }
            if !g.is_skew_hermitian(tol) {
                return Err(LieError::NotSkewHermitian { index });
            }
            traceless.push(g.traceless_part());
        }
        let elements = orthonormalize(&traceless, &[], tol);
        let mut closed = true;
        'check: for i in 0..elements.len() {
            for j in 0..i {
                let c = commutator(&elements[i], &elements[j])?;
                if span_residual(&elements, &c) > tol * c.hs_norm().max(1.0) {
                    closed = false;
                    break 'check;
                }
            }
        }
        Ok(LieBasis {
            ambient,
            elements,
            closed,
            depth_reached: 0,
            tol,
        })
    }

    /// Whether this span and `other` contain each other within `tol`.
    pub fn same_span(&self, other: &LieBasis, tol: f64) -> Result<bool, LieError> {
        if self.ambient != other.ambient {
            return Err(LieError::DimensionMismatch {
                left: self.ambient,
                right: other.ambient,
            });
        }
        for e in &self.elements {
            if !other.contains(e, tol)? {
                return Ok(false);
            }
        }
        for e in &other.elements {
            if !self.contains(e, tol)? {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// An orthonormal family of skew-Hermitian matrices (not necessarily
/// traceless: the observability space may contain the identity direction).
#[derive(Debug, Clone)]
pub struct Subspace {
    ambient: usize,
    elements: Vec<ComplexMatrix>,
}

impl Subspace {
    /// Orthonormalizes the given spanning set.
    pub fn from_span(ambient: usize, span: &[ComplexMatrix], tol: f64) -> Self {
        let elements = orthonormalize(span, &[], tol);
        for e in &elements {
            assert_eq!(e.dim(), ambient, "subspace element dimension mismatch");
        }
        Self { ambient, elements }
    }

    pub(crate) fn from_orthonormal(ambient: usize, elements: Vec<ComplexMatrix>) -> Self {
        Self { ambient, elements }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[ComplexMatrix] {
        &self.elements
    }

    pub fn contains(&self, x: &ComplexMatrix, tol: f64) -> Result<bool, LieError> {
        if x.dim() != self.ambient {
            return Err(LieError::DimensionMismatch {
                left: x.dim(),
                right: self.ambient,
            });
        }
        Ok(span_residual(&self.elements, x) <= tol * x.hs_norm().max(1.0))
    }
}

/// Brackets of skew-Hermitian matrices are skew-Hermitian and traceless;
/// rounding must not leak into the orthogonal (Hermitian / trace) sectors,
/// which real-coefficient projections onto skew elements cannot see.
fn bracket_part(m: &ComplexMatrix) -> ComplexMatrix {
    (m - &m.adjoint()).scale(0.5).traceless_part()
}

/// Compute an orthonormal basis of the smallest real Lie algebra containing
/// the generators.
///
/// Generators must be skew-Hermitian within `tol`; their trace components are
/// projected out so the result lives in su(n). The loop is breadth-first by
/// commutator generation with deterministic insertion order, so results are
/// reproducible for a fixed input order. `max_dim` caps the basis size
/// (default n²−1, which cannot be exceeded); hitting a smaller cap before the
/// algebra closes is reported as an error, never silently.
pub fn lie_closure(
    generators: &[ComplexMatrix],
    tol: f64,
    max_dim: Option<usize>,
) -> Result<LieBasis, LieError> {
    let ambient = generators.first().map_or(1, ComplexMatrix::dim);
    let full = ambient * ambient - 1;
    let cap = max_dim.unwrap_or(full).min(full);

    let mut traceless = Vec::with_capacity(generators.len());
    for (index, g) in generators.iter().enumerate() {
        if g.dim() != ambient {
            return Err(LieError::DimensionMismatch {
                left: g.dim(),
                right: ambient,
            });
        }
        if !g.is_skew_hermitian(tol) {
            return Err(LieError::NotSkewHermitian { index });
        }
        traceless.push(g.traceless_part());
    }

    let mut basis = orthonormalize(&traceless, &[], tol);
    if basis.len() > cap {
        return Err(LieError::ClosureCapped {
            reached: basis.len(),
            cap,
        });
    }
    let mut depth = 0usize;
    let mut processed = 0usize;

    loop {
        // Reaching the full su(n) dimension means the span is all of su(n),
        // which is closed by maximality.
        if basis.len() >= full {
            basis.truncate(full);
            break;
        }
        if processed == basis.len() {
            break;
        }
        // All unordered pairs with at least one element at index >=
        // `processed` are new; antisymmetry covers the rest.
        let len = basis.len();
        let mut fresh = Vec::new();
        for i in processed..len {
            for j in 0..i {
                fresh.push(bracket_part(&commutator(&basis[i], &basis[j])?));
            }
        }
        processed = len;
        let new_elems = orthonormalize(&fresh, &basis, tol);
        if new_elems.is_empty() {
            break;
        }
        depth += 1;
        if len + new_elems.len() > cap && cap < full {
            return Err(LieError::ClosureCapped {
                reached: len + new_elems.len(),
                cap,
            });
        }
        basis.extend(new_elems);
    }

    Ok(LieBasis {
        ambient,
        elements: basis,
        closed: true,
        depth_reached: depth,
        tol,
    })
}

/// Orthonormal basis of `u ∩ w` via principal angles: a direction is accepted
/// when its principal-angle cosine (a singular value of the cross-Gram matrix)
/// is at least `1 − tol`.
pub fn subspace_intersect(u: &Subspace, w: &Subspace, tol: f64) -> Result<Subspace, LieError> {
    if u.ambient != w.ambient {
        return Err(LieError::DimensionMismatch {
            left: u.ambient,
            right: w.ambient,
        });
    }
    let ambient = u.ambient;
    if u.dim() == 0 || w.dim() == 0 {
        return Ok(Subspace::from_orthonormal(ambient, Vec::new()));
    }

    let p = u.dim();
    let q = w.dim();
    let mut gram = DMatrix::<f64>::zeros(p, q);
    for (i, a) in u.elements.iter().enumerate() {
        for (j, b) in w.elements.iter().enumerate() {
            gram[(i, j)] = hs_inner(a, b).map_err(LieError::Linalg)?.re;
        }
    }
    let svd = gram.svd(false, true);
    let v_t = svd.v_t.expect("svd requested right singular vectors");

    let mut picked = Vec::new();
    for (k, &s) in svd.singular_values.iter().enumerate() {
        if s >= 1.0 - tol {
            // reconstruct the direction on the w side: sum_j v[j] * w_j
            let mut dir = ComplexMatrix::zeros(ambient);
            for j in 0..q {
                let cj = v_t[(k, j)];
                if cj != 0.0 {
                    dir = &dir + &w.elements[j].scale(cj);
                }
            }
            picked.push(dir);
        }
    }
    Ok(Subspace::from_orthonormal(
        ambient,
        orthonormalize(&picked, &[], tol),
    ))
}

/// Growth loop shared by [`ad_saturate`] and [`observability_space`]:
/// repeatedly commutate the current space against all algebra basis elements
/// and absorb the residuals, in deterministic order, until nothing grows.
fn ad_grow(seed: ComplexMatrix, algebra: &LieBasis, tol: f64) -> Result<Subspace, LieError> {
    let ambient = algebra.ambient_dim();
    let norm = seed.hs_norm();
    let mut space = vec![seed.scale(1.0 / norm)];
    let mut processed = 0usize;
    let bound = 2 * ambient * ambient; // real dim of u(n) is n²; generous cap
    while processed < space.len() && space.len() <= bound {
        let len = space.len();
        let mut fresh = Vec::new();
        for v in &space[processed..len] {
            for a in algebra.elements() {
                fresh.push(bracket_part(&commutator(a, v)?));
            }
        }
        processed = len;
        let new_elems = orthonormalize(&fresh, &space, tol);
        space.extend(new_elems);
    }
    Ok(Subspace::from_orthonormal(ambient, space))
}

/// The ad-invariant space `⊕_k ad_algebra^k span{seed}`.
///
/// When the algebra spans su(n) and the seed is a nonzero element of su(n),
/// the result spans all of su(n): the space is a nonzero ideal and su(n) is
/// simple.
pub fn ad_saturate(
    seed: &ComplexMatrix,
    algebra: &LieBasis,
    tol: f64,
) -> Result<Subspace, LieError> {
    if seed.dim() != algebra.ambient_dim() {
        return Err(LieError::DimensionMismatch {
            left: seed.dim(),
            right: algebra.ambient_dim(),
        });
    }
    if !algebra.closed() {
        return Err(LieError::AlgebraNotClosed);
    }
    if seed.hs_norm() <= tol {
        return Err(LieError::ZeroSeed);
    }
    ad_grow(seed.clone(), algebra, tol)
}

/// The observability space `V = ⊕_k ad_L^k span{i·ρ_S⊗ρ_A}`.
///
/// Same growth loop as [`ad_saturate`], but the seed keeps its trace
/// component: `i·ρ_S⊗ρ_A` is not traceless and the identity direction matters
/// for the `Tr_A(V) = u(n_S)` criterion.
pub fn observability_space(
    rho_s: &DensityMatrix,
    rho_a: &DensityMatrix,
    algebra: &LieBasis,
    dims: &BipartiteDims,
    tol: f64,
) -> Result<Subspace, LieError> {
    if rho_s.dim() != dims.n_s() || rho_a.dim() != dims.n_a() {
        return Err(LieError::DimensionMismatch {
            left: rho_s.dim() * rho_a.dim(),
            right: dims.total(),
        });
    }
    if algebra.ambient_dim() != dims.total() {
        return Err(LieError::DimensionMismatch {
            left: algebra.ambient_dim(),
            right: dims.total(),
        });
    }
    if !algebra.closed() {
        return Err(LieError::AlgebraNotClosed);
    }
    let seed = kron(rho_s.matrix(), rho_a.matrix()).times_i();
    ad_grow(seed, algebra, tol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::DEFAULT_TOL;
    use crate::systems::{gell_mann_basis, pauli_skew, PauliAxis};

    fn su2() -> Vec<ComplexMatrix> {
        vec![
            pauli_skew(PauliAxis::X),
            pauli_skew(PauliAxis::Y),
            pauli_skew(PauliAxis::Z),
        ]
    }

    #[test]
    fn closure_of_single_element_is_abelian() {
        let basis = lie_closure(&[pauli_skew(PauliAxis::Z)], DEFAULT_TOL, None).unwrap();
        assert_eq!(basis.dim(), 1);
        assert!(basis.closed());
        assert_eq!(basis.depth_reached(), 0);
    }

    #[test]
    fn closure_of_two_paulis_is_su2() {
        let basis = lie_closure(
            &[pauli_skew(PauliAxis::X), pauli_skew(PauliAxis::Y)],
            DEFAULT_TOL,
            None,
        )
        .unwrap();
        assert_eq!(basis.dim(), 3);
        assert!(basis.closed());
        // exhaustive pairwise commutators stay inside the span
        for a in basis.elements() {
            for b in basis.elements() {
                let c = commutator(a, b).unwrap();
                assert!(basis.contains(&c, 1e-10).unwrap());
            }
        }
        assert!(basis.contains(&pauli_skew(PauliAxis::Z), 1e-10).unwrap());
    }

    #[test]
    fn closure_rejects_non_skew_generators() {
        let hermitian = pauli_skew(PauliAxis::X).times_i();
        assert!(matches!(
            lie_closure(&[hermitian], DEFAULT_TOL, None),
            Err(LieError::NotSkewHermitian { index: 0 })
        ));
    }

    #[test]
    fn closure_cap_is_reported() {
        let gens = su2();
        let err = lie_closure(&gens[..2], DEFAULT_TOL, Some(2));
        assert!(matches!(
            err,
            Err(LieError::ClosureCapped { reached: 3, cap: 2 })
        ));
    }

    #[test]
    fn from_span_detects_closedness() {
        let gens = su2();
        let closed = LieBasis::from_span(&gens, DEFAULT_TOL).unwrap();
        assert!(closed.closed());
        assert_eq!(closed.dim(), 3);
        let open = LieBasis::from_span(&gens[..2], DEFAULT_TOL).unwrap();
        assert!(!open.closed());
        assert_eq!(open.dim(), 2);
    }

    #[test]
    fn closure_is_idempotent() {
        let basis = lie_closure(&su2()[..2], DEFAULT_TOL, None).unwrap();
        let again = lie_closure(basis.elements(), DEFAULT_TOL, None).unwrap();
        assert!(basis.same_span(&again, 1e-9).unwrap());
    }

    #[test]
    fn closure_span_is_order_independent() {
        let g = gell_mann_basis(3);
        let gens = vec![g[0].clone(), g[3].clone(), g[7].clone()];
        let a = lie_closure(&gens, DEFAULT_TOL, None).unwrap();
        let permuted = vec![g[7].clone(), g[0].clone(), g[3].clone()];
        let b = lie_closure(&permuted, DEFAULT_TOL, None).unwrap();
        assert!(a.same_span(&b, 1e-9).unwrap());
    }

    #[test]
    fn jacobi_identity_on_closed_basis() {
        let basis = lie_closure(&gell_mann_basis(3), DEFAULT_TOL, None).unwrap();
        let e = basis.elements();
        for (i, j, k) in [(0, 1, 2), (1, 4, 7), (2, 3, 6)] {
            let t1 = commutator(&commutator(&e[i], &e[j]).unwrap(), &e[k]).unwrap();
            let t2 = commutator(&commutator(&e[j], &e[k]).unwrap(), &e[i]).unwrap();
            let t3 = commutator(&commutator(&e[k], &e[i]).unwrap(), &e[j]).unwrap();
            assert!((&(&t1 + &t2) + &t3).hs_norm() < 1e-11);
        }
    }

    #[test]
    fn contains_edge_cases() {
        let basis = lie_closure(&[pauli_skew(PauliAxis::Z)], DEFAULT_TOL, None).unwrap();
        assert!(basis.contains(&ComplexMatrix::zeros(2), 1e-12).unwrap());
        assert!(!basis.contains(&pauli_skew(PauliAxis::X), 1e-9).unwrap());
        assert!(matches!(
            basis.contains(&ComplexMatrix::zeros(3), 1e-9),
            Err(LieError::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn intersect_same_span_and_orthogonal_lines() {
        let x = pauli_skew(PauliAxis::X);
        let y = pauli_skew(PauliAxis::Y);
        let z = pauli_skew(PauliAxis::Z);

        let u = Subspace::from_span(2, &[x.clone(), z.clone()], DEFAULT_TOL);
        let same = subspace_intersect(&u, &u, 1e-9).unwrap();
        assert_eq!(same.dim(), 2);
        for e in u.elements() {
            assert!(same.contains(e, 1e-8).unwrap());
        }

        let lx = Subspace::from_span(2, std::slice::from_ref(&x), DEFAULT_TOL);
        let ly = Subspace::from_span(2, std::slice::from_ref(&y), DEFAULT_TOL);
        assert_eq!(subspace_intersect(&lx, &ly, 1e-9).unwrap().dim(), 0);
    }

    #[test]
    fn intersect_three_dim_hand_case() {
        // span{iσx, iσz} ∩ span{iσz, iσy} = span{iσz}
        let x = pauli_skew(PauliAxis::X);
        let y = pauli_skew(PauliAxis::Y);
        let z = pauli_skew(PauliAxis::Z);
        let u = Subspace::from_span(2, &[x, z.clone()], DEFAULT_TOL);
        let w = Subspace::from_span(2, &[z.clone(), y], DEFAULT_TOL);
        let inter = subspace_intersect(&u, &w, 1e-9).unwrap();
        assert_eq!(inter.dim(), 1);
        assert!(inter.contains(&z, 1e-8).unwrap());
    }

    #[test]
    fn ad_saturate_reaches_su2_from_one_seed() {
        let algebra = lie_closure(&su2(), DEFAULT_TOL, None).unwrap();
        let sat = ad_saturate(&pauli_skew(PauliAxis::Z), &algebra, DEFAULT_TOL).unwrap();
        assert_eq!(sat.dim(), 3);
    }

    #[test]
    fn ad_saturate_abelian_center_stays_one_dimensional() {
        let algebra = lie_closure(&[pauli_skew(PauliAxis::Z)], DEFAULT_TOL, None).unwrap();
        let sat = ad_saturate(&pauli_skew(PauliAxis::Z), &algebra, DEFAULT_TOL).unwrap();
        assert_eq!(sat.dim(), 1);
    }

    #[test]
    fn ad_saturate_rejects_zero_seed() {
        let algebra = lie_closure(&su2(), DEFAULT_TOL, None).unwrap();
        assert!(matches!(
            ad_saturate(&ComplexMatrix::zeros(2), &algebra, DEFAULT_TOL),
            Err(LieError::ZeroSeed)
        ));
    }

    #[test]
    fn ad_saturate_tensor_seed_fills_auxiliary_side() {
        // seed i·S⊗σ with algebra 1⊗su(2): saturation contains i·S⊗σ' for all σ'
        let id = ComplexMatrix::identity(2);
        let local: Vec<ComplexMatrix> = su2().iter().map(|s| kron(&id, s)).collect();
        let algebra = lie_closure(&local, DEFAULT_TOL, None).unwrap();
        let s_left = pauli_skew(PauliAxis::X);
        let seed = kron(&s_left, &pauli_skew(PauliAxis::Z)).times_i();
        let sat = ad_saturate(&seed, &algebra, DEFAULT_TOL).unwrap();
        assert_eq!(sat.dim(), 3);
        for sigma in su2() {
            let elem = kron(&s_left, &sigma).times_i();
            assert!(sat.contains(&elem, 1e-9).unwrap());
        }
    }

    #[test]
    fn ad_saturate_result_is_ad_invariant() {
        let algebra = lie_closure(&gell_mann_basis(3), DEFAULT_TOL, None).unwrap();
        let seed = &gell_mann_basis(3)[2];
        let sat = ad_saturate(seed, &algebra, DEFAULT_TOL).unwrap();
        assert!(sat.contains(seed, 1e-9).unwrap());
        for a in algebra.elements() {
            for v in sat.elements() {
                let c = commutator(a, v).unwrap();
                assert!(sat.contains(&c, 1e-8).unwrap());
            }
        }
    }

    #[test]
    fn observability_space_of_commuting_seed_is_one_dimensional() {
        // algebra spanned by 1⊗su(2) with rho_S arbitrary: the product state
        // commutes with every element, so V = span{seed}
        let id = ComplexMatrix::identity(2);
        let local: Vec<ComplexMatrix> = su2().iter().map(|s| kron(&id, s)).collect();
        let algebra = lie_closure(&local, DEFAULT_TOL, None).unwrap();
        let dims = BipartiteDims::new(2, 2).unwrap();
        let rho_s = DensityMatrix::seeded_generic(2, 5);
        let rho_a = DensityMatrix::maximally_mixed(2);
        let v = observability_space(&rho_s, &rho_a, &algebra, &dims, DEFAULT_TOL).unwrap();
        assert_eq!(v.dim(), 1);
    }

    #[test]
    fn observability_space_full_algebra_covers_u_n() {
        let dims = BipartiteDims::new(2, 2).unwrap();
        let algebra = lie_closure(&gell_mann_basis(4), DEFAULT_TOL, None).unwrap();
        let rho_s = DensityMatrix::seeded_generic(2, 9);
        let rho_a = DensityMatrix::maximally_mixed(2);
        let v = observability_space(&rho_s, &rho_a, &algebra, &dims, DEFAULT_TOL).unwrap();
        // su(4) plus the identity direction carried by the seed
        assert_eq!(v.dim(), 16);
        // contains its seed and is ad-invariant
        let seed = kron(rho_s.matrix(), rho_a.matrix()).times_i();
        assert!(v.contains(&seed, 1e-9).unwrap());
        for a in algebra.elements().iter().take(5) {
            for e in v.elements().iter().take(5) {
                assert!(v.contains(&commutator(a, e).unwrap(), 1e-8).unwrap());
            }
        }
    }
}
