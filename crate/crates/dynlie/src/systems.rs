//! Standard bases and canned example problems.
//!
//! The examples exercise every pipeline path: a completely controllable
//! two-qubit system, a degenerate single-coupling system with commuting left
//! factors, a problem confined to a symplectic-type proper subalgebra
//! (intermediate case), and an odd auxiliary dimension. Seeded random problem
//! generators for the property suites live here too.

use num_complex::Complex64 as C64;
use rand::Rng;

use crate::controllability::{CaseLabel, ControlError, IndirectProblem};
use crate::linalg::{kron, orthonormalize, BipartiteDims, ComplexMatrix, DEFAULT_TOL};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PauliAxis {
    X,
    Y,
    Z,
}

/// The conventional Hermitian Pauli matrix.
pub fn pauli(axis: PauliAxis) -> ComplexMatrix {
    let (a, b, c, d) = match axis {
        PauliAxis::X => (
            C64::new(0.0, 0.0),
            C64::new(1.0, 0.0),
            C64::new(1.0, 0.0),
            C64::new(0.0, 0.0),
        ),
        PauliAxis::Y => (
            C64::new(0.0, 0.0),
            C64::new(0.0, -1.0),
            C64::new(0.0, 1.0),
            C64::new(0.0, 0.0),
        ),
        PauliAxis::Z => (
            C64::new(1.0, 0.0),
            C64::new(0.0, 0.0),
            C64::new(0.0, 0.0),
            C64::new(-1.0, 0.0),
        ),
    };
    ComplexMatrix::from_rows(&[vec![a, b], vec![c, d]]).expect("2x2 constant")
}

/// `i` times the conventional Pauli matrix: the su(2) element. Some texts
/// absorb the factor of i into the symbol itself (writing σ_z for
/// diag(i, −i)); this crate keeps the two conventions under distinct names to
/// avoid silent sign errors in `i·S⊗σ` interaction terms.
pub fn pauli_skew(axis: PauliAxis) -> ComplexMatrix {
    pauli(axis).times_i()
}

/// Orthonormal basis of su(n): `i` times the generalized Gell-Mann matrices,
/// Hilbert-Schmidt normalized.
///
/// Order: for each index pair j < k (lexicographic), the symmetric element
/// `i(E_jk + E_kj)/√2` then the antisymmetric `(E_jk − E_kj)/√2`; then the
/// diagonal elements `i·diag(1,…,1,−l,0,…)/√(l(l+1))` for l = 1..n−1.
pub fn gell_mann_basis(n: usize) -> Vec<ComplexMatrix> {
    assert!(n >= 2, "su(n) needs n >= 2");
    let inv_sqrt2 = 1.0 / 2f64.sqrt();
    let mut out = Vec::with_capacity(n * n - 1);
    for j in 0..n {
        for k in (j + 1)..n {
            let mut sym = ComplexMatrix::zeros(n);
            sym.set_entry(j, k, C64::new(0.0, inv_sqrt2));
            sym.set_entry(k, j, C64::new(0.0, inv_sqrt2));
            out.push(sym);
            let mut asym = ComplexMatrix::zeros(n);
            asym.set_entry(j, k, C64::new(inv_sqrt2, 0.0));
            asym.set_entry(k, j, C64::new(-inv_sqrt2, 0.0));
            out.push(asym);
        }
    }
    for l in 1..n {
        let norm = 1.0 / ((l * (l + 1)) as f64).sqrt();
        let mut diag = ComplexMatrix::zeros(n);
        for k in 0..l {
            diag.set_entry(k, k, C64::new(0.0, norm));
        }
        diag.set_entry(l, l, C64::new(0.0, -(l as f64) * norm));
        out.push(diag);
    }
    out
}

/// The antisymmetric form `1_{n/2} ⊗ [[0,1],[-1,0]]` (block-interleaved
/// symplectic form). The constraint `J·A + Aᵀ·J = 0` intersected with the
/// skew-Hermitian matrices cuts out the compact symplectic-type subalgebra
/// used by [`example_subalgebra_sp`].
pub fn symplectic_form(n: usize) -> Result<ComplexMatrix, ControlError> {
    if !n.is_multiple_of(2) {
        return Err(ControlError::NeedsEven(n));
    }
    let e = ComplexMatrix::from_rows(&[
        vec![C64::new(0.0, 0.0), C64::new(1.0, 0.0)],
        vec![C64::new(-1.0, 0.0), C64::new(0.0, 0.0)],
    ])
    .expect("2x2 constant");
    Ok(kron(&ComplexMatrix::identity(n / 2), &e))
}

/// `||J·A + Aᵀ·J||`, the violation of the symplectic constraint.
pub fn symplectic_residual(form: &ComplexMatrix, a: &ComplexMatrix) -> f64 {
    (&(form * a) + &(&a.transpose() * form)).hs_norm()
}

/// Expected report fragments for a canned example; every number here is
/// reproduced by an independent rank-saturation oracle in the test suite.
#[derive(Debug, Clone, Default)]
pub struct Expected {
    pub algebra_dim: Option<usize>,
    pub case_label: Option<CaseLabel>,
    pub completely_controllable: Option<bool>,
}

/// A named problem with its expected analysis outcome.
#[derive(Debug, Clone)]
pub struct ModelSpec {
    pub name: &'static str,
    pub dims: BipartiteDims,
    pub problem: IndirectProblem,
    pub expected: Expected,
}

fn full_su2_control() -> Vec<ComplexMatrix> {
    vec![
        pauli_skew(PauliAxis::X),
        pauli_skew(PauliAxis::Y),
        pauli_skew(PauliAxis::Z),
    ]
}

/// Two coupled qubits with an Ising-type interaction, drift
/// `K = i(σ_x + σ_z/2)` on the system and full control on the auxiliary:
/// completely controllable (closure dimension 15). A drift along a single
/// Pauli axis would not do: the closure then stays inside a 10-dimensional
/// proper subalgebra.
pub fn example_two_qubit_case1() -> ModelSpec {
    let dims = BipartiteDims::new(2, 2).expect("2,2 valid");
    let k = &pauli_skew(PauliAxis::X) + &pauli_skew(PauliAxis::Z).scale(0.5);
    let problem = IndirectProblem::new(
        dims,
        k,
        ComplexMatrix::zeros(2),
        vec![(pauli_skew(PauliAxis::Z), pauli_skew(PauliAxis::Z))],
        full_su2_control(),
        DEFAULT_TOL,
    )
    .expect("valid by construction");
    ModelSpec {
        name: "two_qubit_case1",
        dims,
        problem,
        expected: Expected {
            algebra_dim: Some(15),
            case_label: Some(CaseLabel::FullLocal),
            completely_controllable: Some(true),
        },
    }
}

/// No system drift and a single coupling: every coupled left factor is a
/// multiple of S_1, the closure is 6-dimensional and the D⊗1 block is empty.
/// The commutant of the left factors is nontrivial, so a fixed-point
/// counterexample state exists.
pub fn example_no_drift_case_degenerate() -> ModelSpec {
    let dims = BipartiteDims::new(2, 2).expect("2,2 valid");
    let problem = IndirectProblem::new(
        dims,
        ComplexMatrix::zeros(2),
        pauli_skew(PauliAxis::Z).scale(0.5),
        vec![(pauli_skew(PauliAxis::Z), pauli_skew(PauliAxis::X))],
        full_su2_control(),
        DEFAULT_TOL,
    )
    .expect("valid by construction");
    ModelSpec {
        name: "no_drift_degenerate",
        dims,
        problem,
        expected: Expected {
            algebra_dim: Some(6),
            case_label: Some(CaseLabel::NoLocal),
            completely_controllable: Some(false),
        },
    }
}

/// A two-qubit problem whose generators all satisfy the symplectic constraint
/// `J·A + Aᵀ·J = 0` with J = [`symplectic_form`]`(4)`: drift `i·σ_y` on the
/// system, symmetric coupling left factors. The closure is the full
/// 10-dimensional compact symplectic-type subalgebra — an intermediate case
/// (s = 1), so the system is not completely controllable and the perturbed
/// counterexample state defeats the criterion.
pub fn example_subalgebra_sp() -> ModelSpec {
    let dims = BipartiteDims::new(2, 2).expect("2,2 valid");
    let problem = IndirectProblem::new(
        dims,
        pauli_skew(PauliAxis::Y).scale(0.9),
        pauli_skew(PauliAxis::Z).scale(0.6),
        vec![
            (
                pauli_skew(PauliAxis::X).scale(1.1),
                pauli_skew(PauliAxis::X).scale(0.8),
            ),
            (
                pauli_skew(PauliAxis::Z).scale(0.7),
                pauli_skew(PauliAxis::Y).scale(1.3),
            ),
        ],
        full_su2_control(),
        DEFAULT_TOL,
    )
    .expect("valid by construction");
    ModelSpec {
        name: "subalgebra_sp",
        dims,
        problem,
        expected: Expected {
            algebra_dim: Some(10),
            case_label: Some(CaseLabel::Intermediate),
            completely_controllable: Some(false),
        },
    }
}

/// Qubit system with a qutrit auxiliary (odd n_A) and two couplings with
/// non-commuting left factors: completely controllable, and the pipeline
/// exercises the odd-dimension alternating-diagonal identity.
pub fn example_odd_na() -> ModelSpec {
    let dims = BipartiteDims::new(2, 3).expect("2,3 valid");
    let g3 = gell_mann_basis(3);
    let problem = IndirectProblem::new(
        dims,
        ComplexMatrix::zeros(2),
        ComplexMatrix::zeros(3),
        vec![
            (pauli_skew(PauliAxis::X), g3[0].clone()),
            (pauli_skew(PauliAxis::Z), g3[1].clone()),
        ],
        g3,
        DEFAULT_TOL,
    )
    .expect("valid by construction");
    ModelSpec {
        name: "odd_na",
        dims,
        problem,
        expected: Expected {
            algebra_dim: Some(35),
            case_label: Some(CaseLabel::FullLocal),
            completely_controllable: Some(true),
        },
    }
}

pub fn all_examples() -> Vec<ModelSpec> {
    vec![
        example_two_qubit_case1(),
        example_no_drift_case_degenerate(),
        example_subalgebra_sp(),
        example_odd_na(),
    ]
}

/// Random element of su(n): coordinates uniform in (−1, 1) over the
/// Gell-Mann basis.
pub fn random_su_element(n: usize, rng: &mut impl Rng) -> ComplexMatrix {
    let mut out = ComplexMatrix::zeros(n);
    for g in gell_mann_basis(n) {
        out = &out + &g.scale(rng.gen::<f64>() * 2.0 - 1.0);
    }
    out
}

fn random_su_nonzero(n: usize, rng: &mut impl Rng) -> ComplexMatrix {
    loop {
        let m = random_su_element(n, rng);
        if m.hs_norm() > 0.3 {
            return m;
        }
    }
}

fn random_independent_sigmas(n: usize, count: usize, rng: &mut impl Rng) -> Vec<ComplexMatrix> {
    let mut sigmas: Vec<ComplexMatrix> = Vec::with_capacity(count);
    while sigmas.len() < count {
        let cand = random_su_nonzero(n, rng);
        let mut trial = sigmas.clone();
        trial.push(cand.clone());
        if orthonormalize(&trial, &[], DEFAULT_TOL).len() == trial.len() {
            sigmas.push(cand);
        }
    }
    sigmas
}

/// A problem with generic drifts and couplings and full control on A; the
/// closure is generically the whole of su(n_S·n_A).
pub fn random_generic_problem(
    dims: BipartiteDims,
    n_couplings: usize,
    rng: &mut impl Rng,
) -> IndirectProblem {
    let sigmas = random_independent_sigmas(dims.n_a(), n_couplings, rng);
    let couplings = sigmas
        .into_iter()
        .map(|sigma| (random_su_nonzero(dims.n_s(), rng), sigma))
        .collect();
    IndirectProblem::new(
        dims,
        random_su_element(dims.n_s(), rng),
        random_su_element(dims.n_a(), rng),
        couplings,
        gell_mann_basis(dims.n_a()),
        DEFAULT_TOL,
    )
    .expect("generic draw satisfies the invariants")
}

/// A randomized two-qubit problem confined to the symplectic-type subalgebra:
/// drift along `i·σ_y`, symmetric coupling left factors (combinations of
/// `i·σ_x` and `i·σ_z`), arbitrary right factors, full control. The closure
/// always has a one-dimensional D⊗1 block, giving an intermediate case.
pub fn random_sp_intermediate_problem(rng: &mut impl Rng) -> IndirectProblem {
    let dims = BipartiteDims::new(2, 2).expect("2,2 valid");
    let sign = if rng.gen::<bool>() { 1.0 } else { -1.0 };
    let k = pauli_skew(PauliAxis::Y).scale(sign * (0.5 + rng.gen::<f64>()));
    let sigmas = random_independent_sigmas(2, 2, rng);
    let couplings = sigmas
        .into_iter()
        .map(|sigma| {
            let s = loop {
                let cand = &pauli_skew(PauliAxis::X).scale(rng.gen::<f64>() * 2.0 - 1.0)
                    + &pauli_skew(PauliAxis::Z).scale(rng.gen::<f64>() * 2.0 - 1.0);
                if cand.hs_norm() > 0.3 {
                    break cand;
                }
            };
            (s, sigma)
        })
        .collect();
    IndirectProblem::new(
        dims,
        k,
        random_su_element(2, rng),
        couplings,
        full_su2_control(),
        DEFAULT_TOL,
    )
    .expect("sp draw satisfies the invariants")
}

/// A single-coupling problem with commuting left factors: no drift on S gives
/// the no-local case; a drift parallel to S_1 gives an intermediate case with
/// a commuting left-factor family.
pub fn random_single_coupling_problem(
    dims: BipartiteDims,
    with_parallel_drift: bool,
    rng: &mut impl Rng,
) -> IndirectProblem {
    let s1 = random_su_nonzero(dims.n_s(), rng);
    let k = if with_parallel_drift {
        s1.scale(0.5 + rng.gen::<f64>())
    } else {
        ComplexMatrix::zeros(dims.n_s())
    };
    IndirectProblem::new(
        dims,
        k,
        random_su_element(dims.n_a(), rng),
        vec![(s1, random_su_nonzero(dims.n_a(), rng))],
        gell_mann_basis(dims.n_a()),
        DEFAULT_TOL,
    )
    .expect("single-coupling draw satisfies the invariants")
}
