//! Dynamical Lie algebra analysis for bipartite quantum control systems in
//! which only the auxiliary factor is directly actuated.
//!
//! The crate computes commutator closures of generator sets, disintegrates
//! the resulting algebra into a tensor-structured basis, decides complete
//! controllability, evaluates the partial-trace observability criterion for
//! indirect controllability at a chosen auxiliary state, and constructs
//! explicit counterexample states when the criterion must fail.
//!
//! - [`linalg`]: complex matrices, Hilbert-Schmidt geometry, partial traces,
//!   orthonormalization.
//! - [`lie`]: Lie closures, subspace intersection, ad-saturation, the
//!   observability space.
//! - [`controllability`]: the indirect-control problem type and the decision
//!   procedures, up to the end-to-end [`controllability::check_equivalence`].
//! - [`systems`]: standard bases, canned examples, seeded problem generators.
//!
//! ```
//! use dynlie::{check_equivalence, example_two_qubit_case1, CaseLabel, DEFAULT_TOL};
//!
//! let spec = example_two_qubit_case1();
//! let report = check_equivalence(&spec.problem, DEFAULT_TOL, 7)?;
//! assert!(report.completely_controllable);
//! assert_eq!(report.case_label, CaseLabel::FullLocal);
//! assert!(report.indirect_criterion_holds && report.consistent);
//! # Ok::<(), dynlie::ControlError>(())
//! ```

pub use num_complex::Complex64;

pub mod controllability;
pub mod lie;
pub mod linalg;
pub mod systems;

pub use controllability::{
    build_generators, check_equivalence, classify_case, counterexample_state, dependence_witness,
    disintegrate, indirect_criterion, is_completely_controllable, sigma_even, sigma_odd,
    su_pair_dependent, verify_case2_contradiction, CaseLabel, ControlError, DependenceWitness,
    IndirectProblem, Report, StructuredBasis,
};
pub use lie::{
    ad_saturate, lie_closure, observability_space, subspace_intersect, LieBasis, LieError, Subspace,
};
pub use linalg::{
    anticommutator, commutator, hs_inner, kron, orthonormalize, partial_trace_a, partial_trace_s,
    BipartiteDims, ComplexMatrix, DensityMatrix, LinalgError, DEFAULT_TOL,
};
pub use systems::{
    all_examples, example_no_drift_case_degenerate, example_odd_na, example_subalgebra_sp,
    example_two_qubit_case1, gell_mann_basis, pauli, pauli_skew, symplectic_form,
    symplectic_residual, Expected, ModelSpec, PauliAxis,
};
