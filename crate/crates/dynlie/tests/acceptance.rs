//! Acceptance suite: one test per criterion, each printing a PASS line with
//! the measured quantities (run with `-- --nocapture` to see them).

mod common;

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::{closure_dim_oracle, gram_dependent_oracle, svd_rank};
use dynlie::systems::{
    random_generic_problem, random_single_coupling_problem, random_sp_intermediate_problem,
    random_su_element,
};
use dynlie::{
    build_generators, check_equivalence, commutator, counterexample_state, dependence_witness,
    disintegrate, example_subalgebra_sp, example_two_qubit_case1, gell_mann_basis,
    indirect_criterion, is_completely_controllable, kron, lie_closure, observability_space,
    partial_trace_a, pauli_skew, sigma_even, sigma_odd, su_pair_dependent, symplectic_form,
    symplectic_residual, BipartiteDims, CaseLabel, ComplexMatrix, DensityMatrix, DependenceWitness,
    IndirectProblem, PauliAxis, Subspace, DEFAULT_TOL,
};

fn random_matrix(n: usize, rng: &mut impl Rng) -> ComplexMatrix {
    ComplexMatrix::from_fn(n, |_, _| {
        dynlie::Complex64::new(rng.gen::<f64>() * 2.0 - 1.0, rng.gen::<f64>() * 2.0 - 1.0)
    })
}

#[test]
fn criterion_01_closure_sanity() {
    let start = Instant::now();

    let su2 = lie_closure(
        &[pauli_skew(PauliAxis::X), pauli_skew(PauliAxis::Y)],
        DEFAULT_TOL,
        None,
    )
    .unwrap();
    assert_eq!(su2.dim(), 3);
    assert_eq!(
        closure_dim_oracle(&[pauli_skew(PauliAxis::X), pauli_skew(PauliAxis::Y)], 1e-9),
        3
    );

    for n in 2..=4 {
        let basis = lie_closure(&gell_mann_basis(n), DEFAULT_TOL, None).unwrap();
        assert_eq!(basis.dim(), n * n - 1, "su({n})");
        assert_eq!(closure_dim_oracle(&gell_mann_basis(n), 1e-9), n * n - 1);
        // exhaustive pairwise commutators stay inside
        for a in basis.elements() {
            for b in basis.elements() {
                let c = commutator(a, b).unwrap();
                assert!(basis.contains(&c, 1e-9).unwrap());
            }
        }
    }

    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 1.0, "criterion 1 took {elapsed:?}");
    println!("ACCEPTANCE 1 PASS: closure dims 3 and n^2-1 for n=2..4 match the rank oracle ({elapsed:?})");
}

#[test]
fn criterion_02_forward_direction() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0xC2);

    let mut problems: Vec<(String, IndirectProblem)> =
        vec![("two_qubit_case1".into(), example_two_qubit_case1().problem)];
    let sizes: &[(usize, usize, usize)] = &[(2, 2, 13), (2, 3, 6), (3, 2, 5), (3, 3, 1)];
    for &(n_s, n_a, count) in sizes {
        let dims = BipartiteDims::new(n_s, n_a).unwrap();
        for k in 0..count {
            let couplings = 1 + (k % 2);
            problems.push((
                format!("random_{n_s}x{n_a}_{k}"),
                random_generic_problem(dims, couplings, &mut rng),
            ));
        }
    }
    assert_eq!(problems.len(), 26); // the canned example plus 25 random draws

    let mut violations = 0;
    for (name, p) in &problems {
        let report = check_equivalence(p, DEFAULT_TOL, 11).unwrap();
        assert!(
            report.completely_controllable && report.case_label == CaseLabel::FullLocal,
            "{name}: expected a completely controllable full-local instance, got dim {}",
            report.algebra_dim
        );
        if !report.indirect_criterion_holds {
            violations += 1;
        }
        assert!(report.consistent, "{name}: report flagged inconsistent");
    }
    assert_eq!(violations, 0);

    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 60.0, "criterion 2 took {elapsed:?}");
    println!(
        "ACCEPTANCE 2 PASS: complete controllability implied the mixed-state criterion on {} instances, 0 violations ({elapsed:?})",
        problems.len()
    );
}

#[test]
fn criterion_03_contrapositive_witnesses() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xC3);
    let dims = BipartiteDims::new(2, 2).unwrap();

    let mut problems: Vec<IndirectProblem> = vec![example_subalgebra_sp().problem];
    // the transverse-drift Ising system: a single-axis drift keeps the closure
    // in a 10-dimensional subalgebra with a one-dimensional D-block
    problems.push(
        IndirectProblem::new(
            dims,
            pauli_skew(PauliAxis::X),
            ComplexMatrix::zeros(2),
            vec![(pauli_skew(PauliAxis::Z), pauli_skew(PauliAxis::Z))],
            vec![
                pauli_skew(PauliAxis::X),
                pauli_skew(PauliAxis::Y),
                pauli_skew(PauliAxis::Z),
            ],
            DEFAULT_TOL,
        )
        .unwrap(),
    );
    for _ in 0..10 {
        problems.push(random_sp_intermediate_problem(&mut rng));
    }
    for _ in 0..2 {
        problems.push(random_single_coupling_problem(dims, true, &mut rng));
    }

    let rho_a = DensityMatrix::maximally_mixed(2);
    let id_joint = ComplexMatrix::identity(4).times_i();
    let id_s = ComplexMatrix::identity(2).times_i();
    let mut checked = 0;
    for (idx, p) in problems.iter().enumerate() {
        let basis = lie_closure(&build_generators(p), DEFAULT_TOL, None).unwrap();
        let sb = disintegrate(&basis, &dims, DEFAULT_TOL).unwrap();
        assert_eq!(sb.case_label(), CaseLabel::Intermediate, "instance {idx}");

        let cex = counterexample_state(&sb, &basis, &dims, DEFAULT_TOL)
            .unwrap()
            .expect("intermediate case must produce a counterexample");
        assert!(
            !indirect_criterion(&basis, &cex.state, &rho_a, &dims, DEFAULT_TOL).unwrap(),
            "instance {idx}: criterion did not fail on the counterexample state"
        );

        // V stays inside L ⊕ span{i·1⊗1}
        let v = observability_space(&cex.state, &rho_a, &basis, &dims, DEFAULT_TOL).unwrap();
        let mut big = basis.elements().to_vec();
        big.push(id_joint.clone());
        let big = Subspace::from_span(4, &big, DEFAULT_TOL);
        for e in v.elements() {
            assert!(
                big.contains(e, 1e-8).unwrap(),
                "instance {idx}: V escapes L ⊕ i1"
            );
        }

        // Tr_A(V) stays inside span{D_1..D_s} ⊕ span{i·1}
        let mut d_span: Vec<ComplexMatrix> = sb.local_s().to_vec();
        d_span.push(id_s.clone());
        let d_span = Subspace::from_span(2, &d_span, DEFAULT_TOL);
        for e in v.elements() {
            let t = partial_trace_a(e, &dims).unwrap();
            assert!(
                d_span.contains(&t, 1e-8).unwrap(),
                "instance {idx}: Tr_A(V) escapes"
            );
        }
        checked += 1;
    }
    assert!(checked >= 10);
    println!(
        "ACCEPTANCE 3 PASS: {checked} intermediate instances produced failing counterexample states with both containments within 1e-8"
    );
}

#[test]
fn criterion_04_disintegration_completeness() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xC4);
    let d22 = BipartiteDims::new(2, 2).unwrap();
    let d23 = BipartiteDims::new(2, 3).unwrap();
    let d32 = BipartiteDims::new(3, 2).unwrap();

    let mut suite: Vec<(BipartiteDims, IndirectProblem)> = Vec::new();
    for k in 0..20 {
        let (dims, nc) = match k % 3 {
            0 => (d22, 1 + k % 2),
            1 => (d23, 1),
            _ => (d32, 1 + k % 2),
        };
        suite.push((dims, random_generic_problem(dims, nc, &mut rng)));
    }
    for _ in 0..15 {
        suite.push((d22, random_sp_intermediate_problem(&mut rng)));
    }
    for k in 0..15 {
        let dims = if k % 2 == 0 { d22 } else { d23 };
        suite.push((
            dims,
            random_single_coupling_problem(dims, k % 3 == 0, &mut rng),
        ));
    }
    assert_eq!(suite.len(), 50);

    for (idx, (dims, p)) in suite.iter().enumerate() {
        let basis = lie_closure(&build_generators(p), DEFAULT_TOL, None).unwrap();
        let sb = disintegrate(&basis, dims, DEFAULT_TOL)
            .unwrap_or_else(|e| panic!("instance {idx}: disintegration failed: {e}"));
        assert_eq!(
            sb.block_dim_sum(),
            basis.dim(),
            "instance {idx}: block dims {:?}+{} do not sum to {}",
            sb.coupled_dims(),
            sb.local_s().len(),
            basis.dim()
        );
    }
    println!(
        "ACCEPTANCE 4 PASS: block dimension sums matched the algebra dimension on all 50 instances"
    );
}

#[test]
fn criterion_05_alternating_diagonal_identities() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xC5);

    let mut worst_even = 0.0f64;
    for n_a in [2usize, 4] {
        let se = sigma_even(n_a).unwrap();
        let id = ComplexMatrix::identity(n_a);
        for _ in 0..100 {
            let n_s = 2 + (rng.gen::<u8>() % 2) as usize;
            let a = {
                let m = random_su_element(n_s, &mut rng);
                m.scale(1.0 / m.hs_norm())
            };
            let b = {
                let m = random_su_element(n_s, &mut rng);
                m.scale(1.0 / m.hs_norm())
            };
            let lhs = commutator(&kron(&a, &se), &kron(&b, &se)).unwrap();
            let rhs = kron(&commutator(&a, &b).unwrap(), &id);
            worst_even = worst_even.max((&lhs - &rhs).hs_norm());
        }
    }
    assert!(worst_even <= 1e-12, "even-case residual {worst_even:e}");

    let mut worst_odd = 0.0f64;
    for n_a in [3usize, 5] {
        let id = ComplexMatrix::identity(n_a);
        for _ in 0..100 {
            let n_s = 2 + (rng.gen::<u8>() % 2) as usize;
            let a = {
                let m = random_su_element(n_s, &mut rng);
                m.scale(1.0 / m.hs_norm())
            };
            let b = {
                let m = random_su_element(n_s, &mut rng);
                m.scale(1.0 / m.hs_norm())
            };
            let mut acc = ComplexMatrix::zeros(n_s * n_a);
            for j in 0..n_a {
                let so = sigma_odd(n_a, j).unwrap();
                acc = &acc + &commutator(&kron(&a, &so), &kron(&b, &so)).unwrap();
            }
            let lhs = acc.scale(1.0 / (n_a as f64 - 1.0));
            let rhs = kron(&commutator(&a, &b).unwrap(), &id);
            worst_odd = worst_odd.max((&lhs - &rhs).hs_norm());
        }
    }
    assert!(worst_odd <= 1e-11, "odd-case residual {worst_odd:e}");

    println!(
        "ACCEPTANCE 5 PASS: alternating-diagonal identities, worst residuals even={worst_even:.2e} odd={worst_odd:.2e}"
    );
}

#[test]
fn criterion_06_dependence_oracle_equivalence() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xC6);
    let mut total = 0usize;
    let mut witnesses = 0usize;

    for n in 2..=5 {
        for trial in 0..500 {
            let (x, y) = match trial % 3 {
                // generic draw
                0 => (
                    random_su_element(n, &mut rng),
                    random_su_element(n, &mut rng),
                ),
                // dependent by construction
                1 => {
                    let x = random_su_element(n, &mut rng);
                    let alpha = rng.gen::<f64>() * 4.0 - 2.0;
                    let y = x.scale(alpha);
                    (x, y)
                }
                // commuting pair: diagonal in a common random frame
                _ => {
                    let u = ComplexMatrix::random_unitary(n, &mut rng);
                    let mut dx = vec![0.0; n];
                    let mut dy = vec![0.0; n];
                    for k in 0..n {
                        dx[k] = rng.gen::<f64>() * 2.0 - 1.0;
                        dy[k] = rng.gen::<f64>() * 2.0 - 1.0;
                    }
                    let diag =
                        |d: &[f64]| ComplexMatrix::from_real_diag(d).times_i().traceless_part();
                    let conj = |m: &ComplexMatrix| &(&u * m) * &u.adjoint();
                    (conj(&diag(&dx)), conj(&diag(&dy)))
                }
            };
            let got = su_pair_dependent(&x, &y, DEFAULT_TOL).unwrap();
            let want = gram_dependent_oracle(&x, &y, 1e-9);
            assert_eq!(
                got, want,
                "n={n} trial={trial}: decision disagrees with the Gram oracle"
            );
            total += 1;

            // witness requirement for independent commuting pairs at n >= 3
            if n >= 3 && trial % 3 == 2 && !got {
                match dependence_witness(&x, &y, DEFAULT_TOL).unwrap() {
                    DependenceWitness::Witness(a) => {
                        let w =
                            commutator(&commutator(&a, &x).unwrap(), &commutator(&a, &y).unwrap())
                                .unwrap();
                        assert!(w.hs_norm() > 1e-10, "n={n} trial={trial}: weak witness");
                        witnesses += 1;
                    }
                    other => panic!("n={n} trial={trial}: expected witness, got {other:?}"),
                }
            }
        }
    }
    assert_eq!(total, 2000);
    assert!(witnesses > 300);
    println!(
        "ACCEPTANCE 6 PASS: dependence decision matched the Gram oracle on 2000 pairs; {witnesses} witnesses verified above 1e-10"
    );
}

#[test]
fn criterion_07_local_invariance() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xC7);
    let base = example_two_qubit_case1().problem;
    let reference = check_equivalence(&base, DEFAULT_TOL, 5).unwrap();

    for trial in 0..20 {
        let t_s = ComplexMatrix::random_unitary(2, &mut rng);
        let t_a = ComplexMatrix::random_unitary(2, &mut rng);
        let conj = base.locally_conjugated(&t_s, &t_a).unwrap();
        let report = check_equivalence(&conj, DEFAULT_TOL, 5).unwrap();
        assert_eq!(report.algebra_dim, reference.algebra_dim, "trial {trial}");
        assert_eq!(report.case_label, reference.case_label, "trial {trial}");
        assert_eq!(
            report.indirect_criterion_holds, reference.indirect_criterion_holds,
            "trial {trial}"
        );
        assert_eq!(
            report.criterion_per_seed, reference.criterion_per_seed,
            "trial {trial}"
        );
        assert_eq!(
            report.completely_controllable, reference.completely_controllable,
            "trial {trial}"
        );
    }
    println!(
        "ACCEPTANCE 7 PASS: report fields invariant under 20 random local unitary conjugations"
    );
}

#[test]
fn criterion_08_partial_trace_identities() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xC8);
    let dims = BipartiteDims::new(2, 3).unwrap();
    let mut worst_cov = 0.0f64;
    let mut worst_transfer = 0.0f64;

    for _ in 0..100 {
        // covariance under local unitaries
        let rho = random_matrix(6, &mut rng);
        let t_s = ComplexMatrix::random_unitary(2, &mut rng);
        let t_a = ComplexMatrix::random_unitary(3, &mut rng);
        let local = kron(&t_s, &t_a);
        let lhs = partial_trace_a(&(&(&local * &rho) * &local.adjoint()), &dims).unwrap();
        let rhs = &(&t_s * &partial_trace_a(&rho, &dims).unwrap()) * &t_s.adjoint();
        worst_cov = worst_cov.max((&lhs - &rhs).hs_norm());

        // state transfer under auxiliary-only unitaries
        let rho_s = DensityMatrix::seeded_generic(2, rng.gen());
        let rho_a = DensityMatrix::seeded_generic(3, rng.gen());
        let xa = ComplexMatrix::random_unitary(3, &mut rng);
        let lift = kron(&ComplexMatrix::identity(2), &xa);
        let lhs = &(&lift * &kron(rho_s.matrix(), rho_a.matrix())) * &lift.adjoint();
        let rhs = kron(rho_s.matrix(), &(&(&xa * rho_a.matrix()) * &xa.adjoint()));
        worst_transfer = worst_transfer.max((&lhs - &rhs).hs_norm());
    }
    assert!(worst_cov <= 1e-12, "covariance residual {worst_cov:e}");
    assert!(
        worst_transfer <= 1e-12,
        "state-transfer residual {worst_transfer:e}"
    );
    println!(
        "ACCEPTANCE 8 PASS: partial-trace covariance ({worst_cov:.2e}) and state-transfer identity ({worst_transfer:.2e}) within 1e-12 on 100 instances"
    );
}

#[test]
fn criterion_09_symplectic_subalgebra() {
    let spec = example_subalgebra_sp();
    let dims = spec.dims;
    let j = symplectic_form(4).unwrap();

    // independent derivation of the constraint-solution dimension inside the
    // skew-Hermitian 4x4 matrices (16 real dimensions)
    let mut skew_basis = gell_mann_basis(4);
    skew_basis.push(ComplexMatrix::identity(4).times_i().scale(0.5));
    let images: Vec<ComplexMatrix> = skew_basis
        .iter()
        .map(|h| &(&j * h) + &(&h.transpose() * &j))
        .collect();
    let image_rank = svd_rank(&images, 1e-9);
    let nullspace_dim = skew_basis.len() - image_rank;
    assert_eq!(nullspace_dim, 10);

    let basis = lie_closure(&build_generators(&spec.problem), DEFAULT_TOL, None).unwrap();
    assert_eq!(basis.dim(), 10);
    assert!(basis.dim() < 15);
    assert!(!is_completely_controllable(&basis, &dims));

    let mut worst = 0.0f64;
    for e in basis.elements() {
        worst = worst.max(symplectic_residual(&j, e));
    }
    assert!(worst <= 1e-10, "constraint residual {worst:e}");
    println!(
        "ACCEPTANCE 9 PASS: closure dim 10 (= constraint nullspace dim) < 15, worst constraint residual {worst:.2e}"
    );
}
