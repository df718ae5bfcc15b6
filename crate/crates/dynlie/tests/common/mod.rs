#![allow(dead_code)] // shared by several test targets; not all use every oracle

//! Shared test oracles, independent of the library's own span machinery.
//!
//! Rank decisions here go through singular values of stacked coordinate
//! vectors (no Gram-Schmidt), and the closure oracle saturates a raw list of
//! commutators by rank growth, so agreement with `lie_closure` is evidence,
//! not circularity.

use dynlie::{commutator, ComplexMatrix};
use nalgebra::DMatrix;

/// Real dimension of the span of the given matrices, by SVD rank.
pub fn svd_rank(mats: &[ComplexMatrix], tol: f64) -> usize {
    if mats.is_empty() {
        return 0;
    }
    let cols = mats[0].to_real_vec().len();
    let mut stack = DMatrix::<f64>::zeros(mats.len(), cols);
    for (i, m) in mats.iter().enumerate() {
        let v = m.to_real_vec();
        for j in 0..cols {
            stack[(i, j)] = v[j];
        }
    }
    let svd = stack.svd(false, false);
    let smax = svd.singular_values.iter().cloned().fold(0.0f64, f64::max);
    svd.singular_values
        .iter()
        .filter(|&&s| s > tol * smax.max(1.0))
        .count()
}

/// Dimension of the Lie algebra generated by the given elements, computed by
/// rank saturation over raw commutators.
pub fn closure_dim_oracle(generators: &[ComplexMatrix], tol: f64) -> usize {
    let mut elems: Vec<ComplexMatrix> = generators
        .iter()
        .map(ComplexMatrix::traceless_part)
        .filter(|m| m.hs_norm() > 1e-12)
        .collect();
    let mut rank = svd_rank(&elems, tol);
    loop {
        let mut grew = false;
        let len = elems.len();
        for i in 0..len {
            for j in 0..i {
                let c = commutator(&elems[i], &elems[j]).expect("same ambient dimension");
                if c.hs_norm() < 1e-12 {
                    continue;
                }
                elems.push(c);
                let r = svd_rank(&elems, tol);
                if r > rank {
                    rank = r;
                    grew = true;
                } else {
                    elems.pop();
                }
            }
        }
        if !grew {
            return rank;
        }
    }
}

/// Gram-determinant dependence oracle for a pair of matrices: rank of
/// {x, y} under the Hilbert-Schmidt form is below 2.
pub fn gram_dependent_oracle(x: &ComplexMatrix, y: &ComplexMatrix, tol: f64) -> bool {
    let xx = dynlie::hs_inner(x, x).unwrap().re;
    let yy = dynlie::hs_inner(y, y).unwrap().re;
    let xy = dynlie::hs_inner(x, y).unwrap();
    let det = xx * yy - xy.norm_sqr();
    det <= tol * (xx * yy).max(1.0)
}
