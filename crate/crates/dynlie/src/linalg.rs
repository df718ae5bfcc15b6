//! Dense complex matrix arithmetic and Hilbert-Schmidt geometry.
//!
//! Everything downstream (closure computation, disintegration, the
//! controllability tests) runs on the types in this module: square complex
//! matrices with tolerance-aware predicates, bipartite dimension bookkeeping,
//! tensor/partial-trace operations and real-span orthonormalization.
//!
//! All spans are over the reals: the skew-Hermitian matrices form a real
//! vector space on which the Hilbert-Schmidt inner product is real, so
//! projection coefficients are taken as `Re tr(A† B)` throughout.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64 as C64;
use rand::Rng;
use thiserror::Error;

/// Default relative tolerance for rank/residual decisions.
///
/// Commutator chains of unit-norm generators at the dimensions this crate
/// targets (n ≤ 12) keep rounding well below this. Every operation that makes
/// a rank decision accepts an explicit tolerance; this is the value the CLI
/// and the canned examples use.
pub const DEFAULT_TOL: f64 = 1e-9;

#[derive(Debug, Error)]
pub enum LinalgError {
    #[error("dimension mismatch: {left}x{left} vs {right}x{right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("matrix data is not square: {rows} rows, {cols} columns")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix dimension must be at least 1")]
    EmptyMatrix,
    #[error("bipartite factors must each have dimension at least 2 (got n_S={n_s}, n_A={n_a})")]
    DegenerateFactor { n_s: usize, n_a: usize },
    #[error("matrix dimension {dim} does not match n_S*n_A = {n_s}*{n_a}")]
    BipartiteMismatch { dim: usize, n_s: usize, n_a: usize },
    #[error("not a density matrix: {0}")]
    NotDensityMatrix(String),
}

/// A dense square complex matrix, the universal carrier for Hamiltonians,
/// density matrices and Lie algebra elements.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    m: DMatrix<C64>,
}

impl std::fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "ComplexMatrix({}x{}){}", self.dim(), self.dim(), self.m)
    }
}

impl ComplexMatrix {
    pub fn zeros(dim: usize) -> Self {
        assert!(dim >= 1, "dimension must be at least 1");
        Self {
            m: DMatrix::zeros(dim, dim),
        }
    }

    pub fn identity(dim: usize) -> Self {
        assert!(dim >= 1, "dimension must be at least 1");
        Self {
            m: DMatrix::identity(dim, dim),
        }
    }

    /// Build from a closure over (row, column).
    pub fn from_fn(dim: usize, f: impl FnMut(usize, usize) -> C64) -> Self {
        assert!(dim >= 1, "dimension must be at least 1");
        Self {
            m: DMatrix::from_fn(dim, dim, f),
        }
    }

    /// Build from nested rows; fails unless the data is square and nonempty.
    pub fn from_rows(rows: &[Vec<C64>]) -> Result<Self, LinalgError> {
        let n = rows.len();
        if n == 0 {
            return Err(LinalgError::EmptyMatrix);
        }
        for r in rows {
            if r.len() != n {
                return Err(LinalgError::NotSquare {
                    rows: n,
                    cols: r.len(),
                });
            }
        }
        Ok(Self::from_fn(n, |i, j| rows[i][j]))
    }

    /// Build a real diagonal matrix.
    pub fn from_real_diag(diag: &[f64]) -> Self {
        let n = diag.len();
        Self::from_fn(n, |i, j| {
            if i == j {
                C64::new(diag[i], 0.0)
            } else {
                C64::new(0.0, 0.0)
            }
        })
    }

    pub fn dim(&self) -> usize {
        self.m.nrows()
    }

    pub fn entry(&self, i: usize, j: usize) -> C64 {
        self.m[(i, j)]
    }

    pub fn set_entry(&mut self, i: usize, j: usize, v: C64) {
        self.m[(i, j)] = v;
    }

    pub fn adjoint(&self) -> Self {
        Self {
            m: self.m.adjoint(),
        }
    }

    pub fn transpose(&self) -> Self {
        Self {
            m: self.m.transpose(),
        }
    }

    pub fn trace(&self) -> C64 {
        self.m.trace()
    }

    pub fn scale(&self, s: f64) -> Self {
        Self {
            m: &self.m * C64::new(s, 0.0),
        }
    }

    pub fn scale_c(&self, s: C64) -> Self {
        Self { m: &self.m * s }
    }

    /// Multiply by i (rotates Hermitian into skew-Hermitian and back).
    pub fn times_i(&self) -> Self {
        self.scale_c(C64::new(0.0, 1.0))
    }

    /// Frobenius / Hilbert-Schmidt norm.
    pub fn hs_norm(&self) -> f64 {
        self.m.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Subtract the trace component, leaving the traceless part.
    pub fn traceless_part(&self) -> Self {
        let n = self.dim();
        let t = self.trace() / C64::new(n as f64, 0.0);
        let mut out = self.clone();
        for i in 0..n {
            out.m[(i, i)] -= t;
        }
        out
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        let scale = self.hs_norm().max(1.0);
        (self - &self.adjoint()).hs_norm() <= tol * scale
    }

    pub fn is_skew_hermitian(&self, tol: f64) -> bool {
        let scale = self.hs_norm().max(1.0);
        (&self.adjoint() + self).hs_norm() <= tol * scale
    }

    pub fn is_traceless(&self, tol: f64) -> bool {
        self.trace().norm() <= tol * self.hs_norm().max(1.0)
    }

    /// Positive semidefiniteness via the Hermitian eigenvalue threshold
    /// `lambda_min >= -tol * max(1, ||M||)`; tolerates the boundary states
    /// used in the counterexample constructions.
    pub fn is_psd(&self, tol: f64) -> bool {
        if !self.is_hermitian(tol) {
            return false;
        }
        let scale = self.hs_norm().max(1.0);
        let evs = self.hermitian_eigenvalues();
        evs.iter().all(|&l| l >= -tol * scale)
    }

    /// Eigenvalues of a Hermitian matrix, ascending. The input is assumed
    /// Hermitian; only its Hermitian part is meaningful here.
    pub fn hermitian_eigenvalues(&self) -> Vec<f64> {
        let eig = self.m.clone().symmetric_eigen();
        let mut v: Vec<f64> = eig.eigenvalues.iter().copied().collect();
        v.sort_by(f64::total_cmp);
        v
    }

    /// Eigendecomposition of a Hermitian matrix with deterministic ordering:
    /// returns `(lambda, U)` with `self = U diag(lambda) U†` and the
    /// eigenvalues ascending.
    pub fn hermitian_eigen(&self) -> (Vec<f64>, ComplexMatrix) {
        let n = self.dim();
        let eig = self.m.clone().symmetric_eigen();
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
        let vals: Vec<f64> = order.iter().map(|&k| eig.eigenvalues[k]).collect();
        let u = ComplexMatrix::from_fn(n, |i, j| eig.eigenvectors[(i, order[j])]);
        (vals, u)
    }

    /// Flatten into a real vector (re parts then im parts, row-major), so that
    /// the Euclidean inner product equals `Re tr(A† B)`.
    pub fn to_real_vec(&self) -> DVector<f64> {
        let n = self.dim();
        let mut v = DVector::zeros(2 * n * n);
        for i in 0..n {
            for j in 0..n {
                let z = self.m[(i, j)];
                v[i * n + j] = z.re;
                v[n * n + i * n + j] = z.im;
            }
        }
        v
    }

    /// Inverse of [`ComplexMatrix::to_real_vec`].
    pub fn from_real_vec(v: &DVector<f64>, dim: usize) -> Self {
        assert_eq!(v.len(), 2 * dim * dim);
        Self::from_fn(dim, |i, j| {
            C64::new(v[i * dim + j], v[dim * dim + i * dim + j])
        })
    }

    /// A pseudorandom unitary: QR of a matrix with uniform entries in (-1, 1).
    /// Generic rather than Haar-distributed, which is all the seeded
    /// constructions here need.
    pub fn random_unitary(dim: usize, rng: &mut impl Rng) -> Self {
        let g = DMatrix::from_fn(dim, dim, |_, _| {
            C64::new(rng.gen::<f64>() * 2.0 - 1.0, rng.gen::<f64>() * 2.0 - 1.0)
        });
        let qr = g.qr();
        Self { m: qr.q() }
    }
}

impl std::ops::Add for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(
            self.dim(),
            rhs.dim(),
            "dimension mismatch in matrix addition"
        );
        ComplexMatrix {
            m: &self.m + &rhs.m,
        }
    }
}

impl std::ops::Sub for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(
            self.dim(),
            rhs.dim(),
            "dimension mismatch in matrix subtraction"
        );
        ComplexMatrix {
            m: &self.m - &rhs.m,
        }
    }
}

impl std::ops::Mul for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(
            self.dim(),
            rhs.dim(),
            "dimension mismatch in matrix product"
        );
        ComplexMatrix {
            m: &self.m * &rhs.m,
        }
    }
}

impl std::ops::Neg for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn neg(self) -> ComplexMatrix {
        ComplexMatrix { m: -&self.m }
    }
}

impl std::fmt::Display for ComplexMatrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{:.4}", self.m)
    }
}

/// The pair (n_S, n_A) with the derived quantities used everywhere:
/// n = n_S·n_A, d_S = n_S²−1, d_A = n_A²−1.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BipartiteDims {
    n_s: usize,
    n_a: usize,
}

impl BipartiteDims {
    /// Degenerate one-dimensional factors are rejected at construction.
    pub fn new(n_s: usize, n_a: usize) -> Result<Self, LinalgError> {
        if n_s < 2 || n_a < 2 {
            return Err(LinalgError::DegenerateFactor { n_s, n_a });
        }
        Ok(Self { n_s, n_a })
    }

    pub fn n_s(&self) -> usize {
        self.n_s
    }

    pub fn n_a(&self) -> usize {
        self.n_a
    }

    /// Total dimension n = n_S·n_A.
    pub fn total(&self) -> usize {
        self.n_s * self.n_a
    }

    /// dim su(n_S) = n_S²−1.
    pub fn d_s(&self) -> usize {
        self.n_s * self.n_s - 1
    }

    /// dim su(n_A) = n_A²−1.
    pub fn d_a(&self) -> usize {
        self.n_a * self.n_a - 1
    }

    fn check_total(&self, dim: usize) -> Result<(), LinalgError> {
        if dim != self.total() {
            return Err(LinalgError::BipartiteMismatch {
                dim,
                n_s: self.n_s,
                n_a: self.n_a,
            });
        }
        Ok(())
    }
}

/// Commutator `[a, b] = ab − ba`. Skew-Hermitian inputs yield skew-Hermitian,
/// traceless output.
pub fn commutator(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix, LinalgError> {
    if a.dim() != b.dim() {
        return Err(LinalgError::DimensionMismatch {
            left: a.dim(),
            right: b.dim(),
        });
    }
    Ok(&(a * b) - &(b * a))
}

/// Anticommutator `{a, b} = ab + ba`.
pub fn anticommutator(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix, LinalgError> {
    if a.dim() != b.dim() {
        return Err(LinalgError::DimensionMismatch {
            left: a.dim(),
            right: b.dim(),
        });
    }
    Ok(&(a * b) + &(b * a))
}

/// Hilbert-Schmidt inner product `tr(a† b)`, conjugate-linear in the first
/// argument. Restricted to skew-Hermitian (or Hermitian) inputs it is real.
pub fn hs_inner(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<C64, LinalgError> {
    if a.dim() != b.dim() {
        return Err(LinalgError::DimensionMismatch {
            left: a.dim(),
            right: b.dim(),
        });
    }
    let mut acc = C64::new(0.0, 0.0);
    for i in 0..a.dim() {
        for j in 0..a.dim() {
            acc += a.entry(i, j).conj() * b.entry(i, j);
        }
    }
    Ok(acc)
}

/// Kronecker product with the system factor on the left (slow index) and the
/// auxiliary factor on the right, matching `K ⊗ 1 + 1 ⊗ L` conventions.
pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    ComplexMatrix {
        m: a.m.kronecker(&b.m),
    }
}

/// Partial trace over the auxiliary (right) factor: returns an n_S×n_S matrix
/// with `Tr_A(rho_S ⊗ rho_A) = rho_S · tr(rho_A)`.
pub fn partial_trace_a(
    rho_tot: &ComplexMatrix,
    dims: &BipartiteDims,
) -> Result<ComplexMatrix, LinalgError> {
    dims.check_total(rho_tot.dim())?;
    let (n_s, n_a) = (dims.n_s(), dims.n_a());
    let mut out = ComplexMatrix::zeros(n_s);
    for i in 0..n_s {
        for j in 0..n_s {
            let mut acc = C64::new(0.0, 0.0);
            for k in 0..n_a {
                acc += rho_tot.entry(i * n_a + k, j * n_a + k);
            }
            out.set_entry(i, j, acc);
        }
    }
    Ok(out)
}

/// Partial trace over the system (left) factor; mirror of [`partial_trace_a`].
pub fn partial_trace_s(
    rho_tot: &ComplexMatrix,
    dims: &BipartiteDims,
) -> Result<ComplexMatrix, LinalgError> {
    dims.check_total(rho_tot.dim())?;
    let (n_s, n_a) = (dims.n_s(), dims.n_a());
    let mut out = ComplexMatrix::zeros(n_a);
    for k in 0..n_a {
        for l in 0..n_a {
            let mut acc = C64::new(0.0, 0.0);
            for i in 0..n_s {
                acc += rho_tot.entry(i * n_a + k, i * n_a + l);
            }
            out.set_entry(k, l, acc);
        }
    }
    Ok(out)
}

/// Extend an orthonormal family `against` by the candidates, returning only
/// the new orthonormal vectors.
///
/// Modified Gram-Schmidt with a single re-orthogonalization pass; projection
/// coefficients are real (real-span semantics). A candidate whose residual
/// Hilbert-Schmidt norm after projection is at most `tol·max(1, ||candidate||)`
/// is discarded. The result is deterministic in the input order.
pub fn orthonormalize(
    candidates: &[ComplexMatrix],
    against: &[ComplexMatrix],
    tol: f64,
) -> Vec<ComplexMatrix> {
    let mut accepted: Vec<ComplexMatrix> = Vec::new();
    for cand in candidates {
        let scale = cand.hs_norm().max(1.0);
        let mut r = cand.clone();
        for _pass in 0..2 {
            for e in against.iter().chain(accepted.iter()) {
                let c = hs_inner(e, &r)
                    .expect("orthonormalize: mixed dimensions")
                    .re;
                if c != 0.0 {
                    r = &r - &e.scale(c);
                }
            }
        }
        let norm = r.hs_norm();
        if norm > tol * scale {
            accepted.push(r.scale(1.0 / norm));
        }
    }
    accepted
}

/// Residual norm of `x` after projecting onto the orthonormal family `elems`,
/// with real coefficients. Used for membership tests.
pub(crate) fn span_residual(elems: &[ComplexMatrix], x: &ComplexMatrix) -> f64 {
    let mut r = x.clone();
    for _pass in 0..2 {
        for e in elems {
            let c = hs_inner(e, &r).expect("span_residual: mixed dimensions").re;
            if c != 0.0 {
                r = &r - &e.scale(c);
            }
        }
    }
    r.hs_norm()
}

/// A trace-1, positive semidefinite Hermitian matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    mat: ComplexMatrix,
}

impl DensityMatrix {
    /// Validates Hermiticity, unit trace and positive semidefiniteness within
    /// `tol` (relative).
    pub fn new(mat: ComplexMatrix, tol: f64) -> Result<Self, LinalgError> {
        if !mat.is_hermitian(tol) {
            return Err(LinalgError::NotDensityMatrix("not Hermitian".into()));
        }
        let t = mat.trace();
        if (t - C64::new(1.0, 0.0)).norm() > tol * mat.hs_norm().max(1.0) {
            return Err(LinalgError::NotDensityMatrix(format!(
                "trace is {t:.6} instead of 1"
            )));
        }
        if !mat.is_psd(tol) {
            return Err(LinalgError::NotDensityMatrix(
                "not positive semidefinite".into(),
            ));
        }
        Ok(Self { mat })
    }

    /// The perfectly mixed state `(1/n)·identity`.
    pub fn maximally_mixed(dim: usize) -> Self {
        Self {
            mat: ComplexMatrix::identity(dim).scale(1.0 / dim as f64),
        }
    }

    /// A seeded full-rank state with the fixed distinct spectrum
    /// `p_k = 2(k+1)/(n(n+1))`, conjugated by a pseudorandom unitary.
    /// Deterministic for a fixed `(dim, seed)`.
    pub fn seeded_generic(dim: usize, seed: u64) -> Self {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let u = ComplexMatrix::random_unitary(dim, &mut rng);
        let denom = (dim * (dim + 1)) as f64;
        let diag: Vec<f64> = (0..dim).map(|k| 2.0 * (k + 1) as f64 / denom).collect();
        let d = ComplexMatrix::from_real_diag(&diag);
        Self {
            mat: &(&u * &d) * &u.adjoint(),
        }
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.mat
    }

    pub fn dim(&self) -> usize {
        self.mat.dim()
    }

    /// Distance from the perfectly mixed state of the same dimension.
    pub fn distance_from_mixed(&self) -> f64 {
        (&self.mat - Self::maximally_mixed(self.dim()).matrix()).hs_norm()
    }
}
