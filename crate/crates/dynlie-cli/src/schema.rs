//! Problem-file and report-file schemas.
//!
//! Matrices are serialized as nested arrays of `[re, im]` pairs (never
//! strings), which round-trips bit-exactly through serde_json's
//! shortest-round-trip float formatting. Unknown fields are rejected so that
//! typos surface as positioned errors instead of silently ignored knobs.

use serde::{Deserialize, Serialize};

use dynlie::{
    BipartiteDims, CaseLabel, ComplexMatrix, ControlError, DensityMatrix, IndirectProblem, Report,
};

pub type MatrixData = Vec<Vec<[f64; 2]>>;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemFile {
    pub schema_version: u32,
    pub dims: DimsData,
    #[serde(rename = "K")]
    pub k: MatrixData,
    #[serde(rename = "L")]
    pub l: MatrixData,
    pub couplings: Vec<CouplingData>,
    pub control_algebra: Vec<MatrixData>,
    #[serde(default)]
    pub tol: Option<f64>,
    #[serde(default)]
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DimsData {
    pub n_s: usize,
    pub n_a: usize,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CouplingData {
    #[serde(rename = "S")]
    pub s: MatrixData,
    pub sigma: MatrixData,
}

/// An auxiliary state supplied for exploratory criterion runs.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RhoFile {
    pub schema_version: u32,
    pub matrix: MatrixData,
}

/// A semantic validation failure with the offending field spelled out.
#[derive(Debug)]
pub struct ValidationError(pub String);

impl std::fmt::Display for ValidationError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl std::error::Error for ValidationError {}

pub fn matrix_from_data(
    data: &MatrixData,
    expect_dim: usize,
    field: &str,
) -> Result<ComplexMatrix, ValidationError> {
    if data.len() != expect_dim {
        return Err(ValidationError(format!(
            "{field}: {} rows, expected {expect_dim}",
            data.len()
        )));
    }
    for (i, row) in data.iter().enumerate() {
        if row.len() != expect_dim {
            return Err(ValidationError(format!(
                "{field}: row {i} has {} entries, expected {expect_dim}",
                row.len()
            )));
        }
        for (j, z) in row.iter().enumerate() {
            if !z[0].is_finite() || !z[1].is_finite() {
                return Err(ValidationError(format!(
                    "{field}: entry ({i},{j}) is not a pair of finite numbers"
                )));
            }
        }
    }
    Ok(ComplexMatrix::from_fn(expect_dim, |i, j| {
        dynlie::Complex64::new(data[i][j][0], data[i][j][1])
    }))
}

pub fn matrix_to_data(m: &ComplexMatrix) -> MatrixData {
    (0..m.dim())
        .map(|i| {
            (0..m.dim())
                .map(|j| {
                    let z = m.entry(i, j);
                    [z.re, z.im]
                })
                .collect()
        })
        .collect()
}

impl ProblemFile {
    /// Serialize an in-memory problem (fixture generation and round-trips).
    pub fn from_problem(p: &IndirectProblem, seed: Option<u64>) -> Self {
        ProblemFile {
            schema_version: SCHEMA_VERSION,
            dims: DimsData {
                n_s: p.dims().n_s(),
                n_a: p.dims().n_a(),
            },
            k: matrix_to_data(p.drift_k()),
            l: matrix_to_data(p.drift_l()),
            couplings: p
                .couplings()
                .iter()
                .map(|(s, sigma)| CouplingData {
                    s: matrix_to_data(s),
                    sigma: matrix_to_data(sigma),
                })
                .collect(),
            control_algebra: p.control_algebra().iter().map(matrix_to_data).collect(),
            tol: Some(p.tol()),
            seed,
        }
    }

    /// Convert to a validated [`IndirectProblem`], with field-locating
    /// messages for shape problems and the library's own invariant errors
    /// for semantic ones.
    pub fn to_problem(&self, tol: f64) -> Result<IndirectProblem, ProblemError> {
        if self.schema_version != SCHEMA_VERSION {
            return Err(ProblemError::Validation(ValidationError(format!(
                "schema_version {} unsupported (expected {SCHEMA_VERSION})",
                self.schema_version
            ))));
        }
        let dims = BipartiteDims::new(self.dims.n_s, self.dims.n_a)
            .map_err(|e| ProblemError::Validation(ValidationError(format!("dims: {e}"))))?;
        let k = matrix_from_data(&self.k, dims.n_s(), "K")?;
        let l = matrix_from_data(&self.l, dims.n_a(), "L")?;
        let mut couplings = Vec::with_capacity(self.couplings.len());
        for (idx, c) in self.couplings.iter().enumerate() {
            let s = matrix_from_data(&c.s, dims.n_s(), &format!("couplings[{idx}].S"))?;
            let sigma = matrix_from_data(&c.sigma, dims.n_a(), &format!("couplings[{idx}].sigma"))?;
            couplings.push((s, sigma));
        }
        let mut control = Vec::with_capacity(self.control_algebra.len());
        for (idx, b) in self.control_algebra.iter().enumerate() {
            control.push(matrix_from_data(
                b,
                dims.n_a(),
                &format!("control_algebra[{idx}]"),
            )?);
        }
        IndirectProblem::new(dims, k, l, couplings, control, tol).map_err(ProblemError::Invariant)
    }
}

#[derive(Debug)]
pub enum ProblemError {
    Validation(ValidationError),
    Invariant(ControlError),
}

impl std::fmt::Display for ProblemError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ProblemError::Validation(e) => write!(f, "{e}"),
            ProblemError::Invariant(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for ProblemError {}

impl From<ValidationError> for ProblemError {
    fn from(e: ValidationError) -> Self {
        ProblemError::Validation(e)
    }
}

// ---- report side ----

#[derive(Debug, Serialize)]
pub struct ReportFile {
    pub schema_version: u32,
    pub tool_version: &'static str,
    pub command: &'static str,
    pub mode: &'static str,
    pub input_digest: String,
    pub dims: DimsData,
    pub tol: f64,
    pub seed: u64,
    pub max_dim: Option<usize>,
    pub ambient_dim: usize,
    pub algebra_dim: usize,
    pub closure_depth: usize,
    pub completely_controllable: Option<bool>,
    pub case_label: Option<String>,
    pub block_dims: Option<BlockDims>,
    pub indirect_criterion: Option<CriterionData>,
    pub counterexample: Option<CounterexampleData>,
    pub consistent: Option<bool>,
    pub notes: Vec<String>,
}

#[derive(Debug, Serialize)]
pub struct BlockDims {
    pub local_a: usize,
    pub coupled: Vec<usize>,
    pub local_s: usize,
}

#[derive(Debug, Serialize)]
pub struct CriterionData {
    pub holds: bool,
    pub rho_a: String,
    pub seeds: Vec<u64>,
    pub per_seed: Vec<bool>,
}

#[derive(Debug, Serialize)]
pub struct CounterexampleData {
    pub state: MatrixData,
    pub criterion_holds: bool,
    pub explanation: String,
}

pub fn case_label_str(label: CaseLabel) -> String {
    label.to_string()
}

impl ReportFile {
    pub fn from_report(
        report: &Report,
        command: &'static str,
        input_digest: String,
        seed: u64,
        max_dim: Option<usize>,
    ) -> Self {
        ReportFile {
            schema_version: SCHEMA_VERSION,
            tool_version: env!("CARGO_PKG_VERSION"),
            command,
            mode: "equivalence",
            input_digest,
            dims: DimsData {
                n_s: report.dims.n_s(),
                n_a: report.dims.n_a(),
            },
            tol: report.tol,
            seed,
            max_dim,
            ambient_dim: report.ambient_dim,
            algebra_dim: report.algebra_dim,
            closure_depth: report.closure_depth,
            completely_controllable: Some(report.completely_controllable),
            case_label: Some(case_label_str(report.case_label)),
            block_dims: Some(BlockDims {
                local_a: report.block_local_a,
                coupled: report.block_coupled.clone(),
                local_s: report.block_local_s,
            }),
            indirect_criterion: Some(CriterionData {
                holds: report.indirect_criterion_holds,
                rho_a: "mixed".into(),
                seeds: report.criterion_seeds.clone(),
                per_seed: report.criterion_per_seed.clone(),
            }),
            counterexample: report.counterexample.as_ref().map(|c| CounterexampleData {
                state: matrix_to_data(c.state.matrix()),
                criterion_holds: c.criterion_holds,
                explanation: c.explanation.clone(),
            }),
            consistent: Some(report.consistent),
            notes: report.notes.clone(),
        }
    }

    /// Canonical machine serialization; identical inputs and seeds produce
    /// identical bytes.
    pub fn to_machine_string(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serialization");
        s.push('\n');
        s
    }

    pub fn to_text_summary(&self) -> String {
        let mut out = String::new();
        let push = |out: &mut String, line: String| {
            out.push_str(&line);
            out.push('\n');
        };
        push(
            &mut out,
            format!("command            : {} ({})", self.command, self.mode),
        );
        push(
            &mut out,
            format!("input digest       : {}", self.input_digest),
        );
        push(
            &mut out,
            format!(
                "dims               : n_S={} n_A={} (joint {})",
                self.dims.n_s, self.dims.n_a, self.ambient_dim
            ),
        );
        push(&mut out, format!("tolerance          : {:e}", self.tol));
        push(
            &mut out,
            format!(
                "algebra dimension  : {} of {} (closure depth {})",
                self.algebra_dim,
                self.ambient_dim * self.ambient_dim - 1,
                self.closure_depth
            ),
        );
        if let Some(cc) = self.completely_controllable {
            push(&mut out, format!("completely controllable : {cc}"));
        }
        if let Some(label) = &self.case_label {
            push(&mut out, format!("case label         : {label}"));
        }
        if let Some(b) = &self.block_dims {
            push(
                &mut out,
                format!(
                    "block dims         : local_a={} coupled={:?} local_s={} (sum {})",
                    b.local_a,
                    b.coupled,
                    b.local_s,
                    b.local_a + b.coupled.iter().sum::<usize>() + b.local_s
                ),
            );
        }
        if let Some(c) = &self.indirect_criterion {
            push(
                &mut out,
                format!(
                    "indirect criterion : {} (rho_A={}, seeds {:?} -> {:?})",
                    c.holds, c.rho_a, c.seeds, c.per_seed
                ),
            );
        }
        match &self.counterexample {
            Some(c) => {
                push(
                    &mut out,
                    format!(
                        "counterexample     : criterion={} ({})",
                        c.criterion_holds, c.explanation
                    ),
                );
            }
            None => push(&mut out, "counterexample     : none".to_string()),
        }
        if let Some(ok) = self.consistent {
            push(&mut out, format!("consistent         : {ok}"));
        }
        for n in &self.notes {
            push(&mut out, format!("note               : {n}"));
        }
        out
    }
}

/// Parse a density matrix file.
pub fn rho_from_file(
    data: &RhoFile,
    expect_dim: usize,
    tol: f64,
) -> Result<DensityMatrix, ProblemError> {
    if data.schema_version != SCHEMA_VERSION {
        return Err(ProblemError::Validation(ValidationError(format!(
            "rho_a: schema_version {} unsupported (expected {SCHEMA_VERSION})",
            data.schema_version
        ))));
    }
    let m = matrix_from_data(&data.matrix, expect_dim, "rho_a.matrix")?;
    DensityMatrix::new(m, tol)
        .map_err(|e| ProblemError::Validation(ValidationError(format!("rho_a: {e}"))))
}
