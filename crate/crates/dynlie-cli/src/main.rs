//! Batch front end: ingest a problem file, run the analysis pipeline, emit a
//! deterministic report.
//!
//! Exit codes: 0 success, 2 validation failure (unreadable/malformed input or
//! invariant violation), 3 resource cap hit (closure dimension cap), 4
//! consistency violation (the computed facts contradict each other).

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use sha2::{Digest, Sha256};

use dynlie::{
    build_generators, check_equivalence, disintegrate, indirect_criterion,
    is_completely_controllable, lie_closure, ControlError, DensityMatrix, IndirectProblem,
    LieError, DEFAULT_TOL,
};
use dynlie_cli::schema;
use schema::{
    case_label_str, BlockDims, CriterionData, ProblemError, ProblemFile, ReportFile, RhoFile,
    SCHEMA_VERSION,
};

#[derive(Parser)]
#[command(
    name = "dynlie",
    version,
    about = "Dynamical Lie algebra analysis for indirectly controlled bipartite systems"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build the generator set and compute the Lie closure (dimensions and depth only).
    Closure(CommonArgs),
    /// Run the full analysis: closure, disintegration, controllability and the
    /// indirect-controllability criterion, with consistency checks.
    Analyze(AnalyzeArgs),
    /// Compute the closure and its disintegration into structured-basis blocks.
    Disintegrate(CommonArgs),
}

#[derive(Args)]
struct CommonArgs {
    /// Problem file (JSON).
    input: PathBuf,
    /// Rank/residual tolerance; overrides the problem file's value.
    #[arg(long)]
    tol: Option<f64>,
    /// Seed for the generic-state draws; overrides the problem file's value.
    #[arg(long)]
    seed: Option<u64>,
    /// Cap on the closure dimension (default: the full algebra dimension).
    #[arg(long)]
    max_dim: Option<usize>,
    /// Output format on standard output.
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Also write the machine report to this path.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct AnalyzeArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Auxiliary state: "mixed" for the perfectly mixed state (enables the
    /// equivalence checks) or a path to a density-matrix file (criterion-only).
    #[arg(long, default_value = "mixed")]
    rho_a: String,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Machine,
}

#[derive(Debug)]
enum CliError {
    Io(PathBuf, std::io::Error),
    Parse(PathBuf, serde_json::Error),
    Problem(ProblemError),
    Control(ControlError),
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Io(p, e) => write!(f, "cannot read {}: {e}", p.display()),
            CliError::Parse(p, e) => write!(f, "{}: {e}", p.display()),
            CliError::Problem(e) => write!(f, "invalid problem: {e}"),
            CliError::Control(e) => write!(f, "{e}"),
        }
    }
}

impl From<ProblemError> for CliError {
    fn from(e: ProblemError) -> Self {
        CliError::Problem(e)
    }
}

impl From<ControlError> for CliError {
    fn from(e: ControlError) -> Self {
        CliError::Control(e)
    }
}

fn exit_code_for(e: &CliError) -> u8 {
    match e {
        CliError::Io(..) | CliError::Parse(..) | CliError::Problem(_) => 2,
        CliError::Control(c) => match c {
            ControlError::Lie(LieError::ClosureCapped { .. }) => 3,
            ControlError::DisintegrationFailure { .. }
            | ControlError::Inconsistency(_)
            | ControlError::TrivialCommutant => 4,
            _ => 2,
        },
    }
}

struct LoadedProblem {
    problem: IndirectProblem,
    digest: String,
    tol: f64,
    seed: u64,
}

fn load_problem(
    path: &Path,
    tol_flag: Option<f64>,
    seed_flag: Option<u64>,
) -> Result<LoadedProblem, CliError> {
    let bytes = fs::read(path).map_err(|e| CliError::Io(path.to_path_buf(), e))?;
    let digest = format!("sha256:{}", hex::encode(Sha256::digest(&bytes)));
    let file: ProblemFile =
        serde_json::from_slice(&bytes).map_err(|e| CliError::Parse(path.to_path_buf(), e))?;
    let tol = tol_flag.or(file.tol).unwrap_or(DEFAULT_TOL);
    let seed = seed_flag.or(file.seed).unwrap_or(7);
    let problem = file.to_problem(tol)?;
    Ok(LoadedProblem {
        problem,
        digest,
        tol,
        seed,
    })
}

fn emit(report: &ReportFile, format: Format, out: Option<&Path>) -> Result<(), CliError> {
    match format {
        Format::Text => print!("{}", report.to_text_summary()),
        Format::Machine => print!("{}", report.to_machine_string()),
    }
    if let Some(path) = out {
        fs::write(path, report.to_machine_string())
            .map_err(|e| CliError::Io(path.to_path_buf(), e))?;
    }
    Ok(())
}

fn cmd_closure(args: &CommonArgs) -> Result<u8, CliError> {
    let loaded = load_problem(&args.input, args.tol, args.seed)?;
    let basis = lie_closure(&build_generators(&loaded.problem), loaded.tol, args.max_dim)
        .map_err(ControlError::Lie)?;
    let dims = loaded.problem.dims();
    let report = ReportFile {
        schema_version: SCHEMA_VERSION,
        tool_version: env!("CARGO_PKG_VERSION"),
        command: "closure",
        mode: "closure",
        input_digest: loaded.digest,
        dims: schema::DimsData {
            n_s: dims.n_s(),
            n_a: dims.n_a(),
        },
        tol: loaded.tol,
        seed: loaded.seed,
        max_dim: args.max_dim,
        ambient_dim: dims.total(),
        algebra_dim: basis.dim(),
        closure_depth: basis.depth_reached(),
        completely_controllable: None,
        case_label: None,
        block_dims: None,
        indirect_criterion: None,
        counterexample: None,
        consistent: None,
        notes: vec![],
    };
    emit(&report, args.format, args.out.as_deref())?;
    Ok(0)
}

fn cmd_disintegrate(args: &CommonArgs) -> Result<u8, CliError> {
    let loaded = load_problem(&args.input, args.tol, args.seed)?;
    let dims = *loaded.problem.dims();
    let basis = lie_closure(&build_generators(&loaded.problem), loaded.tol, args.max_dim)
        .map_err(ControlError::Lie)?;
    let sb = disintegrate(&basis, &dims, loaded.tol)?;
    let report = ReportFile {
        schema_version: SCHEMA_VERSION,
        tool_version: env!("CARGO_PKG_VERSION"),
        command: "disintegrate",
        mode: "disintegrate",
        input_digest: loaded.digest,
        dims: schema::DimsData {
            n_s: dims.n_s(),
            n_a: dims.n_a(),
        },
        tol: loaded.tol,
        seed: loaded.seed,
        max_dim: args.max_dim,
        ambient_dim: dims.total(),
        algebra_dim: basis.dim(),
        closure_depth: basis.depth_reached(),
        completely_controllable: Some(is_completely_controllable(&basis, &dims)),
        case_label: Some(case_label_str(sb.case_label())),
        block_dims: Some(BlockDims {
            local_a: sb.local_a().len(),
            coupled: sb.coupled_dims(),
            local_s: sb.local_s().len(),
        }),
        indirect_criterion: None,
        counterexample: None,
        consistent: Some(sb.block_dim_sum() == basis.dim()),
        notes: vec![format!(
            "dimension-sum invariant: {} + {} + {} = {}",
            sb.local_a().len(),
            sb.coupled_dims().iter().sum::<usize>(),
            sb.local_s().len(),
            basis.dim()
        )],
    };
    emit(&report, args.format, args.out.as_deref())?;
    Ok(0)
}

fn cmd_analyze(args: &AnalyzeArgs) -> Result<u8, CliError> {
    let loaded = load_problem(&args.common.input, args.common.tol, args.common.seed)?;
    let dims = *loaded.problem.dims();

    if args.rho_a == "mixed" {
        match check_equivalence(&loaded.problem, loaded.tol, loaded.seed) {
            Ok(report) => {
                let file = ReportFile::from_report(
                    &report,
                    "analyze",
                    loaded.digest,
                    loaded.seed,
                    args.common.max_dim,
                );
                emit(&file, args.common.format, args.common.out.as_deref())?;
                return Ok(if report.consistent { 0 } else { 4 });
            }
            Err(ControlError::ControlNotFull { got, want }) => {
                let note = format!(
                    "control algebra generates a {got}-dimensional algebra instead of su(n_A) \
                     (dimension {want}); equivalence checks do not apply"
                );
                return criterion_only(args, &loaded, dims, None, note);
            }
            Err(e) => return Err(e.into()),
        }
    }

    // explicit auxiliary state: criterion-only exploration
    let rho_path = PathBuf::from(&args.rho_a);
    let bytes = fs::read(&rho_path).map_err(|e| CliError::Io(rho_path.clone(), e))?;
    let rho_file: RhoFile =
        serde_json::from_slice(&bytes).map_err(|e| CliError::Parse(rho_path.clone(), e))?;
    let rho_a = schema::rho_from_file(&rho_file, dims.n_a(), loaded.tol)?;
    let note = format!(
        "auxiliary state loaded from {}; equivalence checks apply only at the perfectly mixed state",
        rho_path.display()
    );
    criterion_only(args, &loaded, dims, Some(rho_a), note)
}

fn criterion_only(
    args: &AnalyzeArgs,
    loaded: &LoadedProblem,
    dims: dynlie::BipartiteDims,
    rho_a: Option<DensityMatrix>,
    why: String,
) -> Result<u8, CliError> {
    let basis = lie_closure(
        &build_generators(&loaded.problem),
        loaded.tol,
        args.common.max_dim,
    )
    .map_err(ControlError::Lie)?;
    let mut notes = vec![why];

    let (case_label, block_dims) = match disintegrate(&basis, &dims, loaded.tol) {
        Ok(sb) => (
            Some(case_label_str(sb.case_label())),
            Some(BlockDims {
                local_a: sb.local_a().len(),
                coupled: sb.coupled_dims(),
                local_s: sb.local_s().len(),
            }),
        ),
        Err(ControlError::MissingLocalAlgebra) => {
            notes.push(
                "structured-basis disintegration skipped: the algebra does not contain 1⊗su(n_A)"
                    .to_string(),
            );
            (None, None)
        }
        Err(e) => return Err(e.into()),
    };

    let rho_a_desc = if rho_a.is_some() { "file" } else { "mixed" };
    let rho_a = rho_a.unwrap_or_else(|| DensityMatrix::maximally_mixed(dims.n_a()));
    let seeds: Vec<u64> = (0..3).map(|k| loaded.seed.wrapping_add(k)).collect();
    let mut per_seed = Vec::with_capacity(3);
    for &s in &seeds {
        let rho_s = DensityMatrix::seeded_generic(dims.n_s(), s);
        per_seed.push(indirect_criterion(
            &basis, &rho_s, &rho_a, &dims, loaded.tol,
        )?);
    }

    let report = ReportFile {
        schema_version: SCHEMA_VERSION,
        tool_version: env!("CARGO_PKG_VERSION"),
        command: "analyze",
        mode: "criterion-only",
        input_digest: loaded.digest.clone(),
        dims: schema::DimsData {
            n_s: dims.n_s(),
            n_a: dims.n_a(),
        },
        tol: loaded.tol,
        seed: loaded.seed,
        max_dim: args.common.max_dim,
        ambient_dim: dims.total(),
        algebra_dim: basis.dim(),
        closure_depth: basis.depth_reached(),
        completely_controllable: Some(is_completely_controllable(&basis, &dims)),
        case_label,
        block_dims,
        indirect_criterion: Some(CriterionData {
            holds: per_seed[0],
            rho_a: rho_a_desc.into(),
            seeds,
            per_seed,
        }),
        counterexample: None,
        consistent: None,
        notes,
    };
    emit(&report, args.common.format, args.common.out.as_deref())?;
    Ok(0)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Closure(args) => cmd_closure(args),
        Command::Analyze(args) => cmd_analyze(args),
        Command::Disintegrate(args) => cmd_disintegrate(args),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code_for(&e))
        }
    }
}
