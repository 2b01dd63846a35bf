//! `schurlab`: Schur stability checks and preserver experiments from the
//! command line. Every command prints one JSON report on stdout and a short
//! summary on stderr.
//!
//! Exit codes: 0 on completion (counterexamples and discrepant fixtures
//! included), 1 for usage, I/O and parse errors, 2 for numerical failures.

use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{error::ErrorKind, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use schurlab::fixtures::{run_worked_examples, ClaimStatus};
use schurlab::io::{read_map_spec, read_matrix};
use schurlab::linalg::spectral_radius;
use schurlab::matmap::{
    build, frobenius_operator_norm, map_inverse, map_is_normal, map_spectrum, restrict_symmetric,
    MatrixMap,
};
use schurlab::preserver::{
    stable_basis, test_into_preserver, test_onto_preserver, test_rho_preservation, SampleClass,
    SampleConfig, Space,
};
use schurlab::report::{RunConfig, RunReport};
use schurlab::stability::{
    classify_aloid, is_schur_stable_with, power_limit, schur_2x2, solve_stein_with, Verdict,
};
use schurlab::{Error, Matrix, Tolerances};

const POWER_STEPS: usize = 10_000;

#[derive(Parser)]
#[command(name = "schurlab", version, about = "Schur stability and stability-preserving linear maps")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide Schur stability of a matrix and collect supporting evidence.
    Check {
        file: PathBuf,
        /// Solve X - A^t X A = R (R = I when no file is given).
        #[arg(long, value_name = "RFILE", num_args = 0..=1)]
        stein: Option<Option<PathBuf>>,
        /// Report normaloid / spectraloid classification.
        #[arg(long)]
        classify: bool,
        /// Width of the marginal band around the unit circle.
        #[arg(long, value_name = "T")]
        tol: Option<f64>,
    },
    /// Analyze or test a linear map given as a JSON spec.
    Map {
        spec: PathBuf,
        #[arg(value_enum)]
        action: MapAction,
        /// Matrix file for `apply`.
        matrix: Option<PathBuf>,
        #[arg(long, default_value_t = 1000)]
        trials: usize,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, value_enum)]
        class: Option<ClassArg>,
        /// Target spectral radius band of samples, as `lo,hi`.
        #[arg(long, value_name = "LO,HI", value_parser = parse_band)]
        band: Option<(f64, f64)>,
        /// Restrict the map to symmetric matrices before testing.
        #[arg(long)]
        symmetric: bool,
    },
    /// Recompute the worked examples and compare with the printed values.
    PaperExamples,
    /// Print a basis of Schur stable matrices.
    Basis {
        #[arg(value_enum)]
        space: SpaceArg,
        n: usize,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MapAction {
    Analyze,
    Apply,
    TestInto,
    TestOnto,
    TestRho,
    RestrictSym,
}

#[derive(Clone, Copy, ValueEnum)]
enum ClassArg {
    General,
    Symmetric,
    Normaloid,
    Nilpotent,
}

impl From<ClassArg> for SampleClass {
    fn from(c: ClassArg) -> Self {
        match c {
            ClassArg::General => SampleClass::General,
            ClassArg::Symmetric => SampleClass::Symmetric,
            ClassArg::Normaloid => SampleClass::Normaloid,
            ClassArg::Nilpotent => SampleClass::Nilpotent,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum SpaceArg {
    Full,
    Symmetric,
}

fn parse_band(s: &str) -> Result<(f64, f64), String> {
    let (lo, hi) = s
        .split_once(',')
        .ok_or_else(|| format!("expected lo,hi but got {s:?}"))?;
    let parse = |t: &str| t.trim().parse::<f64>().map_err(|e| format!("{t:?}: {e}"));
    Ok((parse(lo)?, parse(hi)?))
}

/// What a command produced, before it is wrapped into a report.
struct Outcome {
    seed: Option<u64>,
    settings: Value,
    results: Value,
    summary: Vec<String>,
}

impl Outcome {
    fn new(results: Value, summary: Vec<String>) -> Self {
        Self {
            seed: None,
            settings: Value::Null,
            results,
            summary,
        }
    }
}

fn to_json<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("report values serialize")
}

fn verdict_word(v: Verdict) -> &'static str {
    match v {
        Verdict::Stable => "stable",
        Verdict::Unstable => "unstable",
        Verdict::Marginal => "marginal",
    }
}

fn cmd_check(
    file: &Path,
    stein: Option<Option<PathBuf>>,
    classify: bool,
    tol: &Tolerances,
) -> Result<Outcome, Error> {
    let a = read_matrix(file)?;
    let n = a.square_dim()?;
    let mut report = is_schur_stable_with(&a, tol)?;
    let mut summary = vec![format!(
        "{}: {} (rho = {:.6})",
        file.display(),
        verdict_word(report.verdict),
        report.spectral_radius
    )];
    if n == 2 {
        report.evidence.schur_2x2 = Some(schur_2x2(&a)?);
    }
    report.evidence.power = Some(power_limit(&a, POWER_STEPS)?);
    if let Some(r_file) = stein {
        let r = match r_file {
            Some(p) => read_matrix(&p)?,
            None => Matrix::identity(n),
        };
        let sol = solve_stein_with(&a, &r, tol)?;
        summary.push(format!(
            "Stein solution: min eigenvalue {:.6e}, residual {:.3e}",
            sol.min_eigenvalue, sol.residual
        ));
        report.evidence.stein = Some(sol);
    }
    let mut results = json!({ "n": n, "report": to_json(&report) });
    if let Some(msg) = report.inconsistency() {
        summary.push(format!("warning: {msg}"));
        results["inconsistency"] = json!(msg);
    }
    if classify {
        let class = classify_aloid(&a)?;
        summary.push(format!(
            "normaloid: {}, spectraloid: {} (||A|| = {:.6}, w(A) = {:.6})",
            class.normaloid, class.spectraloid, class.operator_norm, class.numerical_radius
        ));
        results["classification"] = to_json(&class);
    }
    Ok(Outcome::new(results, summary))
}

fn analyze(l: &MatrixMap) -> Result<Value, Error> {
    let spectrum = map_spectrum(l)?;
    let invertible = match map_inverse(l) {
        Ok(_) => true,
        Err(Error::Singular { .. } | Error::IllConditioned { .. }) => false,
        Err(e) => return Err(e),
    };
    Ok(json!({
        "n": l.n(),
        "subspace": l.subspace(),
        "rep_dim": l.rep_dim(),
        "spectral_radius": spectrum.spectral_radius,
        "spectrum": to_json(&spectrum),
        "frobenius_operator_norm": frobenius_operator_norm(l)?,
        "normal": map_is_normal(l),
        "invertible": invertible,
    }))
}

fn analysis_summary(v: &Value) -> String {
    format!(
        "rho(L) = {:.6}, ||L|| = {:.6}, normal: {}, invertible: {}",
        v["spectral_radius"].as_f64().unwrap_or(f64::NAN),
        v["frobenius_operator_norm"].as_f64().unwrap_or(f64::NAN),
        v["normal"],
        v["invertible"]
    )
}

struct TrialArgs {
    trials: usize,
    seed: Option<u64>,
    class: Option<ClassArg>,
    band: Option<(f64, f64)>,
    symmetric: bool,
}

fn cmd_map(
    spec_path: &Path,
    action: MapAction,
    matrix: Option<PathBuf>,
    args: TrialArgs,
) -> Result<Outcome, Error> {
    let spec = read_map_spec(spec_path)?;
    let full = build(&spec)?;
    if action != MapAction::Apply && matrix.is_some() {
        return Err(Error::InvalidParameter("a matrix file is only accepted by `apply`".into()));
    }
    let l = if args.symmetric || action == MapAction::RestrictSym {
        restrict_symmetric(&full)?
    } else {
        full
    };
    match action {
        MapAction::Analyze | MapAction::RestrictSym => {
            let mut results = analyze(&l)?;
            if action == MapAction::RestrictSym {
                results["rep"] = to_json(l.rep());
            }
            let summary = vec![analysis_summary(&results)];
            Ok(Outcome::new(results, summary))
        }
        MapAction::Apply => {
            let path = matrix.ok_or_else(|| {
                Error::InvalidParameter("`apply` needs a matrix file argument".into())
            })?;
            let a = read_matrix(&path)?;
            let image = l.apply(&a)?;
            let (ra, ri) = (spectral_radius(&a)?, spectral_radius(&image)?);
            let results = json!({ "input": to_json(&a), "image": to_json(&image),
                "rho_input": ra, "rho_image": ri });
            Ok(Outcome::new(results, vec![format!("rho(A) = {ra:.6}, rho(L(A)) = {ri:.6}")]))
        }
        MapAction::TestInto | MapAction::TestOnto | MapAction::TestRho => {
            let seed = args.seed.unwrap_or_else(rand::random);
            let default_class = if args.symmetric {
                SampleClass::Symmetric
            } else {
                SampleClass::General
            };
            let mut cfg = SampleConfig::new(
                l.n(),
                args.trials,
                seed,
                args.class.map_or(default_class, SampleClass::from),
            );
            if let Some((lo, hi)) = args.band {
                cfg = cfg.with_band(lo, hi);
            }
            let (results, line) = match action {
                MapAction::TestInto => {
                    let v = test_into_preserver(&l, &cfg)?;
                    let line = match &v.witness {
                        Some(w) => format!(
                            "counterexample at trial {}: rho(A) = {:.6}, rho(L(A)) = {:.6}",
                            w.index, w.rho_a, w.rho_image
                        ),
                        None => format!("no counterexample in {} trials", v.trials_run),
                    };
                    (to_json(&v), line)
                }
                MapAction::TestOnto => {
                    let v = test_onto_preserver(&l, &cfg)?;
                    let line = match (&v.singular, v.onto) {
                        (Some(why), _) => format!("not onto: {why}"),
                        (None, true) => "onto: no counterexample for L or its inverse".into(),
                        (None, false) => "not onto: counterexample found".into(),
                    };
                    (to_json(&v), line)
                }
                _ => {
                    let v = test_rho_preservation(&l, &cfg)?;
                    let line = format!(
                        "rho preservation {}: max relative deviation {:.3e}",
                        if v.pass { "passes" } else { "fails" },
                        v.max_deviation
                    );
                    (to_json(&v), line)
                }
            };
            Ok(Outcome {
                seed: Some(seed),
                settings: to_json(&cfg),
                results,
                summary: vec![format!("seed {seed}"), line],
            })
        }
    }
}

fn cmd_examples() -> Result<Outcome, Error> {
    let fixtures = run_worked_examples()?;
    let mut summary = Vec::new();
    let table: Vec<Value> = fixtures
        .iter()
        .map(|f| {
            let status = to_json(&f.status);
            summary.push(format!("{:<16} {}", f.id, status.as_str().unwrap_or("?")));
            for c in f.claims.iter().filter(|c| c.status != ClaimStatus::Reproduced) {
                summary.push(format!(
                    "    {}: printed {} recomputed {}",
                    c.quantity,
                    to_json(&c.printed),
                    to_json(&c.recomputed)
                ));
            }
            json!({ "id": f.id, "status": status })
        })
        .collect();
    Ok(Outcome::new(
        json!({ "summary": table, "fixtures": to_json(&fixtures) }),
        summary,
    ))
}

fn cmd_basis(space: SpaceArg, n: usize) -> Result<Outcome, Error> {
    if n == 0 {
        return Err(Error::InvalidParameter("n must be at least 1".into()));
    }
    let space = match space {
        SpaceArg::Full => Space::Full,
        SpaceArg::Symmetric => Space::Symmetric,
    };
    let basis = stable_basis(space, n);
    let elements = basis
        .elements
        .iter()
        .map(|e| Ok(json!({ "matrix": to_json(e), "spectral_radius": spectral_radius(e)? })))
        .collect::<Result<Vec<Value>, Error>>()?;
    let rank = basis.coordinate_rank();
    let dimension = basis.dimension(n);
    Ok(Outcome::new(
        json!({
            "space": space,
            "n": n,
            "elements": elements,
            "rank": rank,
            "dimension": dimension,
            "independent": rank == dimension,
        }),
        vec![format!("{} stable elements, coordinate rank {rank} of {dimension}", elements.len())],
    ))
}

fn run(command: Command) -> Result<(Outcome, Tolerances), Error> {
    let mut tol = Tolerances::default();
    let outcome = match command {
        Command::Check {
            file,
            stein,
            classify,
            tol: band,
        } => {
            if let Some(t) = band {
                if !(t.is_finite() && t >= 0.0) {
                    return Err(Error::InvalidParameter(format!("--tol must be non-negative, got {t}")));
                }
                tol.marginal_band = t;
            }
            cmd_check(&file, stein, classify, &tol)?
        }
        Command::Map {
            spec,
            action,
            matrix,
            trials,
            seed,
            class,
            band,
            symmetric,
        } => cmd_map(
            &spec,
            action,
            matrix,
            TrialArgs {
                trials,
                seed,
                class,
                band,
                symmetric,
            },
        )?,
        Command::PaperExamples => cmd_examples()?,
        Command::Basis { space, n } => cmd_basis(space, n)?,
    };
    Ok((outcome, tol))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(1),
            };
        }
    };
    let command_line: Vec<String> = std::env::args().skip(1).collect();
    let start = Instant::now();
    match run(cli.command) {
        Ok((outcome, tolerances)) => {
            let report = RunReport {
                command: command_line,
                config: RunConfig {
                    tolerances,
                    seed: outcome.seed,
                    settings: outcome.settings,
                },
                results: outcome.results,
                duration_ms: start.elapsed().as_secs_f64() * 1e3,
            };
            let text = serde_json::to_string_pretty(&report).expect("report serializes");
            // A closed pipe on stdout is not worth a panic.
            let _ = writeln!(std::io::stdout().lock(), "{text}");
            for line in outcome.summary {
                eprintln!("{line}");
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_numerical() { 2 } else { 1 })
        }
    }
}
