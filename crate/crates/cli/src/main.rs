//! `hecke-lab` command-line front end. Every command prints one JSON document.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use hecke_lab::coset::{coset_closure, hecke_matrix, hecke_product_with, CosetWindow, DoubleCoset, ModularPair, Side};
use hecke_lab::error::HeckeError;
use hecke_lab::exact::random::random_matrix;
use hecke_lab::exact::{parse_rational, CQJson, ProjectiveMatrix, CQ};
use hecke_lab::finite::{standard, FiniteModel, FiniteModelJson};
use hecke_lab::hyperbolic::{phi0, phi0_gram, psi0_gram, psi0_with, tiles_meeting, HyperbolicPolygon};
use hecke_lab::par::Execution;
use hecke_lab::qexp::{delta_qexp, eigenvalue_of, Eigen};
use hecke_lab::radial::{criterion_check_with, moment_of_x_with, self_adjoint_coset_sum, SupportTermJson, SupportedGroupElement, SUPPORT_CAP};
use hecke_lab::rep::verify_model;
use hecke_lab::suite::{self, AREA_TOL};

#[derive(Parser)]
#[command(name = "hecke-lab", version, about = "Hecke operators, coset machinery and hyperbolic overlap functions")]
struct Cli {
    /// Run every batch sequentially.
    #[arg(long, global = true)]
    sequential: bool,
    /// Write the JSON (or CSV) output to this file instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Coset representatives of ΓσΓ.
    Cosets {
        #[arg(long)]
        sigma: ProjectiveMatrix,
        #[arg(long, value_enum, default_value = "left")]
        side: SideArg,
        #[arg(long, default_value_t = hecke_lab::coset::DEFAULT_CAP)]
        cap: usize,
    },
    /// Structure constants of a product of two double cosets.
    /// Factors are diag(1, n) via --n1/--n2 or arbitrary matrices via --s1/--s2.
    Product {
        #[arg(long, required_unless_present = "s1", conflicts_with = "s1")]
        n1: Option<i64>,
        #[arg(long)]
        s1: Option<ProjectiveMatrix>,
        #[arg(long, required_unless_present = "s2", conflicts_with = "s2")]
        n2: Option<i64>,
        #[arg(long)]
        s2: Option<ProjectiveMatrix>,
    },
    /// Whether ΓσΓ has as many left as right cosets.
    Unimodular {
        #[arg(long, conflicts_with = "random")]
        sigma: Option<ProjectiveMatrix>,
        /// Number of random integer matrices to test.
        #[arg(long)]
        random: Option<usize>,
        /// Entry bound for random matrices.
        #[arg(long, default_value_t = 10)]
        bound: i64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Matrix of the double-coset operator on a window of cosets around Γ.
    HeckeMatrix {
        #[arg(long)]
        sigma: ProjectiveMatrix,
        /// Number of operator steps used to grow the window.
        #[arg(long, default_value_t = 1)]
        depth: usize,
        #[arg(long)]
        csv: bool,
    },
    /// Exhaustive structural checks on a finite model.
    VerifyFinite {
        /// Model file with fields order, mul, gamma, reps.
        #[arg(long, required_unless_present = "builtin", conflicts_with = "builtin")]
        model: Option<PathBuf>,
        /// One of S3/A3, S3/C2, S4/S3, D4/C2.
        #[arg(long)]
        builtin: Option<String>,
        /// Random cases per sampled check.
        #[arg(long, default_value_t = 100)]
        cases: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Normalized overlap area of gF with F.
    Phi {
        #[arg(long)]
        g: ProjectiveMatrix,
    },
    /// Overlap pairing of two cosets.
    Psi {
        #[arg(long)]
        s1: ProjectiveMatrix,
        #[arg(long)]
        s2: ProjectiveMatrix,
    },
    /// Gram matrix of phi or psi over a list of matrices, with a positivity verdict.
    Gram {
        /// JSON list of matrices written "a b c d".
        #[arg(long)]
        file: PathBuf,
        #[arg(long, value_enum, default_value = "phi")]
        kind: GramKind,
        #[arg(long)]
        csv: bool,
    },
    /// Moments τ(X^n) of a finitely supported element.
    Moments {
        #[command(flatten)]
        x: RadialArgs,
    },
    /// Compare moments of X with the tree walk counts.
    Criterion {
        #[command(flatten)]
        x: RadialArgs,
    },
    /// Hecke eigenvalue of a q-expansion.
    Qexp {
        #[arg(long, value_enum, default_value = "delta")]
        form: FormArg,
        #[arg(long)]
        p: u64,
        /// Number of coefficients computed.
        #[arg(long = "N", default_value_t = 50)]
        n: usize,
    },
    /// Run all acceptance suites.
    VerifyAll {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Include wall-clock timings (makes output run-dependent).
        #[arg(long)]
        timings: bool,
    },
}

#[derive(Args)]
struct RadialArgs {
    #[arg(long)]
    p: u64,
    #[arg(long, default_value_t = 6)]
    nmax: u32,
    /// Support file: list of {"matrix": "a b c d", "coeff": {"re": "p/q", "im": "r/s"}}.
    /// Without it, X is the self-adjoint sum over an inverse-closed transversal.
    #[arg(long)]
    x: Option<PathBuf>,
    /// Multiply X by this rational before computing.
    #[arg(long)]
    scale: Option<String>,
}

#[derive(Clone, Copy, ValueEnum)]
enum SideArg {
    /// Cosets Γx.
    Left,
    /// Cosets xΓ.
    Right,
}

#[derive(Clone, Copy, ValueEnum)]
enum GramKind {
    Phi,
    Psi,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormArg {
    Delta,
}

/// Command result: the document to print and whether verification passed.
struct Report {
    body: Body,
    passed: bool,
}

enum Body {
    Json(Value),
    Csv(String),
}

impl Report {
    fn ok(v: Value) -> Self {
        Report { body: Body::Json(v), passed: true }
    }
    fn verdict(v: Value, passed: bool) -> Self {
        Report { body: Body::Json(v), passed }
    }
}

/// Errors split by exit code: bad input (2) or a computation that could not finish (1).
enum Failure {
    Usage(String),
    Compute(String),
}

impl From<HeckeError> for Failure {
    fn from(e: HeckeError) -> Self {
        match e {
            HeckeError::Parse(_) | HeckeError::Precondition(_) | HeckeError::NotPrime(_) | HeckeError::InvalidModel(_) => {
                Failure::Usage(e.to_string())
            }
            _ => Failure::Compute(e.to_string()),
        }
    }
}

type Outcome = std::result::Result<Report, Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(msg) = configure_threads() {
        eprintln!("{msg}");
        return ExitCode::from(2);
    }
    let exec = if cli.sequential { Execution::Sequential } else { Execution::Parallel };
    let result = run(cli.command, exec);
    match result {
        Ok(report) => {
            let text = match report.body {
                Body::Json(v) => serde_json::to_string_pretty(&v).expect("JSON values always serialize") + "\n",
                Body::Csv(s) => s,
            };
            if let Err(e) = emit(cli.out.as_deref(), &text) {
                eprintln!("error: {e}");
                return ExitCode::from(2);
            }
            if report.passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Compute(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}

fn emit(out: Option<&Path>, text: &str) -> std::io::Result<()> {
    match out {
        Some(path) => fs::write(path, text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

/// Builds the global thread pool from HECKE_LAB_THREADS when set.
fn configure_threads() -> std::result::Result<(), String> {
    let Ok(raw) = std::env::var("HECKE_LAB_THREADS") else { return Ok(()) };
    let n: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| format!("error: HECKE_LAB_THREADS must be a positive integer, got {raw:?}"))?;
    #[cfg(feature = "parallel")]
    rayon::ThreadPoolBuilder::new().num_threads(n).build_global().map_err(|e| format!("error: {e}"))?;
    #[cfg(not(feature = "parallel"))]
    let _ = n;
    Ok(())
}

fn run(command: Command, exec: Execution) -> Outcome {
    match command {
        Command::Cosets { sigma, side, cap } => cosets(&sigma, side, cap),
        Command::Product { n1, s1, n2, s2 } => product(factor(n1, s1), factor(n2, s2), exec),
        Command::Unimodular { sigma, random, bound, seed } => unimodular(sigma, random, bound, seed),
        Command::HeckeMatrix { sigma, depth, csv } => hecke_window(&sigma, depth, csv),
        Command::VerifyFinite { model, builtin, cases, seed } => verify_finite(model.as_deref(), builtin.as_deref(), cases, seed, exec),
        Command::Phi { g } => phi(&g),
        Command::Psi { s1, s2 } => psi(&s1, &s2, exec),
        Command::Gram { file, kind, csv } => gram(&file, kind, csv),
        Command::Moments { x } => moments(&x, exec),
        Command::Criterion { x } => criterion(&x, exec),
        Command::Qexp { form: FormArg::Delta, p, n } => qexp(p, n),
        Command::VerifyAll { seed, timings } => verify_all(seed, timings, exec),
    }
}

fn factor(n: Option<i64>, s: Option<ProjectiveMatrix>) -> DoubleCoset {
    match (s, n) {
        (Some(s), _) => DoubleCoset::new(s),
        (None, Some(n)) => DoubleCoset::of_index(n),
        (None, None) => unreachable!("clap requires one of the two flags"),
    }
}

fn matrices(ms: &[ProjectiveMatrix]) -> Vec<String> {
    ms.iter().map(ToString::to_string).collect()
}

fn cosets(sigma: &ProjectiveMatrix, side: SideArg, cap: usize) -> Outcome {
    let side = match side {
        SideArg::Left => Side::Left,
        SideArg::Right => Side::Right,
    };
    let reps = coset_closure(&ModularPair, sigma, side, cap)?;
    Ok(Report::ok(json!({
        "sigma": sigma.to_string(),
        "index": sigma.divisor_index().to_string(),
        "det_sign": sigma.det_sign(),
        "side": if side == Side::Left { "left" } else { "right" },
        "count": reps.len(),
        "reps": matrices(&reps),
    })))
}

fn product(a: DoubleCoset, b: DoubleCoset, exec: Execution) -> Outcome {
    let prod = hecke_product_with(&a, &b, exec)?;
    let terms: Vec<Value> = prod
        .terms
        .iter()
        .map(|t| {
            json!({
                "index": t.class.index.to_string(),
                "det_sign": t.class.det_sign,
                "mult": t.multiplicity,
                "representative": t.representative.to_string(),
            })
        })
        .collect();
    Ok(Report::ok(json!({ "left": a.base().to_string(), "right": b.base().to_string(), "terms": terms })))
}

fn unimodular_case(sigma: &ProjectiveMatrix) -> Result<(Value, bool), Failure> {
    let dc = DoubleCoset::new(sigma.clone());
    let left = dc.left_reps()?.len();
    let right = dc.right_reps()?.len();
    let ok = left == right;
    Ok((json!({ "sigma": sigma.to_string(), "left_count": left, "right_count": right, "unimodular": ok }), ok))
}

fn unimodular(sigma: Option<ProjectiveMatrix>, random: Option<usize>, bound: i64, seed: u64) -> Outcome {
    let sigmas: Vec<ProjectiveMatrix> = match (sigma, random) {
        (Some(s), _) => vec![s],
        (None, Some(count)) => {
            if bound < 1 {
                return Err(Failure::Usage("--bound must be positive".into()));
            }
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            (0..count).map(|_| random_matrix(&mut rng, bound)).collect()
        }
        (None, None) => return Err(Failure::Usage("give --sigma or --random".into())),
    };
    let mut cases = Vec::with_capacity(sigmas.len());
    let mut failures = 0usize;
    for s in &sigmas {
        let (v, ok) = unimodular_case(s)?;
        failures += usize::from(!ok);
        cases.push(v);
    }
    Ok(Report::verdict(json!({ "seed": seed, "cases": cases, "failures": failures }), failures == 0))
}

fn hecke_window(sigma: &ProjectiveMatrix, depth: usize, csv: bool) -> Outcome {
    let dc = DoubleCoset::new(sigma.clone());
    let window = CosetWindow::closure(&ModularPair, &[ProjectiveMatrix::identity()], dc.left_reps()?, depth)?;
    let m = hecke_matrix(&dc, &window)?;
    if csv {
        let mut s = String::new();
        for row in &m.entries {
            s.push_str(&row.iter().map(u64::to_string).collect::<Vec<_>>().join(","));
            s.push('\n');
        }
        return Ok(Report { body: Body::Csv(s), passed: true });
    }
    Ok(Report::ok(json!({
        "sigma": sigma.to_string(),
        "labels": matrices(window.labels()),
        "entries": m.entries,
        "overflow": m.overflow,
    })))
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn verify_finite(model: Option<&Path>, builtin: Option<&str>, cases: usize, seed: u64, exec: Execution) -> Outcome {
    let model = match (model, builtin) {
        (Some(path), _) => FiniteModel::from_json(&read_json::<FiniteModelJson>(path)?)?,
        (None, Some(name)) => standard::by_name(name).ok_or_else(|| Failure::Usage(format!("unknown builtin model {name:?}")))?,
        (None, None) => unreachable!("clap requires one of the two flags"),
    };
    let reports = verify_model(&model, cases, seed, exec)?;
    let failures: usize = reports.iter().map(|r| r.failures).sum();
    Ok(Report::verdict(
        json!({ "model": model.name(), "seed": seed, "failures": failures, "reports": reports }),
        failures == 0,
    ))
}

fn phi(g: &ProjectiveMatrix) -> Outcome {
    let f = HyperbolicPolygon::fundamental_domain();
    let tiles = tiles_meeting(&f.image(g))?;
    let value = phi0(g);
    Ok(Report::ok(json!({
        "g": g.to_string(),
        "value": value,
        "raw_area": value * hecke_lab::hyperbolic::fundamental_area(),
        "tolerance": AREA_TOL,
        "tiles": tiles.len(),
    })))
}

fn psi(s1: &ProjectiveMatrix, s2: &ProjectiveMatrix, exec: Execution) -> Outcome {
    let sum = psi0_with(s1, s2, exec)?;
    Ok(Report::ok(json!({
        "s1": s1.to_string(),
        "s2": s2.to_string(),
        "value": sum.value,
        "tolerance": AREA_TOL,
        "tiles": sum.terms.len(),
        "terms": sum.terms.iter().map(|t| json!({ "gamma": t.gamma.to_string(), "value": t.value })).collect::<Vec<_>>(),
    })))
}

fn gram(file: &Path, kind: GramKind, csv: bool) -> Outcome {
    let raw: Vec<String> = read_json(file)?;
    let elements: Vec<ProjectiveMatrix> = raw.iter().map(|s| s.parse()).collect::<Result<_, HeckeError>>()?;
    if elements.is_empty() {
        return Err(Failure::Usage("element list is empty".into()));
    }
    let report = match kind {
        GramKind::Phi => phi0_gram(&elements)?,
        GramKind::Psi => psi0_gram(&elements)?,
    };
    if csv {
        let mut s = String::new();
        for row in &report.matrix {
            s.push_str(&row.iter().map(|x| format!("{x:.15e}")).collect::<Vec<_>>().join(","));
            s.push('\n');
        }
        return Ok(Report { body: Body::Csv(s), passed: report.psd });
    }
    let psd = report.psd;
    Ok(Report::verdict(serde_json::to_value(report).expect("report serializes"), psd))
}

fn radial_x(args: &RadialArgs) -> Result<SupportedGroupElement, Failure> {
    let x = match &args.x {
        Some(path) => SupportedGroupElement::from_json(&read_json::<Vec<SupportTermJson>>(path)?)?,
        None => self_adjoint_coset_sum(args.p)?,
    };
    Ok(match &args.scale {
        Some(c) => x.scale(&CQ::real(parse_rational(c)?)),
        None => x,
    })
}

fn moments(args: &RadialArgs, exec: Execution) -> Outcome {
    let x = radial_x(args)?;
    let mut rows = Vec::new();
    for n in 0..=args.nmax {
        let m = moment_of_x_with(&x, n, SUPPORT_CAP, exec)?;
        rows.push(json!({ "n": n, "moment": CQJson::from(&m) }));
    }
    Ok(Report::ok(json!({ "p": args.p, "support": x.len(), "tolerance": 0, "moments": rows })))
}

fn criterion(args: &RadialArgs, exec: Execution) -> Outcome {
    let x = radial_x(args)?;
    let report = criterion_check_with(&x, args.nmax, exec)?;
    if report.p != args.p {
        return Err(Failure::Usage(format!("X is supported on index {} but --p is {}", report.p, args.p)));
    }
    let extends = report.extends;
    Ok(Report::verdict(serde_json::to_value(report).expect("report serializes"), extends))
}

fn qexp(p: u64, n: usize) -> Outcome {
    let f = delta_qexp(n)?;
    let e = eigenvalue_of(&f, p)?;
    let ok = matches!(e, Eigen::Eigenvalue { .. });
    Ok(Report::verdict(serde_json::to_value(e).expect("eigen serializes"), ok))
}

fn verify_all(seed: u64, timings: bool, exec: Execution) -> Outcome {
    let outcomes = suite::run_all(seed, exec);
    let passed = outcomes.iter().filter(|o| o.passed).count();
    let criteria: Vec<Value> = outcomes
        .iter()
        .map(|o| {
            let mut v = json!({
                "id": o.id,
                "name": o.name,
                "passed": o.passed,
                "checks": o.checks,
                "failures": o.failures,
                "notes": o.notes,
                "time_limit_seconds": o.time_limit_seconds,
            });
            if timings {
                v["seconds"] = json!(o.seconds);
            }
            v
        })
        .collect();
    Ok(Report::verdict(
        json!({ "seed": seed, "passed": passed, "failed": outcomes.len() - passed, "criteria": criteria }),
        passed == outcomes.len(),
    ))
}
