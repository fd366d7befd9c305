//! Command implementations. Each returns the JSON text for standard output
//! and, where there is one, the result document for `--out`.

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use katz_core::field::parse_rational;
use katz_core::fuchsian::{conv_add, mc_add, FuchsianSystem};
use katz_core::lame::{lame_extended_system, lame_okubo, LameEquation};
use katz_core::mult::{conv_mult, dim_formula, mc_mult};
use katz_core::numeric::{verify_rh, CMatrix, RhConfig, RhStatus};
use katz_core::pcurv::{nilpo_scan, scan_fuchsian, scan_okubo, Nilpotence, PCurvReport, PrimeStatus};
use katz_core::pipeline::{apply_program, ConstructionStep, StepReport};
use katz_core::tuple::MatTuple;
use katz_core::{Cyclo, Field, Matrix, Q};
use num_integer::Integer;
use serde::Deserialize;
use serde_json::{json, Value};

use crate::doc::{DocError, Document};

#[derive(Parser, Debug)]
#[command(name = "katz", version, about = "Middle convolution of matrix tuples and Fuchsian systems")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// C_λ or MC_λ of a matrix tuple.
    ConvMult {
        #[arg(long = "in")]
        input: PathBuf,
        /// λ = ζ_{n2}^{n1}, given as n1/n2.
        #[arg(long, allow_hyphen_values = true, conflicts_with = "lambda", required_unless_present = "lambda")]
        lambda_mu: Option<String>,
        /// Rational λ.
        #[arg(long, allow_hyphen_values = true)]
        lambda: Option<String>,
        #[arg(long)]
        middle: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// c_μ or mc_μ of a Fuchsian system.
    ConvAdd {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        mu: String,
        #[arg(long)]
        middle: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Runs a program of scalar additions and middle convolutions on a rank-one seed.
    Construct {
        #[arg(long)]
        seed: PathBuf,
        /// JSON list of {"scalar-add": [..]} and {"middle-conv": ".."} steps.
        #[arg(long)]
        program: PathBuf,
        /// Skip the seed normalization checks.
        #[arg(long)]
        no_validate: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Nilpotence of the p-curvature for all primes up to --pmax.
    Pcurvature {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        mu: Option<String>,
        #[arg(long, default_value_t = 50)]
        pmax: u64,
        /// Also measure c_{-1}, mc_{-1}, c_{μ-1}, mc_{μ-1} (Fuchsian input, needs --mu).
        #[arg(long, requires = "mu")]
        nilpo: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compares Mon(mc_{μ-1}(a)) with MC_λ(Mon(a)) for λ = exp(2πiμ) numerically.
    VerifyRh {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        mu: String,
        /// Bound for the conjugacy residual.
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Fuchsian system of a Lamé equation and, with --mu, its 3×3 Okubo form.
    Lame {
        #[arg(long = "n", allow_hyphen_values = true)]
        n_index: String,
        #[arg(long = "B", allow_hyphen_values = true)]
        accessory: String,
        #[arg(long, allow_hyphen_values = true, value_delimiter = ',')]
        roots: Vec<String>,
        /// Fuchsian document with further 2×2 residues.
        #[arg(long)]
        extra: Option<PathBuf>,
        #[arg(long, allow_hyphen_values = true)]
        mu: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug)]
pub enum Failure {
    /// Exit 1.
    Precondition(String),
    /// Exit 2.
    Inconclusive(String),
    /// Exit 3.
    Io(String),
}

impl Failure {
    pub fn exit_code(&self) -> i32 {
        match self {
            Failure::Precondition(_) => 1,
            Failure::Inconclusive(_) => 2,
            Failure::Io(_) => 3,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            Failure::Precondition(m) | Failure::Inconclusive(m) | Failure::Io(m) => m,
        }
    }
}

impl From<katz_core::Error> for Failure {
    fn from(e: katz_core::Error) -> Self {
        Failure::Precondition(e.to_string())
    }
}

impl From<DocError> for Failure {
    fn from(e: DocError) -> Self {
        Failure::Io(e.to_string())
    }
}

/// What a command produced. `stdout` is printed even when `failure` is set.
pub struct Outcome {
    pub stdout: String,
    pub failure: Option<Failure>,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Outcome { stdout, failure: None }
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> Result<(), Failure> {
    fs::write(path, text).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))
}

fn read_doc(path: &Path) -> Result<Document, Failure> {
    Document::parse(&read(path)?).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))
}

fn arg_rational(name: &str, s: &str) -> Result<Q, Failure> {
    parse_rational(s).map_err(|e| Failure::Precondition(format!("--{name}: {e}")))
}

fn pretty(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("values serialize")
}

/// Floats in reports carry 17 significant digits.
pub fn float(x: f64) -> Value {
    Value::String(format!("{x:.16e}"))
}

fn complex_matrix(m: &CMatrix) -> Value {
    Value::Array(
        (0..m.nrows())
            .map(|i| Value::Array((0..m.ncols()).map(|j| json!([float(m[(i, j)].re), float(m[(i, j)].im)])).collect()))
            .collect(),
    )
}

fn finish(report: Value, doc: Option<&Document>, out: Option<&Path>) -> Result<Outcome, Failure> {
    if let (Some(doc), Some(path)) = (doc, out) {
        write(path, &doc.to_json())?;
    }
    Ok(Outcome::ok(pretty(&report)))
}

fn to_cyclo(t: &MatTuple<Q>) -> MatTuple<Cyclo> {
    MatTuple::new(t.matrices().iter().map(|m| m.map(|x| Cyclo::rational(x.clone()))).collect())
        .expect("entrywise embedding keeps invertibility")
}

fn mult_report<F: Field>(tuple: &MatTuple<F>, lambda: &F, middle: bool) -> Result<(MatTuple<F>, Value), Failure> {
    if !middle {
        let c = conv_mult(tuple, lambda)?;
        let report = json!({"operation": "C", "dim": c.n(), "warnings": []});
        return Ok((c, report));
    }
    let res = mc_mult(tuple, lambda)?;
    let mut warnings = Vec::new();
    if res.dim() == 0 {
        warnings.push("result is zero-dimensional".to_string());
    }
    let (formula, formula_ok) = if lambda.is_one() {
        (Value::Null, Value::Null)
    } else {
        let f = dim_formula(tuple, lambda)?;
        (json!(f), json!(f == res.dim() as i64))
    };
    let report = json!({
        "operation": "MC",
        "dim": res.dim(),
        "k_dim": res.k.dim(),
        "l_dim": res.l.dim(),
        "formula": formula,
        "formula_ok": formula_ok,
        "warnings": warnings,
    });
    Ok((res.quotient, report))
}

fn run_conv_mult(
    input: &Path,
    lambda_mu: Option<&str>,
    lambda: Option<&str>,
    middle: bool,
    out: Option<&Path>,
) -> Result<Outcome, Failure> {
    let doc = read_doc(input)?;
    let (result, mut report) = match (doc, lambda_mu, lambda) {
        (Document::RationalTuple(t), None, Some(l)) => {
            let (res, rep) = mult_report(&t, &arg_rational("lambda", l)?, middle)?;
            (Document::RationalTuple(res), rep)
        }
        (Document::RationalTuple(t), Some(m), None) => {
            let lambda = Cyclo::exp_2pi_i(&arg_rational("lambda-mu", m)?);
            let (res, rep) = mult_report(&to_cyclo(&t), &lambda, middle)?;
            (Document::CyclotomicTuple { order: lambda.order(), tuple: res }, rep)
        }
        (Document::CyclotomicTuple { order, tuple }, m, l) => {
            let lambda = match (m, l) {
                (Some(m), None) => Cyclo::exp_2pi_i(&arg_rational("lambda-mu", m)?),
                (None, Some(l)) => Cyclo::rational(arg_rational("lambda", l)?),
                _ => return Err(Failure::Precondition("give exactly one of --lambda-mu and --lambda".into())),
            };
            let (res, rep) = mult_report(&tuple, &lambda, middle)?;
            (Document::CyclotomicTuple { order: order.max(1).lcm(&lambda.order()), tuple: res }, rep)
        }
        (Document::RationalTuple(_), _, _) => {
            return Err(Failure::Precondition("give exactly one of --lambda-mu and --lambda".into()))
        }
        (other, _, _) => return Err(Failure::Precondition(format!("expected a mat-tuple document, got {}", other.kind()))),
    };
    report["result"] = result.to_value();
    finish(report, Some(&result), out)
}

fn read_fuchsian(path: &Path) -> Result<FuchsianSystem<Q>, Failure> {
    match read_doc(path)? {
        Document::Fuchsian(sys) => Ok(sys),
        other => Err(Failure::Precondition(format!("expected a fuchsian document, got {}", other.kind()))),
    }
}

fn run_conv_add(input: &Path, mu: &str, middle: bool, out: Option<&Path>) -> Result<Outcome, Failure> {
    let sys = read_fuchsian(input)?;
    let mu = arg_rational("mu", mu)?;
    let (result, mut report) = if middle {
        let res = mc_add(&sys, &mu);
        let mut warnings = Vec::new();
        if res.system.n() == 0 {
            warnings.push("result is zero-dimensional".to_string());
        }
        let report = json!({
            "operation": "mc",
            "dim": res.system.n(),
            "k_dim": res.k.dim(),
            "l_dim": res.l.dim(),
            "convolution_okubo": Document::Okubo(res.okubo()).to_value(),
            "warnings": warnings,
        });
        (Document::Fuchsian(res.system), report)
    } else {
        let c = conv_add(&sys, &mu);
        (Document::Fuchsian(c.clone()), json!({"operation": "c", "dim": c.n(), "warnings": []}))
    };
    report["result"] = result.to_value();
    finish(report, Some(&result), out)
}

#[derive(Debug, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
enum StepDoc {
    ScalarAdd(Vec<String>),
    MiddleConv(String),
}

pub fn parse_program(text: &str) -> Result<Vec<ConstructionStep>, Failure> {
    let steps: Vec<StepDoc> = serde_json::from_str(text).map_err(|e| Failure::Io(format!("program: {e}")))?;
    steps
        .into_iter()
        .map(|s| match s {
            StepDoc::ScalarAdd(d) => d
                .iter()
                .map(|x| parse_rational(x).map_err(|e| Failure::Io(format!("program: {e}"))))
                .collect::<Result<Vec<_>, _>>()
                .map(ConstructionStep::ScalarAdd),
            StepDoc::MiddleConv(m) => {
                parse_rational(&m).map(ConstructionStep::MiddleConv).map_err(|e| Failure::Io(format!("program: {e}")))
            }
        })
        .collect()
}

fn step_value(s: &StepReport) -> Value {
    json!({
        "step": s.index + 1,
        "dim_before": s.dim_before,
        "dim_after": s.dim_after,
        "k_dim": s.k_dim,
        "l_dim": s.l_dim,
        "rigidity": s.rigidity,
        "lambda_exponent": s.lambda_exponent.as_ref().map(|m| m.to_string()),
        "rank_hypotheses": s.hypotheses.as_ref().map(|h| json!({"residues": h.residues, "sum": h.sum, "shifted_sum": h.shifted_sum})),
        "warnings": s.warnings,
    })
}

fn run_construct(seed: &Path, program: &Path, validate: bool, out: Option<&Path>) -> Result<Outcome, Failure> {
    let sys = read_fuchsian(seed)?;
    let steps = parse_program(&read(program)?)?;
    let (result, reports) = apply_program(&sys, &steps, validate)?;
    let doc = Document::Fuchsian(result);
    let mut lines: Vec<String> = reports.iter().map(|s| step_value(s).to_string()).collect();
    lines.push(json!({"result": doc.to_value()}).to_string());
    if let Some(path) = out {
        write(path, &doc.to_json())?;
    }
    Ok(Outcome::ok(lines.join("\n")))
}

fn nilpotence_value(n: Nilpotence) -> Value {
    match n {
        Nilpotence::Index(k) => json!(k),
        Nilpotence::NotNilpotent => json!("not-nilpotent"),
    }
}

fn pcurv_value(r: &PCurvReport) -> Value {
    match (&r.status, r.nilpotence) {
        (PrimeStatus::Bad(reason), _) => json!({"prime": r.prime, "status": "bad", "reason": reason}),
        (PrimeStatus::Good, n) => {
            let n = n.expect("good primes are measured");
            json!({"prime": r.prime, "status": "good", "index": nilpotence_value(n), "zero": n == Nilpotence::Index(1)})
        }
    }
}

fn run_pcurvature(input: &Path, mu: Option<&str>, pmax: u64, nilpo: bool, out: Option<&Path>) -> Result<Outcome, Failure> {
    if pmax < 2 {
        return Err(Failure::Precondition("--pmax must be at least 2".into()));
    }
    let mu = mu.map(|m| arg_rational("mu", m)).transpose()?;
    let doc = read_doc(input)?;
    let (reports, size) = match &doc {
        Document::Fuchsian(sys) => (scan_fuchsian(sys, mu.as_ref(), pmax), sys.n()),
        Document::Okubo(ok) => (scan_okubo(ok, mu.as_ref(), pmax), ok.size()),
        other => return Err(Failure::Precondition(format!("expected a fuchsian or okubo document, got {}", other.kind()))),
    };
    let max_index = reports.iter().filter_map(|r| r.nilpotence.and_then(Nilpotence::index)).max();
    let all_nilpotent = reports.iter().all(|r| r.nilpotence != Some(Nilpotence::NotNilpotent));
    let mut report = json!({
        "kind": doc.kind(),
        "size": size,
        "pmax": pmax,
        "primes": reports.iter().map(pcurv_value).collect::<Vec<_>>(),
        "max_index": max_index,
        "all_nilpotent": all_nilpotent,
    });
    if nilpo {
        let (Document::Fuchsian(sys), Some(mu)) = (&doc, &mu) else {
            return Err(Failure::Precondition("--nilpo needs a fuchsian document and --mu".into()));
        };
        let rows = nilpo_scan(sys, mu, pmax);
        report["nilpo"] = json!({
            "bounds_hold": rows.iter().all(|r| r.bounds_hold()),
            "primes": rows.iter().map(|r| json!({
                "prime": r.prime,
                "seed": nilpotence_value(r.seed),
                "c_minus_one": nilpotence_value(r.conv_minus_one),
                "mc_minus_one": nilpotence_value(r.mc_minus_one),
                "c_mu_minus_one": nilpotence_value(r.conv_mu),
                "mc_mu_minus_one": nilpotence_value(r.mc_mu),
                "bounds_hold": r.bounds_hold(),
            })).collect::<Vec<_>>(),
        });
    }
    emit_report(&report, out)
}

fn emit_report(report: &Value, out: Option<&Path>) -> Result<Outcome, Failure> {
    let text = pretty(report);
    match out {
        Some(path) => {
            write(path, &text)?;
            Ok(Outcome::ok(String::new()))
        }
        None => Ok(Outcome::ok(text)),
    }
}

fn run_verify_rh(input: &Path, mu: &str, tol: f64, out: Option<&Path>) -> Result<Outcome, Failure> {
    let sys = read_fuchsian(input)?;
    let mu = arg_rational("mu", mu)?;
    if !(tol > 0.0) {
        return Err(Failure::Precondition("--tol must be positive".into()));
    }
    let cfg = RhConfig { conj_tol: tol, ..RhConfig::default() };
    let rep = verify_rh(&sys, &mu, &cfg)?;
    let h = &rep.hypotheses;
    let status = match rep.status {
        RhStatus::Pass => "pass",
        RhStatus::HypothesisViolation => "hypothesis-violation",
        RhStatus::Inconclusive => "inconclusive",
    };
    let report = json!({
        "mu": mu.to_string(),
        "status": status,
        "hypotheses": {
            "residue_ranks": h.residue_ranks.iter().map(|(e, n)| json!({"exact": e, "numeric": n})).collect::<Vec<_>>(),
            "sum_rank": {"exact": h.sum_rank.0, "numeric": h.sum_rank.1},
            "shifted_sum_rank": h.shifted_sum_rank,
            "ranks_match": h.ranks_match(),
            "irreducible": h.irreducible,
            "nontrivial_generators": h.nontrivial_generators,
            "hold": h.hold(),
        },
        "mc_dim": rep.mc_dim,
        "k_dim": rep.k_dim,
        "l_dim": rep.l_dim,
        "residual": float(rep.residual),
        "condition": float(rep.condition),
        "braid": rep.braid,
        "product_residual": {"seed": float(rep.seed.product_residual), "convolution": float(rep.convolved.product_residual)},
        "abel_residual": float(rep.abel_residual),
        "loop_order": rep.seed.loops.order,
        "monodromy": {
            "seed": rep.seed.matrices.iter().map(complex_matrix).collect::<Vec<_>>(),
            "convolution": rep.convolved.matrices.iter().map(complex_matrix).collect::<Vec<_>>(),
        },
    });
    let mut outcome = emit_report(&report, out)?;
    outcome.failure = match rep.status {
        RhStatus::Pass => None,
        RhStatus::HypothesisViolation => Some(Failure::Precondition("hypotheses of the comparison do not hold".into())),
        RhStatus::Inconclusive => {
            Some(Failure::Inconclusive(format!("no conjugacy found (residual {:.3e})", rep.residual)))
        }
    };
    Ok(outcome)
}

fn run_lame(
    n_index: &str,
    accessory: &str,
    roots: &[String],
    extra: Option<&Path>,
    mu: Option<&str>,
    out: Option<&Path>,
) -> Result<Outcome, Failure> {
    let [r1, r2, r3] = roots else {
        return Err(Failure::Precondition("--roots takes three values".into()));
    };
    let roots = [arg_rational("roots", r1)?, arg_rational("roots", r2)?, arg_rational("roots", r3)?];
    let l = LameEquation::new(arg_rational("n", n_index)?, arg_rational("B", accessory)?, roots)?;
    let extra: Vec<(Q, Matrix<Q>)> = match extra {
        Some(path) => {
            let sys = read_fuchsian(path)?;
            sys.points().iter().cloned().zip(sys.residues().iter().cloned()).collect()
        }
        None => Vec::new(),
    };
    let system = Document::Fuchsian(lame_extended_system(&l, &extra)?);
    let mut report = json!({"l1": l.l1().to_string(), "l2": l.l2().to_string(), "system": system.to_value()});
    let primary = match mu {
        Some(m) => {
            let okubo = Document::Okubo(lame_okubo(&l, &extra, &arg_rational("mu", m)?)?);
            report["okubo"] = okubo.to_value();
            okubo
        }
        None => system,
    };
    finish(report, Some(&primary), out)
}

pub fn run(cli: &Cli) -> Outcome {
    let result = match &cli.command {
        Command::ConvMult { input, lambda_mu, lambda, middle, out } => {
            run_conv_mult(input, lambda_mu.as_deref(), lambda.as_deref(), *middle, out.as_deref())
        }
        Command::ConvAdd { input, mu, middle, out } => run_conv_add(input, mu, *middle, out.as_deref()),
        Command::Construct { seed, program, no_validate, out } => run_construct(seed, program, !no_validate, out.as_deref()),
        Command::Pcurvature { input, mu, pmax, nilpo, out } => {
            run_pcurvature(input, mu.as_deref(), *pmax, *nilpo, out.as_deref())
        }
        Command::VerifyRh { input, mu, tol, out } => run_verify_rh(input, mu, *tol, out.as_deref()),
        Command::Lame { n_index, accessory, roots, extra, mu, out } => {
            run_lame(n_index, accessory, roots, extra.as_deref(), mu.as_deref(), out.as_deref())
        }
    };
    result.unwrap_or_else(|f| Outcome { stdout: String::new(), failure: Some(f) })
}
