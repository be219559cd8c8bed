//! `pasvol`: one entry point for the formula, quantifier-elimination,
//! p-adic, motivic, and orbital toolkits, with JSON reporting and a batch
//! mode over job manifests.
//!
//! Exit codes: 0 on success, 1 on domain errors (diagnostic on stderr) or a
//! failing comparison/batch, 2 on usage errors.

use std::collections::BTreeSet;
use std::io::Read;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use num::bigint::BigInt;
use num::rational::BigRational;
use serde_json::{json, Value};

use pasvol_core::formula::{self, Formula, Sort, Var};
use pasvol_core::mvol;
use pasvol_core::orbital::{self, FpPoly, QpPoly, StripParams};
use pasvol_core::padic::{self, Assignment, PadicContext, TruthValue, Value as PadicValue};
use pasvol_core::poly::{rational_string, Poly, Rationals};
use pasvol_core::presburger;

#[derive(Parser)]
#[command(name = "pasvol", version, about = "Formulas over valued fields: parsing, quantifier elimination, p-adic and motivic volumes, strip and curve computations")]
struct Cli {
    /// Emit machine-readable JSON on stdout
    #[arg(long, global = true)]
    json: bool,
    /// Seed echoed into reports (reserved for sampling-based subcommands)
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct FormulaInput {
    /// Path to the formula file; "-" reads stdin
    #[arg(long)]
    formula_file: PathBuf,
}

#[derive(Args, Clone)]
struct ModelArgs {
    /// Residual prime p (odd)
    #[arg(long)]
    prime: u64,
    /// Working depth N: classes are known mod p^N
    #[arg(long)]
    depth: u32,
}

#[derive(Subcommand, Clone)]
enum Command {
    /// Parse a formula and print its canonical form
    Parse(FormulaInput),
    /// Sort-check a formula and report its free variables
    Check(FormulaInput),
    /// Eliminate quantifiers from a Presburger (group-sort) formula
    Qe(FormulaInput),
    /// Decide a closed Presburger sentence
    Decide(FormulaInput),
    /// Evaluate a formula at an assignment in the three-valued semantics
    Eval {
        #[command(flatten)]
        model: ModelArgs,
        /// Bindings like "x0=6", "m0=-2", "xi0=3"; repeatable
        #[arg(long, allow_hyphen_values = true)]
        assign: Vec<String>,
        #[command(flatten)]
        formula: FormulaInput,
    },
    /// Rigorous volume bracket by residue-class enumeration
    Volume {
        #[command(flatten)]
        model: ModelArgs,
        #[command(flatten)]
        formula: FormulaInput,
    },
    /// Bracket for the integral of |x|^a over the solution set
    Integrate {
        #[command(flatten)]
        model: ModelArgs,
        /// The exponent a
        #[arg(long)]
        exponent: u32,
        #[command(flatten)]
        formula: FormulaInput,
    },
    /// Symbolic motivic volume (or monomial integral) in Q(L)
    Mvol {
        #[arg(long)]
        exponent: Option<u32>,
        #[command(flatten)]
        formula: FormulaInput,
    },
    /// Specialization-vs-enumeration comparison over a list of primes
    Compare {
        #[command(flatten)]
        formula: FormulaInput,
        /// Comma-separated odd primes, e.g. "3,5,7"
        #[arg(long)]
        primes: String,
        #[arg(long)]
        depth: u32,
        #[arg(long)]
        exponent: Option<u32>,
        /// Comma-separated primes to skip
        #[arg(long)]
        exclude: Option<String>,
    },
    /// Newton polygon of a polynomial with p-adic integer coefficients
    Newton {
        #[command(flatten)]
        model: ModelArgs,
        /// Ascending integer coefficients, e.g. "-5,0,1"
        #[arg(long, allow_hyphen_values = true)]
        poly: String,
    },
    /// Equal-valuation strip membership and the reduced polynomial R_X
    Strip {
        /// Numerator of the slope r = ell/h
        #[arg(long, allow_hyphen_values = true)]
        ell: i64,
        /// Denominator of the slope r = ell/h
        #[arg(long = "h")]
        h: i64,
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long, allow_hyphen_values = true)]
        poly: String,
    },
    /// Affine point count of y^2 = R(lambda^2) for a quadratic R
    Curve {
        /// Odd prime
        #[arg(long)]
        prime: u64,
        /// Ascending coefficients of R, e.g. "4,-5,1"
        #[arg(long = "R", allow_hyphen_values = true)]
        r: String,
    },
    /// Affine point count of y^2 = x^4 + a x^2 + b
    Family {
        #[arg(long)]
        prime: u64,
        #[arg(long, allow_hyphen_values = true)]
        a: i64,
        #[arg(long, allow_hyphen_values = true)]
        b: i64,
    },
    /// Transfer-factor support test on characteristic polynomials over Q
    Transfer {
        /// Ascending rational coefficients of PX ("0,4,0,-5,0,1"; entries may be "a/b")
        #[arg(long = "PX", allow_hyphen_values = true)]
        px: String,
        #[arg(long = "PY", allow_hyphen_values = true)]
        py: String,
        #[arg(long = "PZ", allow_hyphen_values = true)]
        pz: String,
    },
    /// Run a JSON-lines manifest of jobs and aggregate pass/fail
    Batch {
        /// Manifest path: one {"cmd": "...", "args": [...]} object per line
        manifest: PathBuf,
    },
}

enum CliError {
    Usage(String),
    Domain(String),
}

impl CliError {
    fn usage(msg: impl Into<String>) -> Self {
        CliError::Usage(msg.into())
    }
}

macro_rules! domain_from {
    ($($ty:ty),*) => {
        $(impl From<$ty> for CliError {
            fn from(e: $ty) -> Self {
                CliError::Domain(e.to_string())
            }
        })*
    };
}

domain_from!(
    formula::FormulaError,
    presburger::PresburgerError,
    padic::PadicError,
    mvol::MvolError,
    orbital::OrbitalError,
    pasvol_core::motive::MotiveError,
    std::io::Error
);

struct Outcome {
    json: Value,
    human: String,
    ok: bool,
}

impl Outcome {
    fn ok(json: Value, human: impl Into<String>) -> Self {
        Outcome { json, human: human.into(), ok: true }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run_command(&cli.command, cli.seed) {
        Ok(outcome) => {
            if cli.json {
                println!("{}", outcome.json);
            } else {
                println!("{}", outcome.human);
            }
            if outcome.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::FAILURE
            }
        }
        Err(CliError::Domain(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::FAILURE
        }
        Err(CliError::Usage(msg)) => {
            eprintln!("usage error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn class_limit() -> u64 {
    std::env::var("PASVOL_MAX_CLASSES")
        .ok()
        .and_then(|v| v.parse().ok())
        .unwrap_or(padic::DEFAULT_CLASS_LIMIT)
}

fn read_formula(path: &Path) -> Result<Formula, CliError> {
    let text = if path == Path::new("-") {
        let mut buf = String::new();
        std::io::stdin().read_to_string(&mut buf)?;
        buf
    } else {
        std::fs::read_to_string(path)?
    };
    Ok(formula::parse(&text)?)
}

fn make_context(model: &ModelArgs) -> Result<PadicContext, CliError> {
    PadicContext::new(model.prime, model.depth).map_err(|e| CliError::usage(e.to_string()))
}

fn parse_i64_list(s: &str, what: &str) -> Result<Vec<i64>, CliError> {
    s.split(',')
        .map(|t| t.trim().parse::<i64>())
        .collect::<Result<Vec<_>, _>>()
        .map_err(|_| CliError::usage(format!("{what} must be a comma-separated integer list, got '{s}'")))
}

fn parse_prime_list(s: &str) -> Result<Vec<u64>, CliError> {
    s.split(',')
        .map(|t| t.trim().parse::<u64>())
        .collect::<Result<Vec<_>, _>>()
        .map_err(|_| CliError::usage(format!("primes must be a comma-separated list, got '{s}'")))
}

fn parse_rational_poly(s: &str, what: &str) -> Result<Poly<Rationals>, CliError> {
    let coeffs = s
        .split(',')
        .map(|t| {
            let t = t.trim();
            if let Some((n, d)) = t.split_once('/') {
                let n: BigInt = n.parse().ok()?;
                let d: BigInt = d.parse().ok()?;
                Some(BigRational::new(n, d))
            } else {
                let n: BigInt = t.parse().ok()?;
                Some(BigRational::from_integer(n))
            }
        })
        .collect::<Option<Vec<_>>>()
        .ok_or_else(|| {
            CliError::usage(format!("{what} must be comma-separated rationals, got '{s}'"))
        })?;
    Ok(Poly::new(&Rationals, coeffs))
}

fn parse_assignment(
    bindings: &[String],
    ctx: &PadicContext,
) -> Result<Assignment, CliError> {
    let mut assign = Assignment::new();
    for binding in bindings {
        let (name, value) = binding.split_once('=').ok_or_else(|| {
            CliError::usage(format!("assignment '{binding}' is not of the form var=value"))
        })?;
        let var = Var::parse(name.trim())
            .ok_or_else(|| CliError::usage(format!("'{name}' is not a variable")))?;
        let n: i64 = value.trim().parse().map_err(|_| {
            CliError::usage(format!("assignment value '{value}' is not an integer"))
        })?;
        let v = match var.sort {
            // a literal integer names that exact element; 0 is the exact zero
            Sort::Field => PadicValue::Field(if n == 0 {
                ctx.exact_zero()
            } else {
                ctx.approx(n)
            }),
            Sort::Group => PadicValue::Group(n),
            Sort::Residue => {
                PadicValue::Residue(n.rem_euclid(ctx.prime() as i64) as u64)
            }
        };
        assign.bind(var, v);
    }
    Ok(assign)
}

fn bracket_json(
    p: u64,
    depth: u32,
    lower: &BigRational,
    upper: &BigRational,
    exponent: Option<u32>,
) -> Value {
    let mut v = json!({
        "p": p,
        "depth": depth,
        "lower": rational_string(lower),
        "upper": rational_string(upper),
        "exact": lower == upper,
    });
    if let Some(a) = exponent {
        v["exponent"] = json!(a);
    }
    v
}

fn free_vars_json(f: &Formula) -> Value {
    Value::Array(
        f.free_variables()
            .iter()
            .map(|v| json!({"name": v.name(), "sort": v.sort}))
            .collect(),
    )
}

fn run_command(cmd: &Command, seed: u64) -> Result<Outcome, CliError> {
    match cmd {
        Command::Parse(input) => {
            let f = read_formula(&input.formula_file)?;
            let text = formula::print(&f);
            Ok(Outcome::ok(
                json!({"canonical": text, "free": free_vars_json(&f)}),
                text,
            ))
        }
        Command::Check(input) => {
            let f = read_formula(&input.formula_file)?;
            let free: Vec<String> = f
                .free_variables()
                .iter()
                .map(|v| format!("{} : {}", v.name(), v.sort))
                .collect();
            Ok(Outcome::ok(
                json!({"well_sorted": true, "free": free_vars_json(&f)}),
                if free.is_empty() {
                    "well-sorted closed sentence".to_string()
                } else {
                    format!("well-sorted; free variables: {}", free.join(", "))
                },
            ))
        }
        Command::Qe(input) => {
            let f = read_formula(&input.formula_file)?;
            let out = presburger::eliminate(&f)?;
            let text = formula::print(&out);
            Ok(Outcome::ok(
                json!({
                    "input": formula::print(&f),
                    "output": text,
                    "quantifier_free": presburger::is_quantifier_free(&out),
                }),
                text,
            ))
        }
        Command::Decide(input) => {
            let f = read_formula(&input.formula_file)?;
            let value = presburger::decide(&f)?;
            Ok(Outcome::ok(
                json!({"input": formula::print(&f), "value": value}),
                value.to_string(),
            ))
        }
        Command::Eval { model, assign, formula: input } => {
            let ctx = make_context(model)?;
            let f = read_formula(&input.formula_file)?;
            let assignment = parse_assignment(assign, &ctx)?;
            let truth = padic::evaluate(&f, &assignment, &ctx)?;
            let text = match truth {
                TruthValue::True => "true",
                TruthValue::False => "false",
                TruthValue::Unknown => "unknown",
            };
            Ok(Outcome::ok(
                json!({"p": ctx.prime(), "depth": ctx.depth(), "truth": text}),
                text,
            ))
        }
        Command::Volume { model, formula: input } => {
            let ctx = make_context(model)?;
            let f = read_formula(&input.formula_file)?;
            let vars: Vec<Var> = f
                .free_variables()
                .into_iter()
                .filter(|v| v.sort == Sort::Field)
                .collect();
            let (lower, upper) = padic::volume_bounds(&f, &vars, &ctx, class_limit())?;
            Ok(Outcome::ok(
                bracket_json(ctx.prime(), ctx.depth(), &lower, &upper, None),
                format!(
                    "volume in [{}, {}]{}",
                    rational_string(&lower),
                    rational_string(&upper),
                    if lower == upper { " (exact)" } else { "" }
                ),
            ))
        }
        Command::Integrate { model, exponent, formula: input } => {
            let ctx = make_context(model)?;
            let f = read_formula(&input.formula_file)?;
            let (lower, upper) =
                padic::monomial_integral_numeric(&f, *exponent, &ctx, class_limit())?;
            Ok(Outcome::ok(
                bracket_json(ctx.prime(), ctx.depth(), &lower, &upper, Some(*exponent)),
                format!(
                    "integral of |x|^{} in [{}, {}]{}",
                    exponent,
                    rational_string(&lower),
                    rational_string(&upper),
                    if lower == upper { " (exact)" } else { "" }
                ),
            ))
        }
        Command::Mvol { exponent, formula: input } => {
            let f = read_formula(&input.formula_file)?;
            let (motive, bad_primes) =
                mvol::motivic_monomial_integral(&f, exponent.unwrap_or(0))?;
            let bads: Vec<u64> = bad_primes.into_iter().collect();
            Ok(Outcome::ok(
                json!({
                    "motive": serde_json::to_value(&motive).unwrap(),
                    "bad_primes": bads,
                }),
                format!("{motive}{}", badlist(&bads)),
            ))
        }
        Command::Compare { formula: input, primes, depth, exponent, exclude } => {
            let f = read_formula(&input.formula_file)?;
            let primes = parse_prime_list(primes)?;
            let exclude: BTreeSet<u64> = match exclude {
                Some(s) => parse_prime_list(s)?.into_iter().collect(),
                None => BTreeSet::new(),
            };
            let report =
                mvol::compare(&f, *exponent, &primes, *depth, &exclude, class_limit())?;
            let ok = report.all_pass();
            let mut lines = vec![format!("motive: {}", report.motive)];
            for r in &report.results {
                lines.push(match (&r.skipped, r.pass) {
                    (Some(reason), _) => format!("p={}: skipped ({reason})", r.p),
                    (None, Some(true)) => format!(
                        "p={}: PASS  {} in [{}, {}]",
                        r.p,
                        r.symbolic.as_deref().unwrap_or("?"),
                        r.lower.as_deref().unwrap_or("?"),
                        r.upper.as_deref().unwrap_or("?"),
                    ),
                    _ => format!(
                        "p={}: FAIL  {} not in [{}, {}]",
                        r.p,
                        r.symbolic.as_deref().unwrap_or("?"),
                        r.lower.as_deref().unwrap_or("?"),
                        r.upper.as_deref().unwrap_or("?"),
                    ),
                });
            }
            Ok(Outcome {
                json: serde_json::to_value(&report).unwrap(),
                human: lines.join("\n"),
                ok,
            })
        }
        Command::Newton { model, poly } => {
            let ctx = make_context(model)?;
            let coeffs = parse_i64_list(poly, "--poly")?;
            let f = QpPoly::from_integers(&ctx, &coeffs);
            let polygon = orbital::newton_polygon(&f)?;
            let segments: Vec<Value> = polygon
                .segments()
                .iter()
                .map(|(slope, mult)| {
                    json!({"slope": rational_string(slope), "multiplicity": mult})
                })
                .collect();
            let human = polygon
                .segments()
                .iter()
                .map(|(s, m)| format!("slope {} x{}", rational_string(s), m))
                .collect::<Vec<_>>()
                .join(", ");
            Ok(Outcome::ok(
                json!({"p": ctx.prime(), "depth": ctx.depth(), "segments": segments}),
                human,
            ))
        }
        Command::Strip { ell, h, model, poly } => {
            let ctx = make_context(model)?;
            let params =
                StripParams::new(*ell, *h).map_err(|e| CliError::usage(e.to_string()))?;
            let coeffs = parse_i64_list(poly, "--poly")?;
            let f = QpPoly::from_integers(&ctx, &coeffs);
            let (member, r) = orbital::strip_membership(&f, &params)?;
            let human = match &r {
                Some(r) => format!("member; R_X = {r}"),
                None => "not a member".to_string(),
            };
            Ok(Outcome::ok(
                json!({
                    "member": member,
                    "R": r.as_ref().map(|r| r.coeffs().to_vec()),
                }),
                human,
            ))
        }
        Command::Curve { prime, r } => {
            let coeffs = parse_i64_list(r, "--R")?;
            let r = FpPoly::from_i64(*prime, &coeffs)
                .map_err(|e| CliError::usage(e.to_string()))?;
            let count = orbital::curve_point_count(&r)?;
            Ok(Outcome::ok(
                json!({"p": count.p, "affine": count.affine, "smooth": count.smooth}),
                format!("affine count {} (smooth: {})", count.affine, count.smooth),
            ))
        }
        Command::Family { prime, a, b } => {
            let count = orbital::family_count(*a, *b, *prime)
                .map_err(|e| CliError::usage(e.to_string()))?;
            Ok(Outcome::ok(
                json!({"p": count.p, "affine": count.affine, "smooth": count.smooth}),
                format!("affine count {} (smooth: {})", count.affine, count.smooth),
            ))
        }
        Command::Transfer { px, py, pz } => {
            let q = Rationals;
            let px = parse_rational_poly(px, "--PX")?;
            let py = parse_rational_poly(py, "--PY")?;
            let pz = parse_rational_poly(pz, "--PZ")?;
            let support = orbital::transfer_support(&q, &px, &py, &pz)?;
            Ok(Outcome::ok(json!({"support": support}), support.to_string()))
        }
        Command::Batch { manifest } => run_batch(manifest, seed),
    }
}

fn badlist(bads: &[u64]) -> String {
    if bads.is_empty() {
        String::new()
    } else {
        format!(
            "  (bad primes: {})",
            bads.iter().map(|p| p.to_string()).collect::<Vec<_>>().join(", ")
        )
    }
}

/// Executes the manifest jobs in order. Relative --formula-file paths are
/// resolved against the manifest's directory.
fn run_batch(manifest: &Path, seed: u64) -> Result<Outcome, CliError> {
    let text = std::fs::read_to_string(manifest)
        .map_err(|e| CliError::Domain(format!("cannot read manifest {}: {e}", manifest.display())))?;
    let base = manifest.parent().unwrap_or(Path::new("."));

    let mut records = Vec::new();
    let mut lines = Vec::new();
    let mut failures = 0usize;
    for (idx, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let job: Value = serde_json::from_str(line).map_err(|e| {
            CliError::Domain(format!("manifest line {}: invalid JSON: {e}", idx + 1))
        })?;
        let cmd = job["cmd"].as_str().ok_or_else(|| {
            CliError::Domain(format!("manifest line {}: missing \"cmd\"", idx + 1))
        })?;
        if cmd == "batch" {
            return Err(CliError::Domain(format!(
                "manifest line {}: nested batch jobs are not allowed",
                idx + 1
            )));
        }
        let args: Vec<String> = match job.get("args") {
            Some(Value::Array(items)) => items
                .iter()
                .map(|v| match v {
                    Value::String(s) => Ok(s.clone()),
                    other => Ok(other.to_string()),
                })
                .collect::<Result<_, CliError>>()?,
            None => Vec::new(),
            Some(_) => {
                return Err(CliError::Domain(format!(
                    "manifest line {}: \"args\" must be an array",
                    idx + 1
                )))
            }
        };
        let mut argv = vec!["pasvol".to_string(), cmd.to_string()];
        argv.extend(args);
        let parsed = Cli::try_parse_from(&argv).map_err(|e| {
            CliError::Domain(format!("manifest line {}: {e}", idx + 1))
        })?;
        let mut command = parsed.command;
        resolve_formula_path(&mut command, base);
        let (record, human_line, ok) = match run_command(&command, seed) {
            Ok(outcome) => (
                json!({"line": idx + 1, "cmd": cmd, "ok": outcome.ok, "report": outcome.json}),
                format!(
                    "[{}] line {}: {}",
                    if outcome.ok { "pass" } else { "FAIL" },
                    idx + 1,
                    cmd
                ),
                outcome.ok,
            ),
            Err(CliError::Domain(msg)) | Err(CliError::Usage(msg)) => (
                json!({"line": idx + 1, "cmd": cmd, "ok": false, "error": msg.clone()}),
                format!("[FAIL] line {}: {cmd}: {msg}", idx + 1),
                false,
            ),
        };
        if !ok {
            failures += 1;
        }
        records.push(record);
        lines.push(human_line);
    }
    let total = records.len();
    lines.push(format!("{} job(s), {failures} failure(s)", total));
    Ok(Outcome {
        json: json!({"jobs": total, "failures": failures, "records": records}),
        human: lines.join("\n"),
        ok: failures == 0,
    })
}

fn resolve_formula_path(cmd: &mut Command, base: &Path) {
    let file = match cmd {
        Command::Parse(input)
        | Command::Check(input)
        | Command::Qe(input)
        | Command::Decide(input) => &mut input.formula_file,
        Command::Eval { formula, .. }
        | Command::Volume { formula, .. }
        | Command::Integrate { formula, .. }
        | Command::Mvol { formula, .. }
        | Command::Compare { formula, .. } => &mut formula.formula_file,
        _ => return,
    };
    if file.is_relative() && *file != PathBuf::from("-") {
        *file = base.join(&file);
    }
}
