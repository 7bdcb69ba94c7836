//! Command-line front end for the algebra library: normal-form
//! computation (`nf`), identity-verification suites (`verify`), and exact
//! JSON export of representation matrices, operators, and distinguished
//! elements (`export`).
//!
//! Coefficients default to fully symbolic `q` and `c`; `--q 5/3 --c 2`
//! switches to the exact rational backend, and `--c 0` selects the
//! exterior-algebra limit.  All output is deterministic: identical
//! configuration produces byte-identical bytes, with report items sorted
//! by key before emission.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage error,
//! 3 resource cap exceeded (see `QCLIFFORD_MAX_DIM`).

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde::Serialize;
use serde_json::{json, Value};

use qclifford::braid::BraidContext;
use qclifford::clifford::{z0, z1, AlgebraContext};
use qclifford::suites::{run_suite, Suite, SuiteOptions};
use qclifford::uq::{GenKind, Generator, UqContext};
use qclifford::{CheckItem, CheckReport, CoeffCtx, Error, EvalPoint, NumCtx, SymCtx};

/// Largest rank the verification suites accept; the library itself admits
/// larger algebras, but suite work grows as 4^N.
const MAX_SUITE_RANK: usize = 8;

#[derive(Parser)]
#[command(
    name = "qclifford",
    version,
    about = "Exact computation in q-deformed Clifford algebras",
    after_help = "Exit codes: 0 success, 1 verification failure, 2 usage error, \
                  3 resource cap.\nThe environment variable QCLIFFORD_MAX_DIM caps \
                  materialized operator dimensions (default 10000)."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Rewrite a generator word into its normal form.
    Nf(NfArgs),
    /// Run an identity-verification suite and report pass/fail items.
    Verify(VerifyArgs),
    /// Export representation matrices, operators, or distinguished
    /// elements as deterministic JSON.
    Export(ExportArgs),
}

#[derive(Args)]
struct CommonArgs {
    /// Number of generators (3..=16).
    #[arg(long = "N", value_name = "RANK")]
    n: usize,

    /// Deformation parameter: "symbolic" or an exact rational like 5/3
    /// (not 0 or ±1).
    #[arg(long, default_value = "symbolic", value_name = "Q")]
    q: String,

    /// Square-length parameter: "symbolic", 0, or an exact rational like 2.
    #[arg(long, default_value = "symbolic", value_name = "C")]
    c: String,

    /// Write output to a file instead of stdout.
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Pretty,
    Json,
}

#[derive(Args)]
struct NfArgs {
    #[command(flatten)]
    common: CommonArgs,

    #[arg(long, value_enum, default_value_t = Format::Pretty)]
    format: Format,

    /// Generator indices of the word, leftmost factor first.
    #[arg(required = true, value_name = "INDEX")]
    word: Vec<usize>,
}

#[derive(Args)]
struct VerifyArgs {
    #[command(flatten)]
    common: CommonArgs,

    #[arg(long, value_enum, default_value_t = Format::Pretty)]
    format: Format,

    /// Worker threads for suite execution (default: all cores).
    #[arg(long, value_name = "THREADS")]
    jobs: Option<usize>,

    /// Suite to run: clifford, bwm, fock, pi, pirels, adjoint, spin,
    /// center, ideals, or all.
    #[arg(value_name = "SUITE")]
    suite_pos: Option<String>,

    /// Suite to run (alternative to the positional form).
    #[arg(long = "suite", value_name = "SUITE", conflicts_with = "suite_pos")]
    suite_flag: Option<String>,
}

#[derive(Args)]
struct ExportArgs {
    #[command(flatten)]
    common: CommonArgs,

    /// What to export: spinrep, t1, rhat, antisym, z-elements, pi-images.
    #[arg(value_name = "KIND")]
    kind: String,

    /// Spin module label, +1 or -1 (spinrep only).
    #[arg(long, allow_hyphen_values = true, value_name = "NU")]
    nu: Option<String>,

    /// Tensor-power degree (antisym only).
    #[arg(long, value_name = "K")]
    k: Option<usize>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Nf(args) => cmd_nf(&args),
        Command::Verify(args) => cmd_verify(&args),
        Command::Export(args) => cmd_export(&args),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            if matches!(e, Error::ResourceCap(_)) {
                eprintln!(
                    "hint: rerun with a rational specialization (e.g. --q 5/3 --c 2) \
                     or raise QCLIFFORD_MAX_DIM"
                );
                ExitCode::from(3)
            } else {
                ExitCode::from(2)
            }
        }
    }
}

// ---------------------------------------------------------------------------
// Coefficient backend selection
// ---------------------------------------------------------------------------

/// The two exact coefficient backends the flags can select.
enum Backend {
    Sym(SymCtx),
    Num(NumCtx),
}

fn parse_rational(text: &str) -> Result<BigRational, Error> {
    let invalid = || {
        Error::InvalidInput(format!(
            "expected a rational like 5/3 or 2, got '{text}'"
        ))
    };
    let (num, den) = match text.split_once('/') {
        Some((n, d)) => (n, d),
        None => (text, "1"),
    };
    let num: BigInt = num.parse().map_err(|_| invalid())?;
    let den: BigInt = den.parse().map_err(|_| invalid())?;
    if den.is_zero() {
        return Err(invalid());
    }
    Ok(BigRational::new(num, den))
}

fn backend(common: &CommonArgs) -> Result<Backend, Error> {
    match (common.q.as_str(), common.c.as_str()) {
        ("symbolic", "symbolic") => Ok(Backend::Sym(SymCtx::symbolic())),
        ("symbolic", c_text) => Ok(Backend::Sym(SymCtx::with_c(parse_rational(c_text)?))),
        (q_text, "symbolic") => Err(Error::InvalidInput(format!(
            "--q {q_text} needs an explicit --c (a rational value or 0)"
        ))),
        (q_text, c_text) => {
            let q = parse_rational(q_text)?;
            let c = parse_rational(c_text)?;
            if c.is_zero() {
                // The point validator requires a nonzero c; park a unit
                // there and send c to zero in the context.
                let point = EvalPoint::new(q, BigRational::from_integer(1.into()))?;
                Ok(Backend::Num(NumCtx::new(point).with_c_zero()))
            } else {
                Ok(Backend::Num(NumCtx::new(EvalPoint::new(q, c)?)))
            }
        }
    }
}

fn emit(common: &CommonArgs, text: &str) -> Result<(), Error> {
    match &common.out {
        Some(path) => {
            let mut data = text.to_owned();
            data.push('\n');
            std::fs::write(path, data)
                .map_err(|e| Error::InvalidInput(format!("cannot write {}: {e}", path.display())))
        }
        None => {
            // Tolerate a closed pipe (`qclifford … | head`) instead of panicking.
            use std::io::Write;
            let stdout = std::io::stdout();
            let mut lock = stdout.lock();
            match writeln!(lock, "{text}").and_then(|()| lock.flush()) {
                Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => {
                    Err(Error::InvalidInput(format!("cannot write to stdout: {e}")))
                }
                _ => Ok(()),
            }
        }
    }
}

// ---------------------------------------------------------------------------
// nf
// ---------------------------------------------------------------------------

fn cmd_nf(args: &NfArgs) -> Result<ExitCode, Error> {
    let text = match backend(&args.common)? {
        Backend::Sym(c) => nf_text(args, c)?,
        Backend::Num(c) => nf_text(args, c)?,
    };
    emit(&args.common, &text)?;
    Ok(ExitCode::SUCCESS)
}

fn nf_text<C: CoeffCtx>(args: &NfArgs, coeff: C) -> Result<String, Error>
where
    C::F: Serialize,
{
    let ctx = AlgebraContext::new(args.common.n, coeff)?;
    let el = ctx.rewrite(&args.word)?;
    match args.format {
        Format::Pretty => Ok(ctx.render(&el)),
        Format::Json => ctx.to_json(&el),
    }
}

// ---------------------------------------------------------------------------
// verify
// ---------------------------------------------------------------------------

fn cmd_verify(args: &VerifyArgs) -> Result<ExitCode, Error> {
    if let Some(jobs) = args.jobs {
        // Only the first global-pool configuration sticks; later calls are
        // harmless no-ops.
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global();
    }
    let suite_name = args
        .suite_pos
        .clone()
        .or_else(|| args.suite_flag.clone())
        .ok_or_else(|| {
            Error::InvalidInput("verify needs a suite (positional or --suite)".into())
        })?;
    let suite: Suite = suite_name.parse()?;
    if !(3..=MAX_SUITE_RANK).contains(&args.common.n) {
        return Err(Error::InvalidInput(format!(
            "verification suites run for N in 3..={MAX_SUITE_RANK}, got {}",
            args.common.n
        )));
    }

    let (report, description) = match backend(&args.common)? {
        Backend::Sym(c) => {
            let opts = SuiteOptions::default();
            (run_suite(suite, args.common.n, &c, &opts)?, c.describe())
        }
        Backend::Num(c) => {
            let opts = SuiteOptions {
                specialized: true,
                ..SuiteOptions::default()
            };
            (run_suite(suite, args.common.n, &c, &opts)?, c.describe())
        }
    };

    let text = match args.format {
        Format::Pretty => pretty_report(suite, args.common.n, &description, &report),
        Format::Json => json_report(suite, args.common.n, &description, &report)?,
    };
    emit(&args.common, &text)?;
    Ok(if report.all_pass() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

/// Items sorted by key (stable, so duplicate keys keep their run order).
fn sorted_items(report: &CheckReport) -> Vec<&CheckItem> {
    let mut items: Vec<&CheckItem> = report.items().iter().collect();
    items.sort_by(|a, b| a.key.cmp(&b.key));
    items
}

fn pretty_report(suite: Suite, n: usize, description: &str, report: &CheckReport) -> String {
    let mut out = format!("suite {suite} on N={n}, coefficients {description}\n");
    let mut passed = 0usize;
    let mut failed = 0usize;
    let mut informational = 0usize;
    for item in sorted_items(report) {
        let status = if item.informational {
            informational += 1;
            "info"
        } else if item.pass {
            passed += 1;
            "pass"
        } else {
            failed += 1;
            "FAIL"
        };
        out.push_str(&format!("[{status}] {}: {}\n", item.key, item.detail));
    }
    out.push_str(&format!(
        "result: {passed} passed, {failed} failed, {informational} informational"
    ));
    out
}

fn json_report(
    suite: Suite,
    n: usize,
    description: &str,
    report: &CheckReport,
) -> Result<String, Error> {
    let items: Vec<Value> = sorted_items(report)
        .iter()
        .map(|item| {
            json!({
                "key": item.key,
                "pass": item.pass,
                "informational": item.informational,
                "detail": item.detail,
            })
        })
        .collect();
    let value = json!({
        "suite": suite.name(),
        "N": n,
        "coefficients": description,
        "all_pass": report.all_pass(),
        "items": items,
    });
    to_pretty(&value)
}

// ---------------------------------------------------------------------------
// export
// ---------------------------------------------------------------------------

fn cmd_export(args: &ExportArgs) -> Result<ExitCode, Error> {
    let value = match backend(&args.common)? {
        Backend::Sym(c) => export_value(args, &c)?,
        Backend::Num(c) => export_value(args, &c)?,
    };
    let text = to_pretty(&value)?;
    emit(&args.common, &text)?;
    Ok(ExitCode::SUCCESS)
}

fn parse_nu(text: &str) -> Result<i64, Error> {
    match text {
        "+1" | "1" => Ok(1),
        "-1" => Ok(-1),
        other => Err(Error::InvalidInput(format!(
            "--nu must be +1 or -1, got '{other}'"
        ))),
    }
}

fn parse_payload(text: &str) -> Result<Value, Error> {
    serde_json::from_str(text)
        .map_err(|e| Error::InvalidInput(format!("internal serialization failed: {e}")))
}

fn to_pretty(value: &Value) -> Result<String, Error> {
    serde_json::to_string_pretty(value)
        .map_err(|e| Error::InvalidInput(format!("internal serialization failed: {e}")))
}

/// Every generator in a fixed order: index-major, kinds in declaration
/// order, so exports are byte-stable.
fn all_generators(rank: usize) -> Vec<Generator> {
    let mut gens = Vec::with_capacity(5 * rank);
    for i in 1..=rank {
        for kind in GenKind::ALL {
            gens.push(Generator::new(kind, i));
        }
    }
    gens
}

fn export_value<C: CoeffCtx>(args: &ExportArgs, coeff: &C) -> Result<Value, Error>
where
    C::F: Serialize,
{
    let n_gens = args.common.n;
    match args.kind.as_str() {
        "spinrep" => {
            let nu = parse_nu(args.nu.as_deref().ok_or_else(|| {
                Error::InvalidInput("spinrep needs --nu +1 or --nu -1".into())
            })?)?;
            let uq = UqContext::new(AlgebraContext::new(n_gens, coeff.clone())?)?;
            let mut matrices = Vec::new();
            for g in all_generators(uq.rank()) {
                matrices.push(parse_payload(&uq.spin_rep(nu, g)?.to_json()?)?);
            }
            Ok(json!({
                "kind": "spinrep",
                "N": n_gens,
                "nu": nu,
                "matrices": matrices,
            }))
        }
        "t1" => {
            let uq = UqContext::new(AlgebraContext::new(n_gens, coeff.clone())?)?;
            let mut matrices = Vec::new();
            for g in all_generators(uq.rank()) {
                matrices.push(parse_payload(&uq.t1(g)?.to_json()?)?);
            }
            Ok(json!({
                "kind": "t1",
                "N": n_gens,
                "matrices": matrices,
            }))
        }
        "rhat" => {
            let braid = BraidContext::new(n_gens, coeff.clone())?;
            let operator = parse_payload(&braid.operator_json(&braid.rhat(), 2)?)?;
            Ok(json!({
                "kind": "rhat",
                "N": n_gens,
                "operator": operator,
            }))
        }
        "antisym" => {
            let k = args
                .k
                .ok_or_else(|| Error::InvalidInput("antisym needs --k".into()))?;
            let braid = BraidContext::new(n_gens, coeff.clone())?;
            let operator = parse_payload(&braid.operator_json(&braid.antisymmetrizer(k)?, k)?)?;
            Ok(json!({
                "kind": "antisym",
                "N": n_gens,
                "k": k,
                "operator": operator,
            }))
        }
        "z-elements" => {
            let ctx = AlgebraContext::new(n_gens, coeff.clone())?;
            let (name, el) = if ctx.is_odd() {
                ("z1", z1(&ctx)?)
            } else {
                ("z0", z0(&ctx)?)
            };
            Ok(json!({
                "kind": "z-elements",
                "N": n_gens,
                "elements": { name: parse_payload(&ctx.to_json(&el)?)? },
            }))
        }
        "pi-images" => {
            let uq = UqContext::new(AlgebraContext::new(n_gens, coeff.clone())?)?;
            let mut images = Vec::new();
            for g in all_generators(uq.rank()) {
                let el = uq.pi(g)?;
                images.push(json!({
                    "generator": g.to_string(),
                    "image": parse_payload(&uq.algebra().to_json(&el)?)?,
                }));
            }
            Ok(json!({
                "kind": "pi-images",
                "N": n_gens,
                "images": images,
            }))
        }
        other => Err(Error::InvalidInput(format!(
            "unknown export kind '{other}' (expected spinrep, t1, rhat, antisym, \
             z-elements, pi-images)"
        ))),
    }
}
