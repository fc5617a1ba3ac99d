//! `gammoid`: batch front end for representations, transformations and the
//! arc-complexity searches.
//!
//! JSON results go to stdout (or `--output`), human-readable summaries to
//! stderr. Exit codes:
//!
//! | code | meaning |
//! |------|---------|
//! | 0 | success |
//! | 1 | bad input or failed precondition |
//! | 2 | usage error |
//! | 3 | search budget exhausted |
//! | 4 | property violated, verification failed, or conjecture false |

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use gammoid_core::checks::{run_suite, CheckConfig, SUITES};
use gammoid_core::complexity::{parse_rational, uniform_conjecture};
use gammoid_core::{
    arc_complexity, f_width, gamma, in_class, Error, Matroid, Representation, SearchLimits,
    StandardRepresentation, SuperAdditiveFn,
};

#[derive(Parser)]
#[command(name = "gammoid", version, about = "Gammoid representations and their arc-complexity")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    #[command(flatten)]
    limits: LimitArgs,

    /// Write JSON here instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct LimitArgs {
    /// Largest arc count tried by the search.
    #[arg(long = "limits.max-arcs", global = true, value_parser = clap::value_parser!(u64).range(1..))]
    max_arcs: Option<u64>,

    /// Largest number of internal (non-ground) vertices.
    #[arg(long = "limits.max-internal", global = true, value_parser = clap::value_parser!(u64).range(1..))]
    max_internal: Option<u64>,

    #[arg(long = "limits.max-candidates", global = true, value_parser = clap::value_parser!(u64).range(1..))]
    max_candidates: Option<u64>,

    #[arg(long = "limits.wall-secs", global = true, value_parser = clap::value_parser!(u64).range(1..))]
    wall_secs: Option<u64>,

    /// Search worker threads; defaults to one per core.
    #[arg(long, global = true, value_parser = clap::value_parser!(u64).range(1..))]
    workers: Option<u64>,
}

impl LimitArgs {
    fn limits(&self) -> SearchLimits {
        let mut l = SearchLimits::default();
        if let Some(v) = self.max_arcs {
            l.max_arcs = v as usize;
        }
        if let Some(v) = self.max_internal {
            l.max_internal = v as usize;
        }
        if let Some(v) = self.max_candidates {
            l.max_candidates = v;
        }
        l.wall_secs = self.wall_secs;
        if let Some(v) = self.workers {
            l.workers = v as usize;
        }
        l
    }
}

#[derive(Subcommand)]
enum Command {
    /// Print the matroid a representation file represents.
    Eval { rep: PathBuf },

    /// Transform a representation.
    Transform {
        #[arg(value_enum)]
        op: TransformOp,
        rep: PathBuf,
        /// Comma-separated base for standardize and rebase; standardize
        /// defaults to the first base.
        #[arg(long, value_delimiter = ',')]
        base: Option<Vec<String>>,
        /// Comma-separated element set for restrict and contract.
        #[arg(long, value_delimiter = ',', num_args = 0..)]
        x: Option<Vec<String>>,
        /// Compare the matroid of the result with the expected one.
        #[arg(long)]
        verify: bool,
    },

    /// Exhaustive arc-complexity search on a matroid or representation file.
    ArcComplexity { input: PathBuf },

    /// f-width of a matroid or representation file.
    Fwidth {
        input: PathBuf,
        #[arg(long = "f", default_value = "fhat")]
        f: String,
    },

    /// Whether the f-width is at most q.
    InClass {
        input: PathBuf,
        #[arg(long = "f", default_value = "fhat")]
        f: String,
        #[arg(long)]
        q: String,
    },

    /// Compare arcC(U_{r,n}) with r(n - r).
    ConjectureUniform { r: usize, n: usize },

    /// Run a property suite.
    Check {
        /// One of the suite names, or `all`.
        suite: String,
        /// Vertex bound for digraph suites, ground bound for matroid suites.
        #[arg(long, default_value_t = 4)]
        size: usize,
        #[arg(long, default_value_t = 100)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum TransformOp {
    Standardize,
    Dualize,
    Restrict,
    Contract,
    Rebase,
}

/// A run that completed but whose result is a negative verdict.
#[derive(Debug)]
struct Violation(String);

impl std::fmt::Display for Violation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Violation {}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}

fn exit_code(e: &anyhow::Error) -> u8 {
    if e.downcast_ref::<Violation>().is_some() {
        return 4;
    }
    match e.downcast_ref::<Error>() {
        Some(Error::BudgetExhausted { .. }) => 3,
        _ => 1,
    }
}

fn run(cli: &Cli) -> anyhow::Result<()> {
    let limits = cli.limits.limits();
    let emit = |v: Value| write_json(cli.output.as_deref(), &v);
    match &cli.command {
        Command::Eval { rep } => {
            let rep = read_rep(rep)?;
            let m = gamma(&rep)?;
            eprintln!("rank {} on {} elements, {} bases", m.rank(), m.len(), m.bases().len());
            emit(matroid_json(&m)?)
        }
        Command::Transform { op, rep, base, x, verify } => {
            let rep = read_rep(rep)?;
            let (out, expected) = transform(&rep, *op, base.as_deref(), x.as_deref())?;
            emit(serde_json::to_value(&out)?)?;
            if *verify {
                let got = gamma(&out)?;
                if got != expected {
                    bail!(Violation(format!(
                        "verification failed: result represents {}",
                        serde_json::to_string(&got)?
                    )));
                }
                eprintln!("verified: result represents the expected matroid");
            }
            Ok(())
        }
        Command::ArcComplexity { input } => {
            let m = read_matroid(input)?;
            let c = arc_complexity(&m, &limits)?;
            eprintln!(
                "arcC = {} ({}; {} candidates, {} ms)",
                c.value,
                if c.exhaustive { "exhaustive" } else { "not exhaustive" },
                c.stats.candidates,
                c.stats.elapsed_ms
            );
            emit(serde_json::to_value(&c)?)
        }
        Command::Fwidth { input, f } => {
            let m = read_matroid(input)?;
            let f = parse_fn(f)?;
            let w = f_width(&m, &f, &limits)?;
            eprintln!(
                "{}-width = {}{}",
                w.function,
                gammoid_core::complexity::format_rational(&w.value),
                if w.exhaustive { "" } else { " (lower bound)" }
            );
            emit(serde_json::to_value(&w)?)
        }
        Command::InClass { input, f, q } => {
            let m = read_matroid(input)?;
            let f = parse_fn(f)?;
            let q = parse_rational(q)?;
            let member = in_class(&m, &f, q, &limits)?;
            eprintln!("{}", if member { "in class" } else { "not in class" });
            emit(json!({
                "function": f.to_string(),
                "q": gammoid_core::complexity::format_rational(&q),
                "member": member,
            }))
        }
        Command::ConjectureUniform { r, n } => {
            let v = uniform_conjecture(*r, *n, &limits)?;
            eprintln!(
                "arcC(U_{{{r},{n}}}) = {}, r(n - r) = {}: {}",
                v.certificate.value,
                v.expected,
                if v.holds { "holds" } else { "fails" }
            );
            emit(serde_json::to_value(&v)?)?;
            if !v.holds {
                bail!(Violation(format!("conjecture fails for U_{{{r},{n}}}")));
            }
            Ok(())
        }
        Command::Check { suite, size, samples, seed } => {
            if suite != "all" && !SUITES.contains(&suite.as_str()) {
                bail!("unknown suite `{suite}`; expected one of {SUITES:?} or all");
            }
            let cfg = CheckConfig { size: *size, samples: *samples, seed: *seed, limits };
            let reports = run_suite(suite, &cfg)?;
            eprintln!("{:<10} {:>10}  result", "suite", "cases");
            for r in &reports {
                let status = if r.passed() { "pass".to_string() } else { format!("FAIL ({})", r.failures.len()) };
                eprintln!("{:<10} {:>10}  {status}", r.name, r.cases);
            }
            emit(serde_json::to_value(&reports)?)?;
            let failed: Vec<&str> = reports.iter().filter(|r| !r.passed()).map(|r| r.name.as_str()).collect();
            if !failed.is_empty() {
                bail!(Violation(format!("failed suites: {}", failed.join(", "))));
            }
            Ok(())
        }
    }
}

/// The transformed representation and the matroid it must represent.
fn transform(
    rep: &Representation,
    op: TransformOp,
    base: Option<&[String]>,
    x: Option<&[String]>,
) -> anyhow::Result<(Representation, Matroid)> {
    let m = gamma(rep)?;
    let standard = || StandardRepresentation::new(rep.clone()).context("input is not standard");
    let need_x = || x.ok_or_else(|| anyhow!("--x is required for this operation"));
    Ok(match op {
        TransformOp::Standardize => {
            let base = match base {
                Some(b) => rep.ground_vertices(b)?,
                None => {
                    let first = m.bases().first().copied().unwrap_or(0);
                    rep.ground_vertices(&m.labels_of(first))?
                }
            };
            (rep.standardize(&base)?.into_inner(), m)
        }
        TransformOp::Rebase => {
            let base = base.ok_or_else(|| anyhow!("--base is required for rebase"))?;
            (rep.rebase(&rep.ground_vertices(base)?)?, m)
        }
        TransformOp::Dualize => (standard()?.dual_representation().into_inner(), m.dual()),
        TransformOp::Restrict => {
            let x = need_x()?;
            let out = standard()?.restrict_representation(&rep.ground_vertices(x)?)?;
            (out.into_inner(), m.restrict(x)?)
        }
        TransformOp::Contract => {
            let x = need_x()?;
            let out = standard()?.contract_representation(&rep.ground_vertices(x)?)?;
            (out.into_inner(), m.contract_to(x)?)
        }
    })
}

fn parse_fn(s: &str) -> anyhow::Result<SuperAdditiveFn> {
    if let Some(rest) = s.strip_prefix("table:") {
        let inline = !rest.is_empty() && rest.split(',').all(|v| v.trim().parse::<u64>().is_ok());
        if !inline {
            let text = fs::read_to_string(rest).with_context(|| format!("reading table {rest}"))?;
            let vals: Vec<u64> =
                serde_json::from_str(&text).with_context(|| format!("{rest}: expected an array of integers"))?;
            return Ok(SuperAdditiveFn::Table(vals));
        }
    }
    Ok(s.parse()?)
}

fn read_json(path: &Path) -> anyhow::Result<Value> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("{}: invalid JSON", path.display()))
}

fn read_rep(path: &Path) -> anyhow::Result<Representation> {
    let v = read_json(path)?;
    serde_json::from_value(v).with_context(|| format!("{}: not a representation", path.display()))
}

/// A matroid file, or a representation file whose matroid is used.
fn read_matroid(path: &Path) -> anyhow::Result<Matroid> {
    let v = read_json(path)?;
    if v.get("digraph").is_some() {
        let rep: Representation =
            serde_json::from_value(v).with_context(|| format!("{}: not a representation", path.display()))?;
        return Ok(gamma(&rep)?);
    }
    serde_json::from_value(v).with_context(|| format!("{}: not a matroid", path.display()))
}

fn matroid_json(m: &Matroid) -> anyhow::Result<Value> {
    let mut v = serde_json::to_value(m)?;
    v["rank"] = json!(m.rank());
    Ok(v)
}

fn write_json(path: Option<&Path>, v: &Value) -> anyhow::Result<()> {
    let text = serde_json::to_string_pretty(v)?;
    match path {
        Some(p) => fs::write(p, text + "\n").with_context(|| format!("writing {}", p.display())),
        None => {
            let mut out = std::io::stdout().lock();
            writeln!(out, "{text}")?;
            Ok(())
        }
    }
}
