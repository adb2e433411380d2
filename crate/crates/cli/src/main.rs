//! `prepol`: run the prepolarization checks and emit reports.
//!
//! Exit status: 0 when every condition check passes, 1 when one fails or the
//! run aborts, 2 on invalid flags or configuration.

mod config;

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context;
use clap::{Parser, Subcommand, ValueEnum};
use prepol_core::verify::{self, run_case_with};
use prepol_core::{
    closed_form_decompose, kleber_decompose, selftest, AffineDiagram, CaseId, CaseReport, Decomposition, Engine,
    Family, VectorExpr, Word,
};
use rayon::prelude::*;
use serde_json::{json, Value};

use config::{resolve_workers, usage, FileConfig, Format, RunConfig, UsageError, VerifyFlags};

#[derive(Parser, Debug)]
#[command(name = "prepol", version, about = "Exact prepolarization checks for exceptional KR modules")]
struct Cli {
    /// TOML configuration file; flags take precedence over it.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Worker threads.
    #[arg(long, global = true, env = "PREPOL_WORKERS")]
    workers: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check conditions (i) and (ii) for the selected cases at levels 1..=smax.
    Verify {
        /// Family, e.g. `e6_1`; without --node selects every listed node of it.
        #[arg(long)]
        family: Option<String>,
        #[arg(long, requires = "family")]
        node: Option<usize>,
        /// Additional cases as FAMILY:NODE (repeatable).
        #[arg(long = "case")]
        cases: Vec<String>,
        #[arg(long)]
        smax: Option<i64>,
        /// Nesting bound for the Serre vanishing search.
        #[arg(long)]
        serre_bound: Option<usize>,
        #[arg(long, value_enum)]
        format: Option<Format>,
        /// Report path; the report goes to stdout when absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Classical decomposition of W^{r,s} as JSON.
    Decompose {
        #[arg(long)]
        family: String,
        #[arg(long)]
        node: usize,
        #[arg(long)]
        s: i64,
        #[arg(long, value_enum, default_value_t = Source::Auto)]
        source: Source,
    },
    /// Normal form and squared norm of a word applied to the extremal vector.
    Norm {
        #[arg(long)]
        family: String,
        #[arg(long)]
        node: usize,
        #[arg(long)]
        s: i64,
        /// Word such as `E0^2 E2 F3`; the rightmost letter acts first.
        word: String,
    },
    /// Invariant suites for the arithmetic, root data and representation layers.
    Selftest,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Source {
    /// Kleber tree for untwisted types, closed forms otherwise.
    Auto,
    Kleber,
    Closed,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("prepol: {e:#}");
            if e.downcast_ref::<UsageError>().is_some() {
                ExitCode::from(2)
            } else {
                ExitCode::from(1)
            }
        }
    }
}

fn run(cli: Cli) -> anyhow::Result<bool> {
    let file = match &cli.config {
        Some(p) => FileConfig::load(p)?,
        None => FileConfig::default(),
    };
    let workers = resolve_workers(cli.workers, &file)?;
    verify::init_pool(workers)?;
    match cli.command {
        Command::Verify {
            family,
            node,
            cases,
            smax,
            serre_bound,
            format,
            out,
        } => {
            let flags = VerifyFlags {
                family,
                node,
                cases,
                smax,
                serre_bound,
                format,
                out,
            };
            run_verify(&RunConfig::resolve(flags, file)?)
        }
        Command::Decompose {
            family,
            node,
            s,
            source,
        } => {
            let d = decompose(&family, node, s, source)?;
            println!("{}", serde_json::to_string_pretty(&d.to_json())?);
            Ok(true)
        }
        Command::Norm { family, node, s, word } => norm(&family, node, s, &word),
        Command::Selftest => Ok(run_selftest()),
    }
}

fn run_verify(cfg: &RunConfig) -> anyhow::Result<bool> {
    let jobs: Vec<(CaseId, i64)> = cfg
        .cases
        .iter()
        .flat_map(|&(id, smax)| (1..=smax).map(move |s| (id, s)))
        .collect();
    let reports: Vec<CaseReport> = verify::pool().install(|| {
        jobs.par_iter()
            .map(|&(id, s)| run_case_with(id, s, cfg.serre_bound).with_context(|| format!("{id} s={s}")))
            .collect::<anyhow::Result<_>>()
    })?;
    let pass = reports.iter().all(CaseReport::conditions_pass);
    let body = match cfg.format {
        Format::Json => {
            let v = json!({
                "pass": pass,
                "reports": reports.iter().map(CaseReport::to_json).collect::<Vec<Value>>(),
            });
            serde_json::to_string_pretty(&v)? + "\n"
        }
        Format::Text => text_report(&reports, pass),
    };
    match &cfg.out {
        Some(path) => write_atomic(path, body.as_bytes())?,
        None => std::io::stdout().write_all(body.as_bytes())?,
    }
    Ok(pass)
}

fn text_report(reports: &[CaseReport], pass: bool) -> String {
    let mut out = String::new();
    for r in reports {
        let ok = r.conditions.iter().filter(|c| c.pass).count();
        let diffs = r.crosscheck.iter().filter(|c| !c.matches).count();
        out += &format!(
            "{} s={}: conditions {ok}/{} pass, cross-check {diffs}/{} differ\n",
            r.case,
            r.s,
            r.conditions.len(),
            r.crosscheck.len()
        );
        for c in r.conditions.iter().filter(|c| !c.pass) {
            out += &format!(
                "  FAIL ({}) k={} kp={:?} i={:?}: {} not in {}\n",
                c.kind, c.k, c.kp, c.i, c.value, c.required
            );
        }
        for x in r.crosscheck.iter().filter(|x| !x.matches) {
            let tag = if x.advisory { "advisory" } else { "diff" };
            out += &format!("  {tag} {}: engine {} vs closed form {}\n", x.label, x.engine, x.paper);
        }
    }
    out += if pass { "all conditions pass\n" } else { "some conditions FAIL\n" };
    out
}

/// Writes to a temporary file beside `path` and renames it into place.
fn write_atomic(path: &Path, bytes: &[u8]) -> anyhow::Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).with_context(|| format!("creating file in {}", dir.display()))?;
    tmp.write_all(bytes)?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).with_context(|| format!("writing {}", path.display()))?;
    Ok(())
}

fn family_arg(s: &str) -> anyhow::Result<Family> {
    s.parse().map_err(|e| usage(format!("{e}")))
}

fn decompose(family: &str, node: usize, s: i64, source: Source) -> anyhow::Result<Decomposition> {
    let f = family_arg(family)?;
    if s < 1 {
        return Err(usage("s must be at least 1"));
    }
    let closed = || -> anyhow::Result<Decomposition> {
        let id = CaseId::lookup(f, node).map_err(|e| usage(format!("{e}")))?;
        Ok(closed_form_decompose(id, s)?)
    };
    let kleber = || -> anyhow::Result<Decomposition> {
        if !AffineDiagram::get(f).classical_nodes().contains(&node) {
            return Err(usage(format!("node {node} is not a classical node of {f}")));
        }
        Ok(kleber_decompose(f, node, s)?)
    };
    match source {
        Source::Closed => closed(),
        Source::Kleber => kleber(),
        Source::Auto if f.is_simply_laced() => kleber(),
        Source::Auto => closed(),
    }
}

fn norm(family: &str, node: usize, s: i64, word: &str) -> anyhow::Result<bool> {
    let f = family_arg(family)?;
    let id = CaseId::lookup(f, node).map_err(|e| usage(format!("{e}")))?;
    if s < 1 {
        return Err(usage("s must be at least 1"));
    }
    let w: Word = word.parse().map_err(|e| usage(format!("{e}")))?;
    let engine = Engine::for_case(id, s)?;
    let (normal, certs) = verify::pool().install(|| engine.normalize(&VectorExpr::from_word(w.clone())))?;
    let n = verify::pool().install(|| engine.norm(&normal))?;
    println!("normal form: {normal}");
    println!("norm: {n}");
    for c in certs {
        println!("certificate: {c}");
    }
    Ok(true)
}

fn run_selftest() -> bool {
    let mut ok = true;
    for r in selftest::run_all() {
        let status = if r.passed() { "PASS" } else { "FAIL" };
        println!("{}: {status} ({} checks)", r.name, r.checks);
        for f in &r.failures {
            println!("  {f}");
        }
        ok &= r.passed();
    }
    ok
}
