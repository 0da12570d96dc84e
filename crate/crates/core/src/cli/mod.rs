//! The `natspec` command line.
//!
//! Every command prints one JSON document. Exit codes: 0 success, 1 domain
//! failure (for example a graph that cannot be reconstructed), 2 input error,
//! 3 polynomial syntax error.

pub mod experiment;

use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};

use crate::closure::{closure_dim, dimension_bounds_report};
use crate::dpoly::parse;
use crate::error::Error;
use crate::graphlab::{
    are_isomorphic, graph6_emit, graph6_parse, intersection_array, parse_corpus, reconstruct, srg_parameters, Graph,
};
use crate::specpipe::{build_ds_dpoly, ds_compare, fingerprint, natural_spectrum, DsBundle};
use experiment::Mode;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Parser)]
#[command(name = "natspec", version, about = "Double algebras and natural spectra of graphs, in exact arithmetic")]
pub struct Cli {
    /// Worker threads; falls back to NATSPEC_THREADS, then to the number of cores.
    #[arg(long, global = true, env = "NATSPEC_THREADS")]
    pub threads: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Dimension, bounds, reconstruction and regularity data of one graph.
    Analyze {
        graph6: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Natural spectrum of a graph under a double polynomial.
    Spectrum {
        graph6: String,
        #[arg(long)]
        poly: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Builds the merged polynomial for a corpus of same-size graphs.
    DsBuild {
        #[arg(long)]
        corpus: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Compares two graphs under a bundle built by `ds-build`.
    DsCheck {
        bundle: PathBuf,
        g1: String,
        g2: String,
        /// Corpus the bundle must have been built from.
        #[arg(long)]
        corpus: Option<PathBuf>,
    },
    /// Seeded experiments; `--n` takes a comma-separated list.
    Experiment {
        #[arg(long, value_enum)]
        mode: Mode,
        #[arg(long, value_delimiter = ',', required = true)]
        n: Vec<usize>,
        /// Samples per order; relabelings per graph for ds_family.
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Rebuilds a graph from its double algebra.
    Reconstruct {
        graph6: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// A failed command: exit code and message for stderr, and a report to
/// print anyway when the failure is a result rather than an error.
#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
    pub report: Option<Value>,
}

impl Failure {
    fn input(message: impl Into<String>) -> Self {
        Failure { code: 2, message: message.into(), report: None }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Syntax { .. } | Error::UnknownToken { .. } | Error::InvalidScalar(_) => 3,
            Error::Graph6(_)
            | Error::Json(_)
            | Error::Fingerprint { .. }
            | Error::MixedSizes
            | Error::EmptyFamily
            | Error::InvalidArgument(_)
            | Error::TooLarge(_)
            | Error::DimensionMismatch { .. } => 2,
            _ => 1,
        };
        Failure { code, message: e.to_string(), report: None }
    }
}

/// Runs one command and returns the JSON it prints.
pub fn run(cli: &Cli) -> Result<Value, Failure> {
    if let Some(t) = cli.threads {
        if t == 0 {
            return Err(Failure::input("--threads must be at least 1"));
        }
        // the global pool can only be set once per process
        let _ = rayon::ThreadPoolBuilder::new().num_threads(t).build_global();
    }
    match &cli.command {
        Command::Analyze { graph6, out } => write_out(analyze(&graph(graph6)?)?, out.as_deref()),
        Command::Spectrum { graph6, poly, out } => {
            let g = graph(graph6)?;
            let p = parse(poly)?;
            let s = natural_spectrum(&p, &g);
            write_out(json!({"version": VERSION, "graph6": graph6, "poly": poly, "n": g.n(), "spectrum": s}), out.as_deref())
        }
        Command::DsBuild { corpus, out } => {
            let family = corpus_file(corpus)?;
            let bundle = build_ds_dpoly(&family)?;
            std::fs::write(out, serde_json::to_string(&bundle).map_err(Error::from)?)
                .map_err(|e| Failure::input(format!("{}: {e}", out.display())))?;
            Ok(json!({
                "version": VERSION,
                "n": bundle.n,
                "members": family.len(),
                "d_count": bundle.d.len(),
                "fingerprint": bundle.fingerprint,
                "bundle": out.display().to_string(),
            }))
        }
        Command::DsCheck { bundle, g1, g2, corpus } => ds_check(bundle, g1, g2, corpus.as_deref()),
        Command::Experiment { mode, n, trials, seed, out } => {
            if *trials == 0 {
                return Err(Failure::input("--trials must be at least 1"));
            }
            let results: Vec<Value> = n
                .iter()
                .map(|&n| {
                    Ok(match mode {
                        Mode::BesFrequency => to_value(experiment::bes_frequency(n, *trials, *seed)?),
                        Mode::CertifyAndConfirm => to_value(experiment::certify_and_confirm(n, *trials, *seed)?),
                        Mode::DsFamily => to_value(experiment::ds_family_exhaustive(n, *trials, *seed)?),
                    })
                })
                .collect::<Result<_, Failure>>()?;
            write_out(json!({"version": VERSION, "mode": mode, "seed": seed, "trials": trials, "results": results}), out.as_deref())
        }
        Command::Reconstruct { graph6, out } => {
            let g = graph(graph6)?;
            match reconstruct(&g) {
                Ok(r) => write_out(
                    json!({
                        "version": VERSION,
                        "graph6": graph6,
                        "reconstructed": graph6_emit(&r.graph),
                        "vertex_map": r.vertex_map,
                        "mismatches": r.mismatches(&g),
                    }),
                    out.as_deref(),
                ),
                Err(e) => Err(Failure {
                    code: 1,
                    message: e.to_string(),
                    report: Some(json!({"version": VERSION, "graph6": graph6, "reconstruct": e.to_string(), "diagonal_idempotents": e.diagonal_idempotents})),
                }),
            }
        }
    }
}

fn to_value(v: impl Serialize) -> Value {
    serde_json::to_value(v).expect("reports serialize")
}

fn graph(s: &str) -> Result<Graph, Failure> {
    Ok(graph6_parse(s.trim())?)
}

fn corpus_file(path: &Path) -> Result<Vec<Graph>, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure::input(format!("{}: {e}", path.display())))?;
    Ok(parse_corpus(&text)?)
}

fn write_out(report: Value, out: Option<&Path>) -> Result<Value, Failure> {
    if let Some(path) = out {
        let text = serde_json::to_string_pretty(&report).expect("reports serialize");
        std::fs::write(path, text + "\n").map_err(|e| Failure::input(format!("{}: {e}", path.display())))?;
    }
    Ok(report)
}

/// The `analyze` report.
pub fn analyze(g: &Graph) -> Result<Value, Failure> {
    let n = g.n();
    let dim = closure_dim(&g.adjacency());
    let connected = g.is_connected();
    let bounds = if connected && n > 0 { Some(dimension_bounds_report(g)?) } else { None };
    let rec = match reconstruct(g) {
        Ok(r) if r.mismatches(g) == 0 => "ok".to_string(),
        Ok(r) => format!("mismatch {}", r.mismatches(g)),
        Err(e) => format!("failed |V_a|={}", e.diagonal_idempotents),
    };
    Ok(json!({
        "version": VERSION,
        "graph6": graph6_emit(g),
        "n": n,
        "edges": g.edge_count(),
        "dim": dim,
        "full": dim == n * n,
        "connected": connected,
        "diam": bounds.as_ref().map(|b| b.diam),
        "bounds_ok": bounds.as_ref().map(|b| b.lower_ok && b.upper_ok),
        "lower_bound_tight": bounds.as_ref().map(|b| b.lower_tight),
        "reconstruct": rec,
        "srg": srg_parameters(g),
        "intersection_array": intersection_array(g),
    }))
}

fn ds_check(bundle: &Path, g1: &str, g2: &str, corpus: Option<&Path>) -> Result<Value, Failure> {
    let text = std::fs::read_to_string(bundle).map_err(|e| Failure::input(format!("{}: {e}", bundle.display())))?;
    let b: DsBundle = serde_json::from_str(&text).map_err(|e| Failure::input(format!("bundle: {e}")))?;
    if let Some(path) = corpus {
        let found = fingerprint(&corpus_file(path)?);
        if found != b.fingerprint {
            return Err(Error::Fingerprint { expected: b.fingerprint.clone(), found }.into());
        }
    }
    let (h1, h2) = (graph(g1)?, graph(g2)?);
    if h1.n() != b.n || h2.n() != b.n {
        return Err(Failure::input(format!("bundle is for {} vertices", b.n)));
    }
    let verdict = ds_compare(&h1, &h2, &b.p)?;
    let iso = if b.n <= 8 { are_isomorphic(&h1, &h2)?.decided() } else { None };
    Ok(json!({
        "version": VERSION,
        "fingerprint": b.fingerprint,
        "g1": g1,
        "g2": g2,
        "verdict": verdict,
        "isomorphic": iso,
    }))
}
