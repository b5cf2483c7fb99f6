use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use anyhow::{anyhow, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};

use niche_core::constructor::ConstructError;
use niche_core::hypergraph::FlowerLayout;
use niche_core::io::{self as format, FormatError};
use niche_core::oracle::{OracleError, MAX_VERTICES};
use niche_core::{
    classify_t, construct_good_digraph, flower_digraph, generate, is_good_digraph, niche_hypergraph, niche_number_upto,
    Classification, FamilySpec, Hypergraph, NicheNumber, SearchBudget,
};

const VERIFY_FAILED: u8 = 1;
const FORMAT_ERROR: u8 = 2;
const NOT_IN_CLASS: u8 = 3;
const BUDGET_EXCEEDED: u8 = 4;

#[derive(Parser)]
#[command(name = "niche", version, about = "Niche hypergraphs of acyclic digraphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Family {
    Path,
    Nova,
    Flower,
    Random,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a hypergraph of a named family.
    Gen {
        #[arg(long = "type", value_enum)]
        family: Family,
        /// Edge size (uniform families).
        #[arg(long, default_value_t = 3)]
        r: usize,
        /// Number of edges of a hyperpath or random hypertree.
        #[arg(long, default_value_t = 3)]
        k: usize,
        /// Number of edges of a hypernova.
        #[arg(long, default_value_t = 3)]
        m: usize,
        /// Maximum degree of a flower.
        #[arg(long, default_value_t = 3)]
        s: usize,
        #[arg(long, env = "NICHE_SEED", default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 3)]
        min_size: usize,
        #[arg(long, default_value_t = 6)]
        max_size: usize,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Print degrees, rank, twigs, trunks and buds.
    Analyze { hypergraph: PathBuf },
    /// Decide membership in the class of linear hypertrees with maximum degree two.
    Classify { hypergraph: PathBuf },
    /// Build an acyclic digraph whose niche hypergraph is the input.
    Construct {
        hypergraph: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// Write the construction steps as JSON.
        #[arg(long)]
        trace: Option<PathBuf>,
    },
    /// Check that a digraph is a good realization of a hypergraph.
    Verify { hypergraph: PathBuf, digraph: PathBuf },
    /// Compute the niche hypergraph of a digraph.
    Nh {
        digraph: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Compute the niche number by exhaustive search.
    Number {
        hypergraph: PathBuf,
        #[arg(long, default_value_t = 2)]
        kmax: usize,
        #[arg(long, default_value_t = 1)]
        workers: usize,
        #[arg(long)]
        max_dags: Option<u64>,
        /// Seconds.
        #[arg(long)]
        time_limit: Option<f64>,
        #[arg(long, default_value_t = MAX_VERTICES)]
        max_vertices: usize,
    },
    /// Emit Graphviz DOT for a digraph or hypergraph file.
    ExportDot {
        input: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

/// An error carrying the process exit code.
struct Failure {
    code: u8,
    error: anyhow::Error,
}

impl Failure {
    fn new(code: u8, error: impl Into<anyhow::Error>) -> Self {
        Failure { code, error: error.into() }
    }
}

impl From<anyhow::Error> for Failure {
    fn from(error: anyhow::Error) -> Self {
        Failure { code: FORMAT_ERROR, error }
    }
}

impl From<FormatError> for Failure {
    fn from(error: FormatError) -> Self {
        Failure::new(FORMAT_ERROR, error)
    }
}

fn read_input(path: &Path) -> Result<String> {
    if path == Path::new("-") {
        let mut text = String::new();
        io::stdin().read_to_string(&mut text).context("reading stdin")?;
        return Ok(text);
    }
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn write_output(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) if p != Path::new("-") => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        _ => io::stdout().write_all(text.as_bytes()).context("writing stdout"),
    }
}

fn read_hypergraph(path: &Path) -> Result<Hypergraph, Failure> {
    let text = read_input(path)?;
    format::parse_hypergraph(&text).map_err(|e| Failure::new(FORMAT_ERROR, anyhow!("{}: {e}", path.display())))
}

fn read_digraph(path: &Path) -> Result<niche_core::Digraph, Failure> {
    let text = read_input(path)?;
    format::parse_digraph(&text).map_err(|e| Failure::new(FORMAT_ERROR, anyhow!("{}: {e}", path.display())))
}

/// The flower with this hypergraph's degree and rank, if it is exactly the
/// generated one.
fn as_flower(h: &Hypergraph) -> Option<(usize, usize)> {
    let (s, r) = (h.max_degree(), h.rank()?);
    let layout = FlowerLayout::new(r, s).ok()?;
    (layout.hypergraph() == *h).then_some((r, s))
}

fn run(command: Command) -> Result<u8, Failure> {
    match command {
        Command::Gen { family, r, k, m, s, seed, min_size, max_size, output } => {
            let spec = match family {
                Family::Path => FamilySpec::Hyperpath { edges: k, size: r },
                Family::Nova => FamilySpec::Hypernova { edges: m, size: r },
                Family::Flower => FamilySpec::Flower { degree: s, size: r },
                Family::Random => FamilySpec::RandomT { edges: k, min_size, max_size, seed },
            };
            let h = generate(&spec).map_err(|e| Failure::new(FORMAT_ERROR, e))?;
            write_output(output.as_deref(), &format::hypergraph_to_json(&h))?;
            Ok(0)
        }
        Command::Analyze { hypergraph } => {
            let h = read_hypergraph(&hypergraph)?;
            let report = h.report();
            let opt = |x: Option<usize>| x.map_or("absent".to_string(), |x| x.to_string());
            let mut out = String::new();
            out += &format!("vertices {}\nedges {}\n", h.vertex_count(), h.edge_count());
            out += &format!(
                "max_degree {}\nrank {}\nanti_rank {}\n",
                report.max_degree,
                opt(report.rank),
                opt(report.anti_rank)
            );
            out += &format!("linear {}\nconnected {}\n", report.is_linear, report.is_connected);
            for (v, d) in &report.degree {
                out += &format!("degree {v} {d}\n");
            }
            for (e, d) in &report.edge_degree {
                let kind = if report.twigs.contains(e) { "twig" } else { "trunk" };
                out += &format!("edge {e} {d} {kind}\n");
            }
            let names = |vs: &std::collections::BTreeSet<niche_core::VertexId>| {
                vs.iter().map(|v| v.as_str()).collect::<Vec<_>>().join(",")
            };
            out += &format!("buds {}\nisolated {}\n", names(&report.buds), names(&report.isolated));
            out += &format!("class {}\n", classify_t(&h));
            write_output(None, &out)?;
            Ok(0)
        }
        Command::Classify { hypergraph } => {
            let h = read_hypergraph(&hypergraph)?;
            let verdict = classify_t(&h);
            println!("{verdict}");
            Ok(if verdict.is_in() { 0 } else { NOT_IN_CLASS })
        }
        Command::Construct { hypergraph, output, trace } => {
            let h = read_hypergraph(&hypergraph)?;
            if let Classification::NotInT(reason) = classify_t(&h) {
                let Some((r, s)) = as_flower(&h) else {
                    return Err(Failure::new(NOT_IN_CLASS, anyhow!("NOT_IN_T: {reason}")));
                };
                let (_, d) = flower_digraph(r, s).map_err(|e| Failure::new(VERIFY_FAILED, e))?;
                if trace.is_some() {
                    eprintln!("note: flower construction has no trace");
                }
                write_output(output.as_deref(), &format::digraph_to_json(&d))?;
                return Ok(0);
            }
            let (d, steps) = construct_good_digraph(&h).map_err(|e| match e {
                ConstructError::NotInT(_) => Failure::new(NOT_IN_CLASS, e),
                e => Failure::new(VERIFY_FAILED, e),
            })?;
            if let Some(path) = trace {
                write_output(Some(&path), &format::trace_to_json(&steps))?;
            }
            write_output(output.as_deref(), &format::digraph_to_json(&d))?;
            Ok(0)
        }
        Command::Verify { hypergraph, digraph } => {
            let h = read_hypergraph(&hypergraph)?;
            let d = read_digraph(&digraph)?;
            let report = is_good_digraph(&d, &h);
            if report.is_good() {
                println!("GOOD");
                return Ok(0);
            }
            println!("NOT_GOOD");
            for v in &report.violations {
                println!("  {v}");
            }
            Ok(VERIFY_FAILED)
        }
        Command::Nh { digraph, output } => {
            let d = read_digraph(&digraph)?;
            let nh = niche_hypergraph(&d);
            if !nh.simple {
                eprintln!("warning: niche hypergraph is not simple; the family shown is its set of edges");
            }
            write_output(output.as_deref(), &format::hypergraph_to_json(&nh.hypergraph))?;
            Ok(0)
        }
        Command::Number { hypergraph, kmax, workers, max_dags, time_limit, max_vertices } => {
            let h = read_hypergraph(&hypergraph)?;
            let time_limit = match time_limit {
                Some(t) if !(t.is_finite() && t >= 0.0) => {
                    return Err(Failure::new(FORMAT_ERROR, anyhow!("invalid time limit {t}")))
                }
                t => t.map(Duration::from_secs_f64),
            };
            let budget = SearchBudget { max_vertices, max_dags, time_limit, workers };
            match niche_number_upto(&h, kmax, &budget) {
                Ok(NicheNumber::Exact { k, .. }) => {
                    println!("{k}");
                    Ok(0)
                }
                Ok(NicheNumber::LowerBound(k)) => {
                    println!("LowerBound({k})");
                    Ok(VERIFY_FAILED)
                }
                Err(e @ (OracleError::BudgetExceeded { .. } | OracleError::TooManyVertices { .. })) => {
                    Err(Failure::new(BUDGET_EXCEEDED, e))
                }
                Err(e) => Err(Failure::new(VERIFY_FAILED, e)),
            }
        }
        Command::ExportDot { input, output } => {
            let text = read_input(&input)?;
            let value: serde_json::Value = serde_json::from_str(&text).map_err(FormatError::from)?;
            let dot = if value.get("arcs").is_some() {
                format::digraph_to_dot(&format::parse_digraph(&text)?)
            } else {
                format::hypergraph_to_dot(&format::parse_hypergraph(&text)?)
            };
            write_output(output.as_deref(), &dot)?;
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(Failure { code, error }) => {
            eprintln!("error: {error:#}");
            ExitCode::from(code)
        }
    }
}
