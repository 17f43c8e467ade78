use std::io::Write as _;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use hyperent_cli::*;
use hyperent_core::Normalization;

/// Exact hypergraph quantum states, gate-noise randomization, and
/// entanglement measures.
#[derive(Parser)]
#[command(name = "hyperent", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct SelectorArgs {
    /// Family generator: clover, flower, star, single-edge, edgeless, or
    /// complete-<k>-uniform.
    #[arg(long, conflicts_with = "catalog")]
    family: Option<String>,

    /// Vertex count for --family.
    #[arg(long)]
    n: Option<usize>,

    /// Catalog file to read records from.
    #[arg(long)]
    catalog: Option<String>,

    /// Record name inside the catalog.
    #[arg(long)]
    name: Option<String>,
}

impl SelectorArgs {
    fn selector(&self) -> Result<Selector, CliError> {
        match (&self.family, &self.catalog) {
            (Some(f), None) => {
                let n = self.n.ok_or_else(|| {
                    CliError::usage("--family requires --n <vertex count>")
                })?;
                Ok(Selector::Family {
                    name: f.clone(),
                    n,
                })
            }
            (None, Some(path)) => Ok(Selector::Catalog {
                path: path.clone(),
                name: self.name.clone(),
            }),
            _ => Err(CliError::usage(
                "pick a hypergraph with either --family NAME --n N or --catalog FILE [--name NAME]",
            )),
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Print the exact sign-vector state of a hypergraph.
    State {
        #[command(flatten)]
        selector: SelectorArgs,
        /// Verify that every stabilizing operator fixes the state.
        #[arg(long)]
        check_stabilizers: bool,
    },
    /// Expand the randomized state into its weighted branch table.
    Randomize {
        #[command(flatten)]
        selector: SelectorArgs,
        /// Uniform success probability for every edge order.
        #[arg(long, conflicts_with = "prob")]
        p: Option<f64>,
        /// Per-order probabilities, e.g. "2=0.9,3=0.75".
        #[arg(long)]
        prob: Option<String>,
        /// Keep the weights as polynomials instead of numbers.
        #[arg(long)]
        symbolic: bool,
        /// Write to a file instead of stdout.
        #[arg(long)]
        out: Option<String>,
    },
    /// Evaluate a measure over a grid of randomization parameters.
    Sweep {
        #[command(flatten)]
        selector: SelectorArgs,
        /// negativity, gmn, overlap, or witness.
        #[arg(long)]
        measure: String,
        /// Bipartition for negativity, e.g. "1|2,3,4".
        #[arg(long)]
        bipartition: Option<String>,
        /// Grid points per randomization variable (endpoints included).
        #[arg(long, default_value_t = 11)]
        grid: usize,
        /// Witness normalization for gmn: trace-one or operator-bounded.
        #[arg(long)]
        normalization: Option<String>,
        /// Output file (stdout when omitted).
        #[arg(long)]
        out: Option<String>,
        /// csv (default) or json.
        #[arg(long, default_value = "csv")]
        format: String,
    },
    /// Critical noise thresholds for the clover and flower families.
    Thresholds {
        /// clover or flower.
        #[arg(long)]
        family: String,
        /// Vertex count or inclusive range, e.g. "3..8".
        #[arg(long)]
        n: String,
        /// Output file (stdout when omitted).
        #[arg(long)]
        out: Option<String>,
    },
    /// Exact overlap polynomial and witness data for one hypergraph.
    Overlap {
        #[command(flatten)]
        selector: SelectorArgs,
    },
    /// Validate a catalog file record by record.
    CatalogValidate {
        /// Catalog file path.
        path: String,
    },
}

fn parse_normalization(text: &str) -> Result<Normalization, CliError> {
    match text {
        "trace-one" => Ok(Normalization::TraceOne),
        "operator-bounded" => Ok(Normalization::OperatorBounded),
        other => Err(CliError::usage(format!(
            "unknown normalization \"{other}\" (expected trace-one or operator-bounded)"
        ))),
    }
}

fn emit(text: &str, out: Option<&str>) -> Result<(), CliError> {
    match out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| CliError::computation(format!("cannot write {path}: {e}"))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::State {
            selector,
            check_stabilizers,
        } => {
            let h = selector.selector()?.resolve()?;
            let text = cmd_state(&h, check_stabilizers)?;
            emit(&text, None)
        }
        Command::Randomize {
            selector,
            p,
            prob,
            symbolic,
            out,
        } => {
            let h = selector.selector()?.resolve()?;
            let params = match (p, prob) {
                (Some(p), None) => Some(
                    hyperent_core::RandomizationParams::uniform(p).map_err(CliError::from)?,
                ),
                (None, Some(pairs)) => Some(parse_probs(&pairs)?),
                (None, None) => None,
                (Some(_), Some(_)) => unreachable!("clap conflicts_with"),
            };
            let text = cmd_randomize(&h, params.as_ref(), symbolic)?;
            emit(&text, out.as_deref())
        }
        Command::Sweep {
            selector,
            measure,
            bipartition,
            grid,
            normalization,
            out,
            format,
        } => {
            let h = selector.selector()?.resolve()?;
            let measure = Measure::parse(&measure)?;
            let bipartition = bipartition
                .map(|b| parse_bipartition(&b, h.n()))
                .transpose()?;
            let normalization = normalization
                .map(|n| parse_normalization(&n))
                .transpose()?;
            let format = OutputFormat::parse(&format)?;
            let config = SweepConfig {
                hypergraph: h,
                measure,
                bipartition,
                resolution: grid,
                normalization,
            };
            let result = run_sweep(&config)?;
            emit(&result.render(format), out.as_deref())
        }
        Command::Thresholds { family, n, out } => {
            let ns = parse_range(&n)?;
            let text = cmd_thresholds(&family, &ns)?;
            emit(&text, out.as_deref())
        }
        Command::Overlap { selector } => {
            let h = selector.selector()?.resolve()?;
            let text = cmd_overlap(&h)?;
            emit(&text, None)
        }
        Command::CatalogValidate { path } => {
            let (report, valid) = cmd_catalog_validate(&path)?;
            print!("{report}");
            if valid {
                Ok(())
            } else {
                Err(CliError {
                    code: 1,
                    message: "catalog invalid".into(),
                })
            }
        }
    }
}

fn main() -> ExitCode {
    // HYPERENT_THREADS caps the rayon pool used by grid sweeps.
    if let Ok(threads) = std::env::var("HYPERENT_THREADS") {
        if let Ok(threads) = threads.parse::<usize>() {
            let _ = rayon::ThreadPoolBuilder::new()
                .num_threads(threads.max(1))
                .build_global();
        }
    }
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let _ = writeln!(std::io::stderr(), "error: {}", e.message);
            ExitCode::from(e.code.clamp(0, 255) as u8)
        }
    }
}
