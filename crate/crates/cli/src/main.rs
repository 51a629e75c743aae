//! `cvcluster`: build, analyze, decompose and check Gaussian cluster states
//! generated by multi-mode squeezing.

mod checks;
mod commands;
mod error;
mod input;
mod json;

use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use cvcluster::analysis::DEFAULT_PHASE_SEED;
use cvcluster::Tolerances64;

use commands::{ClusterInput, Outcome, VerifySource};
use error::CliError;
use input::InteractionInput;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Parser)]
#[command(name = "cvcluster", version, about = "Multi-mode squeezing for weighted-graph Gaussian cluster states")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build Z = P·U, the Bogoliubov blocks and the nullifier covariance for a cluster.
    Synthesize(SynthesizeArgs),
    /// Recover phases and adjacency matrix from an interaction matrix.
    Analyze(AnalyzeArgs),
    /// Bloch-Messiah factors of an interaction matrix.
    Decompose(DecomposeArgs),
    /// Run every invariant check; exit 1 if any fails.
    Verify(VerifyArgs),
    /// Nullifier covariance norms over a range of z.
    Sweep(SweepArgs),
}

#[derive(Args)]
struct Common {
    /// Write output here instead of standard output.
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
    /// Output format; sweep defaults to csv, everything else to json.
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Tolerance for algebraic identities (default 1e-9).
    #[arg(long, value_name = "VAL")]
    tol: Option<f64>,
    /// Seed for the random stage of the phase search.
    #[arg(long, value_name = "INT", default_value_t = DEFAULT_PHASE_SEED)]
    seed: u64,
}

#[derive(Args)]
struct ClusterArgs {
    /// Graph file, or JSON holding an adjacency matrix.
    #[arg(long, value_name = "PATH")]
    graph: PathBuf,
    /// `zero` or a file of phases (JSON array, report with "phases", or plain numbers).
    #[arg(long, value_name = "PATH|zero", default_value = "zero")]
    phases: String,
    /// identity, faithful or custom:PATH
    #[arg(long, value_name = "GAUGE", default_value = "identity")]
    gauge: String,
}

#[derive(Args)]
struct SynthesizeArgs {
    #[command(flatten)]
    cluster: ClusterArgs,
    /// Squeezing scale.
    #[arg(short = 'z', value_name = "VAL", default_value_t = 1.0, allow_negative_numbers = true)]
    z: f64,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct AnalyzeArgs {
    /// Interaction matrix as JSON, bare or under "Z".
    #[arg(long, value_name = "PATH")]
    interaction: PathBuf,
    /// Phases to try before searching.
    #[arg(long, value_name = "PATH|zero")]
    phases: Option<String>,
    /// Squeezing scale for the reported covariance (default: the bundle's z, else 1).
    #[arg(short = 'z', value_name = "VAL", allow_negative_numbers = true)]
    z: Option<f64>,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct DecomposeArgs {
    /// Interaction matrix as JSON, bare or under "Z".
    #[arg(long, value_name = "PATH")]
    interaction: PathBuf,
    /// Cluster to test the interferometer against (default: the bundle's).
    #[arg(long, value_name = "PATH")]
    graph: Option<PathBuf>,
    #[arg(long, value_name = "PATH|zero", requires = "graph")]
    phases: Option<String>,
    /// Squeezing scale (default: the bundle's z, else 1).
    #[arg(short = 'z', value_name = "VAL", allow_negative_numbers = true)]
    z: Option<f64>,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct VerifyArgs {
    /// Synthesize bundle or interaction matrix.
    #[arg(long, value_name = "PATH", required_unless_present = "graph")]
    interaction: Option<PathBuf>,
    /// Cluster to verify; with --interaction, Z must match it.
    #[arg(long, value_name = "PATH")]
    graph: Option<PathBuf>,
    #[arg(long, value_name = "PATH|zero")]
    phases: Option<String>,
    #[arg(long, value_name = "GAUGE", requires = "graph")]
    gauge: Option<String>,
    /// Squeezing scale (default: the bundle's z, else 1).
    #[arg(short = 'z', value_name = "VAL", allow_negative_numbers = true)]
    z: Option<f64>,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct SweepArgs {
    #[command(flatten)]
    cluster: ClusterArgs,
    /// Single squeezing scale.
    #[arg(short = 'z', value_name = "VAL", allow_negative_numbers = true, conflicts_with = "z_range", required_unless_present = "z_range")]
    z: Option<f64>,
    /// Inclusive grid START:STOP:STEP.
    #[arg(long, value_name = "START:STOP:STEP")]
    z_range: Option<String>,
    #[command(flatten)]
    common: Common,
}

impl Common {
    fn tolerances(&self) -> Result<Tolerances64, CliError> {
        let tol = Tolerances64::default();
        match self.tol {
            None => Ok(tol),
            Some(t) if t > 0.0 && t.is_finite() => Ok(tol.with_rtol(t)),
            Some(t) => Err(CliError::parse(format!("--tol must be positive and finite, got {t}"))),
        }
    }

    fn format(&self, default: Format) -> Result<Format, CliError> {
        match self.format.unwrap_or(default) {
            Format::Csv if default != Format::Csv => Err(CliError::parse("csv output is only available for sweep")),
            f => Ok(f),
        }
    }

    fn emit(&self, outcome: &Outcome) -> Result<(), CliError> {
        match &self.out {
            Some(path) => fs::write(path, &outcome.body)
                .map_err(|e| CliError { code: error::EXIT_PARSE, message: format!("cannot write {}: {e}", path.display()) }),
            None => {
                let mut stdout = io::stdout().lock();
                stdout
                    .write_all(outcome.body.as_bytes())
                    .and_then(|_| stdout.flush())
                    .map_err(|e| CliError { code: error::EXIT_PARSE, message: format!("cannot write output: {e}") })
            }
        }
    }
}

impl ClusterArgs {
    fn load(&self, tol: &Tolerances64) -> Result<ClusterInput, CliError> {
        let a = input::read_graph(&self.graph, tol)?;
        let theta = input::read_phases(&self.phases, a.n())?;
        let gauge = input::read_gauge(&self.gauge)?;
        Ok(ClusterInput { a, theta, gauge })
    }
}

fn run(cli: Cli) -> Result<(Outcome, Common), CliError> {
    match cli.command {
        Command::Synthesize(args) => {
            let tol = args.common.tolerances()?;
            let format = args.common.format(Format::Json)?;
            let cluster = args.cluster.load(&tol)?;
            let outcome = commands::synthesize(&cluster, args.z, args.common.seed, &tol, format)?;
            Ok((outcome, args.common))
        }
        Command::Analyze(args) => {
            let tol = args.common.tolerances()?;
            let format = args.common.format(Format::Json)?;
            let source = InteractionInput::read(&args.interaction)?;
            let zm = source.interaction(&tol)?;
            let phases = args.phases.as_deref().map(|p| input::read_phases(p, zm.n())).transpose()?;
            let z = args.z.or(source.z()).unwrap_or(1.0);
            let outcome = commands::analyze(&zm, phases.as_ref(), z, args.common.seed, &tol, format)?;
            Ok((outcome, args.common))
        }
        Command::Decompose(args) => {
            let tol = args.common.tolerances()?;
            let format = args.common.format(Format::Json)?;
            let source = InteractionInput::read(&args.interaction)?;
            let zm = source.interaction(&tol)?;
            let cluster = match &args.graph {
                Some(path) => {
                    let a = input::read_graph(path, &tol)?;
                    let theta = input::read_phases(args.phases.as_deref().unwrap_or("zero"), a.n())?;
                    Some((a, theta))
                }
                None => source.adjacency(&tol)?.zip(source.phases()?),
            };
            let z = args.z.or(source.z()).unwrap_or(1.0);
            let cluster_ref = cluster.as_ref().map(|(a, t)| (a, t));
            let outcome = commands::decompose(&zm, cluster_ref, z, &tol, format)?;
            Ok((outcome, args.common))
        }
        Command::Verify(args) => {
            let tol = args.common.tolerances()?;
            let format = args.common.format(Format::Json)?;
            let source = args.interaction.as_deref().map(InteractionInput::read).transpose()?;
            let outcome = match &args.graph {
                Some(graph) => {
                    let cluster = ClusterArgs {
                        graph: graph.clone(),
                        phases: args.phases.clone().unwrap_or_else(|| "zero".into()),
                        gauge: args.gauge.clone().unwrap_or_else(|| "identity".into()),
                    }
                    .load(&tol)?;
                    let z = args.z.or(source.as_ref().and_then(InteractionInput::z));
                    commands::verify(VerifySource::Cluster { cluster, interaction: source.as_ref() }, z, args.common.seed, &tol, format)?
                }
                None => {
                    let input = source.as_ref().expect("clap requires --interaction without --graph");
                    let n = input.z_matrix.rows();
                    let phases = args.phases.as_deref().map(|p| input::read_phases(p, n)).transpose()?;
                    commands::verify(VerifySource::Interaction { input, phases }, args.z, args.common.seed, &tol, format)?
                }
            };
            Ok((outcome, args.common))
        }
        Command::Sweep(args) => {
            let tol = args.common.tolerances()?;
            let format = args.common.format(Format::Csv)?;
            let cluster = args.cluster.load(&tol)?;
            let z_values = match (&args.z_range, args.z) {
                (Some(range), _) => input::parse_z_range(range)?,
                (None, Some(z)) => vec![z],
                (None, None) => unreachable!("clap requires -z or --z-range"),
            };
            let outcome = commands::sweep(&cluster, &z_values, &tol, format)?;
            Ok((outcome, args.common))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = run(cli).and_then(|(outcome, common)| {
        common.emit(&outcome)?;
        Ok(outcome)
    });
    match result {
        Ok(outcome) => {
            for note in &outcome.notes {
                eprintln!("cvcluster: {note}");
            }
            ExitCode::from(outcome.exit)
        }
        Err(e) => {
            eprintln!("cvcluster: {e}");
            ExitCode::from(e.code)
        }
    }
}
