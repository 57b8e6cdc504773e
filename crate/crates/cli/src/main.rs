//! `llt`: every computation and verifier of llt-core as a subcommand.
//!
//! Exit status is 0 when all assertions pass, 1 when a check fails (the report is
//! still written) and 2 on invalid arguments or any other error.

mod args;
mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use thiserror::Error;

use output::{Format, OUT_DIR_VAR};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Model(#[from] llt_core::model::ModelError),
    #[error(transparent)]
    Lattice(#[from] llt_core::lattice::LatticeError),
    #[error(transparent)]
    Colour(#[from] llt_core::colour::ColourError),
    #[error(transparent)]
    Arrays(#[from] llt_core::arrays::ArraysError),
    #[error(transparent)]
    Gue(#[from] llt_core::gue::GueError),
    #[error(transparent)]
    QField(#[from] llt_core::qfield::QFieldError),
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

#[derive(Debug, Parser)]
#[command(name = "llt", version, about = "Coloured vertex models, LLT polynomials and the colour chain")]
pub struct Cli {
    /// Artifact path. Without it the artifact goes to $LLT_OUT_DIR/<command>.<ext>, or stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Output format; not every command supports csv or ndjson.
    #[arg(long, global = true, value_enum, default_value = "json")]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// All nonzero vertex weights of one family at a rational point.
    WeightsDump(commands::WeightsDump),
    /// Randomized Yang-Baxter check.
    VerifyYbe(commands::VerifyYbe),
    /// Hecke exchange relation on f or g.
    VerifyHecke(commands::VerifyHecke),
    /// Antisymmetry of G_{mu/nu} under swapping adjacent rows.
    VerifyAntisym(commands::VerifyAntisym),
    /// Cauchy identities as truncated series in the degree.
    VerifyCauchy(commands::VerifyCauchy),
    /// Non-symmetric function f_mu.
    ComputeF(commands::ComputeF),
    /// Function g_mu (or g_mu^sigma).
    ComputeG(commands::ComputeG),
    /// Skew function G_{mu/nu}.
    #[command(name = "compute-G")]
    ComputeSkewG(commands::ComputeSkew),
    /// LLT polynomial; q is symbolic unless given.
    ComputeLlt(commands::ComputeLlt),
    /// Plancherel image of an LLT polynomial.
    Plancherel(commands::Plancherel),
    /// Tree of colour-sequence probabilities (csv: flat table).
    PcolTable(commands::PcolTable),
    /// Marginal law of the colour sequence at one level.
    PcolMarginal(commands::Level),
    /// Marginals are in N[q] after clearing Poincare denominators.
    CheckPositivity(commands::Level),
    /// Expansion of Z over interlacing successors.
    VerifyExpansion(commands::Level),
    /// Psi * Upsilon * q^(inv i - inv j) = 1 on every interlacing pair up to a level.
    VerifyStatisticMatch(commands::Level),
    /// Seeded chains of the colour kernel at a rational q in (0,1).
    SampleChain(commands::SampleChain),
    /// Count (and optionally stream) interlacing triangular arrays.
    Enumerate(commands::Enumerate),
    /// Proper colourings of a triangle or king patch.
    Colourings(commands::Colourings),
    /// Both colouring conjectures up to the given heights.
    CheckConjectures(commands::CheckConjectures),
    /// Seeded GUE corners samples.
    GueSample(commands::GueSample),
    /// Corners density or one-step transition density.
    GueDensity(commands::GueDensity),
    /// Exact finite-t colour law against the limit, and coordinate moments against GUE.
    ConvergenceExperiment(commands::Convergence),
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::WeightsDump(_) => "weights-dump",
            Command::VerifyYbe(_) => "verify-ybe",
            Command::VerifyHecke(_) => "verify-hecke",
            Command::VerifyAntisym(_) => "verify-antisym",
            Command::VerifyCauchy(_) => "verify-cauchy",
            Command::ComputeF(_) => "compute-f",
            Command::ComputeG(_) => "compute-g",
            Command::ComputeSkewG(_) => "compute-G",
            Command::ComputeLlt(_) => "compute-llt",
            Command::Plancherel(_) => "plancherel",
            Command::PcolTable(_) => "pcol-table",
            Command::PcolMarginal(_) => "pcol-marginal",
            Command::CheckPositivity(_) => "check-positivity",
            Command::VerifyExpansion(_) => "verify-expansion",
            Command::VerifyStatisticMatch(_) => "verify-statistic-match",
            Command::SampleChain(_) => "sample-chain",
            Command::Enumerate(_) => "enumerate",
            Command::Colourings(_) => "colourings",
            Command::CheckConjectures(_) => "check-conjectures",
            Command::GueSample(_) => "gue-sample",
            Command::GueDensity(_) => "gue-density",
            Command::ConvergenceExperiment(_) => "convergence-experiment",
        }
    }
}

fn run(cli: &Cli) -> Result<bool, CliError> {
    let o = commands::dispatch(&cli.command, cli.format)?;
    let env_dir = std::env::var_os(OUT_DIR_VAR).filter(|d| !d.is_empty()).map(PathBuf::from);
    let dest = output::destination(cli.out.as_deref(), env_dir, cli.command.name(), o.format);
    output::emit(&o, dest)?;
    Ok(o.passed)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(2) } else { ExitCode::SUCCESS };
        }
    };
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => {
            eprintln!("{}: assertion failed", cli.command.name());
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
