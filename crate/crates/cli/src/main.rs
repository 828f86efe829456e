use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use minkowski_cli::commands::{self, load_input, load_sub_basis, parse_delta, CmdError};
use minkowski_cli::random::Model;
use minkowski_cli::report::{Exit, Format, Outcome};
use minkowski_cli::{suites, RunConfig};

#[derive(Parser)]
#[command(
    name = "minkowski",
    version,
    about = "Exact reduction theory of low-dimensional quadratic forms"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    #[arg(long, global = true, value_enum, default_value_t = FormatArg::Text)]
    format: FormatArg,

    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    #[arg(long, global = true, default_value_t = 100)]
    trials: usize,

    #[arg(long, global = true, default_value_t = 4)]
    dim: usize,

    /// Node budget for searches.
    #[arg(long, global = true, default_value_t = 100_000)]
    budget: usize,

    /// Worker threads for randomized runs; output does not depend on it.
    #[arg(long, global = true, default_value_t = 1)]
    workers: usize,

    /// Include wall-clock timings (makes output nondeterministic).
    #[arg(long, global = true)]
    timings: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Text,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum SuiteName {
    Tammela,
    Dim2,
    MinimaRelevant,
    GenericRelevant,
    TableMembership,
    Centering,
    Invariance,
}

/// Lattice inputs are files (`gram n` or `basis d n`) or named lattices
/// written `@Z4`, `@A2`, `@D4`, `@E6`, `@D4-centered-cubic`, `@example9`,
/// `@example9-mnh`.
#[derive(Subcommand)]
enum Command {
    /// Minkowski-reduce a form.
    Reduce {
        input: String,
        /// Use shortest primitive extensions instead of the tables (any dimension).
        #[arg(long)]
        definitional: bool,
    },
    /// Decide whether a form is Minkowski-reduced.
    Check {
        input: String,
        #[arg(long)]
        definitional: bool,
    },
    /// Check coordinate bounds of minimum vectors on random reduced forms.
    Theorem {
        /// `conjugated`, `dense:R` (entries of B in [-R, R]), `centered` or `mixed`.
        #[arg(long, default_value = "conjugated")]
        model: String,
    },
    /// Verify the nine-dimensional reduced but not Hermite-reduced basis.
    Example9,
    /// Relevant vectors of the Voronoi cell.
    Voronoi { input: String },
    /// Centering of Z^n over a sublattice given by a `basis n n` file.
    Centering {
        sub_basis: String,
        /// Ambient form, to report the norms of the sublattice basis.
        #[arg(long)]
        lattice: Option<String>,
    },
    /// Lattice minimum and minimal vectors.
    Svp { input: String },
    /// Expanded candidate tables for dimension N.
    DumpTables { n: usize },
    /// LLL reduction.
    Lll {
        input: String,
        #[arg(long, default_value = "3/4")]
        delta: String,
    },
    /// Search for a basis lexicographically shorter than the given one.
    Hermite { input: String },
    /// Print the Gram matrix of an input as a lattice file.
    Gram { input: String },
    /// Run a randomized property suite.
    Suite { name: SuiteName },
}

fn parse_model(s: &str) -> Result<Model, CmdError> {
    Model::parse(s).ok_or_else(|| CmdError::usage(format!("unknown model `{s}`")))
}

fn run(cli: &Cli, cfg: &RunConfig) -> Result<Outcome, CmdError> {
    match &cli.command {
        Command::Reduce { input, definitional } => commands::cmd_reduce(&load_input(input)?, *definitional),
        Command::Check { input, definitional } => commands::cmd_check(&load_input(input)?, *definitional),
        Command::Theorem { model } => commands::cmd_theorem(cfg, parse_model(model)?),
        Command::Example9 => commands::cmd_example9(cfg),
        Command::Voronoi { input } => commands::cmd_voronoi(&load_input(input)?),
        Command::Centering { sub_basis, lattice } => {
            let (basis, hash) = load_sub_basis(sub_basis)?;
            let lattice = lattice.as_deref().map(load_input).transpose()?;
            commands::cmd_centering(&basis, &hash, lattice.as_ref())
        }
        Command::Svp { input } => commands::cmd_svp(&load_input(input)?),
        Command::DumpTables { n } => commands::cmd_dump_tables(*n),
        Command::Lll { input, delta } => commands::cmd_lll(&load_input(input)?, &parse_delta(delta)?),
        Command::Hermite { input } => commands::cmd_hermite(&load_input(input)?, cfg.budget),
        Command::Gram { input } => commands::cmd_gram(&load_input(input)?),
        Command::Suite { name } => {
            let (seed, dim, trials, workers) = (cfg.seed, cfg.dim, cfg.trials, cfg.workers);
            let result = match name {
                SuiteName::Tammela => suites::tammela(seed, dim, trials, workers),
                SuiteName::Dim2 => suites::dim2(seed, trials, workers),
                SuiteName::MinimaRelevant => suites::voronoi_minima(seed, dim, trials, workers),
                SuiteName::GenericRelevant => suites::voronoi_generic(seed, trials, workers),
                SuiteName::TableMembership => suites::voronoi_membership(seed, dim, trials, workers),
                SuiteName::Centering => suites::centering(seed, trials, workers),
                SuiteName::Invariance => suites::invariance(seed, dim, trials, workers),
            };
            let exit = if result.passed() { Exit::Ok } else { Exit::Falsified };
            Ok(Outcome::new(result.to_report(), exit))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let cfg = RunConfig {
        seed: cli.seed,
        trials: cli.trials,
        dim: cli.dim,
        format: match cli.format {
            FormatArg::Text => Format::Text,
            FormatArg::Json => Format::Json,
        },
        budget: cli.budget,
        workers: cli.workers.max(1),
        timings: cli.timings,
    };
    match run(&cli, &cfg) {
        Ok(out) => {
            print!("{}", out.render(cfg.format, cfg.timings));
            out.exit.code()
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit.code()
        }
    }
}
