mod commands;
mod output;

use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use orbitrep::angular::TreeKind;
use orbitrep::verify::Suite;

use output::Format;

#[derive(Parser)]
#[command(name = "orbitrep", version, about = "Little-group representations, recoupling coefficients and orbit algebra checks")]
struct Cli {
    #[arg(long, value_enum, default_value = "pretty", global = true)]
    format: Format,
    /// Exit with status 2 when a selection rule forces the coefficient to zero.
    #[arg(long, global = true)]
    strict: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum SuiteArg {
    All,
    LittleGroup,
    Angular,
    Dirac,
    Poincare,
    Fields,
}

#[derive(Clone, Copy, ValueEnum)]
enum TreeArg {
    Shapes,
    Labeled,
    Unordered,
}

#[derive(Subcommand)]
enum Command {
    /// Clebsch-Gordan coefficient, or the full table for (j1, j2). Spins as 2j.
    Cg {
        #[arg(long)]
        j1: i32,
        #[arg(long)]
        j2: i32,
        #[arg(long)]
        j: Option<i32>,
        #[arg(long, allow_hyphen_values = true)]
        m1: Option<i32>,
        #[arg(long, allow_hyphen_values = true)]
        m2: Option<i32>,
        #[arg(long, allow_hyphen_values = true)]
        m: Option<i32>,
    },
    /// Wigner 6j symbol {j1 j2 j3; j4 j5 j6}. Spins as 2j.
    Sixj {
        #[arg(num_args = 6, required = true)]
        two_j: Vec<i32>,
    },
    /// Wigner 9j symbol, rows in order. Spins as 2j.
    Ninej {
        #[arg(num_args = 9, required = true)]
        two_j: Vec<i32>,
    },
    /// Little-group element D(Λ, n) for Λ = boost · rotation.
    WignerRot {
        #[arg(long, value_delimiter = ',', default_value = "0,0,1", allow_hyphen_values = true)]
        axis: Vec<f64>,
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        angle: f64,
        #[arg(long, value_delimiter = ',', default_value = "0,0,1", allow_hyphen_values = true)]
        boost: Vec<f64>,
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        rapidity: f64,
        #[arg(long, value_delimiter = ',', default_value = "1,0,0,0", allow_hyphen_values = true)]
        n: Vec<f64>,
    },
    /// Spin content of N spin-1/2 factors.
    Decompose {
        #[arg(long)]
        spins: usize,
        /// Also enumerate coupling trees of the given kind.
        #[arg(long, value_enum)]
        trees: Option<TreeArg>,
        /// Also emit the exact reduction matrix.
        #[arg(long)]
        matrix: bool,
    },
    /// Field strength, invariants and Maxwell residual of a JSON field model.
    Field {
        /// Path to the model, or - for stdin.
        #[arg(long)]
        model: String,
        #[arg(long, value_delimiter = ',', default_value = "0,0,0,0", allow_hyphen_values = true)]
        at: Vec<f64>,
    },
    /// Run the invariant batteries.
    Verify {
        #[arg(long, value_enum, default_value = "all")]
        suite: SuiteArg,
        #[arg(long, default_value_t = 7)]
        seed: u64,
        #[arg(long, default_value_t = 200)]
        trials: usize,
        /// Override every floating-point tolerance.
        #[arg(long)]
        tol: Option<f64>,
    },
}

fn array<const N: usize>(name: &str, v: Vec<f64>) -> anyhow::Result<[f64; N]> {
    let len = v.len();
    v.try_into().map_err(|_| anyhow::anyhow!("--{name} takes {N} comma-separated numbers, got {len}"))
}

fn run(cli: Cli) -> anyhow::Result<commands::Outcome> {
    match cli.command {
        Command::Cg { j1, j2, j, m1, m2, m } => commands::cg(j1, j2, j, m1, m2, m),
        Command::Sixj { two_j } => commands::sixj(two_j.try_into().expect("six values")),
        Command::Ninej { two_j } => commands::ninej(two_j.try_into().expect("nine values")),
        Command::WignerRot { axis, angle, boost, rapidity, n } => commands::wigner_rot(array("axis", axis)?, angle, array("boost", boost)?, rapidity, array("n", n)?),
        Command::Decompose { spins, trees, matrix } => {
            let kind = trees.map(|t| match t {
                TreeArg::Shapes => TreeKind::Shapes,
                TreeArg::Labeled => TreeKind::Labeled,
                TreeArg::Unordered => TreeKind::Unordered,
            });
            commands::decompose(spins, kind, matrix)
        }
        Command::Field { model, at } => commands::field(&model, array("at", at)?),
        Command::Verify { suite, seed, trials, tol } => {
            let suite = match suite {
                SuiteArg::All => Suite::All,
                SuiteArg::LittleGroup => Suite::LittleGroup,
                SuiteArg::Angular => Suite::Angular,
                SuiteArg::Dirac => Suite::Dirac,
                SuiteArg::Poincare => Suite::Poincare,
                SuiteArg::Fields => Suite::Fields,
            };
            commands::verify(suite, seed, trials, tol)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    let (format, strict) = (cli.format, cli.strict);
    let outcome = match run(cli).and_then(|o| Ok((o.output.render(format)?, o.selection_zero, o.passed))) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e:#}");
            return ExitCode::from(1);
        }
    };
    let (text, selection_zero, passed) = outcome;
    print!("{text}");
    if !passed {
        ExitCode::from(1)
    } else if strict && selection_zero {
        ExitCode::from(2)
    } else {
        ExitCode::SUCCESS
    }
}
