use clap::{Parser, Subcommand};
use fedosov_cli::{run, Command, EXIT_INPUT};
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "fedosov", version, about = "Exact polarization-adapted Fedosov star products")]
struct Cli {
    /// Chart description file.
    #[arg(short, long)]
    config: PathBuf,
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Check the geometry: omega, its inverse, the connection and both distributions.
    Validate,
    /// Star product of two functions.
    Star {
        #[arg(long)]
        f: String,
        #[arg(long)]
        g: String,
    },
    /// Flat section lifting a function.
    Lift {
        #[arg(long)]
        f: String,
    },
    /// The element r of the Fedosov connection.
    RElement,
    /// Bidifferential coefficients of the star product.
    Bidiff {
        #[arg(long, default_value_t = 2)]
        max_deriv: u32,
        #[arg(long, default_value_t = 1)]
        max_lambda: u32,
    },
    /// Full invariant, adaptedness and separation-of-variables report.
    Check {
        /// Transversal constants of the leaf.
        #[arg(long, num_args = 1.., allow_negative_numbers = true)]
        leaf: Vec<String>,
    },
    /// Action of a function on a leaf function.
    Act {
        #[arg(long)]
        f: String,
        #[arg(long)]
        m: String,
        #[arg(long, num_args = 1.., allow_negative_numbers = true)]
        leaf: Vec<String>,
    },
}

impl From<Cmd> for Command {
    fn from(c: Cmd) -> Self {
        match c {
            Cmd::Validate => Command::Validate,
            Cmd::Star { f, g } => Command::Star { f, g },
            Cmd::Lift { f } => Command::Lift { f },
            Cmd::RElement => Command::RElement,
            Cmd::Bidiff { max_deriv, max_lambda } => Command::Bidiff { max_deriv, max_lambda },
            Cmd::Check { leaf } => Command::Check { leaf },
            Cmd::Act { f, m, leaf } => Command::Act { f, m, leaf },
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let text = match std::fs::read_to_string(&cli.config) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: cannot read {}: {e}", cli.config.display());
            return ExitCode::from(EXIT_INPUT as u8);
        }
    };
    let outcome = run(&text, &cli.command.into());
    print!("{}", outcome.stdout);
    eprint!("{}", outcome.stderr);
    let _ = std::io::stdout().flush();
    ExitCode::from(outcome.code as u8)
}
