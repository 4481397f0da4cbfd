use crate::config::{parse_config, Config};
use fedosov_core::fedosov::{bidiff_table, invariant_report};
use fedosov_core::geometry::{GeometryData, LeafSpec};
use fedosov_core::ring::{parse_polynomial, parse_series, LambdaSeries, Rational, VarSpace};
use fedosov_core::{FedosovContext, FedosovError};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Command {
    Validate,
    Star { f: String, g: String },
    Lift { f: String },
    RElement,
    Bidiff { max_deriv: u32, max_lambda: u32 },
    /// Leaf constants `c^β`; empty means the config's leaf, or the origin.
    Check { leaf: Vec<String> },
    Act { f: String, m: String, leaf: Vec<String> },
}

/// Exit code and captured streams of one command.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_INPUT: i32 = 2;

impl Outcome {
    fn ok(stdout: String) -> Self {
        Outcome {
            code: EXIT_OK,
            stdout,
            stderr: String::new(),
        }
    }

    fn input_error(message: impl std::fmt::Display) -> Self {
        Outcome {
            code: EXIT_INPUT,
            stdout: String::new(),
            stderr: format!("error: {message}\n"),
        }
    }

    fn report(report: &fedosov_core::CheckReport) -> Self {
        Outcome {
            code: if report.all_pass() { EXIT_OK } else { EXIT_CHECK_FAILED },
            stdout: report.to_string(),
            stderr: String::new(),
        }
    }
}

/// Parses the config text and runs the command on it.
pub fn run(config_text: &str, command: &Command) -> Outcome {
    match parse_config(config_text) {
        Ok(config) => dispatch(command, &config),
        Err(e) => Outcome::input_error(e),
    }
}

fn from_fedosov(e: FedosovError) -> Outcome {
    match e {
        FedosovError::ConventionResolution { .. } | FedosovError::Residual(_) => Outcome {
            code: EXIT_CHECK_FAILED,
            stdout: String::new(),
            stderr: format!("error: {e}\n"),
        },
        other => Outcome::input_error(other),
    }
}

fn context(config: &Config, geometry: GeometryData) -> Result<FedosovContext, Outcome> {
    let geometry = geometry.validated().map_err(Outcome::input_error)?;
    let convention = config.convention.unwrap_or_default();
    FedosovContext::with_convention(geometry, config.trunc, convention).map_err(from_fedosov)
}

fn leaf(config: &Config, given: &[String]) -> Result<Option<LeafSpec>, Outcome> {
    if given.is_empty() {
        return Ok(config.leaf_spec());
    }
    if given.len() != config.nu {
        return Err(Outcome::input_error(format!(
            "--leaf takes {} constants, got {}",
            config.nu,
            given.len()
        )));
    }
    let space = VarSpace::new(config.nu);
    let constants = given
        .iter()
        .map(|s| {
            parse_polynomial(s, &space)
                .ok()
                .and_then(|p| p.as_constant())
                .ok_or_else(|| Outcome::input_error(format!("leaf constant `{s}` is not rational")))
        })
        .collect::<Result<Vec<Rational>, _>>()?;
    Ok(Some(LeafSpec::new(config.nu, constants)))
}

fn expression(config: &Config, text: &str) -> Result<LambdaSeries, Outcome> {
    parse_series(text, &VarSpace::new(config.nu))
        .map_err(|e| Outcome::input_error(format!("in `{text}`: {e}")))
}

pub fn dispatch(command: &Command, config: &Config) -> Outcome {
    match execute(command, config) {
        Ok(o) | Err(o) => o,
    }
}

fn execute(command: &Command, config: &Config) -> Result<Outcome, Outcome> {
    let geometry = config.geometry().map_err(Outcome::input_error)?;
    if *command == Command::Validate {
        return Ok(Outcome::report(&geometry.check()));
    }
    let space = VarSpace::new(config.nu);
    let ctx = context(config, geometry)?;
    let out = match command {
        Command::Validate => unreachable!("handled above"),
        Command::Star { f, g } => {
            let s = ctx.star(&expression(config, f)?, &expression(config, g)?).map_err(from_fedosov)?;
            exact(s.value.render(&space), s.exact_order)
        }
        Command::Lift { f } => {
            let a = ctx.lift(&expression(config, f)?).map_err(from_fedosov)?;
            Outcome::ok(format!("{}\n", a.render(&space)))
        }
        Command::RElement => Outcome::ok(format!("{}\n", ctx.r().render(&space))),
        Command::Bidiff { max_deriv, max_lambda } => {
            let table = bidiff_table(&ctx, *max_deriv, *max_lambda).map_err(from_fedosov)?;
            Outcome::ok(table.to_string())
        }
        Command::Check { leaf: given } => {
            let leaf = leaf(config, given)?
                .unwrap_or_else(|| LeafSpec::new(config.nu, vec![Rational::from_i64(0); config.nu]));
            let report = invariant_report(&ctx, &[leaf]).map_err(from_fedosov)?;
            Outcome::report(&report)
        }
        Command::Act { f, m, leaf: given } => {
            let leaf = leaf(config, given)?
                .ok_or_else(|| Outcome::input_error("act needs a leaf: pass --leaf or set `leaf` in the config"))?;
            let s = ctx
                .act(&expression(config, f)?, &expression(config, m)?, &leaf)
                .map_err(from_fedosov)?;
            exact(s.value.render(&space), s.exact_order)
        }
    };
    Ok(out)
}

/// The value on stdout; the exact order on stderr so stdout re-parses as is.
fn exact(value: String, order: u32) -> Outcome {
    Outcome {
        code: EXIT_OK,
        stdout: format!("{value}\n"),
        stderr: format!("exact through lam^{order}\n"),
    }
}
