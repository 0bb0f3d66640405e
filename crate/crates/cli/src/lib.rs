//! Command-line front end for strel-core: loads a spatial model, a formula
//! and an update stream, runs offline or online monitoring, and writes the
//! resulting signal. Also generates the case-study fixtures.

pub mod config;
pub mod fixtures;
pub mod output;
pub mod run;

pub use config::{Format, FormulaSource, Mode, RunConfig, Semantics};
pub use run::{execute, load, run, Execution, Inputs, RunReport, TraceRow};

/// Failure of a run, carrying its process exit code.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Parse(String),
    #[error("{0}")]
    Refinement(String),
    #[error("{0}")]
    Config(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Parse(_) => 1,
            CliError::Refinement(_) => 2,
            CliError::Config(_) => 3,
        }
    }

    /// Classifies a library error raised while handling `context`.
    pub fn core(context: &str, err: strel_core::Error) -> CliError {
        use strel_core::Error as E;
        match &err {
            E::RefinementViolation { .. } => CliError::Refinement(format!("{context}: {err}")),
            E::Syntax { line, column, .. } | E::UnknownVariable { line, column, .. } => {
                CliError::Parse(format!("{context}:{line}:{column}: {err}"))
            }
            // Format errors already name their source and line.
            E::Format { .. } => CliError::Parse(err.to_string()),
            _ => CliError::Parse(format!("{context}: {err}")),
        }
    }
}

/// Caps the rayon pool at `STREL_THREADS` threads when the variable is set.
pub fn configure_threads() -> Result<(), CliError> {
    let Ok(value) = std::env::var("STREL_THREADS") else {
        return Ok(());
    };
    let threads: usize = value
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| {
            CliError::Config(format!(
                "STREL_THREADS must be a positive integer, got `{value}`"
            ))
        })?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| CliError::Config(format!("STREL_THREADS: {e}")))
}
