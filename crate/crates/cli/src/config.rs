use std::path::PathBuf;

use clap::ValueEnum;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Offline,
    Online,
    OnlineShuffled,
}

impl Mode {
    pub fn name(self) -> &'static str {
        match self {
            Mode::Offline => "offline",
            Mode::Online => "online",
            Mode::OnlineShuffled => "online-shuffled",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Semantics {
    Boolean,
    Robust,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FormulaSource {
    Text(String),
    File(PathBuf),
}

#[derive(Clone, Debug)]
pub struct RunConfig {
    pub mode: Mode,
    pub formula: FormulaSource,
    /// Edge list; may be omitted when `locations` is given.
    pub graph: Option<PathBuf>,
    pub locations: Option<PathBuf>,
    pub undirected: bool,
    pub signal: PathBuf,
    /// `name:dim,...`, or a path to a file holding that text.
    pub vars: String,
    pub semantics: Semantics,
    pub parallel: bool,
    pub seed: Option<u64>,
    /// Output directory; without it the output signal goes to stdout.
    pub out: Option<PathBuf>,
    pub format: Format,
}

impl RunConfig {
    pub fn new(
        formula: FormulaSource,
        graph: Option<PathBuf>,
        signal: PathBuf,
        vars: impl Into<String>,
    ) -> Self {
        RunConfig {
            mode: Mode::Offline,
            formula,
            graph,
            locations: None,
            undirected: false,
            signal,
            vars: vars.into(),
            semantics: Semantics::Robust,
            parallel: false,
            seed: None,
            out: None,
            format: Format::Csv,
        }
    }
}
