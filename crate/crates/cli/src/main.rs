use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;
use strel_cli::fixtures;
use strel_cli::{
    configure_threads, run, CliError, Format, FormulaSource, Mode, RunConfig, Semantics,
};

/// Monitor spatio-temporal properties over interval-valued signals.
#[derive(Debug, Parser)]
#[command(name = "strel", version)]
struct Args {
    #[arg(long, value_enum, default_value_t = Mode::Offline)]
    mode: Mode,
    /// Formula text.
    #[arg(long, conflicts_with = "formula_file")]
    formula: Option<String>,
    #[arg(long)]
    formula_file: Option<PathBuf>,
    /// Edge list `src,dst,weight`.
    #[arg(long)]
    graph: Option<PathBuf>,
    /// Location list `index,name,lat,lon`.
    #[arg(long)]
    locations: Option<PathBuf>,
    /// Add every edge in both directions.
    #[arg(long)]
    undirected: bool,
    /// Update stream `t_a,t_b,location,dim,lo,hi`.
    #[arg(long)]
    signal: Option<PathBuf>,
    /// Variable table `name:dim,...`, or a file containing it.
    #[arg(long)]
    vars: Option<String>,
    #[arg(long, value_enum, default_value_t = Semantics::Robust)]
    semantics: Semantics,
    /// Run spatial operators on a worker pool (capped by STREL_THREADS).
    #[arg(long)]
    parallel: bool,
    #[arg(long)]
    seed: Option<u64>,
    /// Output directory. Without it the output signal is printed.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Write the named fixture (rezzato, afc-like, zigbee) into --out.
    #[arg(long)]
    fixture: Option<String>,
    /// Devices of the zigbee fixture.
    #[arg(long, default_value_t = 10)]
    nodes: usize,
    /// Samples of the afc-like and zigbee fixtures.
    #[arg(long, default_value_t = 100)]
    samples: usize,
}

fn main() -> ExitCode {
    let args = match Args::try_parse() {
        Ok(a) => a,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            e.exit()
        }
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(3);
        }
    };
    match main_inner(args) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn main_inner(args: Args) -> Result<(), CliError> {
    configure_threads()?;
    if let Some(name) = &args.fixture {
        let dir = args
            .out
            .as_ref()
            .ok_or_else(|| CliError::Config("--fixture requires --out".into()))?;
        let fixture = fixtures::by_name(name, args.nodes, args.samples, args.seed.unwrap_or(1))
            .ok_or_else(|| CliError::Config(format!("unknown fixture `{name}`")))?;
        return fixture
            .write_to(dir)
            .map_err(|e| CliError::Config(format!("{}: {e}", dir.display())));
    }
    let formula = match (args.formula, args.formula_file) {
        (Some(text), None) => FormulaSource::Text(text),
        (None, Some(path)) => FormulaSource::File(path),
        _ => {
            return Err(CliError::Config(
                "one of --formula or --formula-file is required".into(),
            ))
        }
    };
    let signal = args
        .signal
        .ok_or_else(|| CliError::Config("--signal is required".into()))?;
    let vars = args
        .vars
        .ok_or_else(|| CliError::Config("--vars is required".into()))?;
    let config = RunConfig {
        mode: args.mode,
        formula,
        graph: args.graph,
        locations: args.locations,
        undirected: args.undirected,
        signal,
        vars,
        semantics: args.semantics,
        parallel: args.parallel,
        seed: args.seed,
        out: args.out,
        format: args.format,
    };
    let report = run(&config)?;
    if config.out.is_none() {
        print!("{}", report.output);
    }
    eprint!("{}", report.summary);
    Ok(())
}
