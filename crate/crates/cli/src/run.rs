//! Loading inputs and running one of the monitoring modes.

use std::fs;
use std::path::Path;
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use strel_core::io::{build_model, read_edges, read_locations, read_updates};
use strel_core::{
    boolean_eval, parse, robust_eval, Formula, Monitor, PCSignal, SparseUpdate, SpatialModel,
    VarTable, Verdict3,
};

use crate::config::{Format, FormulaSource, Mode, RunConfig};
use crate::output;
use crate::CliError;

/// Parsed inputs of a run.
#[derive(Clone, Debug)]
pub struct Inputs {
    pub model: SpatialModel,
    pub formula: Formula,
    pub vars: VarTable,
    pub updates: Vec<SparseUpdate>,
    pub signal_name: String,
}

#[derive(Clone, Debug, PartialEq)]
pub struct TraceRow {
    /// Position of the update in the input file.
    pub index: usize,
    /// Span of the input update.
    pub applied: (f64, f64),
    /// Spans of the formula's robustness that changed.
    pub emitted: Vec<(f64, f64)>,
    pub elapsed_ns: u128,
}

#[derive(Clone, Debug)]
pub struct Execution {
    pub robustness: PCSignal,
    pub verdicts: PCSignal<Verdict3>,
    pub trace: Vec<TraceRow>,
    pub updates: usize,
    pub elapsed: Duration,
}

fn read_text(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
}

fn open(path: &Path) -> Result<fs::File, CliError> {
    fs::File::open(path).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
}

pub fn load(config: &RunConfig) -> Result<Inputs, CliError> {
    let vars_text = if Path::new(&config.vars).is_file() {
        read_text(Path::new(&config.vars))?
    } else {
        config.vars.clone()
    };
    let vars: VarTable = vars_text
        .trim()
        .parse()
        .map_err(|e| CliError::Parse(format!("--vars: {e}")))?;

    let (text, source) = match &config.formula {
        FormulaSource::Text(t) => (t.clone(), "--formula".to_string()),
        FormulaSource::File(p) => (read_text(p)?, p.display().to_string()),
    };
    let formula = parse(&text, &vars).map_err(|e| CliError::core(&source, e))?;

    let locations = match &config.locations {
        Some(p) => {
            let name = p.display().to_string();
            Some(read_locations(open(p)?, &name).map_err(|e| CliError::core(&name, e))?)
        }
        None => None,
    };
    let edges = match &config.graph {
        Some(p) => {
            let name = p.display().to_string();
            read_edges(open(p)?, &name).map_err(|e| CliError::core(&name, e))?
        }
        None if locations.is_some() => Vec::new(),
        None => {
            return Err(CliError::Config(
                "one of --graph or --locations is required".into(),
            ))
        }
    };
    let graph_name = config
        .graph
        .as_ref()
        .map_or("--locations".to_string(), |p| p.display().to_string());
    let model = build_model(&edges, locations.as_deref(), config.undirected)
        .map_err(|e| CliError::core(&graph_name, e))?;

    let signal_name = config.signal.display().to_string();
    let updates = read_updates(open(&config.signal)?, &signal_name)
        .map_err(|e| CliError::core(&signal_name, e))?;
    Ok(Inputs {
        model,
        formula,
        vars,
        updates,
        signal_name,
    })
}

fn span_of(u: &SparseUpdate) -> String {
    format!("update [{},{})", u.t_a, u.t_b)
}

/// Runs the chosen mode without touching the file system.
pub fn execute(
    inputs: &Inputs,
    mode: Mode,
    parallel: bool,
    seed: Option<u64>,
) -> Result<Execution, CliError> {
    let model = &inputs.model;
    let dims = inputs.vars.dims();
    let locations = model.len();
    let ctx = |u: &SparseUpdate| format!("{}: {}", inputs.signal_name, span_of(u));
    match mode {
        Mode::Offline => {
            let start = Instant::now();
            let mut signal =
                PCSignal::undefined(locations, dims).map_err(|e| CliError::core("signal", e))?;
            for u in &inputs.updates {
                signal
                    .refine_sparse(u)
                    .map_err(|e| CliError::core(&ctx(u), e))?;
            }
            let robustness = robust_eval(&signal, model, &inputs.formula)
                .map_err(|e| CliError::core("formula", e))?;
            let verdicts = boolean_eval(&signal, model, &inputs.formula)
                .map_err(|e| CliError::core("formula", e))?;
            Ok(Execution {
                robustness,
                verdicts,
                trace: Vec::new(),
                updates: inputs.updates.len(),
                elapsed: start.elapsed(),
            })
        }
        Mode::Online | Mode::OnlineShuffled => {
            let mut order: Vec<usize> = (0..inputs.updates.len()).collect();
            if mode == Mode::OnlineShuffled {
                let seed = seed.ok_or_else(|| {
                    CliError::Config("--mode online-shuffled requires --seed".into())
                })?;
                order.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
            }
            let mut monitor = Monitor::new(model.clone(), &inputs.formula, locations, dims)
                .map_err(|e| CliError::core("formula", e))?
                .with_parallel(parallel);
            let mut trace = Vec::with_capacity(order.len());
            let start = Instant::now();
            for &i in &order {
                let u = &inputs.updates[i];
                let before = Instant::now();
                let emitted = monitor
                    .apply_sparse(u)
                    .map_err(|e| CliError::core(&ctx(u), e))?;
                let elapsed_ns = before.elapsed().as_nanos();
                trace.push(TraceRow {
                    index: i,
                    applied: (u.t_a, u.t_b),
                    emitted: merge_spans(emitted.iter().map(|e| (e.t_a, e.t_b))),
                    elapsed_ns,
                });
            }
            let elapsed = start.elapsed();
            let robustness = monitor.robustness().clone();
            let verdicts = monitor.verdicts();
            Ok(Execution {
                robustness,
                verdicts,
                trace,
                updates: order.len(),
                elapsed,
            })
        }
    }
}

fn merge_spans(spans: impl Iterator<Item = (f64, f64)>) -> Vec<(f64, f64)> {
    let mut out: Vec<(f64, f64)> = Vec::new();
    for (a, b) in spans {
        match out.last_mut() {
            Some(last) if last.1 == a => last.1 = b,
            _ => out.push((a, b)),
        }
    }
    out
}

/// What a run produced, already rendered.
#[derive(Clone, Debug)]
pub struct RunReport {
    pub execution: Execution,
    pub output: String,
    pub trace: Option<String>,
    pub summary: String,
}

/// Loads, executes and writes outputs: `output.csv` or `output.json`, and
/// for online modes `trace.csv` and `summary.json`, into `config.out`.
pub fn run(config: &RunConfig) -> Result<RunReport, CliError> {
    if config.mode == Mode::OnlineShuffled && config.seed.is_none() {
        return Err(CliError::Config(
            "--mode online-shuffled requires --seed".into(),
        ));
    }
    let inputs = load(config)?;
    let execution = execute(&inputs, config.mode, config.parallel, config.seed)?;
    let rendered =
        output::render_output(&execution, &inputs.model, config.semantics, config.format);
    let trace = (config.mode != Mode::Offline).then(|| output::render_trace(&execution.trace));
    let summary = output::render_summary(&execution, config.mode, config.parallel);
    if let Some(dir) = &config.out {
        let write = |name: &str, text: &str| {
            fs::write(dir.join(name), text)
                .map_err(|e| CliError::Config(format!("{}: {e}", dir.join(name).display())))
        };
        fs::create_dir_all(dir).map_err(|e| CliError::Config(format!("{}: {e}", dir.display())))?;
        let ext = match config.format {
            Format::Csv => "csv",
            Format::Json => "json",
        };
        write(&format!("output.{ext}"), &rendered)?;
        write("summary.json", &summary)?;
        if let Some(t) = &trace {
            write("trace.csv", t)?;
        }
    }
    Ok(RunReport {
        execution,
        output: rendered,
        trace,
        summary,
    })
}
