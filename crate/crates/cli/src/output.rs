//! Rendering of output signals, update traces and run summaries.

use serde_json::{json, Value};
use strel_core::{Interval, PCSignal, SpatialModel, Verdict3};

use crate::config::{Format, Mode, Semantics};
use crate::run::{Execution, TraceRow};

/// Pieces of one location of a one-dimensional signal, merged where the
/// location's value does not change.
fn location_pieces<T: Copy + PartialEq>(s: &PCSignal<T>, l: usize) -> Vec<(f64, T)> {
    let mut out: Vec<(f64, T)> = Vec::new();
    for (i, &t) in s.times().iter().enumerate() {
        let v = s.entry(i, l, 0);
        if out.last().is_none_or(|&(_, w)| w != v) {
            out.push((t, v));
        }
    }
    out
}

fn num(x: f64) -> Value {
    if x.is_finite() {
        json!(x)
    } else {
        json!(x.to_string())
    }
}

pub fn render_robust(s: &PCSignal, model: &SpatialModel, format: Format) -> String {
    match format {
        Format::Csv => {
            let mut out = String::from("location,t,lo,hi\n");
            for l in 0..s.locations() {
                for (t, v) in location_pieces(s, l) {
                    out.push_str(&format!("{l},{t},{},{}\n", v.lo(), v.hi()));
                }
            }
            out
        }
        Format::Json => {
            let locations: Vec<Value> = (0..s.locations())
                .map(|l| {
                    let pieces: Vec<Value> = location_pieces(s, l)
                        .into_iter()
                        .map(|(t, v): (f64, Interval)| json!({"t": t, "lo": num(v.lo()), "hi": num(v.hi())}))
                        .collect();
                    json!({"location": l, "name": model.name(l), "pieces": pieces})
                })
                .collect();
            pretty(json!({"semantics": "robust", "locations": locations}))
        }
    }
}

pub fn render_boolean(s: &PCSignal<Verdict3>, model: &SpatialModel, format: Format) -> String {
    match format {
        Format::Csv => {
            let mut out = String::from("location,t,verdict\n");
            for l in 0..s.locations() {
                for (t, v) in location_pieces(s, l) {
                    out.push_str(&format!("{l},{t},{}\n", v.value()));
                }
            }
            out
        }
        Format::Json => {
            let locations: Vec<Value> = (0..s.locations())
                .map(|l| {
                    let pieces: Vec<Value> = location_pieces(s, l)
                        .into_iter()
                        .map(|(t, v)| json!({"t": t, "verdict": v.value()}))
                        .collect();
                    json!({"location": l, "name": model.name(l), "pieces": pieces})
                })
                .collect();
            pretty(json!({"semantics": "boolean", "locations": locations}))
        }
    }
}

pub fn render_output(
    exec: &Execution,
    model: &SpatialModel,
    semantics: Semantics,
    format: Format,
) -> String {
    match semantics {
        Semantics::Robust => render_robust(&exec.robustness, model, format),
        Semantics::Boolean => render_boolean(&exec.verdicts, model, format),
    }
}

fn span(t_a: f64, t_b: f64) -> String {
    format!("[{t_a},{t_b})")
}

pub fn render_trace(rows: &[TraceRow]) -> String {
    let mut out = String::from("update_index,applied_span,emitted_spans,elapsed_ns\n");
    for r in rows {
        let applied = span(r.applied.0, r.applied.1);
        let emitted: Vec<String> = r.emitted.iter().map(|&(a, b)| span(a, b)).collect();
        out.push_str(&format!(
            "{},\"{applied}\",\"{}\",{}\n",
            r.index,
            emitted.join(";"),
            r.elapsed_ns
        ));
    }
    out
}

pub fn render_summary(exec: &Execution, mode: Mode, parallel: bool) -> String {
    let total = exec.elapsed.as_nanos();
    let updates = exec.updates;
    let mean = if updates == 0 {
        0
    } else {
        total / updates as u128
    };
    pretty(json!({
        "mode": mode.name(),
        "parallel": parallel,
        "updates": updates,
        "total_ns": total as u64,
        "mean_ns_per_update": mean as u64,
    }))
}

fn pretty(v: Value) -> String {
    let mut s = serde_json::to_string_pretty(&v).expect("json values serialize");
    s.push('\n');
    s
}
