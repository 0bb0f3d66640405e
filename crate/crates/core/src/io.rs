//! CSV formats for spatial models and signal updates.
//!
//! * graph: `src,dst,weight`; an empty weight means the great-circle
//!   distance in km between the two locations' coordinates.
//! * locations: `index,name,lat,lon`; `lat` and `lon` may be empty.
//! * updates: `t_a,t_b,location,dim,lo,hi`; rows sharing `(t_a, t_b)` form
//!   one update, entries not named keep their current value.

use std::collections::HashMap;
use std::io::{Read, Write};

use crate::error::{Error, Result};
use crate::interval::{parse_endpoint, Interval};
use crate::signal::SparseUpdate;
use crate::space::{haversine_km, SpatialModel};

/// One row of a locations file.
#[derive(Clone, Debug, PartialEq)]
pub struct LocationInfo {
    pub name: String,
    pub coords: Option<(f64, f64)>,
}

/// A graph edge whose weight may be left to the coordinates.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EdgeRow {
    pub src: usize,
    pub dst: usize,
    pub weight: Option<f64>,
}

fn format_err(source: &str, line: u64, message: impl Into<String>) -> Error {
    Error::Format {
        source_name: source.to_string(),
        line: line as usize,
        message: message.into(),
    }
}

/// Reads the records of a headed CSV file, checking the header names.
/// Yields `(line, fields)`.
fn records<R: Read>(reader: R, source: &str, header: &[&str]) -> Result<Vec<(u64, Vec<String>)>> {
    let mut rdr = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .flexible(false)
        .from_reader(reader);
    let found: Vec<String> = rdr
        .headers()
        .map_err(|e| format_err(source, 1, e.to_string()))?
        .iter()
        .map(str::to_string)
        .collect();
    if found != header {
        return Err(format_err(
            source,
            1,
            format!(
                "expected header `{}`, found `{}`",
                header.join(","),
                found.join(",")
            ),
        ));
    }
    let mut out = Vec::new();
    for rec in rdr.records() {
        let rec = rec.map_err(|e| {
            let line = e.position().map_or(0, |p| p.line());
            format_err(source, line, e.to_string())
        })?;
        let line = rec.position().map_or(0, |p| p.line());
        out.push((line, rec.iter().map(str::to_string).collect()));
    }
    Ok(out)
}

fn field<T: std::str::FromStr>(source: &str, line: u64, name: &str, text: &str) -> Result<T> {
    text.parse()
        .map_err(|_| format_err(source, line, format!("bad {name} `{text}`")))
}

fn number(source: &str, line: u64, name: &str, text: &str) -> Result<f64> {
    parse_endpoint(text).ok_or_else(|| format_err(source, line, format!("bad {name} `{text}`")))
}

pub fn read_edges<R: Read>(reader: R, source: &str) -> Result<Vec<EdgeRow>> {
    records(reader, source, &["src", "dst", "weight"])?
        .into_iter()
        .map(|(line, f)| {
            Ok(EdgeRow {
                src: field(source, line, "src", &f[0])?,
                dst: field(source, line, "dst", &f[1])?,
                weight: if f[2].is_empty() {
                    None
                } else {
                    Some(number(source, line, "weight", &f[2])?)
                },
            })
        })
        .collect()
}

/// Reads a locations file; indices must be `0..n` in order.
pub fn read_locations<R: Read>(reader: R, source: &str) -> Result<Vec<LocationInfo>> {
    let mut out = Vec::new();
    for (line, f) in records(reader, source, &["index", "name", "lat", "lon"])? {
        let index: usize = field(source, line, "index", &f[0])?;
        if index != out.len() {
            return Err(format_err(
                source,
                line,
                format!("expected index {}, found {index}", out.len()),
            ));
        }
        let coords = match (f[2].is_empty(), f[3].is_empty()) {
            (true, true) => None,
            (false, false) => Some((
                number(source, line, "lat", &f[2])?,
                number(source, line, "lon", &f[3])?,
            )),
            _ => {
                return Err(format_err(
                    source,
                    line,
                    "lat and lon must both be given or both empty",
                ))
            }
        };
        out.push(LocationInfo {
            name: f[1].clone(),
            coords,
        });
    }
    Ok(out)
}

/// Builds a model from edge rows. The number of locations is taken from
/// `locations` when given, otherwise from the largest index used.
pub fn build_model(
    edges: &[EdgeRow],
    locations: Option<&[LocationInfo]>,
    undirected: bool,
) -> Result<SpatialModel> {
    let n = match locations {
        Some(locs) => locs.len(),
        None => edges
            .iter()
            .map(|e| e.src.max(e.dst) + 1)
            .max()
            .unwrap_or(0),
    };
    let mut resolved = Vec::with_capacity(edges.len());
    for e in edges {
        let w = match e.weight {
            Some(w) => w,
            None => {
                let coords = |i: usize| locations.and_then(|l| l.get(i)).and_then(|l| l.coords);
                match (coords(e.src), coords(e.dst)) {
                    (Some(a), Some(b)) => haversine_km(a, b),
                    _ => {
                        return Err(Error::InvalidModel(format!(
                            "edge {}->{} has no weight and its endpoints have no coordinates",
                            e.src, e.dst
                        )))
                    }
                }
            }
        };
        resolved.push((e.src, e.dst, w));
    }
    let model = if undirected {
        SpatialModel::undirected(n, resolved)?
    } else {
        SpatialModel::new(n, resolved)?
    };
    match locations {
        Some(locs) => model.with_names(locs.iter().map(|l| l.name.clone()).collect()),
        None => Ok(model),
    }
}

/// Reads an update file. Updates are returned in order of first appearance
/// of their `(t_a, t_b)` key.
pub fn read_updates<R: Read>(reader: R, source: &str) -> Result<Vec<SparseUpdate>> {
    let mut order: Vec<(f64, f64, u64)> = Vec::new();
    let mut groups: HashMap<(u64, u64), Vec<(usize, usize, Interval)>> = HashMap::new();
    for (line, f) in records(
        reader,
        source,
        &["t_a", "t_b", "location", "dim", "lo", "hi"],
    )? {
        let t_a = number(source, line, "t_a", &f[0])?;
        let t_b = number(source, line, "t_b", &f[1])?;
        let loc = field(source, line, "location", &f[2])?;
        let dim = field(source, line, "dim", &f[3])?;
        let lo = number(source, line, "lo", &f[4])?;
        let hi = number(source, line, "hi", &f[5])?;
        let v = Interval::new(lo, hi).map_err(|e| format_err(source, line, e.to_string()))?;
        if !(t_a >= 0.0 && t_a < t_b && t_b.is_finite()) {
            return Err(format_err(source, line, format!("bad span [{t_a},{t_b})")));
        }
        let key = (t_a.to_bits(), t_b.to_bits());
        let entries = groups.entry(key).or_default();
        if entries.is_empty() {
            order.push((t_a, t_b, line));
        }
        entries.push((loc, dim, v));
    }
    order
        .into_iter()
        .map(|(t_a, t_b, line)| {
            let entries = groups
                .remove(&(t_a.to_bits(), t_b.to_bits()))
                .unwrap_or_default();
            SparseUpdate::new(t_a, t_b, entries)
                .map_err(|e| format_err(source, line, e.to_string()))
        })
        .collect()
}

fn render(x: f64) -> String {
    // `Display` for f64 already prints `inf` and `-inf`.
    format!("{x}")
}

pub fn write_updates<W: Write>(writer: W, updates: &[SparseUpdate]) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    let io = |e: csv::Error| format_err("output", 0, e.to_string());
    w.write_record(["t_a", "t_b", "location", "dim", "lo", "hi"])
        .map_err(io)?;
    for u in updates {
        for &(l, d, v) in &u.entries {
            w.write_record([
                render(u.t_a),
                render(u.t_b),
                l.to_string(),
                d.to_string(),
                render(v.lo()),
                render(v.hi()),
            ])
            .map_err(io)?;
        }
    }
    w.flush()
        .map_err(|e| format_err("output", 0, e.to_string()))
}

pub fn write_edges<W: Write>(writer: W, edges: &[EdgeRow]) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    let io = |e: csv::Error| format_err("output", 0, e.to_string());
    w.write_record(["src", "dst", "weight"]).map_err(io)?;
    for e in edges {
        let weight = e.weight.map(render).unwrap_or_default();
        w.write_record([e.src.to_string(), e.dst.to_string(), weight])
            .map_err(io)?;
    }
    w.flush()
        .map_err(|e| format_err("output", 0, e.to_string()))
}

pub fn write_locations<W: Write>(writer: W, locations: &[LocationInfo]) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    let io = |e: csv::Error| format_err("output", 0, e.to_string());
    w.write_record(["index", "name", "lat", "lon"])
        .map_err(io)?;
    for (i, l) in locations.iter().enumerate() {
        let (lat, lon) = l.coords.map_or((String::new(), String::new()), |(a, b)| {
            (render(a), render(b))
        });
        w.write_record([i.to_string(), l.name.clone(), lat, lon])
            .map_err(io)?;
    }
    w.flush()
        .map_err(|e| format_err("output", 0, e.to_string()))
}
