//! Deterministic case-study inputs.
//!
//! * `rezzato`: hourly NO2 readings at seven stations around Brescia over ten
//!   days, with outages at the Rezzato station (location 0).
//! * `afc-like`: a single-location stream of `|AF - AFref|` sampled every
//!   0.1 s.
//! * `zigbee`: humidity and role of the devices of a hop graph.

use std::fs;
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use strel_core::io::{
    build_model, write_edges, write_locations, write_updates, EdgeRow, LocationInfo,
};
use strel_core::{Interval, Result, SparseUpdate, SpatialModel, VarTable};

#[derive(Clone, Debug)]
pub struct Fixture {
    pub name: String,
    pub edges: Vec<EdgeRow>,
    pub locations: Vec<LocationInfo>,
    pub undirected: bool,
    pub updates: Vec<SparseUpdate>,
    /// Variable names; the `i`-th is dimension `i`.
    pub vars: Vec<String>,
    /// `(file stem, formula text)` pairs.
    pub formulas: Vec<(String, String)>,
    pub readme: String,
}

impl Fixture {
    pub fn model(&self) -> Result<SpatialModel> {
        build_model(&self.edges, Some(&self.locations), self.undirected)
    }

    pub fn var_table(&self) -> VarTable {
        VarTable::from_names(&self.vars)
    }

    pub fn vars_spec(&self) -> String {
        self.vars
            .iter()
            .enumerate()
            .map(|(i, v)| format!("{v}:{i}"))
            .collect::<Vec<_>>()
            .join(",")
    }

    pub fn formula(&self, stem: &str) -> Option<&str> {
        self.formulas
            .iter()
            .find(|(s, _)| s == stem)
            .map(|(_, f)| f.as_str())
    }

    /// Writes `graph.csv`, `locations.csv`, `signal.csv`, `vars.txt`, one
    /// `<stem>.strel` per formula and a `README.md`.
    pub fn write_to(&self, dir: &Path) -> std::io::Result<()> {
        fs::create_dir_all(dir)?;
        let to_io = |e: strel_core::Error| std::io::Error::other(e.to_string());
        write_edges(fs::File::create(dir.join("graph.csv"))?, &self.edges).map_err(to_io)?;
        write_locations(
            fs::File::create(dir.join("locations.csv"))?,
            &self.locations,
        )
        .map_err(to_io)?;
        write_updates(fs::File::create(dir.join("signal.csv"))?, &self.updates).map_err(to_io)?;
        fs::write(dir.join("vars.txt"), format!("{}\n", self.vars_spec()))?;
        for (stem, text) in &self.formulas {
            fs::write(dir.join(format!("{stem}.strel")), format!("{text}\n"))?;
        }
        fs::write(dir.join("README.md"), &self.readme)?;
        Ok(())
    }
}

/// Station layout: name, latitude, longitude. Location 0 is Rezzato; the
/// next three are within 10 km of it, the others further away.
const STATIONS: [(&str, f64, f64); 7] = [
    ("Rezzato", 45.5128, 10.3236),
    ("Brescia Turati", 45.5463, 10.2434),
    ("Brescia Villaggio Sereno", 45.5117, 10.2203),
    ("Brescia Broletto", 45.5414, 10.2194),
    ("Lonato", 45.4614, 10.4836),
    ("Sarezzo", 45.6533, 10.2016),
    ("Darfo", 45.8810, 10.1810),
];

/// Length of the Rezzato series in hours.
pub const REZZATO_HOURS: usize = 240;

/// Outages at Rezzato longer than the three-hour alert window.
pub const REZZATO_LONG_GAPS: [(f64, f64); 3] = [(40.0, 44.0), (110.0, 115.0), (190.0, 196.0)];

/// Outages at Rezzato of at most two hours.
pub const REZZATO_SHORT_GAPS: [(f64, f64); 3] = [(20.0, 21.0), (75.0, 77.0), (150.0, 152.0)];

/// Index in [`REZZATO_LONG_GAPS`] of the outage the nearby stations share.
pub const REZZATO_UNRELIEVED: usize = 2;

/// Outage of the stations within 10 km of Rezzato.
const NEIGHBOUR_GAP: (f64, f64) = (188.0, 198.0);

pub fn rezzato(seed: u64) -> Fixture {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let locations: Vec<LocationInfo> = STATIONS
        .iter()
        .map(|&(name, lat, lon)| LocationInfo {
            name: name.to_string(),
            coords: Some((lat, lon)),
        })
        .collect();
    let n = STATIONS.len();
    let mut edges = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            edges.push(EdgeRow {
                src: a,
                dst: b,
                weight: None,
            });
        }
    }
    let base: Vec<f64> = (0..n).map(|_| rng.random_range(35.0..70.0)).collect();
    let noise = Normal::new(0.0, 6.0).expect("valid deviation");
    let inside = |h: f64, gaps: &[(f64, f64)]| gaps.iter().any(|&(a, b)| a <= h && h < b);
    let mut updates = Vec::new();
    for hour in 0..REZZATO_HOURS {
        let h = hour as f64;
        let mut entries = Vec::new();
        for (l, b) in base.iter().enumerate() {
            let missing = match l {
                0 => inside(h, &REZZATO_LONG_GAPS) || inside(h, &REZZATO_SHORT_GAPS),
                1..=3 => inside(h, &[NEIGHBOUR_GAP]),
                _ => false,
            };
            if missing {
                continue;
            }
            // Daily cycle with a rush-hour bump, plus noise.
            let daily = 25.0
                * (((hour % 24) as f64 - 8.0) / 24.0 * std::f64::consts::TAU)
                    .cos()
                    .max(0.0);
            let v = (b + daily + noise.sample(&mut rng)).max(1.0);
            let v = (v * 10.0).round() / 10.0;
            entries.push((l, 0, Interval::new(v - 5.0, v + 5.0).expect("finite")));
        }
        updates.push(SparseUpdate::new(h, h + 1.0, entries).expect("valid span"));
    }
    let readme = "\
# Rezzato-shaped NO2 fixture

Hourly NO2 readings (ug/m3, +-5 imprecision) at seven stations for 240 hours.
Location 0 is Rezzato. Missing readings are simply absent from `signal.csv`
and stay `[-inf,inf]`.

* Rezzato outages longer than 3 h: [40,44), [110,115), [190,196).
* Rezzato outages of 1-2 h: [20,21), [75,77), [150,152).
* The three stations within 10 km of Rezzato are down over [188,198).

Edge weights are left empty in `graph.csv`: they are the great-circle
distances in km between the coordinates in `locations.csv`.

```
strel --graph graph.csv --locations locations.csv --undirected \\
      --signal signal.csv --vars NO2:0 --formula-file p1.strel --out out
```
"
    .to_string();
    Fixture {
        name: "rezzato".into(),
        edges,
        locations,
        undirected: true,
        updates,
        vars: vec!["NO2".into()],
        formulas: vec![
            ("p1".into(), "F[0,3] NO2 < 400".into()),
            ("p2".into(), "somewhere[<=10] NO2 < 400".into()),
        ],
        readme,
    }
}

/// Sampling period of the `afc-like` stream, in seconds.
pub const AFC_PERIOD: f64 = 0.1;

/// Start time of sample `k` of the `afc-like` stream.
pub fn afc_time(k: usize) -> f64 {
    k as f64 * AFC_PERIOD
}

pub fn afc_like(samples: usize, seed: u64) -> Fixture {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let noise: Normal<f64> = Normal::new(0.0, 0.02).expect("valid deviation");
    let mut updates = Vec::with_capacity(samples);
    let mut spike_left = 0usize;
    for k in 0..samples {
        // Occasional excursions above 0.1 that settle within a few samples.
        if spike_left == 0 && rng.random_bool(0.01) {
            spike_left = rng.random_range(2..8);
        }
        let v: f64 = if spike_left > 0 {
            spike_left -= 1;
            rng.random_range(0.12..0.3)
        } else {
            (0.04 + noise.sample(&mut rng)).abs().min(0.095)
        };
        let v = (v * 1e4).round() / 1e4;
        let iv = Interval::new(v - 1e-3, v + 1e-3).expect("finite");
        updates.push(
            SparseUpdate::new(afc_time(k), afc_time(k + 1), vec![(0, 0, iv)]).expect("valid span"),
        );
    }
    let readme = "\
# AFC-like fixture

A single location carrying `dAF = |AF - AFref|` sampled every 0.1 s, with
+-0.001 imprecision. The stream mostly stays below 0.1 with short excursions.

```
strel --graph graph.csv --locations locations.csv --signal signal.csv \\
      --vars dAF:0 --formula-file afc.strel --mode online --out out
```
"
    .to_string();
    Fixture {
        name: "afc-like".into(),
        edges: Vec::new(),
        locations: vec![LocationInfo {
            name: "engine".into(),
            coords: None,
        }],
        undirected: false,
        updates,
        vars: vec!["dAF".into()],
        formulas: vec![(
            "afc".into(),
            "G[10,30] (dAF > 0.1 -> F[0,1] dAF < 0.1)".into(),
        )],
        readme,
    }
}

/// Numeric encoding of device roles.
pub const ROLE_COORDINATOR: f64 = 0.0;
pub const ROLE_ROUTER: f64 = 1.0;
pub const ROLE_SENSOR: f64 = 2.0;

pub fn role_name(code: f64) -> &'static str {
    match code as i64 {
        0 => "coordinator",
        1 => "router",
        _ => "sensor",
    }
}

pub fn zigbee(nodes: usize, samples: usize, seed: u64) -> Fixture {
    let nodes = nodes.max(1);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pos: Vec<(f64, f64)> = (0..nodes)
        .map(|_| (rng.random_range(0.0..1.0), rng.random_range(0.0..1.0)))
        .collect();
    let radius = (2.5 / nodes as f64).sqrt().min(0.6);
    let mut edges = Vec::new();
    let mut linked = vec![vec![false; nodes]; nodes];
    let mut link = |a: usize, b: usize, edges: &mut Vec<EdgeRow>| {
        let (a, b) = (a.min(b), a.max(b));
        if a != b && !linked[a][b] {
            linked[a][b] = true;
            edges.push(EdgeRow {
                src: a,
                dst: b,
                weight: Some(1.0),
            });
        }
    };
    for a in 0..nodes {
        for b in a + 1..nodes {
            let (dx, dy) = (pos[a].0 - pos[b].0, pos[a].1 - pos[b].1);
            if (dx * dx + dy * dy).sqrt() <= radius {
                link(a, b, &mut edges);
            }
        }
    }
    // Chain each device to its nearest predecessor so the network is connected.
    for b in 1..nodes {
        let nearest = (0..b)
            .min_by(|&p, &q| {
                let d = |i: usize| (pos[i].0 - pos[b].0).powi(2) + (pos[i].1 - pos[b].1).powi(2);
                d(p).total_cmp(&d(q))
            })
            .expect("b >= 1");
        link(nearest, b, &mut edges);
    }
    let coordinators = (nodes / 25).max(1);
    let roles: Vec<f64> = (0..nodes)
        .map(|i| {
            if i < coordinators {
                ROLE_COORDINATOR
            } else if rng.random_bool(0.3) {
                ROLE_ROUTER
            } else {
                ROLE_SENSOR
            }
        })
        .collect();
    let levels: Vec<f64> = (0..nodes).map(|_| rng.random_range(25.0..70.0)).collect();
    let noise = Normal::new(0.0, 4.0).expect("valid deviation");
    let mut updates = Vec::with_capacity(samples);
    for k in 0..samples {
        let mut entries = Vec::with_capacity(2 * nodes);
        for l in 0..nodes {
            let h = ((levels[l] + noise.sample(&mut rng)) * 10.0).round() / 10.0;
            entries.push((l, 0, Interval::new(h - 0.5, h + 0.5).expect("finite")));
            entries.push((l, 1, Interval::point(roles[l])));
        }
        updates.push(SparseUpdate::new(k as f64, (k + 1) as f64, entries).expect("valid span"));
    }
    let locations = (0..nodes)
        .map(|l| LocationInfo {
            name: format!("{}-{l}", role_name(roles[l])),
            coords: None,
        })
        .collect();
    let readme = format!(
        "\
# ZigBee fixture

{nodes} devices over {samples} time steps. Dimension 0 is humidity `H`
(+-0.5), dimension 1 is the device role `role` encoded as a number:
coordinator = 0, router = 1, sensor = 2. All edges weigh 1 (one hop).

Equality has no atom of its own; `role = coordinator` is written as
`role > -0.5 & role < 0.5`.

```
strel --graph graph.csv --locations locations.csv --undirected \\
      --signal signal.csv --vars H:0,role:1 --formula-file phi2.strel --out out
```
"
    );
    Fixture {
        name: "zigbee".into(),
        edges,
        locations,
        undirected: true,
        updates,
        vars: vec!["H".into(), "role".into()],
        formulas: vec![
            ("phi1".into(), "H > 60 -> F[0,5] H < 30".into()),
            (
                "phi2".into(),
                format!("everywhere[<={nodes}] somewhere[<=9] (role > -0.5 & role < 0.5)"),
            ),
        ],
        readme,
    }
}

/// Builds a fixture by name.
pub fn by_name(name: &str, nodes: usize, samples: usize, seed: u64) -> Option<Fixture> {
    match name {
        "rezzato" => Some(rezzato(seed)),
        "afc-like" => Some(afc_like(samples, seed)),
        "zigbee" => Some(zigbee(nodes, samples, seed)),
        _ => None,
    }
}
