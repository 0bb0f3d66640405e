//! Acceptance suite: one line per criterion, non-zero exit on any failure.
//!
//! Tolerances: criterion 2 allows 1e-9 absolute slack; every other
//! comparison is exact.

use std::path::Path;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use strel_cli::fixtures::{
    self, REZZATO_HOURS, REZZATO_LONG_GAPS, REZZATO_SHORT_GAPS, REZZATO_UNRELIEVED,
};
use strel_cli::{execute, load, FormulaSource, Mode, RunConfig};
use strel_core::offline::spatial::{escape_from, reach_from};
use strel_core::offline::temporal::Agg;
use strel_core::offline::Domain;
use strel_core::online::window::sliding_window;
use strel_core::testkit::{
    covering_updates, naive_window, oracle_escape, oracle_reach, perturb, random_formula,
    random_interval, random_model, random_signal, truncate, FormulaParams, SignalParams,
    DENSE_STEP,
};
use strel_core::{
    boolean_eval, robust_eval, signal_distance, Interval, Monitor, PCSignal, SpatialModel, Verdict3,
};

const METRIC_TOLERANCE: f64 = 1e-9;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn secs(d: Duration) -> String {
    format!("{:.2}s", d.as_secs_f64())
}

fn random_case(
    rng: &mut ChaCha8Rng,
    max_nodes: usize,
    dims: usize,
) -> (SpatialModel, PCSignal, strel_core::Formula) {
    let model = random_model(rng, max_nodes);
    let p = SignalParams {
        locations: model.len(),
        dims,
        max_pieces: 8,
        ..Default::default()
    };
    let s = random_signal(rng, &p);
    let f = random_formula(
        rng,
        &FormulaParams {
            max_depth: 3,
            derived: true,
            ..Default::default()
        },
    );
    (model, s, f)
}

fn grid(horizon: f64) -> impl Iterator<Item = f64> {
    (0..=(horizon / DENSE_STEP) as usize).map(|k| k as f64 * DENSE_STEP)
}

fn soundness() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    let (cases, mut points, mut failures) = (2000, 0usize, 0usize);
    for _ in 0..cases {
        let (model, s, f) = random_case(&mut rng, 5, 2);
        let rho = robust_eval(&s, &model, &f).unwrap();
        let verdict = boolean_eval(&s, &model, &f).unwrap();
        let mut ok = rho.map(Verdict3::classify) == verdict;
        for t in grid(10.0) {
            for l in 0..model.len() {
                points += 1;
                let r = rho.value_at(l, t).unwrap()[0];
                ok &= Verdict3::classify(r) == verdict.value_at(l, t).unwrap()[0];
            }
        }
        failures += usize::from(!ok);
    }
    let elapsed = start.elapsed();
    outcome(
        failures == 0 && elapsed < Duration::from_secs(60),
        format!(
            "{cases} cases, {points} grid points, {failures} mismatching cases, {}",
            secs(elapsed)
        ),
    )
}

fn distance_contraction() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(202);
    let (cases, mut failures, mut worst) = (1000, 0usize, f64::NEG_INFINITY);
    for _ in 0..cases {
        let (model, s1, f) = random_case(&mut rng, 5, 2);
        let delta = rng.random_range(0.01..2.0);
        let s2 = perturb(&mut rng, &s1, delta);
        let d_in = signal_distance(&s1, &s2).unwrap();
        let d_out = signal_distance(
            &robust_eval(&s1, &model, &f).unwrap(),
            &robust_eval(&s2, &model, &f).unwrap(),
        )
        .unwrap();
        worst = worst.max(d_out - d_in);
        failures += usize::from(d_out > d_in + METRIC_TOLERANCE);
    }
    let elapsed = start.elapsed();
    outcome(
        failures == 0 && elapsed < Duration::from_secs(60),
        format!(
            "{cases} pairs, {failures} violations, max excess {worst:.3e} (tolerance {METRIC_TOLERANCE:e}), {}",
            secs(elapsed)
        ),
    )
}

fn correctness() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(303);
    let (mut pairs, mut points, mut failures, mut attempts) = (0usize, 0usize, 0usize, 0usize);
    while pairs < 1000 && attempts < 20_000 {
        attempts += 1;
        let (model, s1, f) = random_case(&mut rng, 5, 2);
        let delta = rng.random_range(0.01..0.45);
        let s2 = perturb(&mut rng, &s1, delta);
        let d = signal_distance(&s1, &s2).unwrap();
        let rho1 = robust_eval(&s1, &model, &f).unwrap();
        let (v1, v2) = (
            boolean_eval(&s1, &model, &f).unwrap(),
            boolean_eval(&s2, &model, &f).unwrap(),
        );
        let mut checked = 0;
        for t in grid(10.0) {
            for l in 0..model.len() {
                let r = rho1.value_at(l, t).unwrap()[0];
                if d < r.radius().lo() {
                    checked += 1;
                    failures +=
                        usize::from(v1.value_at(l, t).unwrap()[0] != v2.value_at(l, t).unwrap()[0]);
                }
            }
        }
        if checked > 0 {
            pairs += 1;
            points += checked;
        }
    }
    outcome(
        pairs >= 1000 && failures == 0,
        format!(
            "{pairs} pairs, {points} points under the radius bound, {failures} verdict changes"
        ),
    )
}

fn bit_equal(a: &PCSignal, b: &PCSignal) -> bool {
    a.locations() == b.locations()
        && a.times().len() == b.times().len()
        && a.times()
            .iter()
            .zip(b.times())
            .all(|(x, y)| x.to_bits() == y.to_bits())
        && (0..a.num_pieces()).all(|i| {
            a.piece(i).iter().zip(b.piece(i)).all(|(u, v)| {
                u.lo().to_bits() == v.lo().to_bits() && u.hi().to_bits() == v.hi().to_bits()
            })
        })
}

fn convergence() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(404);
    let (runs, mut failures) = (1000, 0usize);
    for _ in 0..runs {
        let (model, target, f) = random_case(&mut rng, 5, 2);
        let horizon = 10.0;
        let updates = covering_updates(&mut rng, &target, horizon);
        let expected = robust_eval(&truncate(&target, horizon), &model, &f).unwrap();
        let mut ok = true;
        for _ in 0..5 {
            let mut order = updates.clone();
            order.shuffle(&mut rng);
            let mut m = Monitor::new(model.clone(), &f, model.len(), 2).unwrap();
            for u in &order {
                m.apply(u).unwrap();
            }
            ok &= bit_equal(m.robustness(), &expected);
        }
        failures += usize::from(!ok);
    }
    outcome(
        failures == 0,
        format!(
            "{runs} runs x 5 permutations, {failures} mismatching runs, {}",
            secs(start.elapsed())
        ),
    )
}

fn window_oracle() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(505);
    let (fragments, mut cells, mut failures) = (500, 0usize, 0usize);
    for _ in 0..fragments {
        let p = SignalParams {
            locations: rng.random_range(1..=3),
            max_pieces: 12,
            ..Default::default()
        };
        let s = random_signal(&mut rng, &p);
        let a = rng.random_range(0..5) as f64 * 0.5;
        let b = a + rng.random_range(0..7) as f64 * 0.5;
        let agg = if rng.random_bool(0.5) {
            Agg::Max
        } else {
            Agg::Min
        };
        let x = rng.random_range(0..14) as f64 * 0.5;
        let y = x + rng.random_range(1..14) as f64 * 0.5;
        let out = sliding_window(&s, a, b, agg, x, y);
        let n = s.locations();
        for (c, &t) in out.times.iter().enumerate() {
            cells += 1;
            failures +=
                usize::from(out.values[c * n..(c + 1) * n] != naive_window(&s, a, b, agg, t)[..]);
        }
    }
    outcome(
        failures == 0,
        format!("{fragments} fragments, {cells} cells, {failures} mismatches"),
    )
}

fn spatial_oracle() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(606);
    let (graphs, mut checks, mut failures) = (250, 0usize, 0usize);
    let p = SignalParams::default();
    for _ in 0..graphs {
        let model = random_model(&mut rng, 5);
        let n = model.len();
        for _ in 0..4 {
            let lhs: Vec<Interval> = (0..n).map(|_| random_interval(&mut rng, &p)).collect();
            let rhs: Vec<Interval> = (0..n).map(|_| random_interval(&mut rng, &p)).collect();
            let lo = |v: &[Interval]| v.iter().map(|i| i.lo()).collect::<Vec<f64>>();
            for d in [0.5, 1.0, 2.0, 3.0, 5.0, f64::INFINITY] {
                let reach = Interval::reach(&model, d, &lhs, &rhs, false);
                let escape = Interval::escape(&model, d, &lhs, false);
                for src in 0..n {
                    checks += 4;
                    failures += usize::from(reach[src] != oracle_reach(&model, d, &lhs, &rhs, src));
                    failures += usize::from(escape[src] != oracle_escape(&model, d, &lhs, src));
                    let (l_lo, r_lo) = (lo(&lhs), lo(&rhs));
                    failures += usize::from(
                        reach_from(&model, d, &l_lo, &r_lo, src)
                            != oracle_reach(&model, d, &l_lo, &r_lo, src),
                    );
                    failures += usize::from(
                        escape_from(&model, d, &l_lo, src) != oracle_escape(&model, d, &l_lo, src),
                    );
                }
            }
        }
    }
    outcome(
        failures == 0,
        format!("{graphs} graphs, {checks} kernel checks, {failures} disagreements"),
    )
}

/// Maximal spans of `[0, horizon)` where the lower bound at `location` is -inf.
fn minus_inf_spans(s: &PCSignal, location: usize, horizon: f64) -> Vec<(f64, f64)> {
    let mut out: Vec<(f64, f64)> = Vec::new();
    for i in 0..s.num_pieces() {
        let (t0, t1) = (s.piece_start(i), s.piece_end(i).min(horizon));
        if t0 >= horizon || s.entry(i, location, 0).lo() != f64::NEG_INFINITY {
            continue;
        }
        match out.last_mut() {
            Some(last) if last.1 == t0 => last.1 = t1,
            _ => out.push((t0, t1)),
        }
    }
    out
}

fn rezzato_shape() -> Outcome {
    let fixture = fixtures::rezzato(1);
    let model = fixture.model().unwrap();
    let vars = fixture.var_table();
    let dims = vars.dims();
    let mut signal = PCSignal::undefined(model.len(), dims).unwrap();
    for u in &fixture.updates {
        signal.refine_sparse(u).unwrap();
    }
    let eval = |stem: &str| {
        let f = strel_core::parse(fixture.formula(stem).unwrap(), &vars).unwrap();
        robust_eval(&signal, &model, &f).unwrap()
    };
    let horizon = REZZATO_HOURS as f64;
    let within = |span: (f64, f64), gap: (f64, f64)| gap.0 <= span.0 && span.1 <= gap.1;
    let p1 = minus_inf_spans(&eval("p1"), 0, horizon);
    let p1_inside_long = p1
        .iter()
        .all(|&s| REZZATO_LONG_GAPS.iter().any(|&g| within(s, g)));
    let p1_hits: Vec<bool> = REZZATO_LONG_GAPS
        .iter()
        .map(|&g| p1.iter().any(|&s| within(s, g)))
        .collect();
    let p1_short_clear = REZZATO_SHORT_GAPS
        .iter()
        .all(|&g| p1.iter().all(|&s| s.1 <= g.0 || g.1 <= s.0));
    let p2 = minus_inf_spans(&eval("p2"), 0, horizon);
    let p2_hits: Vec<usize> = (0..REZZATO_LONG_GAPS.len())
        .filter(|&k| p2.iter().any(|&s| within(s, REZZATO_LONG_GAPS[k])))
        .collect();
    let p2_only_gaps = p2
        .iter()
        .all(|&s| REZZATO_LONG_GAPS.iter().any(|&g| within(s, g)));
    let pass = p1_inside_long
        && p1_hits.iter().all(|&h| h)
        && p1_short_clear
        && p2_hits == [REZZATO_UNRELIEVED]
        && p2_only_gaps;
    outcome(
        pass,
        format!(
            "property (1) -inf spans {p1:?} (long gaps hit {}/3, short gaps hit none: {p1_short_clear}); \
             property (2) -inf spans {p2:?} (long gaps left {})",
            p1_hits.iter().filter(|&&h| h).count(),
            p2_hits.len()
        ),
    )
}

fn run_config(
    dir: &Path,
    stem: &str,
    vars: &str,
    mode: Mode,
    parallel: bool,
    seed: Option<u64>,
) -> RunConfig {
    let mut c = RunConfig::new(
        FormulaSource::File(dir.join(format!("{stem}.strel"))),
        Some(dir.join("graph.csv")),
        dir.join("signal.csv"),
        vars,
    );
    c.locations = Some(dir.join("locations.csv"));
    c.undirected = true;
    c.mode = mode;
    c.parallel = parallel;
    c.seed = seed;
    c
}

fn afc_performance() -> Outcome {
    let dir = tempfile::tempdir().unwrap();
    let fixture = fixtures::afc_like(10_000, 1);
    fixture.write_to(dir.path()).unwrap();
    let vars = fixture.vars_spec();

    let start = Instant::now();
    let in_order = load(&run_config(
        dir.path(),
        "afc",
        &vars,
        Mode::Online,
        false,
        None,
    ))
    .and_then(|inputs| execute(&inputs, Mode::Online, false, None))
    .unwrap();
    let in_order_time = start.elapsed();

    let start = Instant::now();
    let shuffled = load(&run_config(
        dir.path(),
        "afc",
        &vars,
        Mode::OnlineShuffled,
        false,
        Some(7),
    ))
    .and_then(|inputs| execute(&inputs, Mode::OnlineShuffled, false, Some(7)))
    .unwrap();
    let shuffled_time = start.elapsed();

    let offline = load(&run_config(
        dir.path(),
        "afc",
        &vars,
        Mode::Offline,
        false,
        None,
    ))
    .and_then(|inputs| execute(&inputs, Mode::Offline, false, None))
    .unwrap();
    let converged = bit_equal(&in_order.robustness, &shuffled.robustness)
        && bit_equal(&in_order.robustness, &offline.robustness);
    outcome(
        in_order_time < Duration::from_secs(2) && converged,
        format!(
            "10000 updates: in-order {}, shuffled {} ({:.1}x), converged to offline: {converged}",
            secs(in_order_time),
            secs(shuffled_time),
            shuffled_time.as_secs_f64() / in_order_time.as_secs_f64()
        ),
    )
}

fn zigbee_performance() -> Outcome {
    let dir = tempfile::tempdir().unwrap();
    let fixture = fixtures::zigbee(100, 100, 7);
    fixture.write_to(dir.path()).unwrap();
    let vars = fixture.vars_spec();

    let start = Instant::now();
    let seq = load(&run_config(
        dir.path(),
        "phi2",
        &vars,
        Mode::Online,
        false,
        None,
    ))
    .and_then(|inputs| execute(&inputs, Mode::Online, false, None))
    .unwrap();
    let seq_time = start.elapsed();
    let start = Instant::now();
    let par = load(&run_config(
        dir.path(),
        "phi2",
        &vars,
        Mode::Online,
        true,
        None,
    ))
    .and_then(|inputs| execute(&inputs, Mode::Online, true, None))
    .unwrap();
    let par_time = start.elapsed();
    let identical = bit_equal(&seq.robustness, &par.robustness);
    outcome(
        seq_time < Duration::from_secs(30) && identical,
        format!(
            "100 nodes x 100 samples: sequential {}, parallel {}, bit-identical: {identical}",
            secs(seq_time),
            secs(par_time)
        ),
    )
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 9] = [
        ("soundness", soundness),
        ("distance contraction", distance_contraction),
        ("correctness", correctness),
        ("online/offline convergence", convergence),
        ("sliding-window oracle", window_oracle),
        ("spatial oracle", spatial_oracle),
        ("case-study shape", rezzato_shape),
        ("afc-like performance", afc_performance),
        ("zigbee performance", zigbee_performance),
    ];
    let mut all = true;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let o = check();
        all &= o.pass;
        println!(
            "criterion {} ({name}): {} | {}",
            i + 1,
            if o.pass { "PASS" } else { "FAIL" },
            o.detail
        );
    }
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
