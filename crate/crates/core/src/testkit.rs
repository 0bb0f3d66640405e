//! Random generators and brute-force oracles for tests and benchmarks.
//!
//! Generated times, window bounds and constants live on the `0.5` lattice so
//! that every breakpoint the semantics can produce is exactly representable
//! and a dense grid of step `1/16` hits every piece.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::formula::{CmpOp, Formula};
use crate::interval::Interval;
use crate::offline::temporal::Agg;
use crate::offline::{Domain, Lattice};
use crate::signal::{PCSignal, Update, ValueMatrix};
use crate::space::SpatialModel;

const INF: f64 = f64::INFINITY;

/// Step of the dense evaluation grid used by [`dense_eval`].
pub const DENSE_STEP: f64 = 1.0 / 16.0;

#[derive(Clone, Debug)]
pub struct SignalParams {
    pub locations: usize,
    pub dims: usize,
    pub max_pieces: usize,
    /// Last possible piece start.
    pub max_time: f64,
    /// Probability that an endpoint is infinite.
    pub inf_prob: f64,
    /// Values are drawn from `-value_range..=value_range`.
    pub value_range: i32,
}

impl Default for SignalParams {
    fn default() -> Self {
        SignalParams {
            locations: 1,
            dims: 1,
            max_pieces: 8,
            max_time: 8.0,
            inf_prob: 0.1,
            value_range: 5,
        }
    }
}

pub fn random_interval<R: Rng>(rng: &mut R, p: &SignalParams) -> Interval {
    let draw = |rng: &mut R| rng.random_range(-p.value_range..=p.value_range) as f64;
    let (x, y) = (draw(rng), draw(rng));
    let (mut lo, mut hi) = (x.min(y), x.max(y));
    if rng.random_bool(p.inf_prob) {
        lo = -INF;
    }
    if rng.random_bool(p.inf_prob) {
        hi = INF;
    }
    if rng.random_bool(0.2) {
        // Degenerate intervals exercise the exact comparisons.
        hi = lo.max(hi.min(lo));
        if lo == -INF {
            hi = -INF;
        }
    }
    Interval::new(lo, hi).unwrap()
}

fn random_times<R: Rng>(rng: &mut R, pieces: usize, max_time: f64) -> Vec<f64> {
    let slots = (max_time * 2.0) as usize;
    let mut times: Vec<f64> = (1..=slots).map(|k| k as f64 * 0.5).collect();
    let chosen = pieces.saturating_sub(1).min(times.len());
    let mut picked: Vec<f64> = times.partial_shuffle(rng, chosen).0.to_vec();
    picked.push(0.0);
    picked.sort_by(f64::total_cmp);
    times.clear();
    picked
}

/// A random canonical signal.
pub fn random_signal<R: Rng>(rng: &mut R, p: &SignalParams) -> PCSignal {
    let pieces = rng.random_range(1..=p.max_pieces);
    let times = random_times(rng, pieces, p.max_time);
    let w = p.locations * p.dims;
    let values = (0..times.len() * w)
        .map(|_| random_interval(rng, p))
        .collect();
    PCSignal::from_pieces(p.locations, p.dims, times, values).unwrap()
}

/// Perturbs every entry of `s` by at most `delta` per endpoint (keeping
/// infinite endpoints), on a refined time grid.
pub fn perturb<R: Rng>(rng: &mut R, s: &PCSignal, delta: f64) -> PCSignal {
    let mut times = s.times().to_vec();
    let extra: Vec<f64> = (0..rng.random_range(0..3))
        .map(|_| rng.random_range(1..16) as f64 * 0.5)
        .collect();
    times.extend(extra);
    times.sort_by(f64::total_cmp);
    times.dedup();
    let mut values = Vec::new();
    for &t in &times {
        for l in 0..s.locations() {
            for &v in s.value_at(l, t).unwrap() {
                let mut shift = |x: f64| {
                    if x.is_finite() {
                        x + rng.random_range(-1.0..=1.0) * delta
                    } else {
                        x
                    }
                };
                let (a, b) = (shift(v.lo()), shift(v.hi()));
                values.push(Interval::new(a.min(b), a.max(b)).unwrap());
            }
        }
    }
    PCSignal::from_pieces(s.locations(), s.dims(), times, values).unwrap()
}

#[derive(Clone, Debug)]
pub struct FormulaParams {
    pub max_depth: usize,
    /// Atom names; the `i`-th name is dimension `i`.
    pub vars: Vec<&'static str>,
    /// Include `&`, `->`, `G`, `somewhere` and `everywhere`.
    pub derived: bool,
    pub spatial: bool,
    pub temporal: bool,
    pub unbounded: bool,
}

impl Default for FormulaParams {
    fn default() -> Self {
        FormulaParams {
            max_depth: 3,
            vars: vec!["x", "y"],
            derived: false,
            spatial: true,
            temporal: true,
            unbounded: true,
        }
    }
}

fn half_steps<R: Rng>(rng: &mut R, max: u32) -> f64 {
    rng.random_range(0..=max) as f64 * 0.5
}

/// A random formula of depth at most `p.max_depth`.
pub fn random_formula<R: Rng>(rng: &mut R, p: &FormulaParams) -> Formula {
    if p.max_depth <= 1 || rng.random_bool(0.2) {
        return random_leaf(rng, p);
    }
    let sub = FormulaParams {
        max_depth: p.max_depth - 1,
        ..p.clone()
    };
    let mut kinds = vec!["not", "or"];
    if p.temporal {
        kinds.extend(["eventually", "until"]);
        if p.unbounded {
            kinds.push("unbounded");
        }
    }
    if p.spatial {
        kinds.extend(["reach", "escape"]);
    }
    if p.derived {
        kinds.extend(["and", "implies"]);
        if p.temporal {
            kinds.push("globally");
        }
        if p.spatial {
            kinds.extend(["somewhere", "everywhere"]);
        }
    }
    let window = |rng: &mut R| {
        let a = half_steps(rng, 4);
        (a, a + half_steps(rng, 4))
    };
    let radius = |rng: &mut R| rng.random_range(1..=4) as f64;
    let kind = kinds[rng.random_range(0..kinds.len())];
    match kind {
        "not" => Formula::not(random_formula(rng, &sub)),
        "or" => Formula::or(random_formula(rng, &sub), random_formula(rng, &sub)),
        "and" => Formula::and(random_formula(rng, &sub), random_formula(rng, &sub)),
        "implies" => Formula::implies(random_formula(rng, &sub), random_formula(rng, &sub)),
        "eventually" => {
            let (a, b) = window(rng);
            Formula::eventually(a, b, random_formula(rng, &sub))
        }
        "globally" => {
            let (a, b) = window(rng);
            Formula::globally(a, b, random_formula(rng, &sub))
        }
        "until" => {
            let (a, b) = window(rng);
            Formula::until(a, b, random_formula(rng, &sub), random_formula(rng, &sub))
        }
        "unbounded" => {
            Formula::unbounded_until(random_formula(rng, &sub), random_formula(rng, &sub))
        }
        "reach" => {
            let d = radius(rng);
            Formula::reach(d, random_formula(rng, &sub), random_formula(rng, &sub))
        }
        "escape" => Formula::escape(radius(rng), random_formula(rng, &sub)),
        "somewhere" => Formula::somewhere(radius(rng), random_formula(rng, &sub)),
        "everywhere" => Formula::everywhere(radius(rng), random_formula(rng, &sub)),
        _ => unreachable!(),
    }
}

fn random_leaf<R: Rng>(rng: &mut R, p: &FormulaParams) -> Formula {
    match rng.random_range(0..10) {
        0 => Formula::True,
        1 => Formula::False,
        _ => {
            let dim = rng.random_range(0..p.vars.len());
            let op = if rng.random_bool(0.5) {
                CmpOp::Gt
            } else {
                CmpOp::Lt
            };
            let c = rng.random_range(-3..=3) as f64;
            Formula::atom(p.vars[dim], dim, op, c)
        }
    }
}

/// A random directed graph with `1..=max_nodes` locations and integer
/// weights in `0..=3`.
pub fn random_model<R: Rng>(rng: &mut R, max_nodes: usize) -> SpatialModel {
    let n = rng.random_range(1..=max_nodes);
    let density = rng.random_range(0.2..0.7);
    let mut edges = Vec::new();
    for a in 0..n {
        for b in 0..n {
            if a != b && rng.random_bool(density) {
                edges.push((a, b, rng.random_range(0..=3) as f64));
            }
        }
    }
    SpatialModel::new(n, edges).unwrap()
}

/// Splits the first `horizon` time units of `target` into updates: every
/// piece becomes one or more updates with random cut points.
pub fn covering_updates<R: Rng>(rng: &mut R, target: &PCSignal, horizon: f64) -> Vec<Update> {
    let mut cuts: Vec<f64> = target
        .times()
        .iter()
        .copied()
        .filter(|&t| t < horizon)
        .collect();
    let slots = (horizon * 2.0) as usize;
    for _ in 0..rng.random_range(0..4) {
        cuts.push(rng.random_range(1..slots) as f64 * 0.5);
    }
    cuts.push(horizon);
    cuts.sort_by(f64::total_cmp);
    cuts.dedup();
    cuts.windows(2)
        .map(|w| {
            let i = target.piece_index_at(w[0]);
            let m =
                ValueMatrix::from_vec(target.locations(), target.dims(), target.piece(i).to_vec())
                    .unwrap();
            Update::new(w[0], w[1], m).unwrap()
        })
        .collect()
}

/// `target` restricted to `[0, horizon)` and unknown afterwards.
pub fn truncate(target: &PCSignal, horizon: f64) -> PCSignal {
    let mut s = PCSignal::undefined(target.locations(), target.dims()).unwrap();
    for u in covering_updates_exact(target, horizon) {
        s.refine(&u).unwrap();
    }
    s
}

fn covering_updates_exact(target: &PCSignal, horizon: f64) -> Vec<Update> {
    let mut cuts: Vec<f64> = target
        .times()
        .iter()
        .copied()
        .filter(|&t| t < horizon)
        .collect();
    cuts.push(horizon);
    cuts.windows(2)
        .map(|w| {
            let i = target.piece_index_at(w[0]);
            let m =
                ValueMatrix::from_vec(target.locations(), target.dims(), target.piece(i).to_vec())
                    .unwrap();
            Update::new(w[0], w[1], m).unwrap()
        })
        .collect()
}

/// Window aggregate at time `t` by scanning the window's sample points
/// `t + a`, `t + b` and every piece start in between.
pub fn naive_window(child: &PCSignal, a: f64, b: f64, agg: Agg, t: f64) -> Vec<Interval> {
    let (lo, hi) = (t + a, t + b);
    let mut points = vec![lo, hi];
    points.extend(child.times().iter().copied().filter(|&s| lo < s && s <= hi));
    (0..child.locations())
        .map(|l| {
            points.iter().fold(agg.identity(), |acc, &p| {
                agg.apply(acc, child.value_at(l, p).unwrap()[0])
            })
        })
        .collect()
}

/// Reach at `src` by enumerating simple routes.
pub fn oracle_reach<T: Lattice>(m: &SpatialModel, d: f64, lhs: &[T], rhs: &[T], src: usize) -> T {
    let mut best = T::BOTTOM;
    for route in m.enumerate_prefix_routes(src, d) {
        let locs = route.locations();
        let mut prefix = T::TOP;
        for &l in locs {
            best = best.join(rhs[l].meet(prefix));
            prefix = prefix.meet(lhs[l]);
        }
    }
    best
}

/// Escape at `src` by enumerating simple routes.
pub fn oracle_escape<T: Lattice>(m: &SpatialModel, d: f64, arg: &[T], src: usize) -> T {
    let mut best = T::BOTTOM;
    for route in m.enumerate_prefix_routes(src, INF) {
        let mut prefix = T::TOP;
        for &l in route.locations() {
            if m.distance(src, l) >= d {
                best = best.join(prefix);
            }
            prefix = prefix.meet(arg[l]);
        }
    }
    best
}

/// Direct evaluation of the semantics on the dense grid `k * DENSE_STEP`.
///
/// Returns, for each location, the values at grid points `0..=horizon`.
/// Signals are constant after their last breakpoint, so values past the
/// horizon are read from the horizon itself. `horizon` must be at or after
/// the last piece start of `s`.
pub fn dense_eval<D: Domain>(
    s: &PCSignal,
    m: &SpatialModel,
    f: &Formula,
    horizon: f64,
) -> Vec<Vec<D>> {
    let points = (horizon / DENSE_STEP).ceil() as usize + 1;
    let steps = |x: f64| (x / DENSE_STEP).round() as usize;
    let n = s.locations();
    let at = |table: &Vec<Vec<D>>, l: usize, k: usize| table[l][k.min(points - 1)];
    match f {
        Formula::True => vec![vec![D::TOP; points]; n],
        Formula::False => vec![vec![D::BOTTOM; points]; n],
        Formula::Atom(atom) => (0..n)
            .map(|l| {
                (0..points)
                    .map(|k| {
                        let v = s.value_at(l, k as f64 * DENSE_STEP).unwrap()[atom.dim];
                        D::atom(v, atom.op, atom.c)
                    })
                    .collect()
            })
            .collect(),
        Formula::Not(x) => map_table(dense_eval::<D>(s, m, x, horizon), |v| v.neg()),
        Formula::Or(x, y) => zip_table(
            dense_eval(s, m, x, horizon),
            dense_eval(s, m, y, horizon),
            |p: D, q| p.join(q),
        ),
        Formula::And(x, y) => zip_table(
            dense_eval(s, m, x, horizon),
            dense_eval(s, m, y, horizon),
            |p: D, q| p.meet(q),
        ),
        Formula::Implies(x, y) => zip_table(
            dense_eval(s, m, x, horizon),
            dense_eval(s, m, y, horizon),
            |p: D, q| p.neg().join(q),
        ),
        Formula::Eventually { a, b, arg } | Formula::Globally { a, b, arg } => {
            let agg = if matches!(f, Formula::Eventually { .. }) {
                Agg::Max
            } else {
                Agg::Min
            };
            let child = dense_eval::<D>(s, m, arg, horizon);
            let (ka, kb) = (steps(*a), steps(*b));
            (0..n)
                .map(|l| {
                    (0..points)
                        .map(|k| {
                            (k + ka..=k + kb)
                                .fold(agg.identity(), |acc, j| agg.apply(acc, at(&child, l, j)))
                        })
                        .collect()
                })
                .collect()
        }
        Formula::Until { a, b, lhs, rhs } => {
            let (p, q) = (
                dense_eval::<D>(s, m, lhs, horizon),
                dense_eval::<D>(s, m, rhs, horizon),
            );
            let (ka, kb) = (steps(*a), steps(*b));
            (0..n)
                .map(|l| {
                    (0..points)
                        .map(|k| until_at(|j| at(&p, l, j), |j| at(&q, l, j), k, k + ka, k + kb))
                        .collect()
                })
                .collect()
        }
        Formula::UnboundedUntil(lhs, rhs) => {
            let (p, q) = (
                dense_eval::<D>(s, m, lhs, horizon),
                dense_eval::<D>(s, m, rhs, horizon),
            );
            (0..n)
                .map(|l| {
                    (0..points)
                        .map(|k| until_at(|j| at(&p, l, j), |j| at(&q, l, j), k, k, points - 1))
                        .collect()
                })
                .collect()
        }
        Formula::Reach { d, lhs, rhs } => {
            let (p, q) = (
                dense_eval::<D>(s, m, lhs, horizon),
                dense_eval::<D>(s, m, rhs, horizon),
            );
            spatial_table(n, points, |k, l| {
                let (pl, ql) = (column(&p, k), column(&q, k));
                oracle_reach(m, *d, &pl, &ql, l)
            })
        }
        Formula::Escape { d, arg } => {
            let p = dense_eval::<D>(s, m, arg, horizon);
            spatial_table(n, points, |k, l| oracle_escape(m, *d, &column(&p, k), l))
        }
        Formula::Somewhere { d, arg } => {
            let p = dense_eval::<D>(s, m, arg, horizon);
            let top = vec![D::TOP; n];
            spatial_table(n, points, |k, l| {
                oracle_reach(m, *d, &top, &column(&p, k), l)
            })
        }
        Formula::Everywhere { d, arg } => {
            let p = dense_eval::<D>(s, m, arg, horizon);
            let top = vec![D::TOP; n];
            spatial_table(n, points, |k, l| {
                let neg: Vec<D> = column(&p, k).into_iter().map(|v| v.neg()).collect();
                oracle_reach(m, *d, &top, &neg, l).neg()
            })
        }
    }
}

/// `max over j in [from, to]` of `rhs(j) ∧ min over i in [t, j] of lhs(i)`.
fn until_at<D: Lattice>(
    lhs: impl Fn(usize) -> D,
    rhs: impl Fn(usize) -> D,
    t: usize,
    from: usize,
    to: usize,
) -> D {
    let mut prefix = D::TOP;
    let mut best = D::BOTTOM;
    for j in t..=to {
        prefix = prefix.meet(lhs(j));
        if j >= from {
            best = best.join(rhs(j).meet(prefix));
        }
    }
    best
}

fn column<D: Copy>(table: &[Vec<D>], k: usize) -> Vec<D> {
    table.iter().map(|row| row[k]).collect()
}

fn spatial_table<D>(n: usize, points: usize, f: impl Fn(usize, usize) -> D) -> Vec<Vec<D>> {
    (0..n)
        .map(|l| (0..points).map(|k| f(k, l)).collect())
        .collect()
}

fn map_table<D: Copy>(t: Vec<Vec<D>>, f: impl Fn(D) -> D) -> Vec<Vec<D>> {
    t.into_iter()
        .map(|row| row.into_iter().map(&f).collect())
        .collect()
}

fn zip_table<D: Copy>(a: Vec<Vec<D>>, b: Vec<Vec<D>>, f: impl Fn(D, D) -> D) -> Vec<Vec<D>> {
    a.into_iter()
        .zip(b)
        .map(|(x, y)| x.into_iter().zip(y).map(|(p, q)| f(p, q)).collect())
        .collect()
}
