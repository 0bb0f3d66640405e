//! Sliding-window max/min over a piecewise-constant signal.
//!
//! The deque holds runs of consecutive pieces that share the same suffix
//! aggregate (the aggregate of the run's pieces and of every later piece in
//! the window). Suffix aggregates are monotone towards the front, so the
//! front entry always carries the aggregate of the whole window. Each entry
//! remembers when its last piece leaves the window; once that time is
//! reached the whole run is gone.

use std::collections::VecDeque;

use crate::offline::pieces::Block;
use crate::offline::temporal::{window_cells, window_range, Agg};
use crate::offline::Lattice;
use crate::signal::PCSignal;

#[derive(Clone, Copy, Debug)]
struct Entry<T> {
    leave: f64,
    agg: T,
}

/// Deque of suffix aggregates for one location.
#[derive(Clone, Debug)]
pub struct Window<T> {
    agg: Agg,
    entries: VecDeque<Entry<T>>,
}

impl<T: Lattice> Window<T> {
    pub fn new(agg: Agg) -> Self {
        Window {
            agg,
            entries: VecDeque::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Appends a piece with value `v` that stays in the window until (and
    /// excluding) output time `leave`.
    pub fn add(&mut self, v: T, leave: f64) {
        let op = self.agg;
        // Pop runs that `v` dominates: their suffix aggregate becomes `v`.
        while let Some(back) = self.entries.back() {
            if op.apply(back.agg, v) == v {
                self.entries.pop_back();
            } else {
                break;
            }
        }
        // Fold `v` into the remaining suffix aggregates, front-ward, until
        // one absorbs it. Runs whose aggregate becomes equal to their
        // successor's merge into the successor.
        let mut i = self.entries.len();
        let mut successor = v;
        while i > 0 {
            let cur = self.entries[i - 1].agg;
            let joined = op.apply(cur, v);
            if joined == successor {
                self.entries.remove(i - 1);
                if joined == cur {
                    break;
                }
            } else if joined == cur {
                break;
            } else {
                self.entries[i - 1].agg = joined;
                successor = joined;
            }
            i -= 1;
        }
        match self.entries.back_mut() {
            Some(back) if back.agg == v => back.leave = leave,
            _ => self.entries.push_back(Entry { leave, agg: v }),
        }
    }

    /// Drops every run whose last piece has left the window by time `t`.
    pub fn evict(&mut self, t: f64) {
        while self.entries.front().is_some_and(|e| e.leave <= t) {
            self.entries.pop_front();
        }
    }

    /// Aggregate of the window, or the neutral element when it is empty.
    pub fn front(&self) -> T {
        self.entries.front().map_or(self.agg.identity(), |e| e.agg)
    }
}

/// `F[a,b]` / `G[a,b]` of a one-dimensional signal over `[x, y)`, computed by
/// sweeping one deque per location over the shared cell grid.
pub fn sliding_window<T: Lattice>(
    child: &PCSignal<T>,
    a: f64,
    b: f64,
    agg: Agg,
    x: f64,
    y: f64,
) -> Block<T> {
    let n = child.locations();
    let times = child.times();
    let cells = window_cells(times, a, b, x, y, false);
    let (first, _) = window_range(times, a, b, x);
    let mut out = Block::with_capacity(cells.len(), n);
    out.times.extend_from_slice(&cells);
    out.values.resize(cells.len() * n, agg.identity());
    for l in 0..n {
        let mut w = Window::new(agg);
        let mut next = first;
        for (c, &t) in cells.iter().enumerate() {
            while next < times.len() && times[next] - b <= t {
                w.add(child.entry(next, l, 0), child.piece_end(next) - a);
                next += 1;
            }
            w.evict(t);
            out.values[c * n + l] = w.front();
        }
    }
    out
}
