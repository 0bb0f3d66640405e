//! Temporal operators evaluated exactly on piece-boundary grids.
//!
//! Output cells are delimited by the times where some input piece enters or
//! leaves the window. For `F[a,b]` and friends, piece `k` (covering
//! `[s_k, s_{k+1})`) is inside the window of output time `t` iff
//! `s_k - b <= t` and `t < s_{k+1} - a`. Every membership test is written with
//! those two subtractions, and the cell boundaries are produced by the same
//! subtractions, so grid evaluation is exact under floating point.

use super::pieces::{merged_grid, Block};
use super::Lattice;
use crate::signal::PCSignal;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Agg {
    Max,
    Min,
}

impl Agg {
    #[inline]
    pub fn apply<T: Lattice>(self, x: T, y: T) -> T {
        match self {
            Agg::Max => x.join(y),
            Agg::Min => x.meet(y),
        }
    }

    #[inline]
    pub fn identity<T: Lattice>(self) -> T {
        match self {
            Agg::Max => T::BOTTOM,
            Agg::Min => T::TOP,
        }
    }
}

/// Sorted cell starts of a window operator over `[x, y)`; the first is `x`.
/// `extra_starts` also adds the piece starts themselves (needed by until,
/// whose value depends on the piece holding `t`).
pub fn window_cells(times: &[f64], a: f64, b: f64, x: f64, y: f64, extra_starts: bool) -> Vec<f64> {
    let mut cells = vec![x];
    let first = times.partition_point(|&s| s <= x);
    for &s in &times[first..] {
        if s - b >= y {
            break;
        }
        for p in [s - b, s - a] {
            if x < p && p < y {
                cells.push(p);
            }
        }
        if extra_starts && s < y {
            cells.push(s);
        }
    }
    cells.sort_unstable_by(f64::total_cmp);
    cells.dedup();
    cells
}

/// Index range of the pieces of `times` inside the window of output time `t`.
#[inline]
pub fn window_range(times: &[f64], a: f64, b: f64, t: f64) -> (usize, usize) {
    let first = times[1..].partition_point(|&e| e - a <= t);
    let last = times.partition_point(|&s| s - b <= t) - 1;
    (first, last)
}

/// `F[a,b]` (with `Agg::Max`) or `G[a,b]` (with `Agg::Min`) over `[x, y)` by
/// folding every window directly.
pub fn window_direct<T: Lattice>(
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
    let mut out = Block::with_capacity(cells.len(), n);
    for &t in &cells {
        let (first, last) = window_range(times, a, b, t);
        out.times.push(t);
        for l in 0..n {
            let v = (first..=last).fold(agg.identity(), |acc, k| {
                agg.apply(acc, child.entry(k, l, 0))
            });
            out.values.push(v);
        }
    }
    out
}

/// Bounded until `lhs U[a,b] rhs` over `[x, y)`.
///
/// For output time `t` in merged piece `p`, a witness `t'` in merged piece
/// `k >= p` is best taken as early as possible, so the value is the join over
/// window pieces `k` of `rhs_k ∧ (lhs_p ∧ ... ∧ lhs_k)`.
pub fn bounded_until<T: Lattice>(
    lhs: &PCSignal<T>,
    rhs: &PCSignal<T>,
    a: f64,
    b: f64,
    x: f64,
    y: f64,
) -> Block<T> {
    let n = lhs.locations();
    let (starts, ia, ib, end) = merged_grid(lhs, rhs, x, |s| s - b >= y);
    // `bounds` holds every merged start plus the end of the last piece.
    let mut bounds = starts.clone();
    bounds.push(end);

    let mut cells = window_cells(&starts, a, b, x, y, true);
    // Piece starts before x never produce cells; x itself is always first.
    cells.retain(|&t| t >= x);
    let mut out = Block::with_capacity(cells.len(), n);
    let mut acc = vec![T::TOP; n];
    for &t in &cells {
        let p = starts.partition_point(|&s| s <= t) - 1;
        let first = bounds[1..].partition_point(|&e| e - a <= t);
        let last = starts.partition_point(|&s| s - b <= t) - 1;
        out.times.push(t);
        for l in 0..n {
            let mut min_lhs = T::TOP;
            let mut best = T::BOTTOM;
            for k in p..=last {
                min_lhs = min_lhs.meet(lhs.entry(ia[k], l, 0));
                if k >= first {
                    best = best.join(rhs.entry(ib[k], l, 0).meet(min_lhs));
                }
            }
            acc[l] = best;
        }
        out.values.extend_from_slice(&acc);
    }
    out
}

/// Unbounded until `lhs U rhs` over `[x, y)` by the backward recurrence
/// `R_k = (lhs_k ∧ rhs_k) ∨ (lhs_k ∧ R_{k+1})` on the merged grid.
///
/// `tail` is the output value at `y` (ignored when `y` is infinite, where the
/// last piece evaluates to `lhs ∧ rhs`). After each cell is computed, `stop`
/// is called with its start and values; returning `true` ends the backward
/// sweep there and the returned block starts at that cell.
pub fn unbounded_until<T: Lattice>(
    lhs: &PCSignal<T>,
    rhs: &PCSignal<T>,
    x: f64,
    y: f64,
    tail: Option<&[T]>,
    mut stop: impl FnMut(f64, &[T]) -> bool,
) -> Block<T> {
    let n = lhs.locations();
    let (mut starts, ia, ib, _) = merged_grid(lhs, rhs, x, |s| s >= y);
    starts[0] = x;
    let cells = starts.len();
    let mut next: Vec<T> = match tail {
        Some(v) if y.is_finite() => v.to_vec(),
        _ => vec![T::BOTTOM; n],
    };
    let mut values = vec![T::BOTTOM; cells * n];
    let mut first_kept = 0;
    for k in (0..cells).rev() {
        for l in 0..n {
            let (av, bv) = (lhs.entry(ia[k], l, 0), rhs.entry(ib[k], l, 0));
            let r = av.meet(bv).join(av.meet(next[l]));
            values[k * n + l] = r;
            next[l] = r;
        }
        if stop(starts[k], &values[k * n..(k + 1) * n]) {
            first_kept = k;
            break;
        }
    }
    Block {
        times: starts.split_off(first_kept),
        values: values.split_off(first_kept * n),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::interval::Interval;

    fn sig(times: &[f64], vals: &[f64]) -> PCSignal<Interval> {
        PCSignal::from_pieces(
            1,
            1,
            times.to_vec(),
            vals.iter().map(|&v| Interval::point(v)).collect(),
        )
        .unwrap()
    }

    fn values(b: &Block<Interval>) -> Vec<(f64, f64)> {
        b.times
            .iter()
            .zip(&b.values)
            .map(|(&t, v)| (t, v.lo()))
            .collect()
    }

    #[test]
    fn eventually_window_example() {
        let s = sig(&[0.0, 0.5, 1.5], &[0.0, 2.0, -1.0]);
        let out = window_direct(&s, 0.0, 1.0, Agg::Max, 0.0, f64::INFINITY);
        assert_eq!(values(&out)[0], (0.0, 2.0));
        let sig = out.into_signal(1);
        assert_eq!(sig.value_at(0, 0.0).unwrap()[0], Interval::point(2.0));
        assert_eq!(sig.value_at(0, 1.49).unwrap()[0], Interval::point(2.0));
        assert_eq!(sig.value_at(0, 1.5).unwrap()[0], Interval::point(-1.0));
    }

    #[test]
    fn window_cells_are_clipped_to_the_span() {
        let cells = window_cells(&[0.0, 2.0, 4.0, 9.0], 1.0, 3.0, 0.5, 5.0, false);
        assert_eq!(cells, vec![0.5, 1.0, 3.0]);
    }

    #[test]
    fn globally_takes_the_minimum() {
        let s = sig(&[0.0, 1.0, 2.0], &[3.0, 1.0, 5.0]);
        let out = window_direct(&s, 0.0, 1.0, Agg::Min, 0.0, f64::INFINITY).into_signal(1);
        assert_eq!(out, sig(&[0.0, 2.0], &[1.0, 5.0]));
    }

    #[test]
    fn until_with_satisfied_right_side() {
        let lhs = sig(&[0.0], &[4.0]);
        let rhs = sig(&[0.0], &[f64::INFINITY]);
        let out = unbounded_until(&lhs, &rhs, 0.0, f64::INFINITY, None, |_, _| false);
        assert_eq!(out.into_signal(1), lhs);
        let out = bounded_until(&lhs, &rhs, 0.0, 2.0, 0.0, f64::INFINITY);
        assert_eq!(out.into_signal(1), lhs);
    }

    #[test]
    fn bounded_until_needs_lhs_up_to_the_witness() {
        // rhs becomes true at 2; lhs dips at [1,2).
        let lhs = sig(&[0.0, 1.0, 2.0], &[5.0, -1.0, 5.0]);
        let rhs = sig(&[0.0, 2.0], &[-3.0, 7.0]);
        let out = bounded_until(&lhs, &rhs, 0.0, 3.0, 0.0, f64::INFINITY).into_signal(1);
        assert_eq!(out.value_at(0, 0.0).unwrap()[0], Interval::point(-1.0));
        assert_eq!(out.value_at(0, 1.5).unwrap()[0], Interval::point(-1.0));
        assert_eq!(out.value_at(0, 2.0).unwrap()[0], Interval::point(5.0));
    }

    #[test]
    fn unbounded_until_with_tail_value() {
        let lhs = sig(&[0.0, 1.0], &[2.0, 3.0]);
        let rhs = sig(&[0.0], &[-5.0]);
        let tail = [Interval::point(1.0)];
        let out = unbounded_until(&lhs, &rhs, 0.0, 2.0, Some(&tail), |_, _| false);
        assert_eq!(out.times, vec![0.0, 1.0]);
        assert_eq!(out.values, vec![Interval::point(1.0), Interval::point(1.0)]);
    }
}
