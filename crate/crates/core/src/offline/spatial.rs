//! Reach, escape, somewhere and everywhere over one time-constant spatial
//! field.
//!
//! The route-based kernels work on totally ordered scalars. Interval fields
//! are handled by running the kernel on the lower and upper bounds
//! separately, which is exact because every operation involved is an
//! endpoint-wise max or min.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use rayon::prelude::*;

use super::Lattice;
use crate::space::SpatialModel;

/// A totally ordered value with neutral elements for max and min.
pub trait Scalar: Copy + PartialOrd + Send + Sync {
    const TOP: Self;
    const BOTTOM: Self;

    fn smax(self, other: Self) -> Self {
        if other > self {
            other
        } else {
            self
        }
    }

    fn smin(self, other: Self) -> Self {
        if other < self {
            other
        } else {
            self
        }
    }
}

impl Scalar for f64 {
    const TOP: f64 = f64::INFINITY;
    const BOTTOM: f64 = f64::NEG_INFINITY;
}

/// Runs `f` for every source location, optionally on the rayon pool.
pub(crate) fn per_location<T: Send>(
    n: usize,
    parallel: bool,
    f: impl Fn(usize) -> T + Sync + Send,
) -> Vec<T> {
    if parallel {
        (0..n).into_par_iter().map(f).collect()
    } else {
        (0..n).map(f).collect()
    }
}

struct Label<S> {
    dist: f64,
    min_lhs: S,
    loc: usize,
}

impl<S: Scalar> PartialEq for Label<S> {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl<S: Scalar> Eq for Label<S> {}

impl<S: Scalar> PartialOrd for Label<S> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl<S: Scalar> Ord for Label<S> {
    /// Max-heap order: smallest distance first, then largest prefix minimum.
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .dist
            .total_cmp(&self.dist)
            .then_with(|| {
                self.min_lhs
                    .partial_cmp(&other.min_lhs)
                    .unwrap_or(Ordering::Equal)
            })
            .then_with(|| other.loc.cmp(&self.loc))
    }
}

/// Reach from a single source: the best `min(rhs[l'], min of lhs over the
/// locations strictly before l')` over routes whose distance to `l'` is at most `d`.
pub fn reach_from<S: Scalar>(m: &SpatialModel, d: f64, lhs: &[S], rhs: &[S], src: usize) -> S {
    // Labels are settled in order of consumed distance; a label is useful only
    // if it improves the best prefix minimum seen at its location.
    let mut best: Vec<Option<S>> = vec![None; m.len()];
    let mut result = S::BOTTOM;
    let mut heap = BinaryHeap::new();
    heap.push(Label {
        dist: 0.0,
        min_lhs: S::TOP,
        loc: src,
    });
    while let Some(Label { dist, min_lhs, loc }) = heap.pop() {
        if best[loc].is_some_and(|b| !(min_lhs > b)) {
            continue;
        }
        best[loc] = Some(min_lhs);
        result = result.smax(rhs[loc].smin(min_lhs));
        let carried = min_lhs.smin(lhs[loc]);
        for &(next, w) in m.out_edges(loc) {
            let nd = dist + w;
            if nd <= d && best[next].is_none_or(|b| carried > b) {
                heap.push(Label {
                    dist: nd,
                    min_lhs: carried,
                    loc: next,
                });
            }
        }
    }
    result
}

struct Widest<S> {
    value: S,
    loc: usize,
}

impl<S: Scalar> PartialEq for Widest<S> {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl<S: Scalar> Eq for Widest<S> {}

impl<S: Scalar> PartialOrd for Widest<S> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl<S: Scalar> Ord for Widest<S> {
    fn cmp(&self, other: &Self) -> Ordering {
        self.value
            .partial_cmp(&other.value)
            .unwrap_or(Ordering::Equal)
            .then_with(|| other.loc.cmp(&self.loc))
    }
}

/// Escape from a single source: the best minimum of `arg` over the locations
/// strictly before `l'`, over routes reaching some `l'` with `d_S[src, l'] >= d`.
pub fn escape_from<S: Scalar>(m: &SpatialModel, d: f64, arg: &[S], src: usize) -> S {
    let n = m.len();
    let dist = &m.pairwise_distances()[src * n..(src + 1) * n];
    // Widest-path search: best[x] is the largest prefix minimum of any route to x.
    let mut best: Vec<Option<S>> = vec![None; n];
    let mut done = vec![false; n];
    let mut heap = BinaryHeap::new();
    best[src] = Some(S::TOP);
    heap.push(Widest {
        value: S::TOP,
        loc: src,
    });
    let mut result = S::BOTTOM;
    while let Some(Widest { value, loc }) = heap.pop() {
        if done[loc] {
            continue;
        }
        done[loc] = true;
        if dist[loc] >= d {
            result = result.smax(value);
        }
        let carried = value.smin(arg[loc]);
        for &(next, _) in m.out_edges(loc) {
            if !done[next] && best[next].is_none_or(|b| carried > b) {
                best[next] = Some(carried);
                heap.push(Widest {
                    value: carried,
                    loc: next,
                });
            }
        }
    }
    result
}

/// Join of `arg` over the ball `d_S[src, .] <= d`.
pub fn somewhere_from<T: Lattice>(m: &SpatialModel, d: f64, arg: &[T], src: usize) -> T {
    let n = m.len();
    let dist = &m.pairwise_distances()[src * n..(src + 1) * n];
    dist.iter()
        .zip(arg)
        .filter(|(&x, _)| x <= d)
        .fold(T::BOTTOM, |acc, (_, &v)| acc.join(v))
}

/// Meet of `arg` over the ball `d_S[src, .] <= d`.
pub fn everywhere_from<T: Lattice>(m: &SpatialModel, d: f64, arg: &[T], src: usize) -> T {
    let n = m.len();
    let dist = &m.pairwise_distances()[src * n..(src + 1) * n];
    dist.iter()
        .zip(arg)
        .filter(|(&x, _)| x <= d)
        .fold(T::TOP, |acc, (_, &v)| acc.meet(v))
}

pub fn reach_field<S: Scalar>(
    m: &SpatialModel,
    d: f64,
    lhs: &[S],
    rhs: &[S],
    parallel: bool,
) -> Vec<S> {
    per_location(m.len(), parallel, |l| reach_from(m, d, lhs, rhs, l))
}

pub fn escape_field<S: Scalar>(m: &SpatialModel, d: f64, arg: &[S], parallel: bool) -> Vec<S> {
    per_location(m.len(), parallel, |l| escape_from(m, d, arg, l))
}

pub fn somewhere_field<T: Lattice>(m: &SpatialModel, d: f64, arg: &[T], parallel: bool) -> Vec<T> {
    per_location(m.len(), parallel, |l| somewhere_from(m, d, arg, l))
}

pub fn everywhere_field<T: Lattice>(m: &SpatialModel, d: f64, arg: &[T], parallel: bool) -> Vec<T> {
    per_location(m.len(), parallel, |l| everywhere_from(m, d, arg, l))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::interval::Interval;
    use crate::offline::Domain;
    use crate::testkit::{oracle_escape, oracle_reach, random_model};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    const INF: f64 = f64::INFINITY;

    #[test]
    fn escape_on_an_isolated_node_is_bottom() {
        let m = SpatialModel::new(1, []).unwrap();
        assert_eq!(escape_from(&m, 1.0, &[5.0], 0), -INF);
        assert_eq!(
            Interval::escape(&m, 1.0, &[Interval::UNKNOWN], false),
            vec![Interval::BOTTOM]
        );
    }

    #[test]
    fn somewhere_on_a_star() {
        // Center 0 with leaves 1..=3 at distance 1; leaf 4 hangs off leaf 3.
        let m = SpatialModel::undirected(5, [(0, 1, 1.0), (0, 2, 1.0), (0, 3, 1.0), (3, 4, 1.0)])
            .unwrap();
        let rho = [1.0, 2.0, -3.0, 0.5, 9.0];
        let top = [INF; 5];
        assert_eq!(reach_from(&m, 1.0, &top, &rho, 0), 2.0);
        assert_eq!(somewhere_from(&m, 1.0, &rho, 0), 2.0);
        assert_eq!(reach_from(&m, 2.0, &top, &rho, 0), 9.0);
    }

    #[test]
    fn reach_below_every_weight_sees_only_the_source() {
        let m = SpatialModel::undirected(3, [(0, 1, 2.0), (1, 2, 2.0)]).unwrap();
        let lhs = [INF, INF, INF];
        let rhs = [-1.0, 5.0, 7.0];
        assert_eq!(reach_from(&m, 1.0, &lhs, &rhs, 0), -1.0);
    }

    #[test]
    fn reach_on_a_line_trades_distance_for_prefix() {
        // 0 - 1 - 2 - 3 with unit weights.
        let m = SpatialModel::undirected(4, [(0, 1, 1.0), (1, 2, 1.0), (2, 3, 1.0)]).unwrap();
        let lhs = [3.0, -1.0, 4.0, 4.0];
        let rhs = [0.0, 1.0, 6.0, 8.0];
        // Route 0,1,2: min(6, min(3, -1)) = -1; route 0,1: min(1, 3) = 1; route 0: 0.
        assert_eq!(reach_from(&m, 2.0, &lhs, &rhs, 0), 1.0);
        assert_eq!(reach_from(&m, 2.0, &lhs, &rhs, 2), 6.0);
        assert_eq!(oracle_reach(&m, 2.0, &lhs, &rhs, 0), 1.0);
    }

    #[test]
    fn escape_uses_strict_prefix() {
        let m = SpatialModel::undirected(3, [(0, 1, 1.0), (1, 2, 1.0)]).unwrap();
        let arg = [5.0, 3.0, -10.0];
        // From 0, locations at distance >= 2: only 2, reached through 0 and 1.
        assert_eq!(escape_from(&m, 2.0, &arg, 0), 3.0);
        assert_eq!(escape_from(&m, 1.0, &arg, 0), 5.0);
        assert_eq!(oracle_escape(&m, 2.0, &arg, 0), 3.0);
    }

    #[test]
    fn kernels_match_route_enumeration() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..300 {
            let m = random_model(&mut rng, 5);
            let n = m.len();
            let vals = |rng: &mut ChaCha8Rng| -> Vec<f64> {
                (0..n)
                    .map(|_| match rng.random_range(0..6) {
                        0 => INF,
                        1 => -INF,
                        _ => rng.random_range(-4..5) as f64,
                    })
                    .collect()
            };
            let (lhs, rhs) = (vals(&mut rng), vals(&mut rng));
            let d = rng.random_range(1..8) as f64;
            for l in 0..n {
                assert_eq!(
                    reach_from(&m, d, &lhs, &rhs, l),
                    oracle_reach(&m, d, &lhs, &rhs, l)
                );
                assert_eq!(escape_from(&m, d, &lhs, l), oracle_escape(&m, d, &lhs, l));
                let top = vec![INF; n];
                assert_eq!(
                    somewhere_from(&m, d, &rhs, l),
                    reach_from(&m, d, &top, &rhs, l)
                );
            }
        }
    }

    #[test]
    fn parallel_fields_match_sequential() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let m = random_model(&mut rng, 5);
        let vals: Vec<f64> = (0..m.len()).map(|i| i as f64 - 2.0).collect();
        assert_eq!(
            reach_field(&m, 3.0, &vals, &vals, true),
            reach_field(&m, 3.0, &vals, &vals, false)
        );
        assert_eq!(
            escape_field(&m, 2.0, &vals, true),
            escape_field(&m, 2.0, &vals, false)
        );
    }
}
