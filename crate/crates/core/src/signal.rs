//! Space-synchronized piecewise-constant signals and their refinement.
//!
//! A [`PCSignal`] is a list of pieces `(t_i, V_i)` where `V_i` is a
//! `locations × dims` matrix. Piece `i` covers `[t_i, t_{i+1})` and the last
//! piece extends to `+inf`. Signals are kept canonical: adjacent pieces never
//! carry equal matrices.

use crate::error::{Error, Result};
use crate::interval::Interval;

/// A dense `rows × cols` matrix of intervals, rows are locations.
#[derive(Clone, Debug, PartialEq)]
pub struct ValueMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Interval>,
}

impl ValueMatrix {
    pub fn filled(rows: usize, cols: usize, value: Interval) -> Self {
        ValueMatrix {
            rows,
            cols,
            data: vec![value; rows * cols],
        }
    }

    pub fn unknown(rows: usize, cols: usize) -> Self {
        Self::filled(rows, cols, Interval::UNKNOWN)
    }

    pub fn from_vec(rows: usize, cols: usize, data: Vec<Interval>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::shape(
                format!("{} entries ({rows}x{cols})", rows * cols),
                data.len(),
            ));
        }
        Ok(ValueMatrix { rows, cols, data })
    }

    /// Builds a matrix from row vectors; all rows must have equal length.
    pub fn from_rows(rows: Vec<Vec<Interval>>) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        let n = rows.len();
        let mut data = Vec::with_capacity(n * cols);
        for row in rows {
            if row.len() != cols {
                return Err(Error::shape(format!("{cols} columns"), row.len()));
            }
            data.extend(row);
        }
        Ok(ValueMatrix {
            rows: n,
            cols,
            data,
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, row: usize, col: usize) -> Interval {
        self.data[row * self.cols + col]
    }

    pub fn set(&mut self, row: usize, col: usize, value: Interval) {
        self.data[row * self.cols + col] = value;
    }

    pub fn as_slice(&self) -> &[Interval] {
        &self.data
    }

    pub fn into_vec(self) -> Vec<Interval> {
        self.data
    }
}

/// New information about the signal over `[t_a, t_b)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Update {
    pub t_a: f64,
    pub t_b: f64,
    pub values: ValueMatrix,
}

impl Update {
    pub fn new(t_a: f64, t_b: f64, values: ValueMatrix) -> Result<Self> {
        if !(t_a >= 0.0 && t_a < t_b && t_b.is_finite()) {
            return Err(Error::InvalidSpan { t_a, t_b });
        }
        Ok(Update { t_a, t_b, values })
    }
}

/// An update that only names some entries; the others keep their current value.
#[derive(Clone, Debug, PartialEq)]
pub struct SparseUpdate {
    pub t_a: f64,
    pub t_b: f64,
    /// `(location, dim, value)` triples.
    pub entries: Vec<(usize, usize, Interval)>,
}

impl SparseUpdate {
    pub fn new(t_a: f64, t_b: f64, entries: Vec<(usize, usize, Interval)>) -> Result<Self> {
        if !(t_a >= 0.0 && t_a < t_b && t_b.is_finite()) {
            return Err(Error::InvalidSpan { t_a, t_b });
        }
        Ok(SparseUpdate { t_a, t_b, entries })
    }
}

/// Piecewise-constant, space-synchronized signal.
///
/// `T` is [`Interval`] for imprecise values and robustness signals, and
/// [`crate::Verdict3`] for three-valued satisfaction signals.
#[derive(Clone, Debug, PartialEq)]
pub struct PCSignal<T = Interval> {
    times: Vec<f64>,
    values: Vec<T>,
    locations: usize,
    dims: usize,
}

impl<T: Copy + PartialEq> PCSignal<T> {
    /// Single piece at `t = 0` holding `value` everywhere.
    pub fn constant(locations: usize, dims: usize, value: T) -> Result<Self> {
        if locations == 0 || dims == 0 {
            return Err(Error::shape(
                "at least one location and one dimension",
                format!("{locations}x{dims}"),
            ));
        }
        Ok(PCSignal {
            times: vec![0.0],
            values: vec![value; locations * dims],
            locations,
            dims,
        })
    }

    /// Builds a signal from piece start times and flattened matrices
    /// (piece-major, then location, then dimension). The result is canonical.
    pub fn from_pieces(
        locations: usize,
        dims: usize,
        times: Vec<f64>,
        values: Vec<T>,
    ) -> Result<Self> {
        if locations == 0 || dims == 0 {
            return Err(Error::shape(
                "at least one location and one dimension",
                format!("{locations}x{dims}"),
            ));
        }
        if times.first() != Some(&0.0) {
            return Err(Error::InvalidSpan {
                t_a: times.first().copied().unwrap_or(f64::NAN),
                t_b: f64::INFINITY,
            });
        }
        for w in times.windows(2) {
            if !(w[0] < w[1]) || !w[1].is_finite() {
                return Err(Error::InvalidSpan {
                    t_a: w[0],
                    t_b: w[1],
                });
            }
        }
        if values.len() != times.len() * locations * dims {
            return Err(Error::shape(
                format!("{} values", times.len() * locations * dims),
                values.len(),
            ));
        }
        let mut s = PCSignal {
            times,
            values,
            locations,
            dims,
        };
        s.canonicalize();
        Ok(s)
    }

    pub fn locations(&self) -> usize {
        self.locations
    }

    pub fn dims(&self) -> usize {
        self.dims
    }

    pub fn num_pieces(&self) -> usize {
        self.times.len()
    }

    /// Piece start times.
    pub fn times(&self) -> &[f64] {
        &self.times
    }

    #[inline]
    fn stride(&self) -> usize {
        self.locations * self.dims
    }

    /// Flattened matrix of piece `i`.
    #[inline]
    pub fn piece(&self, i: usize) -> &[T] {
        let w = self.stride();
        &self.values[i * w..(i + 1) * w]
    }

    #[inline]
    pub fn piece_start(&self, i: usize) -> f64 {
        self.times[i]
    }

    /// Exclusive end of piece `i`; `+inf` for the last piece.
    #[inline]
    pub fn piece_end(&self, i: usize) -> f64 {
        self.times.get(i + 1).copied().unwrap_or(f64::INFINITY)
    }

    #[inline]
    pub fn entry(&self, piece: usize, location: usize, dim: usize) -> T {
        self.values[piece * self.stride() + location * self.dims + dim]
    }

    /// Index of the piece with `t_i <= t < t_{i+1}`.
    #[inline]
    pub fn piece_index_at(&self, t: f64) -> usize {
        self.times.partition_point(|&s| s <= t).saturating_sub(1)
    }

    /// The `dims` values at `(location, t)`.
    pub fn value_at(&self, location: usize, t: f64) -> Result<&[T]> {
        if location >= self.locations {
            return Err(Error::OutOfRange {
                what: "location",
                index: location,
                size: self.locations,
            });
        }
        if !(t >= 0.0) {
            return Err(Error::InvalidSpan { t_a: t, t_b: t });
        }
        let i = self.piece_index_at(t);
        let base = location * self.dims;
        Ok(&self.piece(i)[base..base + self.dims])
    }

    /// Single-dimension view.
    pub fn project(&self, dim: usize) -> Result<PCSignal<T>> {
        if dim >= self.dims {
            return Err(Error::OutOfRange {
                what: "dimension",
                index: dim,
                size: self.dims,
            });
        }
        let values = (0..self.num_pieces())
            .flat_map(|i| (0..self.locations).map(move |l| (i, l)))
            .map(|(i, l)| self.entry(i, l, dim))
            .collect();
        let mut s = PCSignal {
            times: self.times.clone(),
            values,
            locations: self.locations,
            dims: 1,
        };
        s.canonicalize();
        Ok(s)
    }

    /// Pieces covering `[t1, t2)`, the first start clamped to `t1`.
    pub fn select(&self, t1: f64, t2: f64) -> Result<Vec<(f64, &[T])>> {
        if !(t1 >= 0.0 && t1 < t2) {
            return Err(Error::InvalidSpan { t_a: t1, t_b: t2 });
        }
        Ok(self.select_range(t1, t2).collect())
    }

    pub(crate) fn select_range(&self, t1: f64, t2: f64) -> impl Iterator<Item = (f64, &[T])> {
        let first = self.piece_index_at(t1);
        let last = self.times.partition_point(|&s| s < t2);
        (first..last.max(first + 1)).map(move |i| (self.times[i].max(t1), self.piece(i)))
    }

    /// Merges adjacent pieces with equal matrices.
    pub fn canonicalize(&mut self) {
        let w = self.stride();
        let n = self.times.len();
        let mut keep = 1;
        for i in 1..n {
            let same = self.values[(keep - 1) * w..keep * w] == self.values[i * w..(i + 1) * w];
            if !same {
                if keep != i {
                    self.times[keep] = self.times[i];
                    self.values.copy_within(i * w..(i + 1) * w, keep * w);
                }
                keep += 1;
            }
        }
        self.times.truncate(keep);
        self.values.truncate(keep * w);
    }

    pub fn is_canonical(&self) -> bool {
        let w = self.stride();
        self.times.first() == Some(&0.0)
            && self.times.windows(2).all(|p| p[0] < p[1])
            && self.values.len() == self.times.len() * w
            && (1..self.times.len()).all(|i| self.piece(i - 1) != self.piece(i))
    }

    /// Applies `f` to every entry.
    pub fn map<U: Copy + PartialEq>(&self, f: impl Fn(T) -> U) -> PCSignal<U> {
        let mut s = PCSignal {
            times: self.times.clone(),
            values: self.values.iter().map(|&v| f(v)).collect(),
            locations: self.locations,
            dims: self.dims,
        };
        s.canonicalize();
        s
    }

    /// Replaces the content over `[t_a, t_b)` by the given pieces without any
    /// refinement check. `times[0]` must equal `t_a`.
    pub(crate) fn overwrite(&mut self, t_a: f64, t_b: f64, times: &[f64], values: &[T]) {
        let w = self.stride();
        debug_assert!(times.first() == Some(&t_a));
        debug_assert_eq!(values.len(), times.len() * w);
        let i0 = self.piece_index_at(t_a);
        let end = self.times.partition_point(|&s| s < t_b);
        let i1 = end - 1;

        let mut new_times: Vec<f64> = Vec::with_capacity(times.len() + 1);
        let mut new_values: Vec<T> = Vec::with_capacity((times.len() + 1) * w);
        let keep_from = if self.times[i0] < t_a { i0 + 1 } else { i0 };
        let prev: Option<&[T]> = (keep_from > 0).then(|| self.piece(keep_from - 1));
        for (k, &t) in times.iter().enumerate() {
            let v = &values[k * w..(k + 1) * w];
            let last = if new_values.is_empty() {
                prev
            } else {
                Some(&new_values[new_values.len() - w..])
            };
            if last != Some(v) {
                new_times.push(t);
                new_values.extend_from_slice(v);
            }
        }
        if t_b.is_finite() && (end == self.times.len() || self.times[end] > t_b) {
            let tail = self.piece(i1);
            let last = if new_values.is_empty() {
                prev
            } else {
                Some(&new_values[new_values.len() - w..])
            };
            if last != Some(tail) {
                new_times.push(t_b);
                new_values.extend_from_slice(tail);
            }
        }
        // Merge with the first untouched piece on the right.
        let mut remove_to = end;
        if remove_to < self.times.len() {
            let next = self.piece(remove_to);
            let last = if new_values.is_empty() {
                prev
            } else {
                Some(&new_values[new_values.len() - w..])
            };
            if last == Some(next) {
                remove_to += 1;
            }
        }
        let remove_to = remove_to.max(keep_from);
        self.times.splice(keep_from..remove_to, new_times);
        self.values.splice(keep_from * w..remove_to * w, new_values);
        debug_assert!(self.is_canonical());
    }
}

impl PCSignal<Interval> {
    /// The all-unknown signal.
    pub fn undefined(locations: usize, dims: usize) -> Result<Self> {
        Self::constant(locations, dims, Interval::UNKNOWN)
    }

    /// Applies an update. Returns the span where values actually changed,
    /// or `None` when the update carried no new information.
    pub fn refine(&mut self, u: &Update) -> Result<Option<(f64, f64)>> {
        if u.values.rows() != self.locations || u.values.cols() != self.dims {
            return Err(Error::shape(
                format!("{}x{} update matrix", self.locations, self.dims),
                format!("{}x{}", u.values.rows(), u.values.cols()),
            ));
        }
        self.refine_pieces(u.t_a, u.t_b, &[u.t_a], u.values.as_slice())
    }

    /// Applies an update that names only some entries.
    pub fn refine_sparse(&mut self, u: &SparseUpdate) -> Result<Option<(f64, f64)>> {
        if !(u.t_a >= 0.0 && u.t_a < u.t_b) {
            return Err(Error::InvalidSpan {
                t_a: u.t_a,
                t_b: u.t_b,
            });
        }
        for &(l, d, _) in &u.entries {
            if l >= self.locations {
                return Err(Error::OutOfRange {
                    what: "location",
                    index: l,
                    size: self.locations,
                });
            }
            if d >= self.dims {
                return Err(Error::OutOfRange {
                    what: "dimension",
                    index: d,
                    size: self.dims,
                });
            }
        }
        let mut times = Vec::new();
        let mut values = Vec::new();
        for (t, piece) in self.select_range(u.t_a, u.t_b) {
            times.push(t);
            let base = values.len();
            values.extend_from_slice(piece);
            for &(l, d, v) in &u.entries {
                values[base + l * self.dims + d] = v;
            }
        }
        self.refine_pieces(u.t_a, u.t_b, &times, &values)
    }

    /// Replaces the content over `[t_a, t_b)` by a piecewise-constant block,
    /// checking that every new entry is contained in the entry it replaces.
    /// `t_b` may be `+inf`. Returns the tight span of actual change.
    pub fn refine_pieces(
        &mut self,
        t_a: f64,
        t_b: f64,
        times: &[f64],
        values: &[Interval],
    ) -> Result<Option<(f64, f64)>> {
        let w = self.stride();
        if !(t_a >= 0.0 && t_a < t_b) {
            return Err(Error::InvalidSpan { t_a, t_b });
        }
        if times.first() != Some(&t_a)
            || times.windows(2).any(|p| !(p[0] < p[1]))
            || times.last().is_some_and(|&t| t >= t_b)
        {
            return Err(Error::InvalidSpan { t_a, t_b });
        }
        if values.len() != times.len() * w {
            return Err(Error::shape(
                format!("{} values", times.len() * w),
                values.len(),
            ));
        }

        // Walk old and new pieces together over [t_a, t_b).
        let mut changed: Option<(f64, f64)> = None;
        let mut i = self.piece_index_at(t_a);
        let mut k = 0;
        let mut cur = t_a;
        while cur < t_b {
            let old_end = self.piece_end(i);
            let new_end = times.get(k + 1).copied().unwrap_or(t_b);
            let seg_end = old_end.min(new_end).min(t_b);
            let old = self.piece(i);
            let new = &values[k * w..(k + 1) * w];
            if old != new {
                for (e, (o, n)) in old.iter().zip(new).enumerate() {
                    if !o.refines(n) {
                        return Err(Error::RefinementViolation {
                            location: e / self.dims,
                            dim: e % self.dims,
                            t: cur,
                            current: o.to_string(),
                            proposed: n.to_string(),
                        });
                    }
                }
                changed = Some(match changed {
                    None => (cur, seg_end),
                    Some((lo, _)) => (lo, seg_end),
                });
            }
            if seg_end == old_end {
                i += 1;
            }
            if seg_end == new_end {
                k += 1;
            }
            cur = seg_end;
        }
        let Some((lo, hi)) = changed else {
            return Ok(None);
        };
        self.overwrite(t_a, t_b, times, values);
        Ok(Some((lo, hi)))
    }
}

/// Largest Hausdorff distance between corresponding entries over all
/// locations, dimensions and times.
pub fn signal_distance(a: &PCSignal, b: &PCSignal) -> Result<f64> {
    if a.locations != b.locations || a.dims != b.dims {
        return Err(Error::shape(
            format!("{}x{}", a.locations, a.dims),
            format!("{}x{}", b.locations, b.dims),
        ));
    }
    let mut best: f64 = 0.0;
    let (mut i, mut j) = (0, 0);
    loop {
        for (x, y) in a.piece(i).iter().zip(b.piece(j)) {
            best = best.max(x.hausdorff(y));
        }
        let (ea, eb) = (a.piece_end(i), b.piece_end(j));
        if ea == f64::INFINITY && eb == f64::INFINITY {
            break;
        }
        if ea <= eb {
            i += 1;
        }
        if eb <= ea {
            j += 1;
        }
    }
    Ok(best)
}
