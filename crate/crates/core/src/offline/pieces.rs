//! Piecewise-constant blocks over a time span, and pointwise combinators.

use crate::signal::PCSignal;

/// Pieces covering `[times[0], end)` for some span end kept by the caller.
/// `values` holds `width` entries per piece.
#[derive(Clone, Debug, PartialEq)]
pub struct Block<T> {
    pub times: Vec<f64>,
    pub values: Vec<T>,
}

impl<T: Copy + PartialEq> Block<T> {
    pub fn with_capacity(pieces: usize, width: usize) -> Self {
        Block {
            times: Vec::with_capacity(pieces),
            values: Vec::with_capacity(pieces * width),
        }
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    /// Turns a block starting at 0 into a canonical signal with one dimension.
    pub fn into_signal(self, locations: usize) -> PCSignal<T> {
        PCSignal::from_pieces(locations, 1, self.times, self.values)
            .expect("block covers the time domain from 0")
    }
}

/// Pointwise `f` over `[x, y)` of a one-dimensional signal.
pub fn map_span<T, V>(a: &PCSignal<T>, x: f64, y: f64, f: impl Fn(&[T], &mut Vec<V>)) -> Block<V>
where
    T: Copy + PartialEq,
    V: Copy + PartialEq,
{
    let mut out = Block::with_capacity(4, a.locations());
    for (t, piece) in a.select_range(x, y) {
        out.times.push(t);
        f(piece, &mut out.values);
    }
    out
}

/// Pointwise `f` over `[x, y)` of two signals on their merged piece grid.
pub fn zip_span<T, U, V>(
    a: &PCSignal<T>,
    b: &PCSignal<U>,
    x: f64,
    y: f64,
    f: impl Fn(&[T], &[U], &mut Vec<V>),
) -> Block<V>
where
    T: Copy + PartialEq,
    U: Copy + PartialEq,
    V: Copy + PartialEq,
{
    let mut out = Block::with_capacity(4, a.locations());
    let (mut i, mut j) = (a.piece_index_at(x), b.piece_index_at(x));
    let mut t = x;
    loop {
        out.times.push(t);
        f(a.piece(i), b.piece(j), &mut out.values);
        let (ea, eb) = (a.piece_end(i), b.piece_end(j));
        let next = ea.min(eb);
        if next >= y {
            break;
        }
        if ea == next {
            i += 1;
        }
        if eb == next {
            j += 1;
        }
        t = next;
    }
    out
}

/// Starts of the pieces of the merged grid of `a` and `b` that begin before
/// `limit` or contain `from`, together with the index of the piece of `a`
/// and of `b` holding each merged piece. The first entry is the true start of
/// the merged piece containing `from`, which may lie before `from`.
pub fn merged_grid<T, U>(
    a: &PCSignal<T>,
    b: &PCSignal<U>,
    from: f64,
    mut stop: impl FnMut(f64) -> bool,
) -> (Vec<f64>, Vec<usize>, Vec<usize>, f64)
where
    T: Copy + PartialEq,
    U: Copy + PartialEq,
{
    let (mut i, mut j) = (a.piece_index_at(from), b.piece_index_at(from));
    let mut t = a.piece_start(i).max(b.piece_start(j));
    let (mut starts, mut ia, mut ib) = (Vec::new(), Vec::new(), Vec::new());
    loop {
        starts.push(t);
        ia.push(i);
        ib.push(j);
        let (ea, eb) = (a.piece_end(i), b.piece_end(j));
        let next = ea.min(eb);
        if next == f64::INFINITY || stop(next) {
            return (starts, ia, ib, next);
        }
        if ea == next {
            i += 1;
        }
        if eb == next {
            j += 1;
        }
        t = next;
    }
}
