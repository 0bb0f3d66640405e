//! Incremental monitoring under out-of-order signal refinements.
//!
//! The formula is compiled into a DAG of operator nodes, each owning a
//! robustness signal over all locations. Nodes are stored children first,
//! so a single forward pass propagates an input change: every node collects
//! the spans its children changed, widens them by its own ripple, recomputes
//! exactly that span from the children's stores, and refines its store.
//! Every store is always equal to the offline robustness of the current
//! input, and an update only ever narrows stored intervals.

pub mod window;

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::formula::{CmpOp, Formula};
use crate::interval::Interval;
use crate::offline::pieces::{map_span, zip_span, Block};
use crate::offline::temporal::{self, Agg};
use crate::offline::{check_inputs, spatial, Domain, Lattice, Verdict3};
use crate::signal::{PCSignal, SparseUpdate, Update, ValueMatrix};
use crate::space::SpatialModel;

const INF: f64 = f64::INFINITY;

#[derive(Clone, Debug)]
enum Op {
    Const(Interval),
    Atom {
        dim: usize,
        op: CmpOp,
        c: f64,
    },
    Not(usize),
    Or(usize, usize),
    And(usize, usize),
    Window {
        a: f64,
        b: f64,
        agg: Agg,
        child: usize,
    },
    Until {
        a: f64,
        b: f64,
        lhs: usize,
        rhs: usize,
    },
    UnboundedUntil {
        lhs: usize,
        rhs: usize,
    },
    Reach {
        d: f64,
        lhs: usize,
        rhs: usize,
    },
    Escape {
        d: f64,
        child: usize,
    },
    Somewhere {
        d: f64,
        child: usize,
    },
    Everywhere {
        d: f64,
        child: usize,
    },
}

/// Online monitor for one formula over one spatial model.
#[derive(Clone, Debug)]
pub struct Monitor {
    model: SpatialModel,
    formula: Formula,
    input: PCSignal,
    ops: Vec<Op>,
    stores: Vec<PCSignal>,
    index: HashMap<Formula, usize>,
    root: usize,
    parallel: bool,
}

impl Monitor {
    /// A monitor over an all-unknown input with `locations` locations and
    /// `dims` signal dimensions.
    pub fn new(
        model: SpatialModel,
        formula: &Formula,
        locations: usize,
        dims: usize,
    ) -> Result<Monitor> {
        let input = PCSignal::undefined(locations, dims)?;
        check_inputs(&input, &model, formula)?;
        let mut m = Monitor {
            model,
            formula: formula.clone(),
            input,
            ops: Vec::new(),
            stores: Vec::new(),
            index: HashMap::new(),
            root: 0,
            parallel: false,
        };
        m.root = m.compile(formula);
        for i in 0..m.ops.len() {
            let init = match m.ops[i] {
                Op::UnboundedUntil { lhs, rhs } => temporal::unbounded_until(
                    &m.stores[lhs],
                    &m.stores[rhs],
                    0.0,
                    INF,
                    None,
                    |_, _| false,
                ),
                _ => m.recompute(i, 0.0, INF),
            };
            m.stores.push(init.into_signal(locations));
        }
        Ok(m)
    }

    /// Runs the spatial kernels on the rayon pool. Results are identical.
    pub fn with_parallel(mut self, parallel: bool) -> Self {
        self.parallel = parallel;
        self
    }

    pub fn formula(&self) -> &Formula {
        &self.formula
    }

    pub fn model(&self) -> &SpatialModel {
        &self.model
    }

    /// The input signal as refined so far.
    pub fn input(&self) -> &PCSignal {
        &self.input
    }

    /// Robustness of the monitored formula at every location.
    pub fn robustness(&self) -> &PCSignal {
        &self.stores[self.root]
    }

    /// Three-valued verdicts of the monitored formula.
    pub fn verdicts(&self) -> PCSignal<Verdict3> {
        self.robustness().map(Verdict3::classify)
    }

    /// Robustness at one location.
    pub fn snapshot(&self, location: usize) -> Result<PCSignal> {
        let r = self.robustness();
        if location >= r.locations() {
            return Err(Error::OutOfRange {
                what: "location",
                index: location,
                size: r.locations(),
            });
        }
        let values = (0..r.num_pieces())
            .map(|i| r.entry(i, location, 0))
            .collect();
        PCSignal::from_pieces(1, 1, r.times().to_vec(), values)
    }

    /// Stored robustness of a subformula of the monitored formula, if it
    /// occurs as a node.
    pub fn subformula(&self, f: &Formula) -> Option<&PCSignal> {
        self.index.get(f).map(|&i| &self.stores[i])
    }

    /// Number of distinct operator nodes.
    pub fn node_count(&self) -> usize {
        self.ops.len()
    }

    /// Refines the input and propagates. Returns the pieces of the
    /// formula's robustness that changed; empty if nothing did.
    pub fn apply(&mut self, u: &Update) -> Result<Vec<Update>> {
        let span = self.input.refine(u)?;
        self.propagate(span)
    }

    /// Like [`Monitor::apply`] for an update naming only some entries.
    pub fn apply_sparse(&mut self, u: &SparseUpdate) -> Result<Vec<Update>> {
        let span = self.input.refine_sparse(u)?;
        self.propagate(span)
    }

    fn compile(&mut self, f: &Formula) -> usize {
        if let Some(&i) = self.index.get(f) {
            return i;
        }
        let op = match f {
            Formula::True => Op::Const(Interval::TOP),
            Formula::False => Op::Const(Interval::BOTTOM),
            Formula::Atom(at) => Op::Atom {
                dim: at.dim,
                op: at.op,
                c: at.c,
            },
            Formula::Not(x) => Op::Not(self.compile(x)),
            Formula::Or(x, y) => Op::Or(self.compile(x), self.compile(y)),
            Formula::And(x, y) => Op::And(self.compile(x), self.compile(y)),
            Formula::Implies(x, y) => {
                let nx = self.compile(&Formula::not((**x).clone()));
                Op::Or(nx, self.compile(y))
            }
            Formula::Eventually { a, b, arg } => Op::Window {
                a: *a,
                b: *b,
                agg: Agg::Max,
                child: self.compile(arg),
            },
            Formula::Globally { a, b, arg } => Op::Window {
                a: *a,
                b: *b,
                agg: Agg::Min,
                child: self.compile(arg),
            },
            Formula::Until { a, b, lhs, rhs } => Op::Until {
                a: *a,
                b: *b,
                lhs: self.compile(lhs),
                rhs: self.compile(rhs),
            },
            Formula::UnboundedUntil(x, y) => Op::UnboundedUntil {
                lhs: self.compile(x),
                rhs: self.compile(y),
            },
            Formula::Reach { d, lhs, rhs } => Op::Reach {
                d: *d,
                lhs: self.compile(lhs),
                rhs: self.compile(rhs),
            },
            Formula::Escape { d, arg } => Op::Escape {
                d: *d,
                child: self.compile(arg),
            },
            Formula::Somewhere { d, arg } => Op::Somewhere {
                d: *d,
                child: self.compile(arg),
            },
            Formula::Everywhere { d, arg } => Op::Everywhere {
                d: *d,
                child: self.compile(arg),
            },
        };
        self.ops.push(op);
        let i = self.ops.len() - 1;
        self.index.insert(f.clone(), i);
        i
    }

    fn propagate(&mut self, input_change: Option<(f64, f64)>) -> Result<Vec<Update>> {
        let Some(input_change) = input_change else {
            return Ok(Vec::new());
        };
        let mut changes: Vec<Option<(f64, f64)>> = vec![None; self.ops.len()];
        for i in 0..self.ops.len() {
            changes[i] = match self.ops[i] {
                Op::Const(_) => None,
                Op::Atom { .. } => {
                    let (x, y) = input_change;
                    self.refresh(i, x, y)?
                }
                Op::UnboundedUntil { lhs, rhs } => self.refresh_until(i, lhs, rhs, &changes)?,
                _ => match self.dirty_span(i, &changes) {
                    Some((x, y)) => self.refresh(i, x, y)?,
                    None => None,
                },
            };
        }
        let Some((lo, hi)) = changes[self.root] else {
            return Ok(Vec::new());
        };
        let r = &self.stores[self.root];
        let pieces: Vec<(f64, &[Interval])> = r.select_range(lo, hi).collect();
        let mut out = Vec::with_capacity(pieces.len());
        for (k, (t, values)) in pieces.iter().enumerate() {
            let end = pieces.get(k + 1).map_or(hi, |p| p.0);
            let m = ValueMatrix::from_vec(r.locations(), 1, values.to_vec())?;
            out.push(Update::new(*t, end, m)?);
        }
        Ok(out)
    }

    /// Span of node `i`'s output affected by its children's changes.
    fn dirty_span(&self, i: usize, changes: &[Option<(f64, f64)>]) -> Option<(f64, f64)> {
        let mut spans: Vec<(f64, f64)> = Vec::with_capacity(2);
        let mut push = |child: usize, f: &dyn Fn(f64, f64) -> (f64, f64)| {
            if let Some((ta, tb)) = changes[child] {
                spans.push(f(ta, tb));
            }
        };
        let same = |ta, tb| (ta, tb);
        match self.ops[i] {
            Op::Const(_) | Op::Atom { .. } | Op::UnboundedUntil { .. } => {}
            Op::Not(c) | Op::Escape { child: c, .. } => push(c, &same),
            Op::Somewhere { child: c, .. } | Op::Everywhere { child: c, .. } => push(c, &same),
            Op::Or(p, q) | Op::And(p, q) | Op::Reach { lhs: p, rhs: q, .. } => {
                push(p, &same);
                push(q, &same);
            }
            Op::Window { a, b, child, .. } => push(child, &|ta: f64, tb: f64| {
                ((ta - b).max(0.0), (tb - a).max(0.0))
            }),
            Op::Until { a, b, lhs, rhs } => {
                // The left side is read from t itself up to the witness.
                push(lhs, &|ta: f64, tb: f64| ((ta - b).max(0.0), tb));
                push(rhs, &|ta: f64, tb: f64| {
                    ((ta - b).max(0.0), (tb - a).max(0.0))
                });
            }
        }
        spans
            .into_iter()
            .filter(|(x, y)| x < y)
            .reduce(|(x0, y0), (x1, y1)| (x0.min(x1), y0.max(y1)))
    }

    /// Exact robustness of node `i` over `[x, y)` from its children's stores.
    fn recompute(&self, i: usize, x: f64, y: f64) -> Block<Interval> {
        let n = self.input.locations();
        let st = &self.stores;
        let (m, par) = (&self.model, self.parallel);
        match self.ops[i] {
            Op::Const(v) => Block {
                times: vec![x],
                values: vec![v; n],
            },
            Op::Atom { dim, op, c } => {
                let dims = self.input.dims();
                map_span(&self.input, x, y, |piece, out| {
                    out.extend((0..n).map(|l| Interval::atom(piece[l * dims + dim], op, c)))
                })
            }
            Op::Not(c) => map_span(&st[c], x, y, |p, out| out.extend(p.iter().map(|v| v.neg()))),
            Op::Or(p, q) => zip_span(&st[p], &st[q], x, y, |u, v, out| {
                out.extend(u.iter().zip(v).map(|(a, b)| a.join(*b)))
            }),
            Op::And(p, q) => zip_span(&st[p], &st[q], x, y, |u, v, out| {
                out.extend(u.iter().zip(v).map(|(a, b)| a.meet(*b)))
            }),
            Op::Window { a, b, agg, child } => window::sliding_window(&st[child], a, b, agg, x, y),
            Op::Until { a, b, lhs, rhs } => temporal::bounded_until(&st[lhs], &st[rhs], a, b, x, y),
            Op::UnboundedUntil { lhs, rhs } => {
                temporal::unbounded_until(&st[lhs], &st[rhs], x, y, None, |_, _| false)
            }
            Op::Reach { d, lhs, rhs } => zip_span(&st[lhs], &st[rhs], x, y, |u, v, out| {
                out.extend(Interval::reach(m, d, u, v, par))
            }),
            Op::Escape { d, child } => map_span(&st[child], x, y, |u, out| {
                out.extend(Interval::escape(m, d, u, par))
            }),
            Op::Somewhere { d, child } => map_span(&st[child], x, y, |u, out| {
                out.extend(spatial::somewhere_field(m, d, u, par))
            }),
            Op::Everywhere { d, child } => map_span(&st[child], x, y, |u, out| {
                out.extend(spatial::everywhere_field(m, d, u, par))
            }),
        }
    }

    /// Recomputes node `i` over `[x, y)` and refines its store.
    fn refresh(&mut self, i: usize, x: f64, y: f64) -> Result<Option<(f64, f64)>> {
        let block = self.recompute(i, x, y);
        self.stores[i].refine_pieces(x, y, &block.times, &block.values)
    }

    /// Unbounded until: backward recurrence from the end of the children's
    /// changes, seeded with the stored value there, stopping once it meets
    /// the stored signal before every change.
    fn refresh_until(
        &mut self,
        i: usize,
        lhs: usize,
        rhs: usize,
        changes: &[Option<(f64, f64)>],
    ) -> Result<Option<(f64, f64)>> {
        let spans = [changes[lhs], changes[rhs]];
        let Some((start, y)) = spans
            .into_iter()
            .flatten()
            .reduce(|(x0, y0), (x1, y1)| (x0.min(x1), y0.max(y1)))
        else {
            return Ok(None);
        };
        let own = &self.stores[i];
        let tail = y
            .is_finite()
            .then(|| own.piece(own.piece_index_at(y)).to_vec());
        let block = temporal::unbounded_until(
            &self.stores[lhs],
            &self.stores[rhs],
            0.0,
            y,
            tail.as_deref(),
            |t, values| t <= start && own.piece(own.piece_index_at(t)) == values,
        );
        let x = block.times[0];
        self.stores[i].refine_pieces(x, y, &block.times, &block.values)
    }
}
