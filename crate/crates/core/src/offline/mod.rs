//! Reference evaluation of the three-valued and robust interval semantics
//! over a complete signal.

pub mod pieces;
pub mod spatial;
pub mod temporal;

use std::fmt::Debug;

use crate::error::{Error, Result};
use crate::formula::{CmpOp, Formula};
use crate::interval::Interval;
use crate::signal::PCSignal;
use crate::space::SpatialModel;
use pieces::{map_span, zip_span, Block};
use spatial::Scalar;
use temporal::Agg;

const INF: f64 = f64::INFINITY;

/// A lattice with top and bottom; `join` is max and `meet` is min.
pub trait Lattice: Copy + PartialEq + Send + Sync + Debug {
    const TOP: Self;
    const BOTTOM: Self;
    fn join(self, other: Self) -> Self;
    fn meet(self, other: Self) -> Self;
}

impl Lattice for Interval {
    const TOP: Interval = Interval::TOP;
    const BOTTOM: Interval = Interval::BOTTOM;

    #[inline]
    fn join(self, other: Self) -> Self {
        self.max(other)
    }

    #[inline]
    fn meet(self, other: Self) -> Self {
        self.min(other)
    }
}

impl Lattice for f64 {
    const TOP: f64 = f64::INFINITY;
    const BOTTOM: f64 = f64::NEG_INFINITY;

    #[inline]
    fn join(self, other: Self) -> Self {
        self.max(other)
    }

    #[inline]
    fn meet(self, other: Self) -> Self {
        self.min(other)
    }
}

/// Three-valued verdict: violated, unknown, satisfied.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[repr(i8)]
pub enum Verdict3 {
    False = -1,
    Unknown = 0,
    True = 1,
}

impl Verdict3 {
    pub fn value(self) -> i8 {
        self as i8
    }

    /// Sign of a robustness interval: `True` if it lies above 0, `False` if
    /// below, `Unknown` if it contains 0.
    pub fn classify(rho: Interval) -> Verdict3 {
        if rho.lo() > 0.0 {
            Verdict3::True
        } else if rho.hi() < 0.0 {
            Verdict3::False
        } else {
            Verdict3::Unknown
        }
    }

    pub fn negate(self) -> Verdict3 {
        match self {
            Verdict3::False => Verdict3::True,
            Verdict3::Unknown => Verdict3::Unknown,
            Verdict3::True => Verdict3::False,
        }
    }
}

impl Scalar for Verdict3 {
    const TOP: Verdict3 = Verdict3::True;
    const BOTTOM: Verdict3 = Verdict3::False;
}

impl Lattice for Verdict3 {
    const TOP: Verdict3 = Verdict3::True;
    const BOTTOM: Verdict3 = Verdict3::False;

    #[inline]
    fn join(self, other: Self) -> Self {
        self.max(other)
    }

    #[inline]
    fn meet(self, other: Self) -> Self {
        self.min(other)
    }
}

/// A value domain for the semantics.
pub trait Domain: Lattice {
    fn neg(self) -> Self;
    fn atom(value: Interval, op: CmpOp, c: f64) -> Self;
    fn reach(m: &SpatialModel, d: f64, lhs: &[Self], rhs: &[Self], parallel: bool) -> Vec<Self>;
    fn escape(m: &SpatialModel, d: f64, arg: &[Self], parallel: bool) -> Vec<Self>;
}

impl Domain for Interval {
    #[inline]
    fn neg(self) -> Self {
        Interval::neg(self)
    }

    /// `p > c` gives `value - c`, `p < c` gives `c - value`.
    #[inline]
    fn atom(value: Interval, op: CmpOp, c: f64) -> Self {
        match op {
            CmpOp::Gt => value.add_scalar(-c),
            CmpOp::Lt => value.neg().add_scalar(c),
        }
    }

    fn reach(m: &SpatialModel, d: f64, lhs: &[Self], rhs: &[Self], parallel: bool) -> Vec<Self> {
        let (l_lo, l_hi) = split(lhs);
        let (r_lo, r_hi) = split(rhs);
        let lo = spatial::reach_field(m, d, &l_lo, &r_lo, parallel);
        let hi = spatial::reach_field(m, d, &l_hi, &r_hi, parallel);
        join_bounds(lo, hi)
    }

    fn escape(m: &SpatialModel, d: f64, arg: &[Self], parallel: bool) -> Vec<Self> {
        let (lo, hi) = split(arg);
        let lo = spatial::escape_field(m, d, &lo, parallel);
        let hi = spatial::escape_field(m, d, &hi, parallel);
        join_bounds(lo, hi)
    }
}

fn split(v: &[Interval]) -> (Vec<f64>, Vec<f64>) {
    v.iter().map(|i| (i.lo(), i.hi())).unzip()
}

fn join_bounds(lo: Vec<f64>, hi: Vec<f64>) -> Vec<Interval> {
    lo.into_iter()
        .zip(hi)
        .map(|(l, h)| Interval::from_bounds(l, h))
        .collect()
}

impl Domain for Verdict3 {
    #[inline]
    fn neg(self) -> Self {
        self.negate()
    }

    #[inline]
    fn atom(value: Interval, op: CmpOp, c: f64) -> Self {
        let (above, below) = (value.lo() > c, value.hi() < c);
        match (op, above, below) {
            (CmpOp::Gt, true, _) | (CmpOp::Lt, _, true) => Verdict3::True,
            (CmpOp::Gt, _, true) | (CmpOp::Lt, true, _) => Verdict3::False,
            _ => Verdict3::Unknown,
        }
    }

    fn reach(m: &SpatialModel, d: f64, lhs: &[Self], rhs: &[Self], parallel: bool) -> Vec<Self> {
        spatial::reach_field(m, d, lhs, rhs, parallel)
    }

    fn escape(m: &SpatialModel, d: f64, arg: &[Self], parallel: bool) -> Vec<Self> {
        spatial::escape_field(m, d, arg, parallel)
    }
}

/// Checks that `s`, `m` and `f` fit together.
pub(crate) fn check_inputs(s: &PCSignal, m: &SpatialModel, f: &Formula) -> Result<()> {
    f.validate()?;
    if s.locations() != m.len() {
        return Err(Error::shape(
            format!("{} locations", m.len()),
            format!("{} locations in the signal", s.locations()),
        ));
    }
    if let Some(dim) = f.max_dim() {
        if dim >= s.dims() {
            return Err(Error::OutOfRange {
                what: "signal dimension",
                index: dim,
                size: s.dims(),
            });
        }
    }
    Ok(())
}

/// Evaluates `f` over the whole signal in domain `D`.
pub fn evaluate<D: Domain>(
    s: &PCSignal,
    m: &SpatialModel,
    f: &Formula,
    parallel: bool,
) -> Result<PCSignal<D>> {
    check_inputs(s, m, f)?;
    Ok(Evaluator { s, m, parallel }.eval(f))
}

/// Three-valued satisfaction signal of `f`.
pub fn boolean_eval(s: &PCSignal, m: &SpatialModel, f: &Formula) -> Result<PCSignal<Verdict3>> {
    evaluate(s, m, f, false)
}

/// Robust interval signal of `f`.
pub fn robust_eval(s: &PCSignal, m: &SpatialModel, f: &Formula) -> Result<PCSignal<Interval>> {
    evaluate(s, m, f, false)
}

struct Evaluator<'a> {
    s: &'a PCSignal,
    m: &'a SpatialModel,
    parallel: bool,
}

impl Evaluator<'_> {
    fn n(&self) -> usize {
        self.s.locations()
    }

    fn constant<D: Domain>(&self, v: D) -> PCSignal<D> {
        PCSignal::constant(self.n(), 1, v).expect("non-empty shape")
    }

    fn eval<D: Domain>(&self, f: &Formula) -> PCSignal<D> {
        let n = self.n();
        let full = |b: Block<D>| b.into_signal(n);
        match f {
            Formula::True => self.constant(D::TOP),
            Formula::False => self.constant(D::BOTTOM),
            Formula::Atom(at) => {
                let dims = self.s.dims();
                full(map_span(self.s, 0.0, INF, |piece, out| {
                    out.extend((0..n).map(|l| D::atom(piece[l * dims + at.dim], at.op, at.c)))
                }))
            }
            Formula::Not(x) => self.eval::<D>(x).map(D::neg),
            Formula::Or(x, y) => self.binary(x, y, |p: D, q| p.join(q)),
            Formula::And(x, y) => self.binary(x, y, |p: D, q| p.meet(q)),
            Formula::Implies(x, y) => self.binary(x, y, |p: D, q| p.neg().join(q)),
            Formula::Eventually { a, b, arg } => full(temporal::window_direct(
                &self.eval::<D>(arg),
                *a,
                *b,
                Agg::Max,
                0.0,
                INF,
            )),
            Formula::Globally { a, b, arg } => full(temporal::window_direct(
                &self.eval::<D>(arg),
                *a,
                *b,
                Agg::Min,
                0.0,
                INF,
            )),
            Formula::Until { a, b, lhs, rhs } => {
                let (l, r) = (self.eval::<D>(lhs), self.eval::<D>(rhs));
                full(temporal::bounded_until(&l, &r, *a, *b, 0.0, INF))
            }
            Formula::UnboundedUntil(lhs, rhs) => {
                let (l, r) = (self.eval::<D>(lhs), self.eval::<D>(rhs));
                full(temporal::unbounded_until(&l, &r, 0.0, INF, None, |_, _| {
                    false
                }))
            }
            Formula::Reach { d, lhs, rhs } => {
                let (l, r) = (self.eval::<D>(lhs), self.eval::<D>(rhs));
                full(zip_span(&l, &r, 0.0, INF, |p, q, out| {
                    out.extend(D::reach(self.m, *d, p, q, self.parallel))
                }))
            }
            Formula::Escape { d, arg } => {
                let x = self.eval::<D>(arg);
                full(map_span(&x, 0.0, INF, |p, out| {
                    out.extend(D::escape(self.m, *d, p, self.parallel))
                }))
            }
            Formula::Somewhere { d, arg } => {
                let x = self.eval::<D>(arg);
                full(map_span(&x, 0.0, INF, |p, out| {
                    out.extend(spatial::somewhere_field(self.m, *d, p, self.parallel))
                }))
            }
            Formula::Everywhere { d, arg } => {
                let x = self.eval::<D>(arg);
                full(map_span(&x, 0.0, INF, |p, out| {
                    out.extend(spatial::everywhere_field(self.m, *d, p, self.parallel))
                }))
            }
        }
    }

    fn binary<D: Domain>(&self, x: &Formula, y: &Formula, op: impl Fn(D, D) -> D) -> PCSignal<D> {
        let (p, q) = (self.eval::<D>(x), self.eval::<D>(y));
        zip_span(&p, &q, 0.0, INF, |a, b, out| {
            out.extend(a.iter().zip(b).map(|(&u, &v)| op(u, v)))
        })
        .into_signal(self.n())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::{parse, VarTable};
    use crate::signal::ValueMatrix;

    fn iv(lo: f64, hi: f64) -> Interval {
        Interval::new(lo, hi).unwrap()
    }

    fn single(times: &[f64], vals: &[Interval]) -> PCSignal {
        PCSignal::from_pieces(1, 1, times.to_vec(), vals.to_vec()).unwrap()
    }

    fn point_model() -> SpatialModel {
        SpatialModel::new(1, []).unwrap()
    }

    fn no2(text: &str) -> Formula {
        parse(text, &VarTable::from_names(&["NO2"])).unwrap()
    }

    #[test]
    fn atom_examples() {
        let s = single(&[0.0], &[iv(300.0, 450.0)]);
        let m = point_model();
        let b = boolean_eval(&s, &m, &no2("NO2 > 400")).unwrap();
        assert_eq!(b.entry(0, 0, 0), Verdict3::Unknown);
        let r = robust_eval(&s, &m, &no2("NO2 > 400")).unwrap();
        assert_eq!(r.entry(0, 0, 0), iv(-100.0, 50.0));
        let r = robust_eval(&s, &m, &no2("!NO2 > 400")).unwrap();
        assert_eq!(r.entry(0, 0, 0), iv(-50.0, 100.0));
        let r = robust_eval(&s, &m, &no2("NO2 > 400 | !NO2 > 400")).unwrap();
        assert_eq!(r.entry(0, 0, 0), iv(-50.0, 100.0));
        let b = boolean_eval(&s, &m, &no2("NO2 > 400 | !NO2 > 400")).unwrap();
        assert_eq!(b.entry(0, 0, 0), Verdict3::Unknown);

        let s = single(&[0.0], &[iv(500.0, 600.0)]);
        let b = boolean_eval(&s, &m, &no2("NO2 > 400")).unwrap();
        assert_eq!(b.entry(0, 0, 0), Verdict3::True);
        let r = robust_eval(&s, &m, &no2("NO2 < 400")).unwrap();
        assert_eq!(r.entry(0, 0, 0), iv(-200.0, -100.0));
    }

    #[test]
    fn constants() {
        let s = PCSignal::undefined(1, 1).unwrap();
        let m = point_model();
        assert_eq!(
            robust_eval(&s, &m, &Formula::True).unwrap().entry(0, 0, 0),
            Interval::TOP
        );
        assert_eq!(
            boolean_eval(&s, &m, &Formula::False)
                .unwrap()
                .entry(0, 0, 0),
            Verdict3::False
        );
    }

    #[test]
    fn missing_data_drags_the_lower_bound_to_minus_infinity() {
        let mut s = PCSignal::undefined(1, 1).unwrap();
        for h in 0..10 {
            if (3..7).contains(&h) {
                continue;
            }
            let v = ValueMatrix::filled(1, 1, iv(100.0, 100.0));
            s.refine(&crate::signal::Update::new(h as f64, h as f64 + 1.0, v).unwrap())
                .unwrap();
        }
        let r = robust_eval(&s, &point_model(), &no2("F[0,3] NO2 < 400")).unwrap();
        assert_eq!(r.value_at(0, 0.0).unwrap()[0], iv(300.0, INF));
        // Missing span [3,7) is 4 hours long: t = 3 sees only missing values.
        assert_eq!(r.value_at(0, 3.0).unwrap()[0], Interval::UNKNOWN);
        assert_eq!(r.value_at(0, 3.9).unwrap()[0].lo(), -INF);
        assert_eq!(r.value_at(0, 4.0).unwrap()[0], iv(300.0, INF));
    }

    #[test]
    fn shape_errors() {
        let s = PCSignal::undefined(2, 1).unwrap();
        assert!(robust_eval(&s, &point_model(), &Formula::True).is_err());
        let vars = VarTable::from_names(&["a", "b"]);
        let f = parse("b > 0", &vars).unwrap();
        let s = PCSignal::undefined(1, 1).unwrap();
        assert!(matches!(
            robust_eval(&s, &point_model(), &f),
            Err(Error::OutOfRange { .. })
        ));
    }
}
