//! STREL formulas: syntax tree, text syntax, normalization and the
//! subformula table used by the online monitor.

mod parser;

use std::collections::HashMap;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::str::FromStr;

use crate::error::{Error, Result};

pub use parser::parse;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CmpOp {
    Gt,
    Lt,
}

impl CmpOp {
    pub fn symbol(self) -> &'static str {
        match self {
            CmpOp::Gt => ">",
            CmpOp::Lt => "<",
        }
    }
}

/// `name op c`, where `name` refers to signal dimension `dim`.
#[derive(Clone, Debug, PartialEq)]
pub struct Atom {
    pub name: String,
    pub dim: usize,
    pub op: CmpOp,
    pub c: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Formula {
    True,
    False,
    Atom(Atom),
    Not(Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    /// `lhs U[a,b] rhs`
    Until {
        a: f64,
        b: f64,
        lhs: Box<Formula>,
        rhs: Box<Formula>,
    },
    UnboundedUntil(Box<Formula>, Box<Formula>),
    Eventually {
        a: f64,
        b: f64,
        arg: Box<Formula>,
    },
    Globally {
        a: f64,
        b: f64,
        arg: Box<Formula>,
    },
    /// `reach[<=d](lhs, rhs)`
    Reach {
        d: f64,
        lhs: Box<Formula>,
        rhs: Box<Formula>,
    },
    Escape {
        d: f64,
        arg: Box<Formula>,
    },
    Somewhere {
        d: f64,
        arg: Box<Formula>,
    },
    Everywhere {
        d: f64,
        arg: Box<Formula>,
    },
}

// Constants are validated to be non-NaN, so bitwise float comparison agrees
// with `PartialEq` up to the sign of zero, which `normalize_zero` removes.
impl Eq for Formula {}

fn hash_f64<H: Hasher>(x: f64, state: &mut H) {
    normalize_zero(x).to_bits().hash(state);
}

fn normalize_zero(x: f64) -> f64 {
    if x == 0.0 {
        0.0
    } else {
        x
    }
}

impl Hash for Formula {
    fn hash<H: Hasher>(&self, state: &mut H) {
        std::mem::discriminant(self).hash(state);
        match self {
            Formula::True | Formula::False => {}
            Formula::Atom(at) => {
                at.name.hash(state);
                at.dim.hash(state);
                at.op.hash(state);
                hash_f64(at.c, state);
            }
            Formula::Not(x) => x.hash(state),
            Formula::Or(x, y)
            | Formula::And(x, y)
            | Formula::Implies(x, y)
            | Formula::UnboundedUntil(x, y) => {
                x.hash(state);
                y.hash(state);
            }
            Formula::Until { a, b, lhs, rhs } => {
                hash_f64(*a, state);
                hash_f64(*b, state);
                lhs.hash(state);
                rhs.hash(state);
            }
            Formula::Eventually { a, b, arg } | Formula::Globally { a, b, arg } => {
                hash_f64(*a, state);
                hash_f64(*b, state);
                arg.hash(state);
            }
            Formula::Reach { d, lhs, rhs } => {
                hash_f64(*d, state);
                lhs.hash(state);
                rhs.hash(state);
            }
            Formula::Escape { d, arg }
            | Formula::Somewhere { d, arg }
            | Formula::Everywhere { d, arg } => {
                hash_f64(*d, state);
                arg.hash(state);
            }
        }
    }
}

impl Formula {
    pub fn atom(name: impl Into<String>, dim: usize, op: CmpOp, c: f64) -> Formula {
        Formula::Atom(Atom {
            name: name.into(),
            dim,
            op,
            c,
        })
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Formula {
        Formula::Not(Box::new(f))
    }

    pub fn or(f: Formula, g: Formula) -> Formula {
        Formula::Or(Box::new(f), Box::new(g))
    }

    pub fn and(f: Formula, g: Formula) -> Formula {
        Formula::And(Box::new(f), Box::new(g))
    }

    pub fn implies(f: Formula, g: Formula) -> Formula {
        Formula::Implies(Box::new(f), Box::new(g))
    }

    pub fn until(a: f64, b: f64, lhs: Formula, rhs: Formula) -> Formula {
        Formula::Until {
            a,
            b,
            lhs: Box::new(lhs),
            rhs: Box::new(rhs),
        }
    }

    pub fn unbounded_until(lhs: Formula, rhs: Formula) -> Formula {
        Formula::UnboundedUntil(Box::new(lhs), Box::new(rhs))
    }

    pub fn eventually(a: f64, b: f64, arg: Formula) -> Formula {
        Formula::Eventually {
            a,
            b,
            arg: Box::new(arg),
        }
    }

    pub fn globally(a: f64, b: f64, arg: Formula) -> Formula {
        Formula::Globally {
            a,
            b,
            arg: Box::new(arg),
        }
    }

    pub fn reach(d: f64, lhs: Formula, rhs: Formula) -> Formula {
        Formula::Reach {
            d,
            lhs: Box::new(lhs),
            rhs: Box::new(rhs),
        }
    }

    pub fn escape(d: f64, arg: Formula) -> Formula {
        Formula::Escape {
            d,
            arg: Box::new(arg),
        }
    }

    pub fn somewhere(d: f64, arg: Formula) -> Formula {
        Formula::Somewhere {
            d,
            arg: Box::new(arg),
        }
    }

    pub fn everywhere(d: f64, arg: Formula) -> Formula {
        Formula::Everywhere {
            d,
            arg: Box::new(arg),
        }
    }

    /// Direct subformulae, left to right.
    pub fn children(&self) -> Vec<&Formula> {
        match self {
            Formula::True | Formula::False | Formula::Atom(_) => vec![],
            Formula::Not(x)
            | Formula::Eventually { arg: x, .. }
            | Formula::Globally { arg: x, .. }
            | Formula::Escape { arg: x, .. }
            | Formula::Somewhere { arg: x, .. }
            | Formula::Everywhere { arg: x, .. } => vec![x],
            Formula::Or(x, y)
            | Formula::And(x, y)
            | Formula::Implies(x, y)
            | Formula::UnboundedUntil(x, y)
            | Formula::Until { lhs: x, rhs: y, .. }
            | Formula::Reach { lhs: x, rhs: y, .. } => vec![x, y],
        }
    }

    pub fn depth(&self) -> usize {
        1 + self.children().iter().map(|c| c.depth()).max().unwrap_or(0)
    }

    /// Largest signal dimension referenced by an atom, if any.
    pub fn max_dim(&self) -> Option<usize> {
        match self {
            Formula::Atom(at) => Some(at.dim),
            _ => self.children().iter().filter_map(|c| c.max_dim()).max(),
        }
    }

    /// Checks constants and bounds: finite atom constants,
    /// `0 <= a <= b < inf` for temporal windows and `d > 0` for spatial operators.
    pub fn validate(&self) -> Result<()> {
        match self {
            Formula::Atom(at) if !at.c.is_finite() => {
                return Err(Error::InvalidFormula(format!(
                    "atom `{}` has non-finite constant {}",
                    at.name, at.c
                )))
            }
            Formula::Until { a, b, .. }
            | Formula::Eventually { a, b, .. }
            | Formula::Globally { a, b, .. } => {
                if !(0.0 <= *a && a <= b && b.is_finite()) {
                    return Err(Error::InvalidFormula(format!(
                        "temporal bounds [{a},{b}] must satisfy 0 <= a <= b < inf"
                    )));
                }
            }
            Formula::Reach { d, .. }
            | Formula::Escape { d, .. }
            | Formula::Somewhere { d, .. }
            | Formula::Everywhere { d, .. } => {
                if !(*d > 0.0) {
                    return Err(Error::InvalidFormula(format!(
                        "spatial bound {d} must be positive"
                    )));
                }
            }
            _ => {}
        }
        self.children().iter().try_for_each(|c| c.validate())
    }

    /// Rewrites derived operators into the core ones: `&`, `->`, `G`,
    /// `somewhere` and `everywhere` disappear; bounded `F` and both untils stay.
    pub fn normalize(&self) -> Formula {
        use Formula as F;
        match self {
            F::True | F::False | F::Atom(_) => self.clone(),
            F::Not(x) => F::not(x.normalize()),
            F::Or(x, y) => F::or(x.normalize(), y.normalize()),
            F::And(x, y) => F::not(F::or(F::not(x.normalize()), F::not(y.normalize()))),
            F::Implies(x, y) => F::or(F::not(x.normalize()), y.normalize()),
            F::Until { a, b, lhs, rhs } => F::until(*a, *b, lhs.normalize(), rhs.normalize()),
            F::UnboundedUntil(x, y) => F::unbounded_until(x.normalize(), y.normalize()),
            F::Eventually { a, b, arg } => F::eventually(*a, *b, arg.normalize()),
            F::Globally { a, b, arg } => F::not(F::eventually(*a, *b, F::not(arg.normalize()))),
            F::Reach { d, lhs, rhs } => F::reach(*d, lhs.normalize(), rhs.normalize()),
            F::Escape { d, arg } => F::escape(*d, arg.normalize()),
            F::Somewhere { d, arg } => F::reach(*d, F::True, arg.normalize()),
            F::Everywhere { d, arg } => F::not(F::reach(*d, F::True, F::not(arg.normalize()))),
        }
    }

    pub fn is_normalized(&self) -> bool {
        !matches!(
            self,
            Formula::And(..)
                | Formula::Implies(..)
                | Formula::Globally { .. }
                | Formula::Somewhere { .. }
                | Formula::Everywhere { .. }
        ) && self.children().iter().all(|c| c.is_normalized())
    }

    /// Output span of this formula's top operator that an input change over
    /// `[t_a, t_b)` can affect, clamped to the time domain. The result may be
    /// empty (`t_s == t_e`).
    pub fn update_ripple(&self, t_a: f64, t_b: f64) -> (f64, f64) {
        match self {
            Formula::Until { a, b, .. }
            | Formula::Eventually { a, b, .. }
            | Formula::Globally { a, b, .. } => {
                let hi = (t_b - a).max(0.0);
                ((t_a - b).max(0.0).min(hi), hi)
            }
            Formula::UnboundedUntil(..) => (0.0, t_b),
            _ => (t_a, t_b),
        }
    }
}

fn fmt_num(x: f64) -> String {
    format!("{}", normalize_zero(x))
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::True => write!(f, "true"),
            Formula::False => write!(f, "false"),
            Formula::Atom(at) => write!(f, "{} {} {}", at.name, at.op.symbol(), fmt_num(at.c)),
            Formula::Not(x) => write!(f, "(!{x})"),
            Formula::Or(x, y) => write!(f, "({x} | {y})"),
            Formula::And(x, y) => write!(f, "({x} & {y})"),
            Formula::Implies(x, y) => write!(f, "({x} -> {y})"),
            Formula::Until { a, b, lhs, rhs } => {
                write!(f, "({lhs} U[{},{}] {rhs})", fmt_num(*a), fmt_num(*b))
            }
            Formula::UnboundedUntil(x, y) => write!(f, "({x} U {y})"),
            Formula::Eventually { a, b, arg } => {
                write!(f, "(F[{},{}] {arg})", fmt_num(*a), fmt_num(*b))
            }
            Formula::Globally { a, b, arg } => {
                write!(f, "(G[{},{}] {arg})", fmt_num(*a), fmt_num(*b))
            }
            Formula::Reach { d, lhs, rhs } => {
                write!(f, "reach[<={}]({lhs}, {rhs})", fmt_num(*d))
            }
            Formula::Escape { d, arg } => write!(f, "(escape[>={}] {arg})", fmt_num(*d)),
            Formula::Somewhere { d, arg } => write!(f, "(somewhere[<={}] {arg})", fmt_num(*d)),
            Formula::Everywhere { d, arg } => {
                write!(f, "(everywhere[<={}] {arg})", fmt_num(*d))
            }
        }
    }
}

/// Maps atom identifiers to signal dimensions.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct VarTable {
    names: HashMap<String, usize>,
}

impl VarTable {
    pub fn new() -> Self {
        Self::default()
    }

    /// Table where the `i`-th name maps to dimension `i`.
    pub fn from_names<S: AsRef<str>>(names: &[S]) -> Self {
        let mut t = VarTable::new();
        for (i, n) in names.iter().enumerate() {
            t.insert(n.as_ref(), i);
        }
        t
    }

    pub fn insert(&mut self, name: &str, dim: usize) {
        self.names.insert(name.to_string(), dim);
    }

    pub fn get(&self, name: &str) -> Option<usize> {
        self.names.get(name).copied()
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    /// Number of dimensions needed to cover every mapped index.
    pub fn dims(&self) -> usize {
        self.names.values().max().map_or(0, |m| m + 1)
    }
}

impl FromStr for VarTable {
    type Err = Error;

    /// Parses `name:index,name:index,...`.
    fn from_str(s: &str) -> Result<Self> {
        let mut t = VarTable::new();
        for item in s.split(',').map(str::trim).filter(|x| !x.is_empty()) {
            let bad = || Error::Format {
                source_name: "--vars".into(),
                line: 1,
                message: format!("expected name:index, found `{item}`"),
            };
            let (name, idx) = item.split_once(':').ok_or_else(bad)?;
            let name = name.trim();
            let idx: usize = idx.trim().parse().map_err(|_| bad())?;
            if name.is_empty() || t.get(name).is_some() {
                return Err(bad());
            }
            t.insert(name, idx);
        }
        Ok(t)
    }
}

/// Distinct subformulae of a formula, children before parents and leaves first.
#[derive(Clone, Debug)]
pub struct SubformulaTable {
    entries: Vec<Formula>,
    children: Vec<Vec<usize>>,
}

impl SubformulaTable {
    pub fn new(f: &Formula) -> Self {
        let mut order: Vec<Formula> = Vec::new();
        let mut seen: HashMap<Formula, ()> = HashMap::new();
        fn visit(f: &Formula, order: &mut Vec<Formula>, seen: &mut HashMap<Formula, ()>) {
            if seen.contains_key(f) {
                return;
            }
            for c in f.children() {
                visit(c, order, seen);
            }
            seen.insert(f.clone(), ());
            order.push(f.clone());
        }
        visit(f, &mut order, &mut seen);
        let (mut entries, rest): (Vec<_>, Vec<_>) =
            order.into_iter().partition(|g| g.children().is_empty());
        entries.extend(rest);
        let index: HashMap<&Formula, usize> =
            entries.iter().enumerate().map(|(i, g)| (g, i)).collect();
        let children = entries
            .iter()
            .map(|g| g.children().iter().map(|c| index[c]).collect())
            .collect();
        SubformulaTable { entries, children }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, i: usize) -> &Formula {
        &self.entries[i]
    }

    pub fn children(&self, i: usize) -> &[usize] {
        &self.children[i]
    }

    pub fn index_of(&self, f: &Formula) -> Option<usize> {
        self.entries.iter().position(|g| g == f)
    }

    pub fn root(&self) -> usize {
        self.entries.len() - 1
    }

    pub fn iter(&self) -> impl Iterator<Item = &Formula> {
        self.entries.iter()
    }
}
