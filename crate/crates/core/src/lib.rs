//! Spatio-temporal reach/escape logic over interval-valued signals.
//!
//! Signals are piecewise constant in time, defined over the locations of a
//! weighted directed graph, and carry intervals that bound the true values.
//! [`robust_eval`] and [`boolean_eval`] compute the semantics of a formula
//! over a whole signal; [`Monitor`] maintains the same result incrementally
//! while the signal is refined by updates arriving in any order.

pub mod error;
pub mod formula;
pub mod interval;
pub mod io;
pub mod offline;
pub mod online;
pub mod signal;
pub mod space;

#[cfg(any(test, feature = "testkit"))]
pub mod testkit;

pub use error::{Error, Result};
pub use formula::{parse, CmpOp, Formula, SubformulaTable, VarTable};
pub use interval::Interval;
pub use offline::{boolean_eval, evaluate, robust_eval, Verdict3};
pub use online::Monitor;
pub use signal::{signal_distance, PCSignal, SparseUpdate, Update, ValueMatrix};
pub use space::{haversine_km, Route, SpatialModel};
