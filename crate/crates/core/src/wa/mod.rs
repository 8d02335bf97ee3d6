//! Rational points approximating local targets, and the lattice counter.

mod count;
mod crt;
mod search;
mod target;

pub use count::{count, count_range, prefix_count, CountQuery, Region, DEFAULT_COUNT_BUDGET};
pub use crt::{choose_scaling, crt_shift, shifted_poly, CrtShift};
pub use search::{search, Check, Hit, Quantity, RationalPoint, Relation, ScanResult, SearchOutcome, SearchPlan, StepRecord, Transcript};
pub use target::{ApproximationTask, AxisBox, LocalTarget, Precision};
