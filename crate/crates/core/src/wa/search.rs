use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::count::{prefix_count, Odometer, Sliced};
use super::crt::{choose_scaling, crt_shift, shifted_poly, CrtShift};
use super::target::ApproximationTask;
use crate::cubic::CubicForm;
use crate::error::{Error, Result};
use crate::lattice::{by_height, multiples_in};
use crate::local::{IntPoly, Place};
use crate::rat::{self, Rat};

/// Tries per prefix when the last coordinate is unconstrained.
const LINE_TRIES: u32 = 64;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalPoint {
    /// `x = z/(D·P)`.
    pub point: Vec<Rat>,
    /// The lattice point `y ∈ (mℤ)^n` with `f(y) = 0`.
    pub y: Vec<BigInt>,
    /// `z = y + a`, an integral zero of the form.
    pub z: Vec<BigInt>,
    pub scale: BigInt,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Quantity {
    Value(Rat),
    /// A `p`-adic valuation; `None` is `+∞`.
    Valuation(Option<i64>),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Relation {
    Equal,
    NotEqual,
    Less,
    AtLeast,
}

impl Relation {
    pub fn symbol(self) -> &'static str {
        match self {
            Relation::Equal => "=",
            Relation::NotEqual => "!=",
            Relation::Less => "<",
            Relation::AtLeast => ">=",
        }
    }
}

/// One exact inequality of the verification.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub name: &'static str,
    pub place: Option<Place>,
    pub coordinate: Option<usize>,
    pub lhs: Quantity,
    pub relation: Relation,
    pub rhs: Rat,
    pub holds: bool,
    /// Failing a required check rejects the candidate; the others record
    /// intermediate steps of the estimates.
    pub required: bool,
}

impl Check {
    fn value(name: &'static str, place: Option<Place>, coordinate: Option<usize>, lhs: Rat, relation: Relation, rhs: Rat, required: bool) -> Check {
        let holds = match relation {
            Relation::Equal => lhs == rhs,
            Relation::NotEqual => lhs != rhs,
            Relation::Less => lhs < rhs,
            Relation::AtLeast => lhs >= rhs,
        };
        Check {
            name,
            place,
            coordinate,
            lhs: Quantity::Value(lhs),
            relation,
            rhs,
            holds,
            required,
        }
    }

    fn valuation(name: &'static str, p: u64, coordinate: Option<usize>, x: &Rat, bound: i64, required: bool) -> Check {
        let v = rat::ord(x, p);
        Check {
            name,
            place: Some(Place::Prime(p)),
            coordinate,
            lhs: Quantity::Valuation(v),
            relation: Relation::AtLeast,
            rhs: Rat::from_integer(BigInt::from(bound)),
            holds: v.is_none_or(|o| o >= bound),
            required,
        }
    }
}

/// One scale `P` of the search.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StepRecord {
    pub step: u32,
    pub scale: BigInt,
    /// Range of `w` (with `y_i = m·w`) for every coordinate.
    pub ranges: Vec<(BigInt, BigInt)>,
    pub prefixes: u128,
    pub examined: u128,
    /// Zeros of `f` rejected by a required check.
    pub rejected: u64,
    pub truncated: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Transcript {
    pub a: Vec<BigInt>,
    pub modulus: BigInt,
    pub exponents: Vec<(u64, u32)>,
    pub t: u32,
    pub d: BigInt,
    pub rho: Rat,
    /// Centre `ζ_0` of the unscaled box.
    pub center: Vec<Rat>,
    pub steps: Vec<StepRecord>,
    pub checks: Vec<Check>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchOutcome {
    pub point: Option<RationalPoint>,
    pub transcript: Transcript,
}

/// A verified zero found while scanning one shard.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Hit {
    pub point: RationalPoint,
    pub checks: Vec<Check>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ScanResult {
    pub hit: Option<Hit>,
    pub examined: u128,
    pub rejected: u64,
}

/// Everything derived from a task before enumeration starts.
pub struct SearchPlan {
    form: CubicForm,
    shift: CrtShift,
    t: u32,
    step_modulus: BigInt,
    d: BigInt,
    rho: Rat,
    center: Vec<Rat>,
    real: Option<(Vec<Rat>, Rat)>,
    primes: Vec<(u64, u32, Vec<Rat>)>,
    sliced: Sliced,
    max_steps: u32,
    point_budget: u128,
}

impl SearchPlan {
    pub fn new(task: &ApproximationTask) -> Result<Self> {
        task.validate()?;
        let n = task.form.nvars();
        if n == 0 {
            return Err(Error::Precondition("the form has no variables".into()));
        }
        let prime_targets: Vec<_> = task.prime_targets().cloned().collect();
        let shift = crt_shift(&prime_targets, n)?;
        let t = task
            .t
            .unwrap_or_else(|| prime_targets.iter().filter_map(|t| t.exponent()).max().unwrap_or(0) + 1);
        if t == 0 {
            return Err(Error::Precondition("t must be at least 1".into()));
        }
        let step_modulus = num_traits::pow(shift.m.clone(), t as usize);
        let real = task
            .real_target()
            .map(|r| (r.point.clone(), r.epsilon().expect("real precision").clone()));
        let (d, center) = match &real {
            Some((x, eps)) => {
                let d = choose_scaling(&shift.m, t, eps)?;
                let dr = Rat::from_integer(d.clone());
                (d, x.iter().map(|c| c * &dr).collect())
            }
            None => (BigInt::one(), default_center(&task.form, &prime_targets, task.center_height)?),
        };
        let primes = prime_targets
            .iter()
            .map(|tg| match tg.place {
                Place::Prime(p) => (p, tg.exponent().expect("prime precision"), tg.point.clone()),
                Place::Real => unreachable!(),
            })
            .collect();
        let f = IntPoly::from_poly(&shifted_poly(&task.form, &shift.a)?);
        let sliced = Sliced::new(&f, &shift.m);
        Ok(SearchPlan {
            form: task.form.clone(),
            shift,
            t,
            step_modulus,
            d,
            rho: task.rho.clone(),
            center,
            real,
            primes,
            sliced,
            max_steps: task.max_steps,
            point_budget: u128::from(task.point_budget),
        })
    }

    pub fn max_steps(&self) -> u32 {
        self.max_steps
    }

    /// The `k`-th scale `P = 1 + k·m^t`.
    pub fn scale(&self, k: u32) -> BigInt {
        BigInt::one() + &self.step_modulus * BigInt::from(k)
    }

    /// For every coordinate, the `w` with `|m·w − P·ζ_0| < ρP/2`.
    pub fn ranges(&self, p: &BigInt) -> Vec<(BigInt, BigInt)> {
        let pr = Rat::from_integer(p.clone());
        let half = &pr * &self.rho / Rat::from_integer(BigInt::from(2));
        self.center
            .iter()
            .map(|c| {
                let mid = &pr * c;
                multiples_in(&(&mid - &half), &(&mid + &half), &self.shift.m, true)
            })
            .collect()
    }

    /// Prefixes examined at this scale: all of them, up to the budget.
    pub fn prefix_limit(&self, ranges: &[(BigInt, BigInt)]) -> u128 {
        prefix_count(ranges).min(self.point_budget)
    }

    /// Scans prefixes whose first coordinate lies in `first` (ignored for
    /// one variable) and whose global lexicographic index is below `limit`,
    /// returning the first verified zero.
    pub fn scan(&self, p: &BigInt, ranges: &[(BigInt, BigInt)], first: &(BigInt, BigInt), limit: u128) -> ScanResult {
        let n = ranges.len();
        let last = &ranges[n - 1];
        let mut out = ScanResult::default();
        if n == 1 {
            if limit > 0 {
                out.examined = 1;
                self.scan_prefix(p, &[], last, &mut out);
            }
            return out;
        }
        let mut sub: Vec<(BigInt, BigInt)> = ranges[..n - 1].to_vec();
        sub[0] = (first.0.clone().max(ranges[0].0.clone()), first.1.clone().min(ranges[0].1.clone()));
        if sub[0].0 > sub[0].1 {
            return out;
        }
        let inner = prefix_count(&ranges[1..]);
        let offset = super::count::range_len(&(ranges[0].0.clone(), &sub[0].0 - 1u8));
        let mut index = offset.saturating_mul(inner);
        let mut odo = Odometer::new(&sub);
        while let Some(w) = odo.current() {
            if index >= limit {
                break;
            }
            index += 1;
            out.examined += 1;
            if self.scan_prefix(p, w, last, &mut out) {
                break;
            }
            odo.advance();
        }
        out
    }

    fn scan_prefix(&self, p: &BigInt, prefix: &[BigInt], last: &(BigInt, BigInt), out: &mut ScanResult) -> bool {
        let candidates: Vec<BigInt> = match self.sliced.last_roots(prefix, last) {
            Some(r) => r,
            None => {
                let mut v = Vec::new();
                let mut w = last.0.clone();
                while w <= last.1 && v.len() < LINE_TRIES as usize {
                    v.push(w.clone());
                    w += 1u8;
                }
                v
            }
        };
        for w in candidates {
            let y: Vec<BigInt> = prefix
                .iter()
                .chain(core::iter::once(&w))
                .map(|wi| wi * &self.shift.m)
                .collect();
            let (point, checks) = self.verify(p, &y);
            if checks.iter().all(|c| c.holds || !c.required) {
                out.hit = Some(Hit { point, checks });
                return true;
            }
            out.rejected += 1;
        }
        false
    }

    /// Builds `x = (y + a)/(D·P)` and re-derives every estimate exactly.
    pub fn verify(&self, p: &BigInt, y: &[BigInt]) -> (RationalPoint, Vec<Check>) {
        let n = y.len();
        let dp = &self.d * p;
        let dpr = Rat::from_integer(dp.clone());
        let pr = Rat::from_integer(p.clone());
        let z: Vec<BigInt> = y.iter().zip(&self.shift.a).map(|(yi, ai)| yi + ai).collect();
        let x: Vec<Rat> = z.iter().map(|zi| Rat::from_integer(zi.clone()) / &dpr).collect();
        let zero = Rat::zero();
        let mut checks = Vec::new();
        let value = self.form.eval(&x).expect("dimension");
        checks.push(Check::value("on_form", None, None, value, Relation::Equal, zero.clone(), true));
        let height = z.iter().map(|v| v.abs()).max().unwrap_or_default();
        checks.push(Check::value("nonzero", None, None, Rat::from_integer(height), Relation::NotEqual, zero.clone(), true));
        let grad = self.form.gradient_at(&x).expect("dimension");
        let gmax = grad.iter().map(rat::abs).max().unwrap_or_default();
        checks.push(Check::value("nonsingular", None, None, gmax, Relation::NotEqual, zero.clone(), true));
        let half = &self.rho * &pr / Rat::from_integer(BigInt::from(2));
        for i in 0..n {
            let off = rat::abs(&(Rat::from_integer(y[i].clone()) - &pr * &self.center[i]));
            checks.push(Check::value("box", None, Some(i), off, Relation::Less, half.clone(), false));
        }
        for (q, r, target) in &self.primes {
            let r = i64::from(*r);
            let dp_minus_one = Rat::from_integer(&dp - 1u8);
            checks.push(Check::valuation("dp_congruence", *q, None, &dp_minus_one, r * i64::from(self.t), false));
            for i in 0..n {
                let yi = Rat::from_integer(y[i].clone());
                checks.push(Check::valuation("lattice", *q, Some(i), &yi, r, false));
                let ai = Rat::from_integer(self.shift.a[i].clone());
                checks.push(Check::valuation("crt", *q, Some(i), &(ai - &target[i]), r, false));
                checks.push(Check::valuation("target", *q, Some(i), &(&x[i] - &target[i]), r, true));
            }
        }
        if let Some((target, eps)) = &self.real {
            for i in 0..n {
                let yi = Rat::from_integer(y[i].clone());
                let scaled = rat::abs(&(&target[i] - &yi / &dpr))
                    + rat::abs(&Rat::from_integer(self.shift.a[i].clone())) / &dpr;
                checks.push(Check::value("scaled", Some(Place::Real), Some(i), scaled, Relation::Less, eps.clone(), false));
                let dist = rat::abs(&(&x[i] - &target[i]));
                checks.push(Check::value("target", Some(Place::Real), Some(i), dist, Relation::Less, eps.clone(), true));
            }
        }
        let point = RationalPoint {
            point: x,
            y: y.to_vec(),
            z,
            scale: p.clone(),
        };
        (point, checks)
    }

    pub fn transcript(&self) -> Transcript {
        Transcript {
            a: self.shift.a.clone(),
            modulus: self.shift.m.clone(),
            exponents: self.shift.exponents.clone(),
            t: self.t,
            d: self.d.clone(),
            rho: self.rho.clone(),
            center: self.center.clone(),
            steps: Vec::new(),
            checks: Vec::new(),
        }
    }

    /// Runs one scale serially.
    pub fn step(&self, k: u32) -> (StepRecord, Option<Hit>) {
        let p = self.scale(k);
        let ranges = self.ranges(&p);
        let limit = self.prefix_limit(&ranges);
        let res = self.scan(&p, &ranges, &ranges[0].clone(), limit);
        let record = self.record(k, p, ranges, &res);
        (record, res.hit)
    }

    /// The step record for a (possibly merged) scan result.
    pub fn record(&self, k: u32, p: BigInt, ranges: Vec<(BigInt, BigInt)>, res: &ScanResult) -> StepRecord {
        let prefixes = prefix_count(&ranges);
        StepRecord {
            step: k,
            scale: p,
            truncated: res.hit.is_none() && prefixes > self.point_budget,
            ranges,
            prefixes,
            examined: res.examined,
            rejected: res.rejected,
        }
    }
}

/// With no real target the box is centred on an exact nonsingular zero: a
/// prime target lying on the form if there is one, otherwise the first
/// integral zero by height.
fn default_center(form: &CubicForm, targets: &[super::target::LocalTarget], height: u64) -> Result<Vec<Rat>> {
    let nonsingular = |x: &[Rat]| {
        form.eval(x).is_ok_and(|v| v.is_zero()) && form.gradient_at(x).is_ok_and(|g| g.iter().any(|c| !c.is_zero()))
    };
    if let Some(t) = targets.iter().find(|t| nonsingular(&t.point)) {
        return Ok(t.point.clone());
    }
    by_height(form.nvars(), height, false)
        .map(|v| v.iter().map(|&c| Rat::from_integer(BigInt::from(c))).collect::<Vec<_>>())
        .find(|x| nonsingular(x))
        .ok_or_else(|| Error::Precondition(alloc::format!("no nonsingular integral zero of height at most {height}")))
}

/// Serial search over the scale schedule; the first verified zero in
/// lexicographic order of the enumeration is returned.
pub fn search(task: &ApproximationTask) -> Result<SearchOutcome> {
    let plan = SearchPlan::new(task)?;
    let mut transcript = plan.transcript();
    for k in 0..plan.max_steps() {
        let (record, hit) = plan.step(k);
        transcript.steps.push(record);
        if let Some(h) = hit {
            transcript.checks = h.checks;
            return Ok(SearchOutcome {
                point: Some(h.point),
                transcript,
            });
        }
    }
    Ok(SearchOutcome {
        point: None,
        transcript,
    })
}
