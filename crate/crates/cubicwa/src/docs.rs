//! Structured (JSON) documents. Rationals and big integers are strings so
//! that every value is exact; sequences are in canonical order.

use std::collections::BTreeMap;

use cubicwa_core::fibration::{CaseOutcome, FiberRank, SplitCubic, StrongReduction};
use cubicwa_core::hinv::{Decomposition, HinvBound};
use cubicwa_core::local::{Criterion, PrimeReport, SearchMethod, SolubilityStatus};
use cubicwa_core::pencil::SymmetricPencil;
use cubicwa_core::wa::{
    ApproximationTask, AxisBox, Check, CountQuery, LocalTarget, Quantity, Region, SearchOutcome, StepRecord,
};
use cubicwa_core::local::Place;
use cubicwa_core::{CubicForm, Matrix, Poly, Rat};
use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::error::InputError;
use crate::text::{format_poly_with, format_rat, parse_poly, parse_rat};

fn rat_in(s: &str, field: &str) -> Result<Rat, InputError> {
    parse_rat(s).map_err(|e| InputError::invalid(format!("{field}: {e}")))
}

fn rats_in(v: &[String], field: &str) -> Result<Vec<Rat>, InputError> {
    v.iter()
        .enumerate()
        .map(|(i, s)| rat_in(s, &format!("{field}[{i}]")))
        .collect()
}

pub fn rats_out(v: &[Rat]) -> Vec<String> {
    v.iter().map(format_rat).collect()
}

pub fn ints_out(v: &[BigInt]) -> Vec<String> {
    v.iter().map(BigInt::to_string).collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermDoc {
    pub exps: Vec<u32>,
    pub coeff: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolyDoc {
    pub nvars: usize,
    pub terms: Vec<TermDoc>,
}

impl PolyDoc {
    pub fn from_poly(p: &Poly) -> Self {
        PolyDoc {
            nvars: p.nvars(),
            terms: p
                .sorted_terms()
                .into_iter()
                .map(|(e, c)| TermDoc {
                    exps: e.clone(),
                    coeff: format_rat(c),
                })
                .collect(),
        }
    }

    pub fn to_poly(&self) -> Result<Poly, InputError> {
        let mut p = Poly::zero(self.nvars);
        for (i, t) in self.terms.iter().enumerate() {
            if t.exps.len() != self.nvars {
                return Err(InputError::invalid(format!(
                    "terms[{i}].exps: expected {} exponents, found {}",
                    self.nvars,
                    t.exps.len()
                )));
            }
            p.add_term(t.exps.clone(), rat_in(&t.coeff, &format!("terms[{i}].coeff"))?);
        }
        Ok(p)
    }
}

/// A polynomial given either in the text grammar or as a [`PolyDoc`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PolyInput {
    Text(String),
    Doc(PolyDoc),
}

impl PolyInput {
    pub fn to_poly(&self, nvars: Option<usize>) -> Result<Poly, InputError> {
        let p = match self {
            PolyInput::Text(s) => parse_poly(s, nvars).map_err(InputError::invalid)?,
            PolyInput::Doc(d) => d.to_poly()?,
        };
        if let Some(n) = nvars {
            if p.nvars() != n {
                return Err(InputError::invalid(format!("expected {n} variables, found {}", p.nvars())));
            }
        }
        Ok(p)
    }

    pub fn to_form(&self, nvars: Option<usize>) -> Result<CubicForm, InputError> {
        CubicForm::from_poly(&self.to_poly(nvars)?).map_err(InputError::from)
    }
}

/// Upper triangle of a symmetric matrix, row `i` holding columns `i..n`.
pub fn upper_out(m: &Matrix) -> Vec<Vec<String>> {
    (0..m.rows())
        .map(|i| (i..m.cols()).map(|j| format_rat(&m[(i, j)])).collect())
        .collect()
}

pub fn upper_in(rows: &[Vec<String>], field: &str) -> Result<Matrix, InputError> {
    let n = rows.len();
    let mut m = Matrix::zeros(n, n);
    for (i, row) in rows.iter().enumerate() {
        if row.len() != n - i {
            return Err(InputError::invalid(format!(
                "{field}[{i}]: upper-triangular row needs {} entries, found {}",
                n - i,
                row.len()
            )));
        }
        for (k, s) in row.iter().enumerate() {
            let v = rat_in(s, &format!("{field}[{i}][{k}]"))?;
            m[(i, i + k)] = v.clone();
            m[(i + k, i)] = v;
        }
    }
    Ok(m)
}

pub fn matrix_out(m: &Matrix) -> Vec<Vec<String>> {
    (0..m.rows())
        .map(|i| (0..m.cols()).map(|j| format_rat(&m[(i, j)])).collect())
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairDoc {
    pub linear: Vec<String>,
    pub quadratic: Vec<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecompositionDoc {
    pub nvars: usize,
    pub h: usize,
    pub pairs: Vec<PairDoc>,
}

impl DecompositionDoc {
    pub fn from_decomposition(d: &Decomposition) -> Self {
        DecompositionDoc {
            nvars: d.nvars(),
            h: d.h(),
            pairs: d
                .pairs()
                .iter()
                .map(|(l, q)| PairDoc {
                    linear: rats_out(l),
                    quadratic: upper_out(q),
                })
                .collect(),
        }
    }

    pub fn to_decomposition(&self) -> Result<Decomposition, InputError> {
        if self.h != self.pairs.len() {
            return Err(InputError::invalid(format!("h = {} but {} pairs given", self.h, self.pairs.len())));
        }
        let pairs = self
            .pairs
            .iter()
            .enumerate()
            .map(|(i, p)| {
                Ok((
                    rats_in(&p.linear, &format!("pairs[{i}].linear"))?,
                    upper_in(&p.quadratic, &format!("pairs[{i}].quadratic"))?,
                ))
            })
            .collect::<Result<Vec<_>, InputError>>()?;
        Decomposition::new(self.nvars, pairs).map_err(InputError::from)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PencilDoc {
    pub rho: usize,
    pub matrices: Vec<Vec<Vec<String>>>,
}

impl PencilDoc {
    pub fn from_pencil(p: &SymmetricPencil) -> Self {
        PencilDoc {
            rho: p.rho(),
            matrices: p.matrices().iter().map(upper_out).collect(),
        }
    }

    pub fn to_pencil(&self) -> Result<SymmetricPencil, InputError> {
        let mats = self
            .matrices
            .iter()
            .enumerate()
            .map(|(i, m)| upper_in(m, &format!("matrices[{i}]")))
            .collect::<Result<Vec<_>, _>>()?;
        SymmetricPencil::new(self.rho, mats).map_err(InputError::from)
    }
}

/// A cubic and the choice of x-variables (1-based `x`, or the first `m`).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SplitDoc {
    pub form: PolyInput,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub nvars: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub x: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m: Option<usize>,
}

impl SplitDoc {
    pub fn to_split(&self) -> Result<SplitCubic, InputError> {
        let c = self.form.to_form(self.nvars).map_err(|e| e.within("form"))?;
        let xs: Vec<usize> = match (&self.x, self.m) {
            (Some(x), None) => {
                if let Some(&bad) = x.iter().find(|&&i| i == 0 || i > c.nvars()) {
                    return Err(InputError::invalid(format!("x: index {bad} is out of range 1..={}", c.nvars())));
                }
                x.iter().map(|i| i - 1).collect()
            }
            (None, Some(m)) => (0..m).collect(),
            _ => return Err(InputError::invalid("give exactly one of `x` and `m`")),
        };
        cubicwa_core::fibration::split_with(&c, &xs).map_err(InputError::from)
    }
}

pub fn place_out(p: &Place) -> String {
    match p {
        Place::Real => "real".into(),
        Place::Prime(q) => q.to_string(),
    }
}

pub fn place_in(s: &str) -> Result<Place, InputError> {
    match s.trim() {
        "real" | "inf" => Ok(Place::Real),
        t => {
            let p: u64 = t
                .parse()
                .map_err(|_| InputError::invalid(format!("place `{s}` is neither `real` nor a prime")))?;
            Place::prime(p).map_err(InputError::from)
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TargetDoc {
    pub place: String,
    pub point: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub precision: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TaskDoc {
    pub form: PolyInput,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub nvars: Option<usize>,
    pub targets: Vec<TargetDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rho: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_steps: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub point_budget: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub center_height: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

impl TaskDoc {
    pub fn to_task(&self) -> Result<ApproximationTask, InputError> {
        let form = self.form.to_form(self.nvars).map_err(|e| e.within("form"))?;
        let mut targets = Vec::new();
        for (i, t) in self.targets.iter().enumerate() {
            let field = format!("targets[{i}]");
            let point = rats_in(&t.point, &format!("{field}.point"))?;
            let target = match (place_in(&t.place).map_err(|e| e.within(&field))?, t.precision, &t.epsilon) {
                (Place::Prime(p), Some(r), None) => LocalTarget::prime(p, point, r),
                (Place::Real, None, Some(eps)) => LocalTarget::real(point, rat_in(eps, &format!("{field}.epsilon"))?),
                (Place::Prime(_), _, _) => {
                    return Err(InputError::invalid(format!("{field}: a prime target needs `precision` only")))
                }
                (Place::Real, _, _) => return Err(InputError::invalid(format!("{field}: a real target needs `epsilon` only"))),
            };
            targets.push(target.map_err(|e| InputError::from(e).within(&field))?);
        }
        let mut task = ApproximationTask::new(form, targets);
        if let Some(r) = &self.rho {
            task.rho = rat_in(r, "rho")?;
        }
        task.t = self.t;
        if let Some(v) = self.max_steps {
            task.max_steps = v;
        }
        if let Some(v) = self.point_budget {
            task.point_budget = v;
        }
        if let Some(v) = self.center_height {
            task.center_height = v;
        }
        if let Some(v) = self.seed {
            task.seed = v;
        }
        Ok(task)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RegionDoc {
    Box { center: Vec<String>, side: String },
    Intervals(Vec<[String; 2]>),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QueryDoc {
    pub poly: PolyInput,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub nvars: Option<usize>,
    pub region: RegionDoc,
    #[serde(default = "one")]
    pub modulus: u64,
    pub scales: Vec<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub budget: Option<u64>,
}

fn one() -> u64 {
    1
}

impl QueryDoc {
    /// One query per scale.
    pub fn to_queries(&self, default_budget: Option<u128>) -> Result<Vec<CountQuery>, InputError> {
        let poly = self.poly.to_poly(self.nvars).map_err(|e| e.within("poly"))?;
        let region = match &self.region {
            RegionDoc::Box { center, side } => Region::Box(
                AxisBox::new(rats_in(center, "region.box.center")?, rat_in(side, "region.box.side")?)
                    .map_err(|e| InputError::from(e).within("region.box"))?,
            ),
            RegionDoc::Intervals(iv) => Region::Intervals(
                iv.iter()
                    .enumerate()
                    .map(|(i, [lo, hi])| {
                        Ok((
                            rat_in(lo, &format!("region.intervals[{i}][0]"))?,
                            rat_in(hi, &format!("region.intervals[{i}][1]"))?,
                        ))
                    })
                    .collect::<Result<_, InputError>>()?,
            ),
        };
        if self.modulus == 0 {
            return Err(InputError::invalid("modulus must be positive"));
        }
        if self.scales.contains(&0) {
            return Err(InputError::invalid("scales must be positive"));
        }
        let budget = self.budget.map(u128::from).or(default_budget);
        Ok(self
            .scales
            .iter()
            .map(|&p| {
                let mut q = CountQuery::new(poly.clone(), region.clone(), BigInt::from(self.modulus), BigInt::from(p));
                if let Some(b) = budget {
                    q.budget = b;
                }
                q
            })
            .collect())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValueAtDoc {
    pub point: Vec<String>,
    pub value: String,
    pub gradient: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnalyzeDoc {
    pub form: String,
    pub nvars: usize,
    pub cone: Option<Vec<String>>,
    pub vertex_space_dim: usize,
    /// 1-based index `i` of a coordinate point `e_i` forced to be singular.
    pub forced_singular_point: Option<usize>,
    pub gradient: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub at: Option<ValueAtDoc>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HinvDoc {
    pub bound: usize,
    pub budget_exhausted: bool,
    pub plane: Vec<Vec<String>>,
    pub decomposition: DecompositionDoc,
}

impl HinvDoc {
    pub fn from_bound(b: &HinvBound) -> Self {
        HinvDoc {
            bound: b.bound,
            budget_exhausted: b.budget_exhausted,
            plane: b.plane.iter().map(|v| rats_out(v)).collect(),
            decomposition: DecompositionDoc::from_decomposition(&b.witness),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PencilWitnessDoc {
    pub found: bool,
    pub y: Option<Vec<String>>,
    pub det: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MinorDoc {
    pub y: Vec<String>,
    /// 1-based rows (and columns) of the principal minor.
    pub indices: Vec<usize>,
    pub minor: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RankDoc {
    pub size: usize,
    pub rank: usize,
    pub witness: Option<MinorDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub determinant: Option<String>,
}

impl RankDoc {
    pub fn from_rank(size: usize, r: &FiberRank, determinant: Option<String>) -> Self {
        RankDoc {
            size,
            rank: r.rank,
            witness: r.witness.as_ref().map(|w| MinorDoc {
                y: rats_out(&w.y),
                indices: w.indices.iter().map(|i| i + 1).collect(),
                minor: format_rat(&w.minor),
            }),
            determinant,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FibrationDoc {
    pub m: usize,
    pub h: usize,
    /// Original 1-based indices of the x- and y-variables.
    pub x: Vec<usize>,
    pub y: Vec<usize>,
    pub matrices: Vec<Vec<Vec<String>>>,
    pub border: Vec<String>,
    pub corner: String,
    pub fiber_matrix: Vec<Vec<String>>,
    pub identity_holds: bool,
}

impl FibrationDoc {
    pub fn from_split(s: &SplitCubic) -> Self {
        let a = s.fiber_matrix();
        let order: Vec<usize> = s.order().iter().map(|i| i + 1).collect();
        FibrationDoc {
            m: s.m(),
            h: s.h(),
            x: order[..s.m()].to_vec(),
            y: order[s.m()..].to_vec(),
            matrices: s.matrices().iter().map(upper_out).collect(),
            border: s.border().iter().map(|q| format_poly_with(q, "y")).collect(),
            corner: format_poly_with(&s.corner().to_poly(), "y"),
            fiber_matrix: (0..a.rows())
                .map(|i| (0..a.cols()).map(|j| format_poly_with(a.get(i, j), "y")).collect())
                .collect(),
            identity_holds: cubicwa_core::fibration::fiber_identity_check(s),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReduceDoc {
    pub independent: usize,
    pub zero_matrices: usize,
    /// `L` with `y′ = L·y`.
    pub change: Vec<Vec<String>>,
    pub reduced: FibrationDoc,
}

impl ReduceDoc {
    pub fn from_reduction(r: &StrongReduction) -> Self {
        ReduceDoc {
            independent: r.independent,
            zero_matrices: r.reduced.matrices().iter().filter(|m| m.is_zero()).count(),
            change: matrix_out(r.change.matrix()),
            reduced: FibrationDoc::from_split(&r.reduced),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LeadingDoc {
    pub degree: u32,
    pub coefficient: String,
    /// The predicted term agrees with the expansion of `det A` in `P`.
    pub verified: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CaseDoc {
    pub outcome: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub case: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub y: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub det: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub direction: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub base: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scale: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub leading: Option<LeadingDoc>,
}

impl CaseDoc {
    pub fn from_outcome(o: &CaseOutcome) -> Result<Self, InputError> {
        let empty = |outcome: &str| CaseDoc {
            outcome: outcome.into(),
            case: None,
            y: None,
            det: None,
            direction: None,
            base: None,
            scale: None,
            leading: None,
        };
        Ok(match o {
            CaseOutcome::LinearSpace => empty("linear_space"),
            CaseOutcome::Degenerate => empty("degenerate"),
            CaseOutcome::Witness(w) => {
                let leading = match &w.leading {
                    Some((deg, c)) => {
                        let d = cubicwa_core::fibration::fiber_det_in_scale(&w.frame, &w.direction, &w.base)?;
                        let verified = d.degree_in(0) == Some(*deg) && d.coeff(&[*deg]) == *c;
                        Some(LeadingDoc {
                            degree: *deg,
                            coefficient: format_rat(c),
                            verified,
                        })
                    }
                    None => None,
                };
                CaseDoc {
                    outcome: "witness".into(),
                    case: Some(cubicwa_core::fibration::case_label(w.case)),
                    y: Some(rats_out(&w.y)),
                    det: Some(format_rat(&w.det)),
                    direction: Some(rats_out(&w.direction)),
                    base: Some(rats_out(&w.base)),
                    scale: Some(format_rat(&w.scale)),
                    leading,
                }
            }
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LiftDoc {
    pub exponent: u32,
    pub point: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrimeDoc {
    pub status: String,
    pub method: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub criterion: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gradient_ord: Option<u32>,
    pub witness: Option<Vec<String>>,
    pub lift: Option<LiftDoc>,
}

pub fn status_label(s: SolubilityStatus) -> &'static str {
    match s {
        SolubilityStatus::Found => "found",
        SolubilityStatus::Refuted => "refuted",
        SolubilityStatus::NotFound => "not_found",
    }
}

pub fn method_label(m: SearchMethod) -> &'static str {
    match m {
        SearchMethod::Exhaustive => "exhaustive",
        SearchMethod::Sampled => "sampled",
        SearchMethod::Height => "height",
    }
}

impl PrimeDoc {
    pub fn from_report(r: &PrimeReport) -> Self {
        let (criterion, gradient_ord) = match r.criterion {
            Some(Criterion::UnitGradient) => (Some("unit_gradient".to_string()), None),
            Some(Criterion::Hensel { gradient_ord }) => (Some("hensel".to_string()), Some(gradient_ord)),
            None => (None, None),
        };
        PrimeDoc {
            status: status_label(r.status).into(),
            method: method_label(r.method).into(),
            criterion,
            gradient_ord,
            witness: r.witness.as_ref().map(|w| ints_out(w)),
            lift: r.lift.as_ref().map(|(k, v)| LiftDoc {
                exponent: *k,
                point: ints_out(v),
            }),
        }
    }
}

/// Solubility report keyed by prime.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportDoc {
    pub seed: u64,
    pub primes: BTreeMap<u64, PrimeDoc>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HenselDoc {
    pub p: u64,
    pub steps: Vec<LiftDoc>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HilbertDoc {
    pub a: String,
    pub b: String,
    pub place: String,
    pub symbol: i8,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum IsotropyWitnessDoc {
    Zero { vector: Vec<String> },
    SignChange { positive: Vec<String>, negative: Vec<String> },
    Hensel { point: Vec<String>, var: usize, gradient_ord: u32, lifted: Vec<String> },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IsotropyDoc {
    pub place: String,
    pub isotropic: bool,
    pub witness: Option<IsotropyWitnessDoc>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StepDoc {
    pub step: u32,
    pub scale: String,
    pub ranges: Vec<[String; 2]>,
    pub prefixes: String,
    pub examined: String,
    pub rejected: u64,
    pub truncated: bool,
}

impl StepDoc {
    pub fn from_record(r: &StepRecord) -> Self {
        StepDoc {
            step: r.step,
            scale: r.scale.to_string(),
            ranges: r.ranges.iter().map(|(a, b)| [a.to_string(), b.to_string()]).collect(),
            prefixes: r.prefixes.to_string(),
            examined: r.examined.to_string(),
            rejected: r.rejected,
            truncated: r.truncated,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckDoc {
    pub name: String,
    pub place: Option<String>,
    /// 1-based coordinate.
    pub coordinate: Option<usize>,
    /// A rational, or a valuation (`"inf"` for `+∞`).
    pub lhs: String,
    pub relation: String,
    pub rhs: String,
    pub holds: bool,
    pub required: bool,
}

impl CheckDoc {
    pub fn from_check(c: &Check) -> Self {
        let lhs = match &c.lhs {
            Quantity::Value(v) => format_rat(v),
            Quantity::Valuation(Some(o)) => format!("ord {o}"),
            Quantity::Valuation(None) => "ord inf".into(),
        };
        CheckDoc {
            name: c.name.into(),
            place: c.place.as_ref().map(place_out),
            coordinate: c.coordinate.map(|i| i + 1),
            lhs,
            relation: c.relation.symbol().into(),
            rhs: format_rat(&c.rhs),
            holds: c.holds,
            required: c.required,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExponentDoc {
    pub p: u64,
    pub r: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TranscriptDoc {
    pub a: Vec<String>,
    pub modulus: String,
    pub exponents: Vec<ExponentDoc>,
    pub t: u32,
    pub d: String,
    pub rho: String,
    pub center: Vec<String>,
    pub steps: Vec<StepDoc>,
    pub checks: Vec<CheckDoc>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ApproxDoc {
    pub seed: u64,
    pub found: bool,
    pub point: Option<Vec<String>>,
    pub y: Option<Vec<String>>,
    pub z: Option<Vec<String>>,
    pub scale: Option<String>,
    pub transcript: TranscriptDoc,
}

impl ApproxDoc {
    pub fn from_outcome(seed: u64, o: &SearchOutcome) -> Self {
        let t = &o.transcript;
        ApproxDoc {
            seed,
            found: o.point.is_some(),
            point: o.point.as_ref().map(|x| rats_out(&x.point)),
            y: o.point.as_ref().map(|x| ints_out(&x.y)),
            z: o.point.as_ref().map(|x| ints_out(&x.z)),
            scale: o.point.as_ref().map(|x| x.scale.to_string()),
            transcript: TranscriptDoc {
                a: ints_out(&t.a),
                modulus: t.modulus.to_string(),
                exponents: t.exponents.iter().map(|&(p, r)| ExponentDoc { p, r }).collect(),
                t: t.t,
                d: t.d.to_string(),
                rho: format_rat(&t.rho),
                center: rats_out(&t.center),
                steps: t.steps.iter().map(StepDoc::from_record).collect(),
                checks: t.checks.iter().map(CheckDoc::from_check).collect(),
            },
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CountRowDoc {
    pub scale: u64,
    pub count: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CountDoc {
    pub rows: Vec<CountRowDoc>,
}

/// Pretty JSON with a trailing newline.
pub fn to_json<T: Serialize>(doc: &T) -> String {
    let mut s = serde_json::to_string_pretty(doc).expect("documents serialize");
    s.push('\n');
    s
}
