//! Subcommands. Each returns its report and exit code: 0 when the result
//! or witness was found, 1 for a clean negative within budget.

use std::fmt::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use cubicwa_core::fibration::{self, CaseOutcome};
use cubicwa_core::hinv::{self, HinvSearch};
use cubicwa_core::local::{self, IsotropyWitness, ModPSolution, ReportOptions, SolubilityStatus};
use cubicwa_core::pencil::{self, DEFAULT_DET_LIMIT};
use cubicwa_core::wa::count;
use cubicwa_core::{CubicForm, Error, Poly};
use num_bigint::BigInt;
use serde::de::DeserializeOwned;

use crate::docs::*;
use crate::error::{read_file, InputError};
use crate::par;
use crate::text::{format_poly, format_poly_with, format_rat, format_vector, parse_poly, parse_rat, parse_vector};

/// Environment variable holding the default budget.
pub const BUDGET_ENV: &str = "CUBICWA_BUDGET";

#[derive(Debug, Parser)]
#[command(name = "cubicwa", version, about = "Exact tools for cubic forms and weak approximation")]
pub struct Cli {
    /// Emit structured JSON instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    /// Worker threads (0 = one per core).
    #[arg(long, global = true, default_value_t = 0)]
    pub threads: usize,
    /// Seed for every randomized step.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Cone vertex, forced singular point and gradient of a cubic form.
    Analyze {
        #[arg(long)]
        form: PathBuf,
        #[arg(long)]
        nvars: Option<usize>,
        /// Evaluate the form and its gradient at this point.
        #[arg(long, allow_hyphen_values = true)]
        at: Option<String>,
    },
    /// Upper bound on the h-invariant with a verified decomposition.
    Hinv {
        #[arg(long)]
        form: PathBuf,
        #[arg(long)]
        nvars: Option<usize>,
        #[arg(long, default_value_t = 2)]
        height: u64,
        #[arg(long)]
        budget: Option<u64>,
    },
    /// Symmetric matrix pencils.
    Pencil {
        #[command(subcommand)]
        action: PencilAction,
    },
    /// The quadric fibration of a split cubic.
    Fibration {
        #[command(subcommand)]
        action: FibrationAction,
    },
    /// Local solubility.
    Local {
        #[command(subcommand)]
        action: LocalAction,
    },
    /// Rational point approximating local targets.
    Approx {
        #[arg(long)]
        task: PathBuf,
        #[arg(long)]
        max_steps: Option<u32>,
        #[arg(long)]
        point_budget: Option<u64>,
    },
    /// Lattice point counts as CSV rows `P,count`.
    Count {
        #[arg(long)]
        query: PathBuf,
    },
}

#[derive(Debug, Subcommand)]
pub enum PencilAction {
    /// Generic rank of the pencil and its determinant.
    Rank {
        #[arg(long)]
        pencil: PathBuf,
    },
    /// A point where the pencil has full rank.
    Witness {
        #[arg(long)]
        pencil: PathBuf,
    },
}

#[derive(Debug, Subcommand)]
pub enum FibrationAction {
    /// Blocks `M_i`, `q_j`, `c` and the matrix `A(y)`.
    Build {
        #[arg(long)]
        split: PathBuf,
    },
    /// Generic rank of `A(y)`.
    Rank {
        #[arg(long)]
        split: PathBuf,
    },
    /// Strong-equivalence reduction of the y-block.
    Reduce {
        #[arg(long)]
        split: PathBuf,
    },
    /// Case witness for `det A(y) ≠ 0`.
    Case {
        #[arg(long)]
        split: PathBuf,
    },
}

#[derive(Debug, Subcommand)]
pub enum LocalAction {
    /// Nonsingular solutions of the congruences at each prime.
    Report {
        #[arg(long)]
        form: PathBuf,
        #[arg(long)]
        nvars: Option<usize>,
        #[arg(long, value_delimiter = ',', required = true)]
        primes: Vec<u64>,
        #[arg(long)]
        budget: Option<u64>,
        #[arg(long)]
        samples: Option<u64>,
    },
    /// Hensel lift of a nonsingular root mod p.
    Hensel {
        #[arg(long)]
        form: PathBuf,
        #[arg(long)]
        nvars: Option<usize>,
        #[arg(long)]
        prime: u64,
        #[arg(long, allow_hyphen_values = true)]
        point: String,
        #[arg(long)]
        target: u32,
    },
    /// Hilbert symbol `(a, b)` at a place.
    Hilbert {
        #[arg(long, allow_hyphen_values = true)]
        a: String,
        #[arg(long, allow_hyphen_values = true)]
        b: String,
        #[arg(long)]
        place: String,
    },
    /// Isotropy of a quadratic form at a place, with a witness.
    Isotropy {
        #[arg(long)]
        quadric: PathBuf,
        #[arg(long)]
        nvars: Option<usize>,
        #[arg(long)]
        place: String,
        #[arg(long, default_value_t = 8)]
        height: u64,
        /// Exponent to which a p-adic witness is lifted.
        #[arg(long, default_value_t = 6)]
        lift: u32,
    },
}

/// What a command prints, and its exit code.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
}

impl Outcome {
    fn new(found: bool, stdout: String) -> Self {
        Outcome {
            code: if found { 0 } else { 1 },
            stdout,
        }
    }
}

/// A command failure: bad input (exit 2) or a budget-limited negative
/// (exit 1).
#[derive(Debug, thiserror::Error)]
pub enum Failure {
    #[error(transparent)]
    Input(#[from] InputError),
    #[error("{0}")]
    Exhausted(String),
}

impl Failure {
    pub fn code(&self) -> i32 {
        match self {
            Failure::Input(_) => 2,
            Failure::Exhausted(_) => 1,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::BudgetExceeded { .. } => Failure::Exhausted(e.to_string()),
            other => Failure::Input(other.into()),
        }
    }
}

fn env_budget() -> Result<Option<u64>, InputError> {
    match std::env::var(BUDGET_ENV) {
        Ok(v) => v
            .trim()
            .parse()
            .map(Some)
            .map_err(|_| InputError::invalid(format!("{BUDGET_ENV}={v} is not a nonnegative integer"))),
        Err(_) => Ok(None),
    }
}

fn path_str(p: &Path) -> String {
    p.display().to_string()
}

/// A polynomial file: JSON document if it starts with `{`, else text.
pub fn load_poly(path: &Path, nvars: Option<usize>) -> Result<Poly, InputError> {
    let src = read_file(path)?;
    if src.trim_start().starts_with('{') {
        let doc: PolyDoc = serde_json::from_str(&src).map_err(|e| InputError::json(&path_str(path), &e))?;
        return PolyInput::Doc(doc)
            .to_poly(nvars)
            .map_err(|e| e.within(&path_str(path)));
    }
    parse_poly(&src, nvars).map_err(|e| InputError::syntax(&path_str(path), &src, &e))
}

pub fn load_form(path: &Path, nvars: Option<usize>) -> Result<CubicForm, InputError> {
    let p = load_poly(path, nvars)?;
    CubicForm::from_poly(&p).map_err(|e| InputError::from(e).within(&path_str(path)))
}

pub fn load_doc<T: DeserializeOwned>(path: &Path) -> Result<T, InputError> {
    let src = read_file(path)?;
    serde_json::from_str(&src).map_err(|e| InputError::json(&path_str(path), &e))
}

fn arg_vector(name: &str, s: &str) -> Result<Vec<cubicwa_core::Rat>, InputError> {
    parse_vector(s).map_err(|e| InputError::Syntax {
        path: format!("--{name}"),
        line: 1,
        col: e.offset + 1,
        message: e.message,
    })
}

fn arg_rat(name: &str, s: &str) -> Result<cubicwa_core::Rat, InputError> {
    parse_rat(s).map_err(|e| InputError::Syntax {
        path: format!("--{name}"),
        line: 1,
        col: e.offset + 1,
        message: e.message,
    })
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

/// Runs a parsed command line.
pub fn run(cli: &Cli) -> Result<Outcome, Failure> {
    par::with_threads(cli.threads, || dispatch(cli))
}

fn dispatch(cli: &Cli) -> Result<Outcome, Failure> {
    let json = cli.json;
    match &cli.command {
        Command::Analyze { form, nvars, at } => analyze(json, form, *nvars, at.as_deref()),
        Command::Hinv {
            form,
            nvars,
            height,
            budget,
        } => hinv_bound(json, form, *nvars, *height, *budget),
        Command::Pencil { action } => pencil_cmd(json, action),
        Command::Fibration { action } => fibration_cmd(json, action),
        Command::Local { action } => local_cmd(json, cli.seed, action),
        Command::Approx {
            task,
            max_steps,
            point_budget,
        } => approx(json, cli.seed, task, *max_steps, *point_budget),
        Command::Count { query } => count_cmd(json, query),
    }
}

fn analyze(json: bool, path: &Path, nvars: Option<usize>, at: Option<&str>) -> Result<Outcome, Failure> {
    let c = load_form(path, nvars)?;
    let grad: Vec<Poly> = c.gradient();
    let at = match at {
        Some(s) => {
            let x = arg_vector("at", s)?;
            let value = c.eval(&x).map_err(InputError::from)?;
            let g = c.gradient_at(&x).map_err(InputError::from)?;
            Some(ValueAtDoc {
                point: rats_out(&x),
                value: format_rat(&value),
                gradient: rats_out(&g),
            })
        }
        None => None,
    };
    let doc = AnalyzeDoc {
        form: format_poly(&c.to_poly()),
        nvars: c.nvars(),
        cone: c.cone_vertex().map(|v| rats_out(&v)),
        vertex_space_dim: c.vertex_space().len(),
        forced_singular_point: c.forced_singular_point().map(|i| i + 1),
        gradient: grad.iter().map(format_poly).collect(),
        at,
    };
    if json {
        return Ok(Outcome::new(true, to_json(&doc)));
    }
    let mut s = String::new();
    let _ = writeln!(s, "form: {}", doc.form);
    let _ = writeln!(s, "nvars: {}", doc.nvars);
    match &doc.cone {
        Some(v) => {
            let _ = writeln!(s, "cone: vertex ({}), vertex space dimension {}", v.join(", "), doc.vertex_space_dim);
        }
        None => s.push_str("cone: none\n"),
    }
    match doc.forced_singular_point {
        Some(i) => {
            let _ = writeln!(s, "forced singular point: e{i}");
        }
        None => s.push_str("forced singular point: none\n"),
    }
    for (i, g) in doc.gradient.iter().enumerate() {
        let _ = writeln!(s, "d/dx{}: {g}", i + 1);
    }
    if let Some(a) = &doc.at {
        let _ = writeln!(s, "at ({}): value {}, gradient ({})", a.point.join(", "), a.value, a.gradient.join(", "));
    }
    Ok(Outcome::new(true, s))
}

fn hinv_bound(json: bool, path: &Path, nvars: Option<usize>, height: u64, budget: Option<u64>) -> Result<Outcome, Failure> {
    let c = load_form(path, nvars)?;
    let mut search = HinvSearch::new(height);
    if let Some(b) = budget.or(env_budget()?) {
        search.budget = b;
    }
    let b = hinv::h_upper_bound_with(&c, &search)?;
    let found = b.bound < c.nvars();
    let doc = HinvDoc::from_bound(&b);
    if json {
        return Ok(Outcome::new(found, to_json(&doc)));
    }
    let mut s = String::new();
    let _ = writeln!(s, "h <= {}", b.bound);
    let _ = writeln!(s, "budget exhausted: {}", yes_no(b.budget_exhausted));
    let _ = writeln!(s, "plane dimension: {}", b.plane.len());
    for v in &b.plane {
        let _ = writeln!(s, "  {}", format_vector(v));
    }
    for (i, (l, q)) in b.witness.pairs().iter().enumerate() {
        let _ = writeln!(
            s,
            "L{} = {}; Q{} = {}",
            i + 1,
            format_poly(&Poly::linear(l)),
            i + 1,
            format_poly(&Poly::quadratic(q))
        );
    }
    Ok(Outcome::new(found, s))
}

fn pencil_cmd(json: bool, action: &PencilAction) -> Result<Outcome, Failure> {
    match action {
        PencilAction::Witness { pencil } => {
            let p = load_doc::<PencilDoc>(pencil)?.to_pencil()?;
            let w = pencil::find_full_rank_point(&p)?;
            let doc = PencilWitnessDoc {
                found: w.is_some(),
                y: w.as_ref().map(|w| rats_out(&w.y)),
                det: w.as_ref().map(|w| format_rat(&w.det_value)),
            };
            if json {
                return Ok(Outcome::new(doc.found, to_json(&doc)));
            }
            let s = match &w {
                Some(w) => format!("y = {}\ndet = {}\n", format_vector(&w.y), format_rat(&w.det_value)),
                None => "no full-rank point: the pencil determinant vanishes identically\n".to_string(),
            };
            Ok(Outcome::new(doc.found, s))
        }
        PencilAction::Rank { pencil } => {
            let p = load_doc::<PencilDoc>(pencil)?.to_pencil()?;
            let r = pencil::generic_rank(&p)?;
            let det = if p.rho() <= DEFAULT_DET_LIMIT {
                Some(format_poly_with(&pencil::pencil_det(&p)?, "y"))
            } else {
                None
            };
            let doc = RankDoc::from_rank(p.rho(), &r, det);
            if json {
                return Ok(Outcome::new(true, to_json(&doc)));
            }
            Ok(Outcome::new(true, rank_text(&doc)))
        }
    }
}

fn rank_text(doc: &RankDoc) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "rank: {} of {}", doc.rank, doc.size);
    if let Some(w) = &doc.witness {
        let idx: Vec<String> = w.indices.iter().map(usize::to_string).collect();
        let _ = writeln!(s, "witness: y = ({}), principal minor on ({}) = {}", w.y.join(", "), idx.join(", "), w.minor);
    }
    if let Some(d) = &doc.determinant {
        let _ = writeln!(s, "determinant: {d}");
    }
    s
}

fn fibration_text(d: &FibrationDoc) -> String {
    let mut s = String::new();
    let join = |v: &[usize]| v.iter().map(|i| format!("x{i}")).collect::<Vec<_>>().join(", ");
    let _ = writeln!(s, "x-block: {}", join(&d.x));
    let _ = writeln!(s, "y-block: {}", join(&d.y));
    for (i, m) in d.matrices.iter().enumerate() {
        let rows: Vec<String> = m.iter().map(|r| format!("[{}]", r.join(", "))).collect();
        let _ = writeln!(s, "M{} (upper) = {}", i + 1, rows.join(" "));
    }
    for (j, q) in d.border.iter().enumerate() {
        let _ = writeln!(s, "q{} = {q}", j + 1);
    }
    let _ = writeln!(s, "c = {}", d.corner);
    s.push_str("A(y) =\n");
    for row in &d.fiber_matrix {
        let _ = writeln!(s, "  [{}]", row.join(", "));
    }
    let _ = writeln!(s, "fiber identity: {}", if d.identity_holds { "holds" } else { "FAILS" });
    s
}

fn fibration_cmd(json: bool, action: &FibrationAction) -> Result<Outcome, Failure> {
    let path = match action {
        FibrationAction::Build { split }
        | FibrationAction::Rank { split }
        | FibrationAction::Reduce { split }
        | FibrationAction::Case { split } => split,
    };
    let s = load_doc::<SplitDoc>(path)?.to_split()?;
    match action {
        FibrationAction::Build { .. } => {
            let doc = FibrationDoc::from_split(&s);
            let out = if json { to_json(&doc) } else { fibration_text(&doc) };
            Ok(Outcome::new(true, out))
        }
        FibrationAction::Rank { .. } => {
            let r = fibration::generic_fiber_rank(&s)?;
            let doc = RankDoc::from_rank(s.m() + 1, &r, None);
            let out = if json { to_json(&doc) } else { rank_text(&doc) };
            Ok(Outcome::new(true, out))
        }
        FibrationAction::Reduce { .. } => {
            let r = fibration::strong_equivalence_reduce(&s)?;
            let doc = ReduceDoc::from_reduction(&r);
            if json {
                return Ok(Outcome::new(true, to_json(&doc)));
            }
            let mut out = String::new();
            let _ = writeln!(out, "independent matrices: {}", doc.independent);
            let _ = writeln!(out, "zero matrices: {}", doc.zero_matrices);
            out.push_str("L (y' = L y) =\n");
            for row in &doc.change {
                let _ = writeln!(out, "  [{}]", row.join(", "));
            }
            out.push_str(&fibration_text(&doc.reduced));
            Ok(Outcome::new(true, out))
        }
        FibrationAction::Case { .. } => {
            let o = fibration::case_witness(&s)?;
            let found = matches!(o, CaseOutcome::Witness(_));
            let doc = CaseDoc::from_outcome(&o)?;
            if json {
                return Ok(Outcome::new(found, to_json(&doc)));
            }
            let mut out = String::new();
            let _ = writeln!(out, "outcome: {}", doc.outcome.replace('_', " "));
            if let Some(c) = &doc.case {
                let _ = writeln!(out, "case: {c}");
            }
            if let (Some(y), Some(d)) = (&doc.y, &doc.det) {
                let _ = writeln!(out, "y = ({})", y.join(", "));
                let _ = writeln!(out, "det A(y) = {d}");
            }
            if let Some(l) = &doc.leading {
                let _ = writeln!(
                    out,
                    "leading term in P: {}*P^{} ({})",
                    l.coefficient,
                    l.degree,
                    if l.verified { "verified" } else { "MISMATCH" }
                );
            }
            Ok(Outcome::new(found, out))
        }
    }
}

fn local_cmd(json: bool, seed: Option<u64>, action: &LocalAction) -> Result<Outcome, Failure> {
    match action {
        LocalAction::Report {
            form,
            nvars,
            primes,
            budget,
            samples,
        } => {
            let c = load_form(form, *nvars)?;
            let mut opts = ReportOptions::default();
            if let Some(b) = budget.or(env_budget()?) {
                opts.budget = u128::from(b);
            }
            if let Some(s) = samples {
                opts.samples = *s;
            }
            opts.seed = seed.unwrap_or(0);
            let mut ps = primes.clone();
            ps.sort_unstable();
            ps.dedup();
            let reports = par::local_report(&c, &ps, &opts)?;
            let all = reports.iter().all(|r| r.status == SolubilityStatus::Found);
            let doc = ReportDoc {
                seed: opts.seed,
                primes: reports.iter().map(|r| (r.p, PrimeDoc::from_report(r))).collect(),
            };
            if json {
                return Ok(Outcome::new(all, to_json(&doc)));
            }
            let mut s = String::new();
            let _ = writeln!(s, "seed: {}", doc.seed);
            for (p, r) in &doc.primes {
                let _ = write!(s, "p = {p}: {} ({})", r.status.replace('_', " "), r.method);
                if let Some(c) = &r.criterion {
                    let _ = write!(s, ", {}", c.replace('_', " "));
                    if let Some(e) = r.gradient_ord {
                        let _ = write!(s, " e = {e}");
                    }
                }
                if let Some(w) = &r.witness {
                    let _ = write!(s, ", witness ({})", w.join(", "));
                }
                if let Some(l) = &r.lift {
                    let _ = write!(s, ", lifted mod p^{} to ({})", l.exponent, l.point.join(", "));
                }
                s.push('\n');
            }
            Ok(Outcome::new(all, s))
        }
        LocalAction::Hensel {
            form,
            nvars,
            prime,
            point,
            target,
        } => {
            let f = load_poly(form, *nvars)?;
            let x = arg_vector("point", point)?;
            if x.iter().any(|v| !v.is_integer()) {
                return Err(InputError::invalid("--point: coordinates must be integers").into());
            }
            let start = ModPSolution {
                p: *prime,
                k: 1,
                point: x.iter().map(|v| v.to_integer()).collect(),
                nonsingular: true,
            };
            let steps = local::hensel_lift_steps(&f, &start, *target)?;
            let doc = HenselDoc {
                p: *prime,
                steps: steps
                    .iter()
                    .map(|s| LiftDoc {
                        exponent: s.k,
                        point: ints_out(&s.point),
                    })
                    .collect(),
            };
            if json {
                return Ok(Outcome::new(true, to_json(&doc)));
            }
            let mut s = String::new();
            for st in &doc.steps {
                let _ = writeln!(s, "mod {}^{}: ({})", doc.p, st.exponent, st.point.join(", "));
            }
            Ok(Outcome::new(true, s))
        }
        LocalAction::Hilbert { a, b, place } => {
            let av = arg_rat("a", a)?;
            let bv = arg_rat("b", b)?;
            let v = place_in(place)?;
            let sym = local::hilbert_symbol(&av, &bv, v)?;
            let doc = HilbertDoc {
                a: format_rat(&av),
                b: format_rat(&bv),
                place: place_out(&v),
                symbol: sym,
            };
            if json {
                return Ok(Outcome::new(true, to_json(&doc)));
            }
            Ok(Outcome::new(true, format!("({}, {})_{} = {}\n", doc.a, doc.b, doc.place, sym)))
        }
        LocalAction::Isotropy {
            quadric,
            nvars,
            place,
            height,
            lift,
        } => {
            let q = load_poly(quadric, *nvars)?;
            let m = hinv::quadratic_matrix(&q).map_err(|e| InputError::from(e).within(&path_str(quadric)))?;
            let v = place_in(place)?;
            let isotropic = local::quadric_isotropic(&m, v)?;
            let witness = if isotropic { local::isotropy_witness(&m, v, *height)? } else { None };
            let wdoc = witness.as_ref().map(|w| match w {
                IsotropyWitness::Zero(x) => IsotropyWitnessDoc::Zero { vector: rats_out(x) },
                IsotropyWitness::SignChange { positive, negative } => IsotropyWitnessDoc::SignChange {
                    positive: rats_out(positive),
                    negative: rats_out(negative),
                },
                IsotropyWitness::Hensel(h) => IsotropyWitnessDoc::Hensel {
                    point: ints_out(&h.point),
                    var: h.var + 1,
                    gradient_ord: h.gradient_ord,
                    lifted: ints_out(&local::lift_isotropic(&m, h, *lift)),
                },
            });
            let doc = IsotropyDoc {
                place: place_out(&v),
                isotropic,
                witness: wdoc,
            };
            if json {
                return Ok(Outcome::new(isotropic, to_json(&doc)));
            }
            let mut s = String::new();
            let _ = writeln!(s, "isotropic at {}: {}", doc.place, yes_no(isotropic));
            match &doc.witness {
                Some(IsotropyWitnessDoc::Zero { vector }) => {
                    let _ = writeln!(s, "zero: ({})", vector.join(", "));
                }
                Some(IsotropyWitnessDoc::SignChange { positive, negative }) => {
                    let _ = writeln!(s, "positive at ({}), negative at ({})", positive.join(", "), negative.join(", "));
                }
                Some(IsotropyWitnessDoc::Hensel {
                    point,
                    var,
                    gradient_ord,
                    lifted,
                }) => {
                    let _ = writeln!(
                        s,
                        "hensel point ({}) in x{var} with e = {gradient_ord}; mod {}^{}: ({})",
                        point.join(", "),
                        doc.place,
                        lift,
                        lifted.join(", ")
                    );
                }
                None if isotropic => s.push_str("no witness within the height bound\n"),
                None => {}
            }
            Ok(Outcome::new(isotropic, s))
        }
    }
}

fn approx(json: bool, seed: Option<u64>, path: &Path, max_steps: Option<u32>, point_budget: Option<u64>) -> Result<Outcome, Failure> {
    let doc: TaskDoc = load_doc(path)?;
    let mut task = doc.to_task().map_err(|e| e.within(&path_str(path)))?;
    if let Some(s) = max_steps {
        task.max_steps = s;
    }
    if let Some(b) = point_budget.or(doc.point_budget).or(env_budget()?) {
        task.point_budget = b;
    }
    if let Some(s) = seed {
        task.seed = s;
    }
    let out = par::search(&task)?;
    let found = out.point.is_some();
    let d = ApproxDoc::from_outcome(task.seed, &out);
    if json {
        return Ok(Outcome::new(found, to_json(&d)));
    }
    let t = &d.transcript;
    let mut s = String::new();
    let _ = writeln!(s, "seed: {}", d.seed);
    let _ = writeln!(s, "a = ({}), m = {}, t = {}, D = {}, rho = {}", t.a.join(", "), t.modulus, t.t, t.d, t.rho);
    let _ = writeln!(s, "center = ({})", t.center.join(", "));
    for st in &t.steps {
        let ranges: Vec<String> = st.ranges.iter().map(|[a, b]| format!("[{a}, {b}]")).collect();
        let _ = writeln!(
            s,
            "step {}: P = {}, w in {}, {} of {} prefixes, {} rejected{}",
            st.step,
            st.scale,
            ranges.join(" x "),
            st.examined,
            st.prefixes,
            st.rejected,
            if st.truncated { ", truncated" } else { "" }
        );
    }
    match (&d.point, &d.scale) {
        (Some(x), Some(p)) => {
            let _ = writeln!(s, "found: x = ({}) at P = {p}", x.join(", "));
            for c in &t.checks {
                let place = c.place.as_deref().map(|p| format!(" [{p}]")).unwrap_or_default();
                let coord = c.coordinate.map(|i| format!(" i={i}")).unwrap_or_default();
                let _ = writeln!(
                    s,
                    "  {}{}{}: {} {} {} {}",
                    c.name,
                    place,
                    coord,
                    c.lhs,
                    c.relation,
                    c.rhs,
                    if c.holds { "ok" } else { "FAILS" }
                );
            }
        }
        _ => s.push_str("no point found within budget\n"),
    }
    Ok(Outcome::new(found, s))
}

fn count_cmd(json: bool, path: &Path) -> Result<Outcome, Failure> {
    let doc: QueryDoc = load_doc(path)?;
    let default_budget = env_budget()?.map(u128::from);
    let queries = doc.to_queries(default_budget).map_err(|e| e.within(&path_str(path)))?;
    let mut rows = Vec::new();
    for (q, p) in queries.iter().zip(&doc.scales) {
        // A one-variable query has nothing to shard.
        let n: BigInt = if q.poly.nvars() < 2 { count(q)? } else { par::count_parallel(q)? };
        rows.push(CountRowDoc {
            scale: *p,
            count: n.to_string(),
        });
    }
    if json {
        return Ok(Outcome::new(true, to_json(&CountDoc { rows })));
    }
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["P", "count"]).expect("in-memory write");
    for r in &rows {
        w.write_record([r.scale.to_string(), r.count.clone()]).expect("in-memory write");
    }
    let bytes = w.into_inner().expect("in-memory flush");
    Ok(Outcome::new(true, String::from_utf8(bytes).expect("ascii csv")))
}
