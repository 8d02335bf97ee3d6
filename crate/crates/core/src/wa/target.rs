use alloc::vec::Vec;

use num_traits::{One, Signed, Zero};

use crate::cubic::CubicForm;
use crate::error::{check_dim, Error, Result};
use crate::local::{IntPoly, Place};
use crate::rat::{self, Rat};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Precision {
    /// `ord_p(x_i − target_i) ≥ r` for every `i`.
    Exponent(u32),
    /// `|x_i − target_i| < ε` for every `i`.
    Epsilon(Rat),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalTarget {
    pub place: Place,
    pub point: Vec<Rat>,
    pub precision: Precision,
}

impl LocalTarget {
    pub fn prime(p: u64, point: Vec<Rat>, exponent: u32) -> Result<Self> {
        let t = LocalTarget {
            place: Place::prime(p)?,
            point,
            precision: Precision::Exponent(exponent),
        };
        t.check_shape()?;
        Ok(t)
    }

    pub fn real(point: Vec<Rat>, epsilon: Rat) -> Result<Self> {
        let t = LocalTarget {
            place: Place::Real,
            point,
            precision: Precision::Epsilon(epsilon),
        };
        t.check_shape()?;
        Ok(t)
    }

    fn check_shape(&self) -> Result<()> {
        match (&self.place, &self.precision) {
            (Place::Prime(p), Precision::Exponent(r)) => {
                if *r == 0 {
                    return Err(Error::Precondition("prime precision must be at least 1".into()));
                }
                if self.point.iter().any(|x| rat::ord(x, *p).is_some_and(|o| o < 0)) {
                    return Err(Error::Precondition(alloc::format!("target is not {p}-integral")));
                }
                Ok(())
            }
            (Place::Real, Precision::Epsilon(e)) => {
                if e.is_positive() {
                    Ok(())
                } else {
                    Err(Error::Precondition("epsilon must be positive".into()))
                }
            }
            _ => Err(Error::Precondition("precision kind does not match the place".into())),
        }
    }

    pub fn exponent(&self) -> Option<u32> {
        match self.precision {
            Precision::Exponent(r) => Some(r),
            Precision::Epsilon(_) => None,
        }
    }

    pub fn epsilon(&self) -> Option<&Rat> {
        match &self.precision {
            Precision::Epsilon(e) => Some(e),
            Precision::Exponent(_) => None,
        }
    }
}

/// The axis-aligned box `{x : |x_i − b_i| < ρ/2}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AxisBox {
    pub center: Vec<Rat>,
    pub side: Rat,
}

impl AxisBox {
    pub fn new(center: Vec<Rat>, side: Rat) -> Result<Self> {
        if !side.is_positive() || side >= Rat::one() {
            return Err(Error::Precondition("box side must lie in (0, 1)".into()));
        }
        Ok(AxisBox { center, side })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ApproximationTask {
    pub form: CubicForm,
    pub targets: Vec<LocalTarget>,
    /// Box side `ρ`.
    pub rho: Rat,
    /// Exponent in `D ≡ P ≡ 1 (mod m^t)`; defaults to the largest target
    /// precision plus one.
    pub t: Option<u32>,
    /// Number of scales `P` tried.
    pub max_steps: u32,
    /// Prefixes `(y_1, …, y_{n−1})` examined per scale.
    pub point_budget: u64,
    /// Height bound for the integral zero used as the centre when there is
    /// no real target.
    pub center_height: u64,
    pub seed: u64,
}

impl ApproximationTask {
    pub fn new(form: CubicForm, targets: Vec<LocalTarget>) -> Self {
        ApproximationTask {
            form,
            targets,
            rho: rat::frac(1, 2),
            t: None,
            max_steps: 16,
            point_budget: 1_000_000,
            center_height: 6,
            seed: 0,
        }
    }

    pub fn real_target(&self) -> Option<&LocalTarget> {
        self.targets.iter().find(|t| t.place == Place::Real)
    }

    pub fn prime_targets(&self) -> impl Iterator<Item = &LocalTarget> {
        self.targets.iter().filter(|t| t.place != Place::Real)
    }

    /// Checks shapes, one target per place, and that each target is a
    /// nonsingular zero: mod `p^r` at primes, exactly at the real place
    /// when the real target lies on the form.
    pub fn validate(&self) -> Result<()> {
        let n = self.form.nvars();
        AxisBox::new(rat::zeros(n), self.rho.clone())?;
        let f = IntPoly::from_poly(&self.form.to_poly());
        let grad = f.gradient();
        let mut places: Vec<Place> = Vec::new();
        for t in &self.targets {
            check_dim(n, t.point.len())?;
            t.check_shape()?;
            if places.contains(&t.place) {
                return Err(Error::Precondition(alloc::format!("more than one target at place {}", t.place)));
            }
            places.push(t.place);
            match t.place {
                Place::Prime(p) => {
                    let r = t.exponent().expect("checked") as i64;
                    let value = eval_rat(&f, &t.point);
                    if rat::ord(&value, p).is_some_and(|o| o < r) {
                        return Err(Error::Precondition(alloc::format!("target is not a zero mod {p}^{r}")));
                    }
                    let singular = grad
                        .iter()
                        .all(|g| rat::ord(&eval_rat(g, &t.point), p).is_none_or(|o| o >= r));
                    if singular {
                        return Err(Error::Precondition(alloc::format!("target is singular mod {p}^{r}")));
                    }
                }
                Place::Real => {
                    if self.form.eval(&t.point)?.is_zero() && self.form.gradient_at(&t.point)?.iter().all(Zero::is_zero) {
                        return Err(Error::Precondition("real target is a singular point".into()));
                    }
                }
            }
        }
        Ok(())
    }
}

pub(crate) fn eval_rat(f: &IntPoly, x: &[Rat]) -> Rat {
    f.to_poly().eval(x).expect("dimensions checked")
}
