//! Abel equations, the affine group `ℝ ⋊ ℝ*` and its action by
//! `t`-dependent changes of variables `x = α(t) x̄ + β(t)`.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::numerics::{self, Grid, NumError, ScalarField};
use crate::tjet::{parse, EvalError, Expr, Jet, ParseError, TFunc};

#[derive(Clone, Debug, Error, PartialEq)]
pub enum AbelError {
    #[error("degree q = {0} is not supported here (need q = 3)")]
    Unsupported(usize),
    #[error("an equation of degree q needs q + 1 ≥ 3 coefficients, got {0}")]
    CoeffCount(usize),
    #[error("q = {q} does not match {found} coefficients")]
    DegreeMismatch { q: usize, found: usize },
    #[error("coefficient {index}: {source}")]
    Parse { index: usize, source: ParseError },
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error("alpha vanishes at t = {t}")]
    ZeroAlpha { t: f64 },
    #[error("group element with alpha = 0")]
    SingularElement,
    #[error("solution diverged at t = {t}")]
    Diverged { t: f64 },
    #[error(transparent)]
    Num(#[from] NumError),
}

/// `ẋ = f₀(t) + f₁(t)x + … + f_q(t)x^q`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "AbelJson", into = "AbelJson")]
pub struct AbelEquation {
    coeffs: Vec<TFunc>,
}

#[derive(Serialize, Deserialize)]
struct AbelJson {
    q: usize,
    coeffs: Vec<TFunc>,
}

impl TryFrom<AbelJson> for AbelEquation {
    type Error = AbelError;

    fn try_from(j: AbelJson) -> Result<Self, AbelError> {
        if j.coeffs.len() != j.q + 1 {
            return Err(AbelError::DegreeMismatch {
                q: j.q,
                found: j.coeffs.len(),
            });
        }
        AbelEquation::new(j.coeffs)
    }
}

impl From<AbelEquation> for AbelJson {
    fn from(e: AbelEquation) -> Self {
        AbelJson {
            q: e.q(),
            coeffs: e.coeffs,
        }
    }
}

impl AbelEquation {
    pub fn new(coeffs: Vec<TFunc>) -> Result<Self, AbelError> {
        if coeffs.len() < 3 {
            return Err(AbelError::CoeffCount(coeffs.len()));
        }
        Ok(AbelEquation { coeffs })
    }

    /// Coefficients `f₀..f_q` from source strings.
    pub fn parse(srcs: &[&str]) -> Result<Self, AbelError> {
        let coeffs = srcs
            .iter()
            .enumerate()
            .map(|(index, s)| parse(s).map_err(|source| AbelError::Parse { index, source }))
            .collect::<Result<_, _>>()?;
        Self::new(coeffs)
    }

    /// Constant coefficients, stored as exact rational images of the doubles.
    pub fn constant(cs: &[f64]) -> Result<Self, AbelError> {
        Self::new(cs.iter().map(|&c| Expr::from(c)).collect())
    }

    pub fn q(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[TFunc] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> &TFunc {
        &self.coeffs[k]
    }

    pub fn eval_coeffs(&self, t: f64) -> Result<Vec<f64>, EvalError> {
        self.coeffs.iter().map(|c| c.eval(t)).collect()
    }

    pub fn jets(&self, t: f64, order: usize) -> Result<Vec<Jet>, EvalError> {
        self.coeffs.iter().map(|c| c.eval_jet(t, order)).collect()
    }

    fn require_cubic(&self) -> Result<(), AbelError> {
        match self.q() {
            3 => Ok(()),
            q => Err(AbelError::Unsupported(q)),
        }
    }
}

impl ScalarField for AbelEquation {
    fn rhs(&self, t: f64, x: f64) -> Result<f64, EvalError> {
        let mut acc = 0.0;
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c.eval(t)?;
        }
        Ok(acc)
    }
}

/// `(β, α)` with `α ≠ 0`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GroupElement {
    pub beta: f64,
    pub alpha: f64,
}

impl GroupElement {
    pub fn new(beta: f64, alpha: f64) -> Result<Self, AbelError> {
        if alpha == 0.0 || !alpha.is_finite() || !beta.is_finite() {
            return Err(AbelError::SingularElement);
        }
        Ok(GroupElement { beta, alpha })
    }

    pub fn identity() -> Self {
        GroupElement {
            beta: 0.0,
            alpha: 1.0,
        }
    }

    /// `(β,α)⋆(β',α') = (αβ' + β, αα')`.
    pub fn compose(&self, other: &GroupElement) -> GroupElement {
        GroupElement {
            beta: self.alpha * other.beta + self.beta,
            alpha: self.alpha * other.alpha,
        }
    }

    pub fn inverse(&self) -> GroupElement {
        GroupElement {
            beta: -self.beta / self.alpha,
            alpha: 1.0 / self.alpha,
        }
    }

    /// `x = α x̄ + β`.
    pub fn apply(&self, xbar: f64) -> f64 {
        self.alpha * xbar + self.beta
    }
}

/// A curve `t ↦ (β(t), α(t))`; the change of variables is `x = α x̄ + β`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GroupCurve {
    pub beta: TFunc,
    pub alpha: TFunc,
}

impl GroupCurve {
    pub fn new(beta: TFunc, alpha: TFunc) -> Self {
        GroupCurve { beta, alpha }
    }

    pub fn parse(beta: &str, alpha: &str) -> Result<Self, AbelError> {
        Ok(GroupCurve {
            beta: parse(beta).map_err(|source| AbelError::Parse { index: 0, source })?,
            alpha: parse(alpha).map_err(|source| AbelError::Parse { index: 1, source })?,
        })
    }

    pub fn identity() -> Self {
        GroupCurve {
            beta: Expr::int(0),
            alpha: Expr::int(1),
        }
    }

    pub fn constant(g: GroupElement) -> Self {
        GroupCurve {
            beta: Expr::from(g.beta),
            alpha: Expr::from(g.alpha),
        }
    }

    pub fn at(&self, t: f64) -> Result<GroupElement, AbelError> {
        let (beta, alpha) = (self.beta.eval(t)?, self.alpha.eval(t)?);
        if alpha == 0.0 {
            return Err(AbelError::ZeroAlpha { t });
        }
        Ok(GroupElement { beta, alpha })
    }

    /// Pointwise `self ⋆ other`.
    pub fn compose(&self, other: &GroupCurve) -> GroupCurve {
        GroupCurve {
            beta: Expr::add(
                Expr::mul(self.alpha.clone(), other.beta.clone()),
                self.beta.clone(),
            ),
            alpha: Expr::mul(self.alpha.clone(), other.alpha.clone()),
        }
    }

    pub fn inverse(&self) -> GroupCurve {
        GroupCurve {
            beta: Expr::neg(Expr::div(self.beta.clone(), self.alpha.clone())),
            alpha: Expr::div(Expr::int(1), self.alpha.clone()),
        }
    }

    /// α ≠ 0 at every grid point (a sampled check, not a proof).
    pub fn check_on_grid(&self, grid: &Grid) -> Result<(), AbelError> {
        for t in grid.points() {
            self.at(t)?;
        }
        Ok(())
    }
}

/// Transformed coefficients of a cubic Abel equation under `x = α x̄ + β`:
///
/// ```text
/// f̄₃ = f₃α²
/// f̄₂ = α(f₂ + 3f₃β)
/// f̄₁ = 3f₃β² + 2f₂β + f₁ − α̇/α
/// f̄₀ = (f₃β³ + f₂β² + f₁β + f₀ − β̇)/α
/// ```
///
/// α̇ and β̇ are kept as derivative nodes and resolved by jets.
pub fn pushforward(x: &AbelEquation, g: &GroupCurve) -> Result<AbelEquation, AbelError> {
    x.require_cubic()?;
    let [f0, f1, f2, f3] = [0, 1, 2, 3].map(|k| x.coeff(k).clone());
    let (b, a) = (g.beta.clone(), g.alpha.clone());
    let e = Expr::int;
    let b2 = Expr::powi(b.clone(), 2);
    let b3 = Expr::powi(b.clone(), 3);
    let new3 = Expr::mul(f3.clone(), Expr::powi(a.clone(), 2));
    let new2 = Expr::mul(
        a.clone(),
        Expr::add(f2.clone(), Expr::mul(Expr::mul(e(3), f3.clone()), b.clone())),
    );
    let slope = Expr::add(
        Expr::add(
            Expr::mul(Expr::mul(e(3), f3.clone()), b2.clone()),
            Expr::mul(Expr::mul(e(2), f2.clone()), b.clone()),
        ),
        f1.clone(),
    );
    let new1 = Expr::sub(slope, Expr::div(Expr::deriv(a.clone()), a.clone()));
    let value = Expr::add(
        Expr::add(
            Expr::add(Expr::mul(f3, b3), Expr::mul(f2, b2)),
            Expr::mul(f1, b.clone()),
        ),
        f0,
    );
    let new0 = Expr::div(Expr::sub(value, Expr::deriv(b)), a);
    AbelEquation::new(vec![new0, new1, new2, new3])
}

/// Pushforward by a constant group element: no α̇, β̇ terms.
pub fn act_pointwise(x: &AbelEquation, g0: &GroupElement) -> Result<AbelEquation, AbelError> {
    pushforward(x, &GroupCurve::constant(*g0))
}

/// Integrates `x̄` under `g★X` from `x̄(t0) = xbar0`, maps back through
/// `x = α x̄ + β` and returns the sampled residual of `x` in `X`
/// (fourth-order differences of the integrated samples).
pub fn flow_conjugacy_residual(
    x: &AbelEquation,
    g: &GroupCurve,
    xbar0: f64,
    t0: f64,
    t1: f64,
    steps: usize,
) -> Result<f64, AbelError> {
    let grid = Grid::new(t0, t1, steps + 1)?;
    g.check_on_grid(&grid)?;
    let pushed = pushforward(x, g)?;
    let sol = numerics::integrate(&pushed, xbar0, t0, t1, steps)?;
    if let Some(t) = sol.blow_up {
        return Err(AbelError::Diverged { t });
    }
    let xs = sol
        .t
        .iter()
        .zip(&sol.x)
        .map(|(&t, &xb)| Ok(g.at(t)?.apply(xb)))
        .collect::<Result<Vec<f64>, AbelError>>()?;
    Ok(numerics::residual4(&sol.t, &xs, x)?)
}

/// Max relative coefficient-wise deviation between two equations on a grid.
pub fn coefficient_deviation(
    a: &AbelEquation,
    b: &AbelEquation,
    ts: &[f64],
) -> Result<f64, AbelError> {
    if a.q() != b.q() {
        return Err(AbelError::DegreeMismatch {
            q: a.q(),
            found: b.q() + 1,
        });
    }
    let mut worst: f64 = 0.0;
    for &t in ts {
        for (u, v) in a.eval_coeffs(t)?.iter().zip(b.eval_coeffs(t)?) {
            worst = worst.max((u - v).abs() / (1.0 + v.abs()));
        }
    }
    Ok(worst)
}
