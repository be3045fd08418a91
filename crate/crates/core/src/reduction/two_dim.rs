use num_traits::Zero;
use serde::Serialize;

use super::{check_ca, require_cubic, require_positive_f3, solution_residual, ReductionError};
use crate::abel_transform::{coefficient_deviation, pushforward, AbelEquation, GroupCurve};
use crate::numerics::{cumulative_simpson, residual4, Grid};
use crate::tjet::{Expr, Func, TFunc};
use crate::tolerance::{CA_RTOL, ROUND_TRIP_TOL};
use crate::vf_algebra::{in_span, PolyVF, VfError, Q};

/// `λ₁Z₁ + λ₂Z₂` with `Z₁ = x³ + 3μx² − 2μ³`, `Z₂ = x + μ`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ReductionTarget2D {
    pub mu: f64,
    pub lambda1: TFunc,
    pub lambda2: TFunc,
}

impl ReductionTarget2D {
    pub fn new(mu: f64, lambda1: TFunc, lambda2: TFunc) -> Self {
        ReductionTarget2D { mu, lambda1, lambda2 }
    }

    /// Coefficients `(−2μ³λ₁ + μλ₂, λ₂, 3μλ₁, λ₁)`.
    pub fn equation(&self) -> AbelEquation {
        let m = Expr::from(self.mu);
        let (l1, l2) = (self.lambda1.clone(), self.lambda2.clone());
        let f0 = Expr::mul(
            m.clone(),
            Expr::sub(
                l2.clone(),
                Expr::mul(Expr::mul(Expr::int(2), Expr::powi(m.clone(), 2)), l1.clone()),
            ),
        );
        let f2 = Expr::mul(Expr::mul(Expr::int(3), m), l1.clone());
        AbelEquation::new(vec![f0, l2, f2, l1]).expect("four coefficients")
    }

    /// `(Z₁, Z₂)` with exact coefficients.
    pub fn fields(mu: &Q) -> [PolyVF; 2] {
        let two = Q::from_integer(2.into());
        let three = Q::from_integer(3.into());
        let z1 = PolyVF::from_coeffs(vec![
            -(two * mu * mu * mu),
            Q::zero(),
            three * mu,
            Q::from_integer(1.into()),
        ]);
        let z2 = PolyVF::from_coeffs(vec![mu.clone(), Q::from_integer(1.into())]);
        [z1, z2]
    }
}

/// Coordinates of `[Z₂, Z₁]` in `(Z₁, Z₂)`, or `None` if it leaves the span.
pub fn target_algebra_closed(mu: &Q) -> Result<Option<Vec<Q>>, VfError> {
    let [z1, z2] = ReductionTarget2D::fields(mu);
    in_span(&z2.bracket(&z1)?, &[z1, z2])
}

#[derive(Clone, Debug, PartialEq)]
pub enum BetaChoice {
    /// Among `β = 0`, `β = 1`, `β = 1 − f₂/(3f₃)`, the one for which
    /// `3f₃β + f₂` keeps one sign on the grid with the largest `min/max`
    /// (earlier wins ties). The last always has one sign since then
    /// `3f₃β + f₂ = 3f₃`.
    Auto,
    Explicit(TFunc),
}

#[derive(Clone, Debug)]
pub struct ReduceOptions {
    pub grid: Grid,
    pub ca_rtol: f64,
    pub coeff_rtol: f64,
    pub ode_tol: f64,
    /// Initial value of the original equation at `grid.t0`.
    pub x0: f64,
}

impl ReduceOptions {
    pub fn new(grid: Grid, x0: f64) -> Self {
        ReduceOptions {
            grid,
            ca_rtol: CA_RTOL,
            coeff_rtol: 1e-8,
            ode_tol: ROUND_TRIP_TOL,
            x0,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct BernoulliSolution {
    pub t: Vec<f64>,
    pub xbar: Vec<f64>,
    pub blow_up: Option<f64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ReductionCertificate {
    pub curve: GroupCurve,
    pub target: ReductionTarget2D,
    /// Max relative deviation of `g★X` from the target coefficients.
    pub coefficient_residual: f64,
    /// Residual in the original equation of the pulled-back solution.
    pub solution_residual: f64,
    pub t: Vec<f64>,
    pub x: Vec<f64>,
    pub xbar: Vec<f64>,
}

fn e(n: i64) -> Expr {
    Expr::int(n)
}

/// `3f₃β + f₂`.
fn shifted_f2(x: &AbelEquation, beta: &Expr) -> Expr {
    Expr::add(
        Expr::mul(Expr::mul(e(3), x.coeff(3).clone()), beta.clone()),
        x.coeff(2).clone(),
    )
}

/// `3f₃β² + 2f₂β + f₁`.
fn slope(x: &AbelEquation, beta: &Expr) -> Expr {
    let [f1, f2, f3] = [1, 2, 3].map(|k| x.coeff(k).clone());
    Expr::add(
        Expr::add(
            Expr::mul(Expr::mul(e(3), f3), Expr::powi(beta.clone(), 2)),
            Expr::mul(Expr::mul(e(2), f2), beta.clone()),
        ),
        f1,
    )
}

/// Smallest and largest `|3f₃β + f₂|` over the grid, or `None` if it
/// changes sign (α would pass through zero between samples).
fn shifted_range(
    x: &AbelEquation,
    beta: &Expr,
    ts: &[f64],
) -> Result<Option<(f64, f64)>, ReductionError> {
    let u = shifted_f2(x, beta);
    let (mut lo, mut hi) = (f64::INFINITY, 0.0f64);
    let mut sign = 0.0;
    for &t in ts {
        let v = u.eval(t)?;
        if v == 0.0 || (sign != 0.0 && v.signum() != sign) {
            return Ok(None);
        }
        sign = v.signum();
        lo = lo.min(v.abs());
        hi = hi.max(v.abs());
    }
    Ok(Some((lo, hi)))
}

fn choose_beta(x: &AbelEquation, ts: &[f64]) -> Result<Expr, ReductionError> {
    let shifted = Expr::add(
        e(1),
        Expr::neg(Expr::div(x.coeff(2).clone(), Expr::mul(e(3), x.coeff(3).clone()))),
    );
    let mut best: Option<(f64, Expr)> = None;
    for beta in [e(0), e(1), shifted] {
        if let Some((lo, hi)) = shifted_range(x, &beta, ts)? {
            let ratio = lo / hi;
            if best.as_ref().is_none_or(|(r, _)| ratio > *r) {
                best = Some((ratio, beta));
            }
        }
    }
    best.map(|(_, b)| b).ok_or(ReductionError::NeedsExplicitBeta)
}

/// Curve and target for `μ ≠ 0`: `α = (3f₃β + f₂)/(3μf₃)` (signed, so the
/// `x̄²` coefficient matches `3μλ₁`), `λ₁ = f₃α²`, and `λ₂` from the
/// `x̄` coefficient.
fn nonzero_mu(x: &AbelEquation, mu: f64, beta: Expr) -> (GroupCurve, ReductionTarget2D) {
    let (f2, f3) = (x.coeff(2).clone(), x.coeff(3).clone());
    let m = Expr::from(mu);
    let u = shifted_f2(x, &beta);
    let alpha = Expr::div(u.clone(), Expr::mul(Expr::mul(e(3), m.clone()), f3.clone()));
    let lambda1 = Expr::div(
        Expr::powi(u.clone(), 2),
        Expr::mul(Expr::mul(e(9), Expr::powi(m, 2)), f3.clone()),
    );
    let numer = Expr::sub(
        Expr::sub(
            Expr::mul(f2.clone(), Expr::deriv(f3.clone())),
            Expr::mul(f3.clone(), Expr::deriv(f2)),
        ),
        Expr::mul(
            Expr::mul(e(3), Expr::powi(f3.clone(), 2)),
            Expr::deriv(beta.clone()),
        ),
    );
    let lambda2 = Expr::add(slope(x, &beta), Expr::div(numer, Expr::mul(f3, u)));
    (
        GroupCurve::new(beta, alpha),
        ReductionTarget2D::new(mu, lambda1, lambda2),
    )
}

/// `μ = 0`: `β = −f₂/(3f₃)` must solve the equation; `λ₁ ≡ 1`,
/// `α = f₃^{−1/2}`, `λ₂ = 3f₃β² + 2f₂β + f₁ + ḟ₃/(2f₃)`.
fn zero_mu(
    x: &AbelEquation,
    ts: &[f64],
    rtol: f64,
) -> Result<(GroupCurve, ReductionTarget2D), ReductionError> {
    let (f2, f3) = (x.coeff(2).clone(), x.coeff(3).clone());
    let beta = Expr::neg(Expr::div(f2, Expr::mul(e(3), f3.clone())));
    let (residual, scale) = solution_residual(x, &beta, ts)?;
    if residual > rtol * (1.0 + scale) {
        return Err(ReductionError::BranchFails { residual });
    }
    let alpha = Expr::div(e(1), Expr::call(Func::Sqrt, f3.clone()));
    let lambda2 = Expr::add(
        slope(x, &beta),
        Expr::div(Expr::deriv(f3.clone()), Expr::mul(e(2), f3)),
    );
    Ok((
        GroupCurve::new(beta, alpha),
        ReductionTarget2D::new(0.0, e(1), lambda2),
    ))
}

/// Reduces `X` to `λ₁Z₁ + λ₂Z₂` with explicit `(β, α, λ₁, λ₂)`, solves
/// the reduced equation from the image of `opts.x0` and certifies both the
/// coefficient match and the pulled-back solution.
pub fn reduce_to_2d(
    x: &AbelEquation,
    mu: f64,
    beta: &BetaChoice,
    opts: &ReduceOptions,
) -> Result<ReductionCertificate, ReductionError> {
    require_cubic(x)?;
    let ts = opts.grid.points();
    require_positive_f3(x, &ts)?;
    let ca = check_ca(x, &ts, opts.ca_rtol)?;
    if !ca.passes {
        return Err(ReductionError::CaFails {
            max_residual: ca.max_residual,
            relative: ca.relative,
        });
    }
    let (curve, target) = if mu == 0.0 {
        zero_mu(x, &ts, opts.ca_rtol)?
    } else {
        let beta = match beta {
            BetaChoice::Auto => choose_beta(x, &ts)?,
            BetaChoice::Explicit(b) => {
                if shifted_range(x, b, &ts)?.is_none() {
                    let u = shifted_f2(x, b);
                    let mut t_bad = ts[0];
                    for w in ts.windows(2) {
                        if u.eval(w[0])? * u.eval(w[1])? <= 0.0 {
                            t_bad = w[1];
                            break;
                        }
                    }
                    return Err(ReductionError::DegenerateBeta { t: t_bad });
                }
                b.clone()
            }
        };
        nonzero_mu(x, mu, beta)
    };
    curve.check_on_grid(&opts.grid)?;
    let pushed = pushforward(x, &curve)?;
    let coefficient_residual = coefficient_deviation(&pushed, &target.equation(), &ts)?;

    let g0 = curve.at(opts.grid.t0)?;
    let xbar0 = (opts.x0 - g0.beta) / g0.alpha;
    let sol = solve_bernoulli(&target, xbar0, &opts.grid)?;
    if let Some(t) = sol.blow_up {
        return Err(ReductionError::Diverged { t });
    }
    let xs = sol
        .t
        .iter()
        .zip(&sol.xbar)
        .map(|(&t, &xb)| Ok(curve.at(t)?.apply(xb)))
        .collect::<Result<Vec<f64>, ReductionError>>()?;
    let solution_residual = residual4(&sol.t, &xs, x)?;
    if !(coefficient_residual <= opts.coeff_rtol && solution_residual <= opts.ode_tol) {
        return Err(ReductionError::Rejected {
            coefficient: coefficient_residual,
            solution: solution_residual,
        });
    }
    Ok(ReductionCertificate {
        curve,
        target,
        coefficient_residual,
        solution_residual,
        t: sol.t,
        x: xs,
        xbar: sol.xbar,
    })
}

/// Solves `x̄' = λ₁Z₁ + λ₂Z₂` through `z = x̄ + μ`, `w = z⁻²`:
/// `ẇ = −2(λ₂ − 3μ²λ₁)w − 2λ₁`, integrated with an integrating factor and
/// cumulative Simpson quadrature. Stops where `w` reaches zero.
pub fn solve_bernoulli(
    target: &ReductionTarget2D,
    xbar0: f64,
    grid: &Grid,
) -> Result<BernoulliSolution, ReductionError> {
    let ts = grid.points();
    let h = grid.step();
    let mu = target.mu;
    let l1 = ts
        .iter()
        .map(|&t| target.lambda1.eval(t))
        .collect::<Result<Vec<f64>, _>>()?;
    if l1.iter().all(|&v| v == 0.0) {
        return Err(ReductionError::InvalidTarget("λ1 vanishes on the grid".into()));
    }
    let z0 = xbar0 + mu;
    if z0 == 0.0 {
        if mu != 0.0 {
            return Err(ReductionError::ZeroInitial);
        }
        let n = ts.len();
        return Ok(BernoulliSolution {
            t: ts,
            xbar: vec![0.0; n],
            blow_up: None,
        });
    }
    let two_a = ts
        .iter()
        .zip(&l1)
        .map(|(&t, &a1)| Ok(2.0 * (target.lambda2.eval(t)? - 3.0 * mu * mu * a1)))
        .collect::<Result<Vec<f64>, ReductionError>>()?;
    let factor: Vec<f64> = cumulative_simpson(&two_a, h).into_iter().map(f64::exp).collect();
    let weighted: Vec<f64> = l1.iter().zip(&factor).map(|(a, f)| a * f).collect();
    let integral = cumulative_simpson(&weighted, h);
    let w0 = 1.0 / (z0 * z0);
    let sign = z0.signum();

    let (mut t_out, mut xbar) = (Vec::new(), Vec::new());
    let mut blow_up = None;
    let mut prev_w = w0;
    for i in 0..ts.len() {
        let w = (w0 - 2.0 * integral[i]) / factor[i];
        if !(w > 0.0) || !w.is_finite() {
            let frac = if w.is_finite() { prev_w / (prev_w - w) } else { 1.0 };
            blow_up = Some(ts[i - 1] + frac * h);
            break;
        }
        t_out.push(ts[i]);
        xbar.push(sign / w.sqrt() - mu);
        prev_w = w;
    }
    Ok(BernoulliSolution {
        t: t_out,
        xbar,
        blow_up,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::abel_transform::AbelEquation;
    use crate::sampling::{random_positive, random_positive_curve, random_smooth, rng};
    use crate::vf_algebra::q_frac;

    fn grid(t1: f64, n: usize) -> Grid {
        Grid::new(0.0, t1, n).unwrap()
    }

    #[test]
    fn target_bracket_in_span() {
        for mu in [q_frac(0, 1), q_frac(1, 1), q_frac(-3, 2)] {
            let c = target_algebra_closed(&mu).unwrap().expect("closed");
            let six_mu2 = Q::from_integer(6.into()) * &mu * &mu;
            assert_eq!(c, vec![Q::from_integer(2.into()), six_mu2]);
        }
    }

    #[test]
    fn bernoulli_pure_cubic() {
        let target = ReductionTarget2D::new(0.0, e(1), e(0));
        let g = grid(0.45, 513);
        let s = solve_bernoulli(&target, 1.0, &g).unwrap();
        assert!(s.blow_up.is_none());
        for (t, xb) in s.t.iter().zip(&s.xbar) {
            let exact = 1.0 / (1.0 - 2.0 * t).sqrt();
            assert!((xb - exact).abs() < 1e-9 * exact, "{t}");
        }
        let s = solve_bernoulli(&target, 1.0, &grid(1.0, 1025)).unwrap();
        assert!((s.blow_up.unwrap() - 0.5).abs() < 1e-3);
    }

    #[test]
    fn bernoulli_linear_part() {
        let target = ReductionTarget2D::new(0.0, e(1), e(1));
        let s = solve_bernoulli(&target, 1.0, &grid(1.0, 1025)).unwrap();
        let tb = std::f64::consts::LN_2 / 2.0;
        assert!((s.blow_up.unwrap() - tb).abs() < 1e-3);
        for (t, xb) in s.t.iter().zip(&s.xbar) {
            let exact = 1.0 / (2.0 * (-2.0 * t).exp() - 1.0).sqrt();
            assert!((xb - exact).abs() < 1e-7 * exact);
        }
    }

    #[test]
    fn zero_initial_value() {
        let t0 = ReductionTarget2D::new(0.0, e(1), e(1));
        let s = solve_bernoulli(&t0, 0.0, &grid(1.0, 33)).unwrap();
        assert!(s.xbar.iter().all(|&v| v == 0.0));
        let t1 = ReductionTarget2D::new(1.0, e(1), e(1));
        assert_eq!(
            solve_bernoulli(&t1, -1.0, &grid(1.0, 33)).unwrap_err(),
            ReductionError::ZeroInitial
        );
    }

    #[test]
    fn odd_equation_at_mu_zero() {
        let x = AbelEquation::parse(&["0", "1", "0", "1"]).unwrap();
        let opts = ReduceOptions::new(grid(0.3, 257), 0.2);
        let c = reduce_to_2d(&x, 0.0, &BetaChoice::Auto, &opts).unwrap();
        for t in [0.0, 0.2] {
            assert!(c.curve.beta.eval(t).unwrap().abs() < 1e-15);
            assert!((c.curve.alpha.eval(t).unwrap() - 1.0).abs() < 1e-15);
            assert!((c.target.lambda2.eval(t).unwrap() - 1.0).abs() < 1e-15);
        }
        assert!(c.solution_residual < 1e-6);
    }

    #[test]
    fn mu_one_shifts_by_one() {
        let x = AbelEquation::parse(&["0", "1", "0", "1"]).unwrap();
        let opts = ReduceOptions::new(grid(0.2, 257), 0.1);
        let c = reduce_to_2d(&x, 1.0, &BetaChoice::Auto, &opts).unwrap();
        assert_eq!(c.curve.beta, e(1));
        assert!((c.curve.alpha.eval(0.1).unwrap() - 1.0).abs() < 1e-15);
        assert!((c.target.lambda1.eval(0.1).unwrap() - 1.0).abs() < 1e-15);
        assert!((c.target.lambda2.eval(0.1).unwrap() - 4.0).abs() < 1e-15);
        assert!(c.coefficient_residual < 1e-14);
    }

    #[test]
    fn explicit_beta_with_sign_change() {
        let target = ReductionTarget2D::new(1.0, e(1), e(0));
        let h = GroupCurve::parse("t - 3/2", "1").unwrap();
        let x = pushforward(&target.equation(), &h).unwrap();
        let opts = ReduceOptions::new(grid(1.0, 65), 0.0);
        let err = reduce_to_2d(&x, 1.0, &BetaChoice::Explicit(e(0)), &opts).unwrap_err();
        match err {
            ReductionError::DegenerateBeta { t } => assert!((t - 0.5).abs() < 0.02, "{t}"),
            other => panic!("{other}"),
        }
    }

    #[test]
    fn rejects_failing_condition() {
        let x = AbelEquation::parse(&["1", "0", "0", "1"]).unwrap();
        let opts = ReduceOptions::new(grid(0.2, 65), 0.0);
        assert!(matches!(
            reduce_to_2d(&x, 1.0, &BetaChoice::Auto, &opts),
            Err(ReductionError::CaFails { .. })
        ));
    }

    #[test]
    fn mu_zero_branch_from_shifted_target() {
        // −μ is a stationary point of every target, so −f₂/(3f₃) solves X.
        let target = ReductionTarget2D::new(1.0, e(1), e(0));
        let x = pushforward(&target.equation(), &GroupCurve::parse("t", "1").unwrap()).unwrap();
        let opts = ReduceOptions::new(grid(0.2, 65), 0.0);
        let c = reduce_to_2d(&x, 0.0, &BetaChoice::Auto, &opts).unwrap();
        assert!((c.curve.beta.eval(0.1).unwrap() + 1.1).abs() < 1e-14);
    }

    #[test]
    fn recovers_planted_reductions() {
        let mut r = rng(11);
        for (i, mu) in [0.5, -1.0, 2.0].into_iter().enumerate() {
            let target = ReductionTarget2D::new(
                mu,
                random_positive(&mut r, 0.5),
                Expr::mul(Expr::from(0.25), random_smooth(&mut r)),
            );
            let h = random_positive_curve(&mut r);
            let x = pushforward(&target.equation(), &h).unwrap();
            // Start at z = x̄ + μ = 0.3 in target coordinates.
            let h0 = h.at(0.0).unwrap();
            let x0 = (0.3 - mu - h0.beta) / h0.alpha;
            let opts = ReduceOptions::new(grid(0.5, 512), x0);
            let c = reduce_to_2d(&x, mu, &BetaChoice::Auto, &opts)
                .unwrap_or_else(|err| panic!("case {i}: {err}"));
            assert!(c.coefficient_residual < 1e-9, "{}", c.coefficient_residual);
            assert!(c.solution_residual < 1e-5, "{}", c.solution_residual);
        }
    }
}
