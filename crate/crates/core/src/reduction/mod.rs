//! Reductions of cubic Abel equations by affine changes of variables:
//! the integrability condition, explicit curves onto the two-dimensional
//! targets `⟨Z₁, Z₂⟩`, Bernoulli solving, the canonical form given a
//! particular solution, and candidate curves onto one-dimensional targets.

mod canonical;
mod one_dim;
mod two_dim;

pub use canonical::{canonical_form, CanonicalForm};
pub use one_dim::{onedim_candidates, real_roots, Branch, BranchCertificate, OneDimReport};
pub use two_dim::{
    reduce_to_2d, solve_bernoulli, target_algebra_closed, BernoulliSolution, BetaChoice,
    ReduceOptions, ReductionCertificate, ReductionTarget2D,
};

use serde::Serialize;
use thiserror::Error;

use crate::abel_transform::{AbelEquation, AbelError};
use crate::numerics::NumError;
use crate::tjet::{EvalError, JetError};

#[derive(Clone, Debug, Error, PartialEq)]
pub enum ReductionError {
    #[error("reductions are implemented for q = 3, got q = {0}")]
    Unsupported(usize),
    #[error("f3 = {value} ≤ 0 at t = {t}; only the f3 > 0 branch is supported")]
    NonPositiveF3 { t: f64, value: f64 },
    #[error("integrability condition fails (relative residual {relative:e})")]
    CaFails { max_residual: f64, relative: f64 },
    #[error("3 f3 β + f2 vanishes on the grid for every automatic β; pass β explicitly")]
    NeedsExplicitBeta,
    #[error("3 f3 β + f2 vanishes at t = {t}")]
    DegenerateBeta { t: f64 },
    #[error("condition holds but β = −f2/(3f3) is not a solution (residual {residual:e})")]
    BranchFails { residual: f64 },
    #[error("β is not a particular solution (residual {residual:e})")]
    NotASolution { residual: f64 },
    #[error("τ is not increasing at t = {t}")]
    NonMonotoneTau { t: f64 },
    #[error("z(t0) = 0 is only handled for μ = 0")]
    ZeroInitial,
    #[error("invalid target: {0}")]
    InvalidTarget(String),
    #[error("c2 c3 must be nonzero")]
    InvalidConstants,
    #[error("certificate rejected: coefficient residual {coefficient:e}, solution residual {solution:e}")]
    Rejected { coefficient: f64, solution: f64 },
    #[error("solution blows up at t = {t}")]
    Diverged { t: f64 },
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error(transparent)]
    Jet(#[from] JetError),
    #[error(transparent)]
    Abel(#[from] AbelError),
    #[error(transparent)]
    Num(#[from] NumError),
}

#[derive(Clone, Debug, Serialize)]
pub struct CaReport {
    pub t: Vec<f64>,
    pub residuals: Vec<f64>,
    pub max_residual: f64,
    /// Largest single term over the grid.
    pub scale: f64,
    pub relative: f64,
    pub passes: bool,
}

fn require_cubic(x: &AbelEquation) -> Result<(), ReductionError> {
    match x.q() {
        3 => Ok(()),
        q => Err(ReductionError::Unsupported(q)),
    }
}

fn require_positive_f3(x: &AbelEquation, ts: &[f64]) -> Result<(), ReductionError> {
    for &t in ts {
        let value = x.coeff(3).eval(t)?;
        if value <= 0.0 {
            return Err(ReductionError::NonPositiveF3 { t, value });
        }
    }
    Ok(())
}

/// Residual of `9f₃(3f₀f₃ + ḟ₂) − 9f₂(f₁f₃ + ḟ₃) + 2f₂³` at each `t`.
pub fn check_ca(x: &AbelEquation, ts: &[f64], rtol: f64) -> Result<CaReport, ReductionError> {
    require_cubic(x)?;
    require_positive_f3(x, ts)?;
    let (mut residuals, mut scale) = (Vec::with_capacity(ts.len()), 0.0f64);
    for &t in ts {
        let j = x.jets(t, 1)?;
        let [f0, f1, f2, f3] = [0, 1, 2, 3].map(|k| j[k].d(0));
        let (df2, df3) = (j[2].d(1), j[3].d(1));
        let terms = [
            27.0 * f0 * f3 * f3,
            9.0 * f3 * df2,
            -9.0 * f1 * f2 * f3,
            -9.0 * f2 * df3,
            2.0 * f2 * f2 * f2,
        ];
        scale = terms.iter().fold(scale, |m, v| m.max(v.abs()));
        residuals.push(terms.iter().sum());
    }
    let max_residual = residuals.iter().fold(0.0f64, |m: f64, r: &f64| m.max(r.abs()));
    let relative = if scale == 0.0 { 0.0 } else { max_residual / scale };
    Ok(CaReport {
        t: ts.to_vec(),
        residuals,
        max_residual,
        scale,
        relative,
        passes: relative <= rtol,
    })
}

/// `β̇ − Σ f_k β^k` at each `t`, and the size of the largest term.
fn solution_residual(
    x: &AbelEquation,
    beta: &crate::tjet::Expr,
    ts: &[f64],
) -> Result<(f64, f64), ReductionError> {
    let (mut worst, mut scale) = (0.0f64, 0.0f64);
    for &t in ts {
        let b = beta.eval_jet(t, 1)?;
        let (bv, bd) = (b.d(0), b.d(1));
        let f = x.eval_coeffs(t)?;
        let mut rhs = 0.0;
        let mut pow = 1.0;
        for fk in &f {
            scale = scale.max((fk * pow).abs());
            rhs += fk * pow;
            pow *= bv;
        }
        scale = scale.max(bd.abs());
        worst = worst.max((bd - rhs).abs());
    }
    Ok((worst, scale))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::Grid;

    fn grid() -> Vec<f64> {
        Grid::new(0.0, 1.0, 33).unwrap().points()
    }

    #[test]
    fn odd_equations_pass() {
        let x = AbelEquation::parse(&["0", "sin(t) + t", "0", "2 + cos(t)"]).unwrap();
        let r = check_ca(&x, &grid(), 1e-8).unwrap();
        assert_eq!(r.max_residual, 0.0);
        assert!(r.passes);
    }

    #[test]
    fn cubic_plus_one_fails_with_27() {
        let x = AbelEquation::parse(&["1", "0", "0", "1"]).unwrap();
        let r = check_ca(&x, &grid(), 1e-8).unwrap();
        assert!(r.residuals.iter().all(|&v| v == 27.0));
        assert!(!r.passes);
    }

    #[test]
    fn canonical_corollary_instance() {
        let x = AbelEquation::parse(&["0", "0", "3/sqrt(1 + 4*t)", "1"]).unwrap();
        let r = check_ca(&x, &grid(), 1e-8).unwrap();
        assert!(r.max_residual <= 1e-10 * (1.0 + r.scale), "{}", r.max_residual);
        assert!(r.passes);
    }

    #[test]
    fn residual_is_minus_nine_phi3() {
        let x = AbelEquation::parse(&["cos(t)", "t^2", "exp(t/2)", "2 + sin(3*t)"]).unwrap();
        let r = check_ca(&x, &grid(), 1e-8).unwrap();
        for (t, res) in r.t.iter().zip(&r.residuals) {
            let p3 = crate::invariants::phi3(&x, *t).unwrap();
            assert!((res + 9.0 * p3).abs() < 1e-10 * (1.0 + res.abs()));
        }
    }

    #[test]
    fn negative_f3_is_rejected() {
        let x = AbelEquation::parse(&["0", "0", "0", "t - 1/2"]).unwrap();
        assert!(matches!(
            check_ca(&x, &grid(), 1e-8),
            Err(ReductionError::NonPositiveF3 { .. })
        ));
    }
}
