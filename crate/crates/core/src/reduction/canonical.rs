use serde::Serialize;

use super::{require_cubic, require_positive_f3, solution_residual, ReductionError};
use crate::abel_transform::AbelEquation;
use crate::numerics::{cumulative_simpson, gradient4, Grid};
use crate::tjet::TFunc;

/// `ẋ = x³ + f̄₂(τ)x²` sampled on the `t` grid.
#[derive(Clone, Debug, Serialize)]
pub struct CanonicalForm {
    pub t: Vec<f64>,
    pub alpha: Vec<f64>,
    pub tau: Vec<f64>,
    pub f2_bar: Vec<f64>,
    /// `max |f̄₀|` with `β̇` from jets.
    pub f0_residual: f64,
    /// `max |f̄₁|` with `α̇/α` from five-point differences of `log α`.
    pub f1_residual: f64,
}

/// Removes the `x⁰` and `x¹` terms with `x = α x̄ + β` for a particular
/// solution `β`, `d log α/dt = 3f₃β² + 2f₂β + f₁`, then rescales time by
/// `τ = ∫ f₃α²`.
pub fn canonical_form(
    x: &AbelEquation,
    beta: &TFunc,
    grid: &Grid,
    tol: f64,
) -> Result<CanonicalForm, ReductionError> {
    require_cubic(x)?;
    let ts = grid.points();
    require_positive_f3(x, &ts)?;
    let (residual, scale) = solution_residual(x, beta, &ts)?;
    if residual > tol * (1.0 + scale) {
        return Err(ReductionError::NotASolution { residual });
    }
    let h = grid.step();
    let (mut slope, mut f3s, mut shifted, mut defect) = (vec![], vec![], vec![], vec![]);
    for &t in &ts {
        let f = x.eval_coeffs(t)?;
        let b = beta.eval_jet(t, 1)?;
        let (bv, bd) = (b.d(0), b.d(1));
        slope.push(3.0 * f[3] * bv * bv + 2.0 * f[2] * bv + f[1]);
        f3s.push(f[3]);
        shifted.push(f[2] + 3.0 * f[3] * bv);
        defect.push(((f[3] * bv + f[2]) * bv + f[1]) * bv + f[0] - bd);
    }
    let log_alpha = cumulative_simpson(&slope, h);
    let alpha: Vec<f64> = log_alpha.iter().map(|v| v.exp()).collect();
    let weight: Vec<f64> = f3s.iter().zip(&alpha).map(|(f, a)| f * a * a).collect();
    let tau = cumulative_simpson(&weight, h);
    if let Some(i) = (1..tau.len()).find(|&i| tau[i] <= tau[i - 1]) {
        return Err(ReductionError::NonMonotoneTau { t: ts[i] });
    }
    let f2_bar = (0..ts.len())
        .map(|i| shifted[i] / (f3s[i] * alpha[i]))
        .collect();
    let f0_residual = defect
        .iter()
        .zip(&alpha)
        .fold(0.0f64, |m, (d, a)| m.max((d / a).abs()));
    let f1_residual = gradient4(&log_alpha, h)
        .iter()
        .zip(&slope)
        .fold(0.0f64, |m, (d, s)| m.max((s - d).abs()));
    Ok(CanonicalForm {
        t: ts,
        alpha,
        tau,
        f2_bar,
        f0_residual,
        f1_residual,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tjet::{parse, Expr};

    #[test]
    fn odd_linear_cubic() {
        let x = AbelEquation::parse(&["0", "1", "0", "1"]).unwrap();
        let g = Grid::new(0.0, 1.0, 257).unwrap();
        let c = canonical_form(&x, &Expr::int(0), &g, 1e-9).unwrap();
        for i in 0..c.t.len() {
            let t = c.t[i];
            assert!((c.alpha[i] - t.exp()).abs() < 1e-10 * t.exp());
            assert!((c.tau[i] - ((2.0 * t).exp() - 1.0) / 2.0).abs() < 1e-9);
            assert_eq!(c.f2_bar[i], 0.0);
        }
        assert!(c.f0_residual == 0.0 && c.f1_residual < 1e-8);
    }

    #[test]
    fn planted_solution() {
        let beta = parse("sin(t)").unwrap();
        let (f1, f2, f3) = (
            parse("t").unwrap(),
            parse("cos(t)").unwrap(),
            parse("2 + cos(t)").unwrap(),
        );
        let f0 = parse("cos(t) - (2 + cos(t))*sin(t)^3 - cos(t)*sin(t)^2 - t*sin(t)").unwrap();
        let x = AbelEquation::new(vec![f0, f1, f2, f3]).unwrap();
        let g = Grid::new(0.0, 1.0, 512).unwrap();
        let c = canonical_form(&x, &beta, &g, 1e-9).unwrap();
        assert!(c.f0_residual < 1e-7 && c.f1_residual < 1e-7);
    }

    #[test]
    fn rejects_non_solution() {
        let x = AbelEquation::parse(&["0", "1", "0", "1"]).unwrap();
        let g = Grid::new(0.0, 1.0, 33).unwrap();
        assert!(matches!(
            canonical_form(&x, &Expr::int(1), &g, 1e-9),
            Err(ReductionError::NotASolution { .. })
        ));
    }
}
