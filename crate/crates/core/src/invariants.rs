//! The order-two invariant `F = Φ₃⁵/Φ₅³` of cubic Abel equations and the
//! derivation `D = d/dt` acting on invariants.
//!
//! `A₀..A₃` are the coefficients of `ẋ = A₀ + A₁x + A₂x² + A₃x³`; in jet
//! coordinates `λ[k][j] = d^j A_k / dt^j`.
//!
//! ```text
//! Φ₃ = Ȧ₃A₂ − A₃Ȧ₂ − 3A₀A₃² + A₁A₂A₃ − (2/9)A₂³
//! Φ₅ = −A₃ DΦ₃ − 3(−Ȧ₃ + A₂²/3 − A₁A₃) Φ₃
//! ```

use std::ops::{Add, Mul, Sub};

use serde::Serialize;
use thiserror::Error;

use crate::abel_transform::AbelEquation;
use crate::tjet::{EvalError, Jet, JetError};

/// Relative tolerance for the two independent `DΦ₃` computations.
pub const CROSS_CHECK_RTOL: f64 = 1e-9;

#[derive(Clone, Debug, Error, PartialEq)]
pub enum InvariantError {
    #[error("invariants are implemented for q = 3, got q = {0}")]
    Unsupported(usize),
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error(transparent)]
    Jet(#[from] JetError),
    #[error("DΦ₃ transcription mismatch at t = {t}: jet path {jet}, λ path {lambda}")]
    Inconsistent { t: f64, jet: f64, lambda: f64 },
}

/// The arithmetic needed by the `λ` polynomials: `f64` for values, jets
/// for directional derivatives.
pub trait Ring: Clone + Add<Output = Self> + Sub<Output = Self> + Mul<Output = Self> {
    /// A constant shaped like `self`.
    fn lift(&self, c: f64) -> Self;
}

impl Ring for f64 {
    fn lift(&self, c: f64) -> f64 {
        c
    }
}

impl Ring for Jet {
    fn lift(&self, c: f64) -> Jet {
        Jet::constant(c, self.order())
    }
}

/// `λ[k][j]`, `k = 0..3`, `j = 0..2`.
pub type Lambda<T> = [[T; 3]; 4];

pub fn phi3_lambda<T: Ring>(l: &Lambda<T>) -> T {
    let c = |v: f64| l[0][0].lift(v);
    let (a0, a1, a2, a3) = (&l[0][0], &l[1][0], &l[2][0], &l[3][0]);
    l[3][1].clone() * a2.clone() - a3.clone() * l[2][1].clone()
        - c(3.0) * a0.clone() * a3.clone() * a3.clone()
        + a1.clone() * a2.clone() * a3.clone()
        - c(2.0 / 9.0) * a2.clone() * a2.clone() * a2.clone()
}

/// The eight monomials of `DΦ₃` expanded in jet coordinates.
fn dphi3_terms<T: Ring>(l: &Lambda<T>) -> [T; 8] {
    let c = |v: f64| l[0][0].lift(v);
    let x = |k: usize, j: usize| l[k][j].clone();
    [
        x(3, 2) * x(2, 0),
        c(-1.0) * x(3, 0) * x(2, 2),
        c(-3.0) * x(0, 1) * x(3, 0) * x(3, 0),
        c(-6.0) * x(0, 0) * x(3, 0) * x(3, 1),
        x(1, 1) * x(2, 0) * x(3, 0),
        x(1, 0) * x(2, 1) * x(3, 0),
        x(1, 0) * x(2, 0) * x(3, 1),
        c(-2.0 / 3.0) * x(2, 0) * x(2, 0) * x(2, 1),
    ]
}

pub fn dphi3_lambda<T: Ring>(l: &Lambda<T>) -> T {
    let [a, b, c, d, e, f, g, h] = dphi3_terms(l);
    a + b + c + d + e + f + g + h
}

pub fn phi5_lambda<T: Ring>(l: &Lambda<T>) -> T {
    let c = |v: f64| l[0][0].lift(v);
    let (a1, a2, a3) = (&l[1][0], &l[2][0], &l[3][0]);
    let bracket = c(0.0) - l[3][1].clone() + c(1.0 / 3.0) * a2.clone() * a2.clone()
        - a1.clone() * a3.clone();
    c(-1.0) * a3.clone() * dphi3_lambda(l) - c(3.0) * bracket * phi3_lambda(l)
}

/// `|F| = ∞` guard: `Φ₅` counts as zero below `1e−12 (1 + |Φ₃|)^{5/3}`.
pub fn phi5_negligible(phi3: f64, phi5: f64) -> bool {
    phi5.abs() < 1e-12 * (1.0 + phi3.abs()).powf(5.0 / 3.0)
}

/// `F = Φ₃⁵/Φ₅³`, or `None` when `Φ₅` is negligible.
pub fn liouville_from(phi3: f64, phi5: f64) -> Option<f64> {
    (!phi5_negligible(phi3, phi5)).then(|| phi3.powi(5) / phi5.powi(3))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct InvariantValue {
    pub t: f64,
    pub phi3: f64,
    pub dphi3: f64,
    pub phi5: f64,
    #[serde(rename = "F")]
    pub f: Option<f64>,
}

fn coefficient_jets(x: &AbelEquation, t: f64, order: usize) -> Result<Vec<Jet>, InvariantError> {
    if x.q() != 3 {
        return Err(InvariantError::Unsupported(x.q()));
    }
    Ok(x.jets(t, order)?)
}

fn lambda_at(x: &AbelEquation, t: f64) -> Result<Lambda<f64>, InvariantError> {
    let a = coefficient_jets(x, t, 2)?;
    Ok([0, 1, 2, 3].map(|k| [a[k].d(0), a[k].d(1), a[k].d(2)]))
}

/// `Φ₃` as a jet of order `K − 1` from coefficient jets of order `K ≥ 1`.
fn phi3_jet(a: &[Jet]) -> Result<Jet, JetError> {
    let k = a[0].order() - 1;
    let v: Vec<Jet> = a.iter().map(|j| j.truncate(k)).collect();
    let dot: Vec<Jet> = a.iter().map(|j| j.shift()).collect::<Result<_, _>>()?;
    let c = |x: f64| Jet::constant(x, k);
    Ok(&dot[3] * &v[2] - &v[3] * &dot[2] - c(3.0) * &v[0] * &v[3] * &v[3]
        + &v[1] * &v[2] * &v[3]
        - c(2.0 / 9.0) * &v[2] * &v[2] * &v[2])
}

/// `(Φ₃, Φ₅)` as jets of order `K − 2` from coefficient jets of order `K ≥ 2`.
fn phi_jets(a: &[Jet]) -> Result<(Jet, Jet), JetError> {
    let p3 = phi3_jet(a)?;
    let k = p3.order() - 1;
    let dp3 = p3.shift()?;
    let p3 = p3.truncate(k);
    let v: Vec<Jet> = a.iter().map(|j| j.truncate(k)).collect();
    let dot3 = a[3].shift()?.truncate(k);
    let c = |x: f64| Jet::constant(x, k);
    let bracket = -dot3 + c(1.0 / 3.0) * &v[2] * &v[2] - &v[1] * &v[3];
    let p5 = -(&v[3] * &dp3) - c(3.0) * bracket * &p3;
    Ok((p3, p5))
}

pub fn phi3(x: &AbelEquation, t: f64) -> Result<f64, InvariantError> {
    Ok(phi3_jet(&coefficient_jets(x, t, 1)?)?.value())
}

/// `dΦ₃/dt` by jet differentiation, cross-checked against the expanded
/// `λ` polynomial.
pub fn dphi3(x: &AbelEquation, t: f64) -> Result<f64, InvariantError> {
    let jet = phi3_jet(&coefficient_jets(x, t, 2)?)?.d(1);
    let l = lambda_at(x, t)?;
    let lambda = dphi3_lambda(&l);
    let scale: f64 = dphi3_terms(&l).iter().map(|v| v.abs()).sum();
    if (jet - lambda).abs() > CROSS_CHECK_RTOL * (1.0 + scale) {
        return Err(InvariantError::Inconsistent { t, jet, lambda });
    }
    Ok(jet)
}

pub fn phi5(x: &AbelEquation, t: f64) -> Result<f64, InvariantError> {
    dphi3(x, t)?;
    Ok(phi_jets(&coefficient_jets(x, t, 2)?)?.1.value())
}

/// Full record at `t`. Reads only the 2-jets of the coefficients.
pub fn liouville_f(x: &AbelEquation, t: f64) -> Result<InvariantValue, InvariantError> {
    let dphi3 = dphi3(x, t)?;
    let (p3, p5) = phi_jets(&coefficient_jets(x, t, 2)?)?;
    let (phi3, phi5) = (p3.value(), p5.value());
    Ok(InvariantValue {
        t,
        phi3,
        dphi3,
        phi5,
        f: liouville_from(phi3, phi5),
    })
}

/// Jet of `F` of the given order (coefficients are evaluated two orders
/// deeper); `None` where `Φ₅` is negligible.
pub fn f_jet(x: &AbelEquation, t: f64, order: usize) -> Result<Option<Jet>, InvariantError> {
    let (p3, p5) = phi_jets(&coefficient_jets(x, t, order + 2)?)?;
    if phi5_negligible(p3.value(), p5.value()) {
        return Ok(None);
    }
    Ok(Some(p3.powi(5)?.checked_div(&p5.powi(3)?)?))
}

/// `DF` on the grid, from jets one order deeper than `F` needs.
pub fn apply_d(x: &AbelEquation, ts: &[f64]) -> Result<Vec<Option<f64>>, InvariantError> {
    ts.iter()
        .map(|&t| Ok(f_jet(x, t, 1)?.map(|j| j.d(1))))
        .collect()
}
