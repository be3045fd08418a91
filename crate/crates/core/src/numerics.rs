//! Fixed-step RK4, sample residuals, quadrature and finite differences.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;
use thiserror::Error;

use crate::tjet::EvalError;

/// States with `|x|` above this are treated as a finite-time blow-up.
pub const BLOW_UP_BOUND: f64 = 1e8;

#[derive(Clone, Debug, Error, PartialEq)]
pub enum NumError {
    #[error("need at least {min} steps, got {got}")]
    TooFewSteps { min: usize, got: usize },
    #[error("need at least {min} samples, got {got}")]
    TooFewSamples { min: usize, got: usize },
    #[error("invalid window [{t0}, {t1}]")]
    InvalidWindow { t0: f64, t1: f64 },
    #[error("invalid grid spec `{0}` (expected t0:t1:n)")]
    GridSpec(String),
    #[error(transparent)]
    Eval(#[from] EvalError),
}

/// Uniform grid of `n` points on `[t0, t1]`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Grid {
    pub t0: f64,
    pub t1: f64,
    pub n: usize,
}

impl Grid {
    pub const MIN_POINTS: usize = 16;

    pub fn new(t0: f64, t1: f64, n: usize) -> Result<Grid, NumError> {
        if !(t0.is_finite() && t1.is_finite() && t0 < t1) {
            return Err(NumError::InvalidWindow { t0, t1 });
        }
        if n < Self::MIN_POINTS {
            return Err(NumError::TooFewSamples {
                min: Self::MIN_POINTS,
                got: n,
            });
        }
        Ok(Grid { t0, t1, n })
    }

    pub fn step(&self) -> f64 {
        (self.t1 - self.t0) / (self.n - 1) as f64
    }

    pub fn points(&self) -> Vec<f64> {
        let h = self.step();
        (0..self.n)
            .map(|i| if i + 1 == self.n { self.t1 } else { self.t0 + i as f64 * h })
            .collect()
    }

    pub fn intervals(&self) -> usize {
        self.n - 1
    }
}

impl FromStr for Grid {
    type Err = NumError;

    fn from_str(s: &str) -> Result<Grid, NumError> {
        let bad = || NumError::GridSpec(s.to_string());
        let parts: Vec<&str> = s.split(':').collect();
        if parts.len() != 3 {
            return Err(bad());
        }
        let t0: f64 = parts[0].trim().parse().map_err(|_| bad())?;
        let t1: f64 = parts[1].trim().parse().map_err(|_| bad())?;
        let n: usize = parts[2].trim().parse().map_err(|_| bad())?;
        Grid::new(t0, t1, n)
    }
}

impl fmt::Display for Grid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}", self.t0, self.t1, self.n)
    }
}

/// Right-hand side of a scalar ODE `ẋ = F(t, x)`.
pub trait ScalarField {
    fn rhs(&self, t: f64, x: f64) -> Result<f64, EvalError>;
}

impl<F: Fn(f64, f64) -> f64> ScalarField for F {
    fn rhs(&self, t: f64, x: f64) -> Result<f64, EvalError> {
        Ok(self(t, x))
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct OdeSolution {
    pub t: Vec<f64>,
    pub x: Vec<f64>,
    /// Halved-step estimate of the global error, max over common nodes.
    pub global_error_estimate: f64,
    /// Expected size of [`residual`] on these samples: the central-difference
    /// truncation term plus the differenced global error.
    pub residual_estimate: f64,
    pub blow_up: Option<f64>,
}

impl OdeSolution {
    pub fn diverged(&self) -> bool {
        self.blow_up.is_some()
    }

    pub fn last(&self) -> f64 {
        *self.x.last().expect("solution holds the initial value")
    }
}

fn rk4_run<F: ScalarField + ?Sized>(
    f: &F,
    x0: f64,
    t0: f64,
    t1: f64,
    steps: usize,
) -> Result<(Vec<f64>, Vec<f64>, Option<f64>), EvalError> {
    let h = (t1 - t0) / steps as f64;
    let mut ts = Vec::with_capacity(steps + 1);
    let mut xs = Vec::with_capacity(steps + 1);
    ts.push(t0);
    xs.push(x0);
    let mut x = x0;
    for i in 0..steps {
        let t = t0 + i as f64 * h;
        let k1 = f.rhs(t, x)?;
        let k2 = f.rhs(t + h / 2.0, x + h / 2.0 * k1)?;
        let k3 = f.rhs(t + h / 2.0, x + h / 2.0 * k2)?;
        let k4 = f.rhs(t + h, x + h * k3)?;
        let next = x + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        let tn = if i + 1 == steps { t1 } else { t0 + (i + 1) as f64 * h };
        if !next.is_finite() || next.abs() > BLOW_UP_BOUND {
            return Ok((ts, xs, Some(tn)));
        }
        x = next;
        ts.push(tn);
        xs.push(x);
    }
    Ok((ts, xs, None))
}

/// Classical RK4 with `steps` equal steps on `[t0, t1]`.
///
/// The run is repeated with half the step to estimate the global error.
/// Blow-up stops the run and is recorded, returning the partial solution.
pub fn integrate<F: ScalarField + ?Sized>(
    f: &F,
    x0: f64,
    t0: f64,
    t1: f64,
    steps: usize,
) -> Result<OdeSolution, NumError> {
    if steps < 16 {
        return Err(NumError::TooFewSteps { min: 16, got: steps });
    }
    if !(t0 < t1) {
        return Err(NumError::InvalidWindow { t0, t1 });
    }
    let (t, x, blow_up) = rk4_run(f, x0, t0, t1, steps)?;
    let (_, fine, _) = rk4_run(f, x0, t0, t1, 2 * steps)?;
    let global = x
        .iter()
        .enumerate()
        .filter_map(|(i, xi)| fine.get(2 * i).map(|xf| (xi - xf).abs()))
        .fold(0.0, f64::max)
        * 16.0
        / 15.0;
    let h = (t1 - t0) / steps as f64;
    let third = x
        .windows(4)
        .map(|w| (w[3] - 3.0 * w[2] + 3.0 * w[1] - w[0]).abs())
        .fold(0.0, f64::max);
    Ok(OdeSolution {
        t,
        x,
        global_error_estimate: global,
        residual_estimate: third / (6.0 * h) + global / h,
        blow_up,
    })
}

/// Derivative samples by three-point differences (second order on
/// non-uniform grids, one-sided at the ends).
pub fn gradient(t: &[f64], y: &[f64]) -> Vec<f64> {
    let n = y.len();
    assert!(n >= 3 && t.len() == n);
    let mut d = vec![0.0; n];
    for i in 1..n - 1 {
        let (h0, h1) = (t[i] - t[i - 1], t[i + 1] - t[i]);
        d[i] = (-h1 / (h0 * (h0 + h1))) * y[i - 1]
            + ((h1 - h0) / (h0 * h1)) * y[i]
            + (h0 / (h1 * (h0 + h1))) * y[i + 1];
    }
    let (h0, h1) = (t[1] - t[0], t[2] - t[1]);
    d[0] = -(2.0 * h0 + h1) / (h0 * (h0 + h1)) * y[0] + (h0 + h1) / (h0 * h1) * y[1]
        - h0 / (h1 * (h0 + h1)) * y[2];
    let (h0, h1) = (t[n - 2] - t[n - 3], t[n - 1] - t[n - 2]);
    d[n - 1] = h1 / (h0 * (h0 + h1)) * y[n - 3] - (h0 + h1) / (h0 * h1) * y[n - 2]
        + (2.0 * h1 + h0) / (h1 * (h0 + h1)) * y[n - 1];
    d
}

/// Fourth-order differences on a uniform grid of step `h` (five-point
/// stencils, one-sided near the ends).
pub fn gradient4(y: &[f64], h: f64) -> Vec<f64> {
    let n = y.len();
    assert!(n >= 5);
    (0..n)
        .map(|i| {
            let s = match i {
                0 => -25.0 * y[0] + 48.0 * y[1] - 36.0 * y[2] + 16.0 * y[3] - 3.0 * y[4],
                1 => -3.0 * y[0] - 10.0 * y[1] + 18.0 * y[2] - 6.0 * y[3] + y[4],
                i if i == n - 2 => {
                    3.0 * y[n - 1] + 10.0 * y[n - 2] - 18.0 * y[n - 3] + 6.0 * y[n - 4] - y[n - 5]
                }
                i if i == n - 1 => {
                    25.0 * y[n - 1] - 48.0 * y[n - 2] + 36.0 * y[n - 3] - 16.0 * y[n - 4]
                        + 3.0 * y[n - 5]
                }
                i => y[i - 2] - 8.0 * y[i - 1] + 8.0 * y[i + 1] - y[i + 2],
            };
            s / (12.0 * h)
        })
        .collect()
}

/// Max over interior samples of `|ẋ − F(t, x)|`, with `ẋ` from central
/// differences.
pub fn residual<F: ScalarField + ?Sized>(t: &[f64], x: &[f64], f: &F) -> Result<f64, NumError> {
    if t.len() < 5 || x.len() != t.len() {
        return Err(NumError::TooFewSamples {
            min: 5,
            got: t.len().min(x.len()),
        });
    }
    let d = gradient(t, x);
    let mut worst: f64 = 0.0;
    for i in 1..t.len() - 1 {
        worst = worst.max((d[i] - f.rhs(t[i], x[i])?).abs());
    }
    Ok(worst)
}

/// As [`residual`] but with five-point differences on a uniform grid, for
/// solutions that steepen near a blow-up.
pub fn residual4<F: ScalarField + ?Sized>(t: &[f64], x: &[f64], f: &F) -> Result<f64, NumError> {
    if t.len() < 5 || x.len() != t.len() {
        return Err(NumError::TooFewSamples {
            min: 5,
            got: t.len().min(x.len()),
        });
    }
    let h = (t[t.len() - 1] - t[0]) / (t.len() - 1) as f64;
    let d = gradient4(x, h);
    let mut worst: f64 = 0.0;
    for i in 2..t.len() - 2 {
        worst = worst.max((d[i] - f.rhs(t[i], x[i])?).abs());
    }
    Ok(worst)
}

/// Running integral `∫_{t_0}^{t_i} y` on a uniform grid: composite Simpson
/// at even nodes, a cubic-interpolant single-interval panel for the odd
/// ones so that differencing the result does not see an even/odd pattern.
pub fn cumulative_simpson(y: &[f64], h: f64) -> Vec<f64> {
    let n = y.len();
    assert!(n >= 4, "cumulative quadrature needs four samples");
    let panel = |i: usize| {
        if i + 3 < n {
            h / 24.0 * (9.0 * y[i] + 19.0 * y[i + 1] - 5.0 * y[i + 2] + y[i + 3])
        } else {
            h / 24.0 * (y[i - 2] - 5.0 * y[i - 1] + 19.0 * y[i] + 9.0 * y[i + 1])
        }
    };
    let mut out = vec![0.0; n];
    let mut i = 0;
    while i + 2 < n {
        out[i + 1] = out[i] + panel(i);
        out[i + 2] = out[i] + h / 3.0 * (y[i] + 4.0 * y[i + 1] + y[i + 2]);
        i += 2;
    }
    if i + 1 < n {
        out[i + 1] = out[i] + panel(i);
    }
    out
}
