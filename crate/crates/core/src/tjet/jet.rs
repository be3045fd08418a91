//! Truncated jets: the value and first `K` derivatives of a scalar function.

use std::ops::{Add, Mul, Neg, Sub};

use super::JetError;

/// `d[k]` is the `k`-th derivative at the evaluation point (not the Taylor
/// coefficient). The order `K = d.len() - 1` never changes implicitly.
#[derive(Clone, Debug, PartialEq)]
pub struct Jet {
    d: Vec<f64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum JetOp {
    Add,
    Sub,
    Mul,
    Div,
}

fn factorial(k: usize) -> f64 {
    (1..=k).map(|i| i as f64).product()
}

fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

impl Jet {
    pub fn from_derivatives(d: Vec<f64>) -> Self {
        assert!(!d.is_empty(), "a jet holds at least its value");
        Jet { d }
    }

    pub fn constant(value: f64, order: usize) -> Self {
        let mut d = vec![0.0; order + 1];
        d[0] = value;
        Jet { d }
    }

    /// The independent variable at `t`.
    pub fn variable(t: f64, order: usize) -> Self {
        let mut j = Self::constant(t, order);
        if order >= 1 {
            j.d[1] = 1.0;
        }
        j
    }

    pub fn order(&self) -> usize {
        self.d.len() - 1
    }

    pub fn value(&self) -> f64 {
        self.d[0]
    }

    /// `k`-th derivative.
    pub fn d(&self, k: usize) -> f64 {
        self.d[k]
    }

    pub fn derivatives(&self) -> &[f64] {
        &self.d
    }

    pub fn is_finite(&self) -> bool {
        self.d.iter().all(|x| x.is_finite())
    }

    fn to_taylor(&self) -> Vec<f64> {
        self.d
            .iter()
            .enumerate()
            .map(|(k, v)| v / factorial(k))
            .collect()
    }

    fn from_taylor(c: Vec<f64>) -> Self {
        Jet {
            d: c.into_iter()
                .enumerate()
                .map(|(k, v)| v * factorial(k))
                .collect(),
        }
    }

    /// The jet of the derivative: drops the value, order decreases by one.
    pub fn shift(&self) -> Result<Jet, JetError> {
        if self.order() == 0 {
            return Err(JetError::ShiftOfOrderZero);
        }
        Ok(Jet {
            d: self.d[1..].to_vec(),
        })
    }

    pub fn truncate(&self, order: usize) -> Jet {
        assert!(order <= self.order());
        Jet {
            d: self.d[..=order].to_vec(),
        }
    }

    fn check_order(&self, other: &Jet) -> Result<(), JetError> {
        if self.order() != other.order() {
            return Err(JetError::OrderMismatch {
                left: self.order(),
                right: other.order(),
            });
        }
        Ok(())
    }

    /// Binary arithmetic with explicit order and zero-division checks.
    pub fn arith(&self, other: &Jet, op: JetOp) -> Result<Jet, JetError> {
        self.check_order(other)?;
        Ok(match op {
            JetOp::Add => self + other,
            JetOp::Sub => self - other,
            JetOp::Mul => self * other,
            JetOp::Div => return self.checked_div(other),
        })
    }

    pub fn checked_div(&self, other: &Jet) -> Result<Jet, JetError> {
        self.check_order(other)?;
        if other.d[0] == 0.0 {
            return Err(JetError::DivisionByZero);
        }
        let a = self.to_taylor();
        let b = other.to_taylor();
        let mut out = vec![0.0; a.len()];
        for k in 0..a.len() {
            let s: f64 = (1..=k).map(|j| b[j] * out[k - j]).sum();
            out[k] = (a[k] - s) / b[0];
        }
        Ok(Jet::from_taylor(out))
    }

    pub fn recip(&self) -> Result<Jet, JetError> {
        Jet::constant(1.0, self.order()).checked_div(self)
    }

    pub fn scale(&self, c: f64) -> Jet {
        Jet {
            d: self.d.iter().map(|v| v * c).collect(),
        }
    }

    pub fn exp(&self) -> Jet {
        let a = self.to_taylor();
        let mut e = vec![0.0; a.len()];
        e[0] = a[0].exp();
        for k in 1..a.len() {
            let s: f64 = (1..=k).map(|j| j as f64 * a[j] * e[k - j]).sum();
            e[k] = s / k as f64;
        }
        Jet::from_taylor(e)
    }

    pub fn sin_cos(&self) -> (Jet, Jet) {
        let a = self.to_taylor();
        let n = a.len();
        let mut s = vec![0.0; n];
        let mut c = vec![0.0; n];
        s[0] = a[0].sin();
        c[0] = a[0].cos();
        for k in 1..n {
            let (mut ss, mut cc) = (0.0, 0.0);
            for j in 1..=k {
                ss += j as f64 * a[j] * c[k - j];
                cc += j as f64 * a[j] * s[k - j];
            }
            s[k] = ss / k as f64;
            c[k] = -cc / k as f64;
        }
        (Jet::from_taylor(s), Jet::from_taylor(c))
    }

    pub fn sin(&self) -> Jet {
        self.sin_cos().0
    }

    pub fn cos(&self) -> Jet {
        self.sin_cos().1
    }

    /// Requires a positive value (zero is accepted only at order 0).
    pub fn sqrt(&self) -> Result<Jet, JetError> {
        let v = self.d[0];
        if v < 0.0 || (v == 0.0 && self.order() > 0) || v.is_nan() {
            return Err(JetError::Domain { op: "sqrt", value: v });
        }
        let a = self.to_taylor();
        let mut r = vec![0.0; a.len()];
        r[0] = v.sqrt();
        for k in 1..a.len() {
            let s: f64 = (1..k).map(|j| r[j] * r[k - j]).sum();
            r[k] = (a[k] - s) / (2.0 * r[0]);
        }
        Ok(Jet::from_taylor(r))
    }

    /// Natural logarithm; requires a positive value.
    pub fn ln(&self) -> Result<Jet, JetError> {
        let v = self.d[0];
        if v <= 0.0 || v.is_nan() {
            return Err(JetError::Domain { op: "log", value: v });
        }
        let a = self.to_taylor();
        let mut l = vec![0.0; a.len()];
        l[0] = v.ln();
        for k in 1..a.len() {
            let s: f64 = (1..k).map(|j| j as f64 * l[j] * a[k - j]).sum();
            l[k] = (a[k] - s / k as f64) / a[0];
        }
        Ok(Jet::from_taylor(l))
    }

    /// Integer power; negative exponents require a nonzero value.
    pub fn powi(&self, n: i32) -> Result<Jet, JetError> {
        let base = if n < 0 { self.recip()? } else { self.clone() };
        let mut e = n.unsigned_abs();
        let mut acc = Jet::constant(1.0, self.order());
        let mut sq = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &sq;
            }
            e >>= 1;
            if e > 0 {
                sq = &sq * &sq;
            }
        }
        Ok(acc)
    }
}

impl Add for &Jet {
    type Output = Jet;

    fn add(self, rhs: &Jet) -> Jet {
        assert_eq!(self.order(), rhs.order(), "jet order mismatch");
        Jet {
            d: self.d.iter().zip(&rhs.d).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &Jet {
    type Output = Jet;

    fn sub(self, rhs: &Jet) -> Jet {
        assert_eq!(self.order(), rhs.order(), "jet order mismatch");
        Jet {
            d: self.d.iter().zip(&rhs.d).map(|(a, b)| a - b).collect(),
        }
    }
}

/// Leibniz rule in derivative form.
impl Mul for &Jet {
    type Output = Jet;

    fn mul(self, rhs: &Jet) -> Jet {
        assert_eq!(self.order(), rhs.order(), "jet order mismatch");
        let n = self.d.len();
        let d = (0..n)
            .map(|k| {
                (0..=k)
                    .map(|i| binomial(k, i) * self.d[i] * rhs.d[k - i])
                    .sum()
            })
            .collect();
        Jet { d }
    }
}

impl Neg for &Jet {
    type Output = Jet;

    fn neg(self) -> Jet {
        self.scale(-1.0)
    }
}

macro_rules! owned_ops {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr for Jet {
            type Output = Jet;
            fn $m(self, rhs: Jet) -> Jet { (&self).$m(&rhs) }
        }
        impl $tr<&Jet> for Jet {
            type Output = Jet;
            fn $m(self, rhs: &Jet) -> Jet { (&self).$m(rhs) }
        }
    )*};
}
owned_ops!(Add add, Sub sub, Mul mul);

impl Neg for Jet {
    type Output = Jet;

    fn neg(self) -> Jet {
        self.scale(-1.0)
    }
}
