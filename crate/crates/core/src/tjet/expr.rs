//! Expression trees for `t`-dependent coefficients.

use std::fmt;

use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::jet::Jet;
use super::{EvalError, JetError};
use crate::vf_algebra::linalg::{q, q_to_f64, q_to_string, Q};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Func {
    Sin,
    Cos,
    Exp,
    Sqrt,
    Log,
}

impl Func {
    pub fn name(self) -> &'static str {
        match self {
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Exp => "exp",
            Func::Sqrt => "sqrt",
            Func::Log => "log",
        }
    }

    pub fn from_name(s: &str) -> Option<Func> {
        Some(match s {
            "sin" => Func::Sin,
            "cos" => Func::Cos,
            "exp" => Func::Exp,
            "sqrt" => Func::Sqrt,
            "log" => Func::Log,
            _ => return None,
        })
    }
}

/// A `t`-dependent scalar function.
///
/// Trees produced by the parser contain no [`Expr::Deriv`] nodes; those are
/// created internally (for `dα/dt`, `dβ/dt`) and evaluated through jets one
/// order deeper. When printed, a derivative node is expanded symbolically so
/// the text stays within the input grammar.
#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    Num(Q),
    T,
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, i32),
    Call(Func, Box<Expr>),
    Deriv(Box<Expr>),
}

fn perfect_square_root(x: &Q) -> Option<Q> {
    if x.is_negative() {
        return None;
    }
    let n = x.numer().sqrt();
    let d = x.denom().sqrt();
    (&n * &n == *x.numer() && &d * &d == *x.denom()).then(|| Q::new(n, d))
}

// Simplifying constructors. The parser does not use these: parsed trees are
// kept verbatim so that printing and re-parsing is the identity.
impl Expr {
    pub fn num(c: Q) -> Expr {
        Expr::Num(c)
    }

    pub fn int(n: i64) -> Expr {
        Expr::Num(q(n))
    }

    pub fn t() -> Expr {
        Expr::T
    }

    pub fn as_num(&self) -> Option<&Q> {
        match self {
            Expr::Num(c) => Some(c),
            _ => None,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.as_num().is_some_and(Zero::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.as_num().is_some_and(One::is_one)
    }

    pub fn is_constant(&self) -> bool {
        match self {
            Expr::Num(_) => true,
            Expr::T => false,
            Expr::Neg(a) | Expr::Pow(a, _) | Expr::Call(_, a) => a.is_constant(),
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) => {
                a.is_constant() && b.is_constant()
            }
            Expr::Deriv(_) => false,
        }
    }

    pub fn neg(a: Expr) -> Expr {
        match a {
            Expr::Num(c) => Expr::Num(-c),
            Expr::Neg(inner) => *inner,
            other => Expr::Neg(Box::new(other)),
        }
    }

    /// `−self` without a leading minus, when `self` prints with one.
    fn negated(&self) -> Option<Expr> {
        match self {
            Expr::Num(c) if c.is_negative() => Some(Expr::Num(-c.clone())),
            Expr::Neg(a) => Some((**a).clone()),
            Expr::Mul(a, b) => a.negated().map(|a| Expr::mul(a, (**b).clone())),
            Expr::Div(a, b) => a.negated().map(|a| Expr::div(a, (**b).clone())),
            _ => None,
        }
    }

    pub fn add(a: Expr, b: Expr) -> Expr {
        match (a, b) {
            (Expr::Num(x), Expr::Num(y)) => Expr::Num(x + y),
            (a, b) if b.is_zero() => a,
            (a, b) if a.is_zero() => b,
            (a, b) => match b.negated() {
                Some(p) => Expr::Sub(Box::new(a), Box::new(p)),
                None => Expr::Add(Box::new(a), Box::new(b)),
            },
        }
    }

    pub fn sub(a: Expr, b: Expr) -> Expr {
        match (a, b) {
            (Expr::Num(x), Expr::Num(y)) => Expr::Num(x - y),
            (a, b) if b.is_zero() => a,
            (a, b) if a.is_zero() => Expr::neg(b),
            (a, b) if a == b => Expr::int(0),
            (a, b) => match b.negated() {
                Some(p) => Expr::Add(Box::new(a), Box::new(p)),
                None => Expr::Sub(Box::new(a), Box::new(b)),
            },
        }
    }

    pub fn mul(a: Expr, b: Expr) -> Expr {
        match (a, b) {
            (Expr::Num(x), Expr::Num(y)) => Expr::Num(x * y),
            (a, b) if a.is_zero() || b.is_zero() => Expr::int(0),
            (a, b) if a.is_one() => b,
            (a, b) if b.is_one() => a,
            (Expr::Num(x), b) if x == q(-1) => Expr::neg(b),
            (a, Expr::Num(y)) if y == q(-1) => Expr::neg(a),
            (a, b) => Expr::Mul(Box::new(a), Box::new(b)),
        }
    }

    pub fn div(a: Expr, b: Expr) -> Expr {
        match (a, b) {
            (Expr::Num(x), Expr::Num(y)) if !y.is_zero() => Expr::Num(x / y),
            (a, b) if a.is_zero() && !b.is_zero() => Expr::int(0),
            (a, b) if b.is_one() => a,
            (a, b) if a == b && !a.is_zero() => Expr::int(1),
            (a, b) => Expr::Div(Box::new(a), Box::new(b)),
        }
    }

    pub fn powi(a: Expr, n: i32) -> Expr {
        match (a, n) {
            (_, 0) => Expr::int(1),
            (a, 1) => a,
            (Expr::Num(x), n) if n > 0 || !x.is_zero() => {
                let mut acc = Q::one();
                for _ in 0..n.unsigned_abs() {
                    acc *= &x;
                }
                Expr::Num(if n < 0 { acc.recip() } else { acc })
            }
            (a, n) => Expr::Pow(Box::new(a), n),
        }
    }

    pub fn call(f: Func, a: Expr) -> Expr {
        match (f, &a) {
            (Func::Sqrt, Expr::Num(x)) => match perfect_square_root(x) {
                Some(r) => Expr::Num(r),
                None => Expr::Call(f, Box::new(a)),
            },
            (Func::Exp, e) | (Func::Cos, e) if e.is_zero() => Expr::int(1),
            (Func::Sin, e) if e.is_zero() => Expr::int(0),
            (Func::Log, e) if e.is_one() => Expr::int(0),
            _ => Expr::Call(f, Box::new(a)),
        }
    }

    /// `d/dt` as a deferred node, evaluated by jets.
    pub fn deriv(a: Expr) -> Expr {
        match a {
            Expr::Num(_) => Expr::int(0),
            Expr::T => Expr::int(1),
            e if e.is_constant() => Expr::int(0),
            e => Expr::Deriv(Box::new(e)),
        }
    }

    /// Symbolic derivative in the input grammar.
    pub fn derivative(&self) -> Expr {
        use Expr as E;
        match self {
            E::Num(_) => E::int(0),
            E::T => E::int(1),
            E::Neg(a) => E::neg(a.derivative()),
            E::Add(a, b) => E::add(a.derivative(), b.derivative()),
            E::Sub(a, b) => E::sub(a.derivative(), b.derivative()),
            E::Mul(a, b) => E::add(
                E::mul(a.derivative(), (**b).clone()),
                E::mul((**a).clone(), b.derivative()),
            ),
            E::Div(a, b) if b.is_constant() => E::div(a.derivative(), (**b).clone()),
            E::Div(a, b) => E::div(
                E::sub(
                    E::mul(a.derivative(), (**b).clone()),
                    E::mul((**a).clone(), b.derivative()),
                ),
                E::powi((**b).clone(), 2),
            ),
            E::Pow(a, n) => E::mul(
                E::mul(E::int(*n as i64), E::powi((**a).clone(), n - 1)),
                a.derivative(),
            ),
            E::Call(f, a) => {
                let inner = (**a).clone();
                let da = a.derivative();
                match f {
                    Func::Sin => E::mul(E::call(Func::Cos, inner), da),
                    Func::Cos => E::neg(E::mul(E::call(Func::Sin, inner), da)),
                    Func::Exp => E::mul(E::call(Func::Exp, inner), da),
                    Func::Sqrt => E::div(da, E::mul(E::int(2), E::call(Func::Sqrt, inner))),
                    Func::Log => E::div(da, inner),
                }
            }
            E::Deriv(a) => a.derivative().derivative(),
        }
    }

    /// Value and first `order` derivatives at `t`.
    pub fn eval_jet(&self, t: f64, order: usize) -> Result<Jet, EvalError> {
        let wrap = |e: JetError| EvalError {
            expr: self.to_string(),
            source: e,
        };
        Ok(match self {
            Expr::Num(c) => Jet::constant(q_to_f64(c), order),
            Expr::T => Jet::variable(t, order),
            Expr::Neg(a) => -a.eval_jet(t, order)?,
            Expr::Add(a, b) => a.eval_jet(t, order)? + b.eval_jet(t, order)?,
            Expr::Sub(a, b) => a.eval_jet(t, order)? - b.eval_jet(t, order)?,
            Expr::Mul(a, b) => a.eval_jet(t, order)? * b.eval_jet(t, order)?,
            Expr::Div(a, b) => a
                .eval_jet(t, order)?
                .checked_div(&b.eval_jet(t, order)?)
                .map_err(wrap)?,
            Expr::Pow(a, n) => a.eval_jet(t, order)?.powi(*n).map_err(wrap)?,
            Expr::Call(f, a) => {
                let x = a.eval_jet(t, order)?;
                match f {
                    Func::Sin => x.sin(),
                    Func::Cos => x.cos(),
                    Func::Exp => x.exp(),
                    Func::Sqrt => x.sqrt().map_err(wrap)?,
                    Func::Log => x.ln().map_err(wrap)?,
                }
            }
            Expr::Deriv(a) => a.eval_jet(t, order + 1)?.shift().map_err(wrap)?,
        })
    }

    pub fn eval(&self, t: f64) -> Result<f64, EvalError> {
        self.eval_jet(t, 0).map(|j| j.value())
    }

    fn precedence(&self) -> u8 {
        match self {
            Expr::Add(..) | Expr::Sub(..) => 1,
            Expr::Mul(..) | Expr::Div(..) => 2,
            Expr::Num(c) if !c.is_integer() => 2,
            Expr::Num(c) if c.is_negative() => 3,
            Expr::Neg(_) => 3,
            Expr::Pow(..) => 4,
            Expr::Deriv(a) => a.derivative().precedence(),
            Expr::Num(_) | Expr::T | Expr::Call(..) => 5,
        }
    }

    fn write_at(&self, out: &mut String, min: u8) {
        if self.precedence() < min {
            out.push('(');
            self.write_raw(out);
            out.push(')');
        } else {
            self.write_raw(out);
        }
    }

    /// Operand of unary minus or base of a power: must be a `base`.
    fn write_base(&self, out: &mut String) {
        match self.precedence() {
            3 | 5 => self.write_raw(out),
            _ => {
                out.push('(');
                self.write_raw(out);
                out.push(')');
            }
        }
    }

    fn write_raw(&self, out: &mut String) {
        match self {
            Expr::Num(c) => out.push_str(&q_to_string(c)),
            Expr::T => out.push('t'),
            Expr::Neg(a) => {
                out.push('-');
                a.write_base(out);
            }
            Expr::Add(a, b) | Expr::Sub(a, b) => {
                a.write_at(out, 1);
                out.push_str(if matches!(self, Expr::Add(..)) { " + " } else { " - " });
                b.write_at(out, 2);
            }
            Expr::Mul(a, b) | Expr::Div(a, b) => {
                a.write_at(out, 2);
                out.push(if matches!(self, Expr::Mul(..)) { '*' } else { '/' });
                b.write_at(out, 3);
            }
            Expr::Pow(a, n) => {
                a.write_base(out);
                out.push('^');
                out.push_str(&n.to_string());
            }
            Expr::Call(f, a) => {
                out.push_str(f.name());
                out.push('(');
                a.write_raw(out);
                out.push(')');
            }
            Expr::Deriv(a) => a.derivative().write_raw(out),
        }
    }

    /// Tree depth, used to bound random generation.
    pub fn depth(&self) -> usize {
        match self {
            Expr::Num(_) | Expr::T => 1,
            Expr::Neg(a) | Expr::Pow(a, _) | Expr::Call(_, a) | Expr::Deriv(a) => 1 + a.depth(),
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) => {
                1 + a.depth().max(b.depth())
            }
        }
    }

    /// Rational value of a constant literal, if it fits an `f64` exactly enough.
    pub fn constant_value(&self) -> Option<f64> {
        self.as_num().and_then(|c| c.to_f64())
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut s = String::new();
        self.write_raw(&mut s);
        f.write_str(&s)
    }
}

impl From<f64> for Expr {
    /// Exact rational image of a finite double.
    fn from(x: f64) -> Expr {
        let c = Q::from_float(x).expect("finite constant");
        Expr::Num(c)
    }
}

impl Serialize for Expr {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Expr {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Expr, D::Error> {
        let s = String::deserialize(d)?;
        super::parse(&s).map_err(serde::de::Error::custom)
    }
}
