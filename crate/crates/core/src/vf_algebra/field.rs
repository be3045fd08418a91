//! Polynomial vector fields on the line and the plane.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::linalg::{q, q_to_string, QMatrix, Q};
use super::poly::Poly;
use super::VfError;

/// A vector field `Σ_i P_i ∂/∂x_i` with polynomial components, `dim ∈ {1, 2}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "PolyVfJson", into = "PolyVfJson")]
pub struct PolyVF {
    dim: usize,
    components: Vec<Poly>,
}

impl PolyVF {
    pub fn new(components: Vec<Poly>) -> Result<Self, VfError> {
        let dim = components.len();
        if !(1..=2).contains(&dim) {
            return Err(VfError::InvalidDimension(dim));
        }
        if dim == 1 && components[0].degree_y().is_some_and(|d| d > 0) {
            return Err(VfError::InvalidDimension(dim));
        }
        Ok(PolyVF { dim, components })
    }

    pub fn zero(dim: usize) -> Self {
        assert!((1..=2).contains(&dim));
        PolyVF {
            dim,
            components: vec![Poly::zero(); dim],
        }
    }

    /// `Y_k = x^k ∂/∂x` on the line.
    pub fn x_pow(k: usize) -> Self {
        Self::univariate(Poly::monomial(k, 0, q(1)))
    }

    pub fn univariate(p: Poly) -> Self {
        PolyVF::new(vec![p]).expect("univariate polynomial in x")
    }

    /// `f(x) ∂/∂x` from coefficients of `f` in increasing degree.
    pub fn from_coeffs(cs: Vec<Q>) -> Self {
        Self::univariate(Poly::univariate(cs))
    }

    pub fn planar(px: Poly, py: Poly) -> Self {
        PolyVF::new(vec![px, py]).expect("two components")
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn components(&self) -> &[Poly] {
        &self.components
    }

    pub fn is_zero(&self) -> bool {
        self.components.iter().all(Poly::is_zero)
    }

    /// Maximum component degree; `None` stands for −∞ (the zero field).
    pub fn degree(&self) -> Option<usize> {
        self.components.iter().filter_map(Poly::degree).max()
    }

    pub fn scale(&self, c: &Q) -> Self {
        PolyVF {
            dim: self.dim,
            components: self.components.iter().map(|p| p.scale(c)).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self, VfError> {
        self.check_dim(other)?;
        Ok(PolyVF {
            dim: self.dim,
            components: self
                .components
                .iter()
                .zip(&other.components)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self, VfError> {
        self.add(&other.scale(&q(-1)))
    }

    /// `Σ c_i basis_i`.
    pub fn linear_combination(coeffs: &[Q], basis: &[PolyVF]) -> Result<Self, VfError> {
        let first = basis.first().ok_or(VfError::EmptyBasis)?;
        assert_eq!(coeffs.len(), basis.len(), "coefficient count");
        coeffs
            .iter()
            .zip(basis)
            .try_fold(PolyVF::zero(first.dim), |acc, (c, b)| acc.add(&b.scale(c)))
    }

    fn check_dim(&self, other: &Self) -> Result<(), VfError> {
        if self.dim != other.dim {
            return Err(VfError::DimensionMismatch {
                left: self.dim,
                right: other.dim,
            });
        }
        Ok(())
    }

    /// Directional derivative of `p` along this field.
    pub fn apply(&self, p: &Poly) -> Poly {
        self.components
            .iter()
            .enumerate()
            .fold(Poly::zero(), |acc, (k, a)| acc + a * &p.partial(k))
    }

    /// Lie bracket `[self, other] = (self·∇)other − (other·∇)self`.
    pub fn bracket(&self, other: &Self) -> Result<Self, VfError> {
        self.check_dim(other)?;
        let components = (0..self.dim)
            .map(|i| &self.apply(&other.components[i]) - &other.apply(&self.components[i]))
            .collect();
        Ok(PolyVF {
            dim: self.dim,
            components,
        })
    }

    pub fn eval(&self, point: &[f64]) -> Vec<f64> {
        let (x, y) = (point[0], point.get(1).copied().unwrap_or(0.0));
        self.components.iter().map(|p| p.eval(x, y)).collect()
    }
}

/// Monomial keys `(component, deg_x, deg_y)` present in any of the fields.
fn monomial_keys<'a>(fields: impl Iterator<Item = &'a PolyVF>) -> Vec<(usize, usize, usize)> {
    let mut keys: Vec<_> = fields
        .flat_map(|f| {
            f.components
                .iter()
                .enumerate()
                .flat_map(|(c, p)| p.terms().map(move |((i, j), _)| (c, i, j)))
        })
        .collect();
    keys.sort_unstable();
    keys.dedup();
    keys
}

/// Matrix whose column `j` is the monomial coefficient vector of `fields[j]`.
pub(crate) fn coefficient_matrix(fields: &[&PolyVF], keys: &[(usize, usize, usize)]) -> QMatrix {
    let cols: Vec<Vec<Q>> = fields
        .iter()
        .map(|f| keys.iter().map(|&(c, i, j)| f.components[c].coeff(i, j)).collect())
        .collect();
    QMatrix::from_columns(&cols, keys.len())
}

/// Exact coordinates of `f` in `basis`, or `None` if `f` is outside the span.
///
/// When the basis is linearly dependent the returned coordinates are one
/// valid choice among many.
pub fn in_span(f: &PolyVF, basis: &[PolyVF]) -> Result<Option<Vec<Q>>, VfError> {
    for b in basis {
        f.check_dim(b)?;
    }
    let keys = monomial_keys(basis.iter().chain(std::iter::once(f)));
    let refs: Vec<&PolyVF> = basis.iter().collect();
    let a = coefficient_matrix(&refs, &keys);
    let rhs = coefficient_matrix(&[f], &keys).column(0);
    Ok(a.solve(&rhs))
}

/// Rank of the span of `fields` over the rationals.
pub fn span_rank(fields: &[PolyVF]) -> usize {
    let keys = monomial_keys(fields.iter());
    let refs: Vec<&PolyVF> = fields.iter().collect();
    coefficient_matrix(&refs, &keys).rank()
}

fn fmt_poly(p: &Poly, dim: usize) -> String {
    if p.is_zero() {
        return "0".into();
    }
    let mut out = String::new();
    for (n, ((i, j), c)) in p.terms().enumerate() {
        let neg = c.is_negative();
        let a = c.abs();
        if n == 0 {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        let mono = match (i, j) {
            (0, 0) => String::new(),
            _ => {
                let mut s = String::new();
                for (v, e) in [("x", i), ("y", j)] {
                    if e == 0 || (v == "y" && dim == 1) {
                        continue;
                    }
                    s.push_str(v);
                    if e > 1 {
                        s.push_str(&format!("^{e}"));
                    }
                }
                s
            }
        };
        if mono.is_empty() || !a.is_one() {
            out.push_str(&q_to_string(&a));
        }
        out.push_str(&mono);
    }
    out
}

impl fmt::Display for PolyVF {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names = ["∂x", "∂y"];
        let parts: Vec<String> = self
            .components
            .iter()
            .zip(names)
            .filter(|(p, _)| !p.is_zero())
            .map(|(p, n)| {
                let body = fmt_poly(p, self.dim);
                if p.terms().count() > 1 {
                    format!("({body}){n}")
                } else {
                    format!("{body}{n}")
                }
            })
            .collect();
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

/// Wire form: `{"dim": n, "components": [[[monomial], num, den], ...] per coordinate}`.
#[derive(Serialize, Deserialize)]
struct PolyVfJson {
    dim: usize,
    components: Vec<Vec<(Vec<usize>, Value, Value)>>,
}

fn int_to_json(n: &BigInt) -> Value {
    match n.to_i64() {
        Some(v) => Value::from(v),
        None => Value::from(n.to_string()),
    }
}

fn int_from_json(v: &Value) -> Result<BigInt, VfError> {
    match v {
        Value::Number(n) => n
            .as_i64()
            .map(BigInt::from)
            .ok_or_else(|| VfError::Json(format!("coefficient {n} is not an integer"))),
        Value::String(s) => s
            .parse()
            .map_err(|_| VfError::Json(format!("coefficient {s:?} is not an integer"))),
        other => Err(VfError::Json(format!("unexpected coefficient {other}"))),
    }
}

impl From<PolyVF> for PolyVfJson {
    fn from(f: PolyVF) -> Self {
        let components = f
            .components
            .iter()
            .map(|p| {
                p.terms()
                    .map(|((i, j), c)| {
                        let mono = if f.dim == 1 { vec![i] } else { vec![i, j] };
                        (mono, int_to_json(c.numer()), int_to_json(c.denom()))
                    })
                    .collect()
            })
            .collect();
        PolyVfJson {
            dim: f.dim,
            components,
        }
    }
}

impl TryFrom<PolyVfJson> for PolyVF {
    type Error = VfError;

    fn try_from(j: PolyVfJson) -> Result<Self, VfError> {
        if j.components.len() != j.dim {
            return Err(VfError::Json(format!(
                "dim {} but {} components",
                j.dim,
                j.components.len()
            )));
        }
        let mut comps = Vec::with_capacity(j.dim);
        for terms in &j.components {
            let mut p = Poly::zero();
            for (mono, num, den) in terms {
                if mono.len() != j.dim {
                    return Err(VfError::Json(format!(
                        "monomial {mono:?} does not match dim {}",
                        j.dim
                    )));
                }
                let den = int_from_json(den)?;
                if den.is_zero() {
                    return Err(VfError::Json("zero denominator".into()));
                }
                let c = Q::new(int_from_json(num)?, den);
                p = p + Poly::monomial(mono[0], mono.get(1).copied().unwrap_or(0), c);
            }
            comps.push(p);
        }
        PolyVF::new(comps)
    }
}
