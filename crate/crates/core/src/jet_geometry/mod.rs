//! Vector fields on the jet spaces `T^pV` of a scheme, `p ∈ {0, 1, 2}`.
//!
//! Coordinates are `λ_k^{(j)}`, basis index `k`, jet level `j`, stored at
//! position `j·r + k` with `r = dim V`. Every field built here is affine in
//! the coordinates, so brackets are computed exactly.

mod rank;

pub use rank::{
    distribution_rank, first_integral_check, invariant_count, Candidate, FirstIntegralReport,
    PointRank, RankReport,
};

use std::fmt;

use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::vf_algebra::linalg::{q, q_to_f64, q_to_string, QMatrix, Q};
use crate::vf_algebra::{representation, SchemeSpec, VfError};

#[derive(Debug, Error)]
pub enum GeoError {
    #[error("W index {index} out of range (dim W = {len})")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("jet order p = {0} is not supported here")]
    UnsupportedOrder(usize),
    #[error("fields live on spaces of different dimension: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("no fields or no points given")]
    EmptyInput,
    #[error("every sampled point is degenerate for this candidate")]
    Degenerate,
    #[error(transparent)]
    Vf(#[from] VfError),
}

/// A point of `T^pV`.
#[derive(Clone, Debug, PartialEq)]
pub struct JetPoint {
    p: usize,
    r: usize,
    coords: Vec<f64>,
}

impl JetPoint {
    pub fn new(p: usize, r: usize, coords: Vec<f64>) -> Result<Self, GeoError> {
        if coords.len() != (p + 1) * r {
            return Err(GeoError::DimensionMismatch(coords.len(), (p + 1) * r));
        }
        Ok(JetPoint { p, r, coords })
    }

    /// Levels `X, Ẋ, …` given as lists of `V` coordinates.
    pub fn from_levels(levels: &[Vec<f64>]) -> Result<Self, GeoError> {
        let r = levels.first().ok_or(GeoError::EmptyInput)?.len();
        if let Some(l) = levels.iter().find(|l| l.len() != r) {
            return Err(GeoError::DimensionMismatch(l.len(), r));
        }
        Ok(JetPoint {
            p: levels.len() - 1,
            r,
            coords: levels.concat(),
        })
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    /// `λ_k^{(j)}`.
    pub fn lambda(&self, k: usize, j: usize) -> f64 {
        self.coords[j * self.r + k]
    }
}

/// `X(λ) = c + Mλ` on `ℝⁿ`, exact rational entries.
#[derive(Clone, PartialEq)]
pub struct JetVF {
    constant: Vec<Q>,
    linear: QMatrix,
}

impl JetVF {
    pub fn zero(n: usize) -> Self {
        JetVF {
            constant: vec![Q::zero(); n],
            linear: QMatrix::zeros(n, n),
        }
    }

    pub fn new(constant: Vec<Q>, linear: QMatrix) -> Result<Self, GeoError> {
        let n = constant.len();
        if linear.rows() != n || linear.cols() != n {
            return Err(GeoError::DimensionMismatch(linear.rows(), n));
        }
        Ok(JetVF { constant, linear })
    }

    /// `∂/∂λ` along coordinate `i`.
    pub fn coordinate(n: usize, i: usize) -> Self {
        let mut f = Self::zero(n);
        f.constant[i] = q(1);
        f
    }

    pub fn dim(&self) -> usize {
        self.constant.len()
    }

    pub fn constant_part(&self) -> &[Q] {
        &self.constant
    }

    pub fn linear_part(&self) -> &QMatrix {
        &self.linear
    }

    pub fn is_zero(&self) -> bool {
        self.constant.iter().all(Zero::is_zero) && self.linear.is_zero()
    }

    pub fn eval(&self, point: &[f64]) -> Vec<f64> {
        let n = self.dim();
        (0..n)
            .map(|i| {
                q_to_f64(&self.constant[i])
                    + (0..n)
                        .filter(|&j| !self.linear.get(i, j).is_zero())
                        .map(|j| q_to_f64(self.linear.get(i, j)) * point[j])
                        .sum::<f64>()
            })
            .collect()
    }

    fn check(&self, other: &Self) -> Result<(), GeoError> {
        if self.dim() != other.dim() {
            return Err(GeoError::DimensionMismatch(self.dim(), other.dim()));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self, GeoError> {
        self.check(other)?;
        let n = self.dim();
        let mut linear = QMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                linear.set(i, j, self.linear.get(i, j) + other.linear.get(i, j));
            }
        }
        Ok(JetVF {
            constant: self.constant.iter().zip(&other.constant).map(|(a, b)| a + b).collect(),
            linear,
        })
    }

    pub fn scale(&self, c: &Q) -> Self {
        let n = self.dim();
        let mut linear = QMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                linear.set(i, j, self.linear.get(i, j) * c);
            }
        }
        JetVF {
            constant: self.constant.iter().map(|a| a * c).collect(),
            linear,
        }
    }

    /// `[a + Aλ, b + Bλ] = (Ba − Ab) + (BA − AB)λ`.
    pub fn bracket(&self, other: &Self) -> Result<Self, GeoError> {
        self.check(other)?;
        let ba = other.linear.mul_vec(&self.constant);
        let ab = self.linear.mul_vec(&other.constant);
        Ok(JetVF {
            constant: ba.iter().zip(&ab).map(|(x, y)| x - y).collect(),
            linear: other.linear.commutator(&self.linear),
        })
    }
}

impl fmt::Debug for JetVF {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "JetVF({self})")
    }
}

/// Printed in flat coordinates `l0, l1, …` as `Σ (c_i + Σ m_ij l_j) ∂_i`.
impl fmt::Display for JetVF {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.dim();
        let mut parts = Vec::new();
        for i in 0..n {
            let mut terms = Vec::new();
            if !self.constant[i].is_zero() {
                terms.push(q_to_string(&self.constant[i]));
            }
            for j in 0..n {
                let c = self.linear.get(i, j);
                if !c.is_zero() {
                    terms.push(match c {
                        c if *c == q(1) => format!("l{j}"),
                        c if *c == q(-1) => format!("-l{j}"),
                        c => format!("{}*l{j}", q_to_string(c)),
                    });
                }
            }
            if !terms.is_empty() {
                let body = terms.join(" + ").replace("+ -", "- ");
                parts.push(if terms.len() > 1 {
                    format!("({body})∂{i}")
                } else {
                    format!("{body}∂{i}")
                });
            }
        }
        if parts.is_empty() {
            return f.write_str("0");
        }
        let s = parts.join(" + ").replace("+ -", "- ");
        f.write_str(&s)
    }
}

/// `c_L` (coordinates of `W_L` in `V`) and `ad_L` for every `W` basis element.
struct SchemeData {
    r: usize,
    c: Vec<Vec<Q>>,
    ad: Vec<QMatrix>,
}

impl SchemeData {
    fn new(s: &SchemeSpec) -> Result<Self, GeoError> {
        let ad = representation(s)?.into_iter().map(|a| a.matrix).collect();
        Ok(SchemeData {
            r: s.dim_v(),
            c: s.w_coordinates()?,
            ad,
        })
    }

    fn index(&self, w: usize) -> Result<(), GeoError> {
        if w >= self.c.len() {
            return Err(GeoError::IndexOutOfRange {
                index: w,
                len: self.c.len(),
            });
        }
        Ok(())
    }
}

/// Writes `factor · ad` into the block (level `to`, level `from`).
fn put_block(m: &mut QMatrix, r: usize, to: usize, from: usize, ad: &QMatrix, factor: i64) {
    for i in 0..r {
        for j in 0..r {
            let v = ad.get(i, j) * q(factor);
            if !v.is_zero() {
                m.set(to * r + i, from * r + j, v);
            }
        }
    }
}

fn put_constant(c: &mut [Q], r: usize, level: usize, v: &[Q], factor: i64) {
    for (k, x) in v.iter().enumerate() {
        c[level * r + k] = x * q(factor);
    }
}

fn check_p(p: usize) -> Result<(), GeoError> {
    if p > 2 {
        return Err(GeoError::UnsupportedOrder(p));
    }
    Ok(())
}

/// Fundamental field of `g ↦ (g_*X₀, …, g_*X_p)`: `ad_L` on every level.
pub fn lift_j(s: &SchemeSpec, w: usize, p: usize) -> Result<JetVF, GeoError> {
    check_p(p)?;
    let d = SchemeData::new(s)?;
    d.index(w)?;
    let n = (p + 1) * d.r;
    let mut m = QMatrix::zeros(n, n);
    for level in 0..=p {
        put_block(&mut m, d.r, level, level, &d.ad[w], 1);
    }
    JetVF::new(vec![Q::zero(); n], m)
}

/// Constant field inserting `W_L` at the top level.
pub fn lift_t(s: &SchemeSpec, w: usize, p: usize) -> Result<JetVF, GeoError> {
    check_p(p)?;
    let d = SchemeData::new(s)?;
    d.index(w)?;
    let n = (p + 1) * d.r;
    let mut c = vec![Q::zero(); n];
    put_constant(&mut c, d.r, p, &d.c[w], 1);
    JetVF::new(c, QMatrix::zeros(n, n))
}

/// `Θ₂^L = (0, L, −ad_L λ⁽⁰⁾)` on `T²V`.
pub fn theta2(s: &SchemeSpec, w: usize) -> Result<JetVF, GeoError> {
    let d = SchemeData::new(s)?;
    d.index(w)?;
    let n = 3 * d.r;
    let mut c = vec![Q::zero(); n];
    put_constant(&mut c, d.r, 1, &d.c[w], 1);
    let mut m = QMatrix::zeros(n, n);
    put_block(&mut m, d.r, 2, 0, &d.ad[w], -1);
    JetVF::new(c, m)
}

/// `Θ₁^L = (L, −ad_L λ⁽⁰⁾, −2 ad_L λ⁽¹⁾)` on `T²V`.
pub fn theta1(s: &SchemeSpec, w: usize) -> Result<JetVF, GeoError> {
    let d = SchemeData::new(s)?;
    d.index(w)?;
    let n = 3 * d.r;
    let mut c = vec![Q::zero(); n];
    put_constant(&mut c, d.r, 0, &d.c[w], 1);
    let mut m = QMatrix::zeros(n, n);
    put_block(&mut m, d.r, 1, 0, &d.ad[w], -1);
    put_block(&mut m, d.r, 2, 1, &d.ad[w], -2);
    JetVF::new(c, m)
}

/// Order-one flow field `Z_L = (−L, ad_L λ⁽⁰⁾)` on `T¹V`.
pub fn z_field(s: &SchemeSpec, w: usize) -> Result<JetVF, GeoError> {
    let d = SchemeData::new(s)?;
    d.index(w)?;
    let n = 2 * d.r;
    let mut c = vec![Q::zero(); n];
    put_constant(&mut c, d.r, 0, &d.c[w], -1);
    let mut m = QMatrix::zeros(n, n);
    put_block(&mut m, d.r, 1, 0, &d.ad[w], 1);
    JetVF::new(c, m)
}

/// `J⁰` lifts followed by `T⁰` constants.
pub fn order0_fields(s: &SchemeSpec) -> Result<Vec<JetVF>, GeoError> {
    let w = s.dim_w();
    let mut out = Vec::new();
    for i in 0..w {
        out.push(lift_j(s, i, 0)?);
    }
    for i in 0..w {
        out.push(lift_t(s, i, 0)?);
    }
    Ok(out)
}

/// `J¹` lifts, `T¹` constants, the flow fields `Z_L`, then the brackets
/// `[Z_L, J_L]` for the first two `W` elements.
pub fn order1_fields(s: &SchemeSpec) -> Result<Vec<JetVF>, GeoError> {
    let w = s.dim_w();
    let (mut js, mut ts, mut zs) = (Vec::new(), Vec::new(), Vec::new());
    for i in 0..w {
        js.push(lift_j(s, i, 1)?);
        ts.push(lift_t(s, i, 1)?);
        zs.push(z_field(s, i)?);
    }
    let mut out: Vec<JetVF> = js.iter().chain(&ts).chain(&zs).cloned().collect();
    for i in 0..w.min(2) {
        out.push(zs[i].bracket(&js[i])?);
    }
    Ok(out)
}

/// The six base fields of [`order1_fields`] with every bracket `[Z_a, J_b]`.
pub fn order1_fields_all_brackets(s: &SchemeSpec) -> Result<Vec<JetVF>, GeoError> {
    let w = s.dim_w();
    let mut out: Vec<JetVF> = order1_fields(s)?.into_iter().take(3 * w).collect();
    for a in 0..w {
        for b in 0..w {
            out.push(z_field(s, a)?.bracket(&lift_j(s, b, 1)?)?);
        }
    }
    Ok(out)
}

/// `J²` lifts, `T²` constants, `Θ₁`, `Θ₂`.
pub fn order2_fields(s: &SchemeSpec) -> Result<Vec<JetVF>, GeoError> {
    let w = s.dim_w();
    let mut out = Vec::new();
    for i in 0..w {
        out.push(lift_j(s, i, 2)?);
    }
    for i in 0..w {
        out.push(lift_t(s, i, 2)?);
    }
    for i in 0..w {
        out.push(theta1(s, i)?);
    }
    for i in 0..w {
        out.push(theta2(s, i)?);
    }
    Ok(out)
}

/// The fields used for the order-`p` invariant count.
pub fn fields_for_order(s: &SchemeSpec, p: usize) -> Result<Vec<JetVF>, GeoError> {
    match p {
        0 => order0_fields(s),
        1 => order1_fields_all_brackets(s),
        2 => order2_fields(s),
        p => Err(GeoError::UnsupportedOrder(p)),
    }
}

/// Largest absolute entry, for quick sanity printing.
pub fn max_coefficient(f: &JetVF) -> f64 {
    let m = f.linear.max_abs();
    let c = f
        .constant
        .iter()
        .map(|x| x.abs())
        .fold(Q::zero(), |a, b| if b > a { b } else { a });
    q_to_f64(if c > m { &c } else { &m })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn abel() -> SchemeSpec {
        SchemeSpec::abel(3)
    }

    /// Field from a list of (target coordinate, source coordinate or None, coefficient).
    fn field(n: usize, entries: &[(usize, Option<usize>, i64)]) -> JetVF {
        let mut f = JetVF::zero(n);
        for &(i, j, c) in entries {
            match j {
                None => f.constant[i] = q(c),
                Some(j) => f.linear.set(i, j, q(c)),
            }
        }
        f
    }

    // index helper: λ_k^{(j)} with r = 4
    fn ix(k: usize, j: usize) -> usize {
        4 * j + k
    }

    #[test]
    fn j_lifts_reproduce_reference_fields() {
        let mut y1 = Vec::new();
        let mut y2 = Vec::new();
        for a in 0..3 {
            y1.extend([
                (ix(0, a), Some(ix(1, a)), 1),
                (ix(1, a), Some(ix(2, a)), 2),
                (ix(2, a), Some(ix(3, a)), 3),
            ]);
            y2.extend([
                (ix(0, a), Some(ix(0, a)), -1),
                (ix(2, a), Some(ix(2, a)), 1),
                (ix(3, a), Some(ix(3, a)), 2),
            ]);
        }
        assert_eq!(lift_j(&abel(), 0, 2).unwrap(), field(12, &y1));
        assert_eq!(lift_j(&abel(), 1, 2).unwrap(), field(12, &y2));
        let br = lift_j(&abel(), 0, 2).unwrap().bracket(&lift_j(&abel(), 1, 2).unwrap()).unwrap();
        assert_eq!(br, lift_j(&abel(), 0, 2).unwrap().scale(&q(-1)));
    }

    #[test]
    fn t_lifts_are_top_level_constants() {
        assert_eq!(lift_t(&abel(), 0, 2).unwrap(), JetVF::coordinate(12, ix(0, 2)));
        assert_eq!(lift_t(&abel(), 1, 1).unwrap(), JetVF::coordinate(8, ix(1, 1)));
        let (a, b) = (lift_t(&abel(), 0, 2).unwrap(), lift_t(&abel(), 1, 2).unwrap());
        assert!(a.bracket(&b).unwrap().is_zero());
        assert!(matches!(
            lift_t(&abel(), 2, 2),
            Err(GeoError::IndexOutOfRange { index: 2, len: 2 })
        ));
    }

    #[test]
    fn theta_fields_match_reference() {
        let t2 = field(
            12,
            &[
                (ix(0, 1), None, 1),
                (ix(0, 2), Some(ix(1, 0)), -1),
                (ix(1, 2), Some(ix(2, 0)), -2),
                (ix(2, 2), Some(ix(3, 0)), -3),
            ],
        );
        assert_eq!(theta2(&abel(), 0).unwrap(), t2);
        let t1 = field(
            12,
            &[
                (ix(0, 0), None, 1),
                (ix(0, 1), Some(ix(1, 0)), -1),
                (ix(1, 1), Some(ix(2, 0)), -2),
                (ix(2, 1), Some(ix(3, 0)), -3),
                (ix(0, 2), Some(ix(1, 1)), -2),
                (ix(1, 2), Some(ix(2, 1)), -4),
                (ix(2, 2), Some(ix(3, 1)), -6),
            ],
        );
        assert_eq!(theta1(&abel(), 0).unwrap(), t1);
    }

    #[test]
    fn z_fields_match_reference() {
        let z1 = field(
            8,
            &[
                (ix(0, 0), None, -1),
                (ix(0, 1), Some(ix(1, 0)), 1),
                (ix(1, 1), Some(ix(2, 0)), 2),
                (ix(2, 1), Some(ix(3, 0)), 3),
            ],
        );
        let z2 = field(
            8,
            &[
                (ix(1, 0), None, -1),
                (ix(0, 1), Some(ix(0, 0)), -1),
                (ix(2, 1), Some(ix(2, 0)), 1),
                (ix(3, 1), Some(ix(3, 0)), 2),
            ],
        );
        assert_eq!(z_field(&abel(), 0).unwrap(), z1);
        assert_eq!(z_field(&abel(), 1).unwrap(), z2);
    }

    #[test]
    fn field_counts() {
        assert_eq!(order0_fields(&abel()).unwrap().len(), 4);
        assert_eq!(order1_fields(&abel()).unwrap().len(), 8);
        assert_eq!(order1_fields_all_brackets(&abel()).unwrap().len(), 10);
        assert_eq!(order2_fields(&abel()).unwrap().len(), 8);
    }

    #[test]
    fn order_one_brackets_are_degenerate() {
        // [Z_L, J_L] vanishes; the mixed brackets are multiples of Z_1
        let z = |i| z_field(&abel(), i).unwrap();
        let j = |i| lift_j(&abel(), i, 1).unwrap();
        assert!(z(0).bracket(&j(0)).unwrap().is_zero());
        assert!(z(1).bracket(&j(1)).unwrap().is_zero());
        assert_eq!(z(0).bracket(&j(1)).unwrap(), z(0).scale(&q(-1)));
        assert_eq!(z(1).bracket(&j(0)).unwrap(), z(0));
    }

    #[test]
    fn display() {
        assert_eq!(JetVF::zero(3).to_string(), "0");
        let z = z_field(&abel(), 0).unwrap();
        assert_eq!(z.to_string(), "-1∂0 + l1∂4 + 2*l2∂5 + 3*l3∂6");
    }
}
