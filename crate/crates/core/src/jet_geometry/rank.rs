//! Pointwise rank of a family of fields, first-integral checks and the
//! resulting invariant counts.

use nalgebra::DMatrix;
use serde::Serialize;

use super::{fields_for_order, GeoError, JetPoint, JetVF};
use crate::invariants::{phi3_lambda, phi5_lambda, phi5_negligible, Lambda};
use crate::sampling;
use crate::tjet::Jet;
use crate::vf_algebra::SchemeSpec;

/// Singular values below `RANK_RTOL · σ_max` count as zero.
pub const RANK_RTOL: f64 = 1e-9;

#[derive(Clone, Debug, Serialize)]
pub struct PointRank {
    pub rank: usize,
    pub singular_values: Vec<f64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct RankReport {
    pub seed: Option<u64>,
    pub dim: usize,
    pub fields: usize,
    pub points: Vec<PointRank>,
}

impl RankReport {
    pub fn ranks(&self) -> Vec<usize> {
        self.points.iter().map(|p| p.rank).collect()
    }

    pub fn generic_rank(&self) -> usize {
        self.points.iter().map(|p| p.rank).max().unwrap_or(0)
    }

    pub fn count_at(&self, rank: usize) -> usize {
        self.points.iter().filter(|p| p.rank == rank).count()
    }
}

fn same_dim(fields: &[JetVF]) -> Result<usize, GeoError> {
    let n = fields.first().ok_or(GeoError::EmptyInput)?.dim();
    if let Some(f) = fields.iter().find(|f| f.dim() != n) {
        return Err(GeoError::DimensionMismatch(f.dim(), n));
    }
    Ok(n)
}

/// Numeric rank of the field values at each point, by SVD.
pub fn distribution_rank(fields: &[JetVF], points: &[Vec<f64>]) -> Result<RankReport, GeoError> {
    let n = same_dim(fields)?;
    if points.is_empty() {
        return Err(GeoError::EmptyInput);
    }
    let mut out = Vec::with_capacity(points.len());
    for pt in points {
        if pt.len() != n {
            return Err(GeoError::DimensionMismatch(pt.len(), n));
        }
        let rows: Vec<Vec<f64>> = fields.iter().map(|f| f.eval(pt)).collect();
        let m = DMatrix::from_fn(rows.len(), n, |i, j| rows[i][j]);
        let mut sv: Vec<f64> = m.singular_values().iter().copied().collect();
        sv.sort_by(|a, b| b.total_cmp(a));
        let smax = sv.first().copied().unwrap_or(0.0);
        let rank = if smax == 0.0 {
            0
        } else {
            sv.iter().filter(|&&s| s > RANK_RTOL * smax).count()
        };
        out.push(PointRank {
            rank,
            singular_values: sv,
        });
    }
    Ok(RankReport {
        seed: None,
        dim: n,
        fields: fields.len(),
        points: out,
    })
}

/// A function on `T²V` to be tested as a common first integral.
pub enum Candidate<'a> {
    /// `Φ₃⁵/Φ₅³` of the cubic Abel scheme, in cleared-denominator form.
    Liouville,
    /// Any function, evaluated on order-one jets seeded along a direction.
    Function(&'a dyn Fn(&[Jet]) -> Jet),
}

#[derive(Clone, Debug, Serialize)]
pub struct FirstIntegralReport {
    /// Max over (field, point) of the normalized directional derivative.
    pub max_normalized: f64,
    pub points_used: usize,
    pub points_skipped: usize,
}

fn seeded(point: &[f64], dir: &[f64]) -> Vec<Jet> {
    point
        .iter()
        .zip(dir)
        .map(|(&x, &v)| Jet::from_derivatives(vec![x, v]))
        .collect()
}

fn lambda_of(c: &[Jet]) -> Lambda<Jet> {
    [0, 1, 2, 3].map(|k| [0, 1, 2].map(|j| c[4 * j + k].clone()))
}

/// Directional derivatives of the candidate along each field at each point.
///
/// For `Liouville` the quantity is `|5Φ₅ v(Φ₃) − 3Φ₃ v(Φ₅)| / (1 + |Φ₃Φ₅|)`
/// and points with negligible `Φ₅` are skipped; for `Function` it is `|v(F)|`.
pub fn first_integral_check(
    candidate: &Candidate<'_>,
    fields: &[JetVF],
    points: &[Vec<f64>],
) -> Result<FirstIntegralReport, GeoError> {
    let n = same_dim(fields)?;
    if points.is_empty() {
        return Err(GeoError::EmptyInput);
    }
    if matches!(candidate, Candidate::Liouville) && n != 12 {
        return Err(GeoError::DimensionMismatch(n, 12));
    }
    let (mut worst, mut used, mut skipped) = (0.0f64, 0, 0);
    for pt in points {
        if pt.len() != n {
            return Err(GeoError::DimensionMismatch(pt.len(), n));
        }
        if let Candidate::Liouville = candidate {
            let l: Lambda<f64> = [0, 1, 2, 3].map(|k| [0, 1, 2].map(|j| pt[4 * j + k]));
            if phi5_negligible(phi3_lambda(&l), phi5_lambda(&l)) {
                skipped += 1;
                continue;
            }
        }
        used += 1;
        for f in fields {
            let c = seeded(pt, &f.eval(pt));
            let value = match candidate {
                Candidate::Liouville => {
                    let l = lambda_of(&c);
                    let (p3, p5) = (phi3_lambda(&l), phi5_lambda(&l));
                    (5.0 * p5.d(0) * p3.d(1) - 3.0 * p3.d(0) * p5.d(1)).abs()
                        / (1.0 + (p3.d(0) * p5.d(0)).abs())
                }
                Candidate::Function(func) => func(&c).d(1).abs(),
            };
            worst = worst.max(value);
        }
    }
    if used == 0 {
        return Err(GeoError::Degenerate);
    }
    Ok(FirstIntegralReport {
        max_normalized: worst,
        points_used: used,
        points_skipped: skipped,
    })
}

/// `dim T^pV` minus the largest rank seen at `samples` standard-normal points.
pub fn invariant_count(s: &SchemeSpec, p: usize, samples: usize, seed: u64) -> Result<usize, GeoError> {
    let fields = fields_for_order(s, p)?;
    let n = (p + 1) * s.dim_v();
    let points = sampling::normal_points(n, samples, seed);
    let report = distribution_rank(&fields, &points)?;
    Ok(n - report.generic_rank())
}

impl JetPoint {
    /// The point of `T²V` built from the 2-jets of a cubic equation's coefficients.
    pub fn from_equation(
        x: &crate::abel_transform::AbelEquation,
        t: f64,
    ) -> Result<JetPoint, crate::tjet::EvalError> {
        let jets = x.jets(t, 2)?;
        let levels: Vec<Vec<f64>> = (0..3).map(|j| jets.iter().map(|a| a.d(j)).collect()).collect();
        Ok(JetPoint::from_levels(&levels).expect("four coefficients"))
    }
}
