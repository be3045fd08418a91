//! Quasi-Lie schemes `S(W, V)`: axiom checks, normalizers and the
//! representation `X ↦ ad_X|_V`.

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::field::{in_span, span_rank, PolyVF};
use super::linalg::{q, QMatrix, Q};
use super::poly::Poly;
use super::VfError;

/// `V_Abel = ⟨Y_0, …, Y_q⟩` with `Y_k = x^k ∂/∂x`.
pub fn abel_basis(q_deg: usize) -> Vec<PolyVF> {
    (0..=q_deg).map(PolyVF::x_pow).collect()
}

/// `W_Abel = ⟨∂/∂x, x ∂/∂x⟩`.
pub fn affine_basis() -> Vec<PolyVF> {
    abel_basis(1)
}

/// The planar fields `Z_0 … Z_3`, real forms of `z^k ∂/∂z` with `z = x + iy`.
pub fn planar_fields() -> Vec<PolyVF> {
    let m = |i, j, c| Poly::monomial(i, j, q(c));
    vec![
        PolyVF::planar(m(0, 0, 1), Poly::zero()),
        PolyVF::planar(m(1, 0, 1), m(0, 1, 1)),
        PolyVF::planar(m(2, 0, 1) + m(0, 2, -1), m(1, 1, 2)),
        PolyVF::planar(m(3, 0, 1) + m(1, 2, -3), m(2, 1, 3)),
    ]
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SchemeSpec {
    #[serde(rename = "V_basis")]
    v_basis: Vec<PolyVF>,
    #[serde(rename = "W_basis")]
    w_basis: Vec<PolyVF>,
}

impl SchemeSpec {
    /// Validates dimensions and linear independence of `V`. The scheme
    /// axioms are checked separately by [`check_scheme`].
    pub fn new(w_basis: Vec<PolyVF>, v_basis: Vec<PolyVF>) -> Result<Self, VfError> {
        let spec = SchemeSpec { v_basis, w_basis };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<(), VfError> {
        let first = self.v_basis.first().ok_or(VfError::EmptyBasis)?;
        for f in self.v_basis.iter().chain(&self.w_basis) {
            if f.dim() != first.dim() {
                return Err(VfError::DimensionMismatch {
                    left: first.dim(),
                    right: f.dim(),
                });
            }
        }
        if span_rank(&self.v_basis) != self.v_basis.len() {
            return Err(VfError::DependentBasis);
        }
        Ok(())
    }

    /// `S(W_Abel, V_Abel)` for polynomial degree `q_deg`.
    pub fn abel(q_deg: usize) -> Self {
        SchemeSpec::new(affine_basis(), abel_basis(q_deg)).expect("Abel scheme")
    }

    /// `S(V_Ricc, V_Ricc)`.
    pub fn riccati() -> Self {
        SchemeSpec::new(abel_basis(2), abel_basis(2)).expect("Riccati scheme")
    }

    /// `S(⟨Z_0, Z_1⟩, ⟨Z_0, …, Z_3⟩)` on the plane.
    pub fn planar() -> Self {
        let z = planar_fields();
        SchemeSpec::new(z[..2].to_vec(), z).expect("planar scheme")
    }

    pub fn v_basis(&self) -> &[PolyVF] {
        &self.v_basis
    }

    pub fn w_basis(&self) -> &[PolyVF] {
        &self.w_basis
    }

    pub fn dim_v(&self) -> usize {
        self.v_basis.len()
    }

    pub fn dim_w(&self) -> usize {
        self.w_basis.len()
    }

    /// Coordinates of each `W` basis element in the `V` basis.
    pub fn w_coordinates(&self) -> Result<Vec<Vec<Q>>, VfError> {
        self.w_basis
            .iter()
            .enumerate()
            .map(|(i, w)| in_span(w, &self.v_basis)?.ok_or(VfError::NotInSpan { index: i }))
            .collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Axiom {
    /// `W ⊆ V`
    WInV,
    /// `[W, W] ⊆ W`
    WClosed,
    /// `[W, V] ⊆ V`
    WNormalizesV,
}

/// A basis element (or bracket of two) escaping the required span.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub axiom: Axiom,
    /// Index into `W_basis`.
    pub w_index: usize,
    /// Second bracket argument: a `W_basis` index for `WClosed`, a
    /// `V_basis` index for `WNormalizesV`, absent for `WInV`.
    pub other_index: Option<usize>,
    pub escaping: PolyVF,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SchemeReport {
    pub w_in_v: bool,
    pub w_closed: bool,
    pub w_normalizes_v: bool,
    pub witnesses: Vec<Witness>,
}

impl SchemeReport {
    pub fn is_scheme(&self) -> bool {
        self.w_in_v && self.w_closed && self.w_normalizes_v
    }
}

pub fn check_scheme(s: &SchemeSpec) -> SchemeReport {
    let mut witnesses = Vec::new();
    let w = s.w_basis();
    let v = s.v_basis();

    for (i, wi) in w.iter().enumerate() {
        if !matches!(in_span(wi, v), Ok(Some(_))) {
            witnesses.push(Witness {
                axiom: Axiom::WInV,
                w_index: i,
                other_index: None,
                escaping: wi.clone(),
            });
        }
    }
    for i in 0..w.len() {
        for j in (i + 1)..w.len() {
            let Ok(br) = w[i].bracket(&w[j]) else { continue };
            if !matches!(in_span(&br, w), Ok(Some(_))) {
                witnesses.push(Witness {
                    axiom: Axiom::WClosed,
                    w_index: i,
                    other_index: Some(j),
                    escaping: br,
                });
            }
        }
    }
    for (i, wi) in w.iter().enumerate() {
        for (j, vj) in v.iter().enumerate() {
            let Ok(br) = wi.bracket(vj) else { continue };
            if !matches!(in_span(&br, v), Ok(Some(_))) {
                witnesses.push(Witness {
                    axiom: Axiom::WNormalizesV,
                    w_index: i,
                    other_index: Some(j),
                    escaping: br,
                });
            }
        }
    }
    let fails = |a: Axiom| witnesses.iter().any(|wt| wt.axiom == a);
    SchemeReport {
        w_in_v: !fails(Axiom::WInV),
        w_closed: !fails(Axiom::WClosed),
        w_normalizes_v: !fails(Axiom::WNormalizesV),
        witnesses,
    }
}

/// Basis of `{f ∂/∂x : deg f ≤ max_deg, [f ∂/∂x, V] ⊆ V}`.
///
/// Only polynomial candidates are searched. For `V = ⟨1, x, …, x^q⟩ ∂/∂x`
/// every normalizing field is polynomial of degree at most `q + 1`, so the
/// result is the full normalizer once `max_deg ≥ q + 1`; this is not
/// re-proved at runtime. The basis is returned in reduced echelon form,
/// lowest degree first. Closure `[W, W] ⊆ W` is not imposed here.
pub fn normalizer(v_basis: &[PolyVF], max_deg: usize) -> Result<Vec<PolyVF>, VfError> {
    let first = v_basis.first().ok_or(VfError::EmptyBasis)?;
    if first.dim() != 1 || v_basis.iter().any(|f| f.dim() != 1) {
        return Err(VfError::InvalidDimension(2));
    }
    let v_deg = v_basis.iter().filter_map(PolyVF::degree).max().unwrap_or(0);
    if max_deg < v_deg {
        return Err(VfError::DegreeCapTooSmall {
            max_deg,
            required: v_deg,
        });
    }
    let r = v_basis.len();
    let n_a = max_deg + 1;
    let n_unknowns = n_a + r * r;
    // bracket degree bound: deg f + deg v_j - 1
    let n_deg = max_deg + v_deg + 1;
    let mut rows = vec![vec![Q::zero(); n_unknowns]; r * n_deg];

    for (j, vj) in v_basis.iter().enumerate() {
        for i in 0..n_a {
            let br = PolyVF::x_pow(i).bracket(vj)?;
            for ((d, _), c) in br.components()[0].terms() {
                rows[j * n_deg + d][i] += c;
            }
        }
        for (k, vk) in v_basis.iter().enumerate() {
            for ((d, _), c) in vk.components()[0].terms() {
                rows[j * n_deg + d][n_a + j * r + k] -= c;
            }
        }
    }

    let kernel = QMatrix::from_rows(rows).nullspace();
    if kernel.is_empty() {
        return Ok(Vec::new());
    }
    let projected: Vec<Vec<Q>> = kernel.into_iter().map(|v| v[..n_a].to_vec()).collect();
    let (reduced, pivots) = QMatrix::from_rows(projected).rref();
    Ok((0..pivots.len())
        .map(|i| PolyVF::from_coeffs(reduced.row(i).to_vec()))
        .collect())
}

/// Matrix of `ad_x` restricted to `V`: column `j` holds the coordinates of
/// `[x, V_j]` in the `V` basis.
pub fn ad_matrix(x: &PolyVF, v_basis: &[PolyVF]) -> Result<QMatrix, VfError> {
    let cols = v_basis
        .iter()
        .enumerate()
        .map(|(j, vj)| {
            in_span(&x.bracket(vj)?, v_basis)?.ok_or(VfError::NotInSpan { index: j })
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(QMatrix::from_columns(&cols, v_basis.len()))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AdMatrix {
    pub w_index: usize,
    pub matrix: QMatrix,
}

/// The representation `ρ_{W,V}` evaluated on each `W` basis element.
pub fn representation(s: &SchemeSpec) -> Result<Vec<AdMatrix>, VfError> {
    let report = check_scheme(s);
    if !report.is_scheme() {
        return Err(VfError::NotAScheme(Box::new(report)));
    }
    s.w_basis()
        .iter()
        .enumerate()
        .map(|(i, w)| {
            Ok(AdMatrix {
                w_index: i,
                matrix: ad_matrix(w, s.v_basis())?,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::vf_algebra::linalg::q_frac;

    fn y(k: usize) -> PolyVF {
        PolyVF::x_pow(k)
    }

    #[test]
    fn riccati_normalizer_is_itself() {
        assert_eq!(normalizer(&abel_basis(2), 4).unwrap(), abel_basis(2));
    }

    #[test]
    fn abel_normalizers_are_affine() {
        for (qd, cap) in [(3, 5), (4, 6), (5, 7)] {
            assert_eq!(normalizer(&abel_basis(qd), cap).unwrap(), affine_basis(), "q = {qd}");
        }
    }

    #[test]
    fn normalizer_errors() {
        assert!(matches!(normalizer(&[], 3), Err(VfError::EmptyBasis)));
        assert!(matches!(
            normalizer(&abel_basis(3), 2),
            Err(VfError::DegreeCapTooSmall { .. })
        ));
    }

    #[test]
    fn abel_and_riccati_are_schemes() {
        assert!(check_scheme(&SchemeSpec::abel(3)).is_scheme());
        assert!(check_scheme(&SchemeSpec::riccati()).is_scheme());
        assert!(check_scheme(&SchemeSpec::planar()).is_scheme());
    }

    #[test]
    fn non_closed_w_reports_witness() {
        let s = SchemeSpec::new(vec![y(0), y(2)], abel_basis(3)).unwrap();
        let report = check_scheme(&s);
        assert!(report.w_in_v);
        assert!(!report.w_closed);
        let wt = report
            .witnesses
            .iter()
            .find(|w| w.axiom == Axiom::WClosed)
            .unwrap();
        assert_eq!((wt.w_index, wt.other_index), (0, Some(1)));
        assert_eq!(wt.escaping, y(1).scale(&q(2)));
        // [Y_2, Y_3] = Y_4 also escapes V
        assert!(!report.w_normalizes_v);
    }

    #[test]
    fn representation_of_abel_scheme() {
        let reps = representation(&SchemeSpec::abel(3)).unwrap();
        let ad0 = &reps[0].matrix;
        let expected0 = QMatrix::from_rows(vec![
            vec![q(0), q(1), q(0), q(0)],
            vec![q(0), q(0), q(2), q(0)],
            vec![q(0), q(0), q(0), q(3)],
            vec![q(0), q(0), q(0), q(0)],
        ]);
        assert_eq!(ad0, &expected0);
        let ad1 = &reps[1].matrix;
        let mut diag = QMatrix::zeros(4, 4);
        for (i, d) in [-1, 0, 1, 2].into_iter().enumerate() {
            diag.set(i, i, q(d));
        }
        assert_eq!(ad1, &diag);
        assert!(ad0.pow(4).is_zero());
        // [Y_0, Y_1] = Y_0
        assert_eq!(&ad0.commutator(ad1), ad0);
    }

    #[test]
    fn representation_rejects_non_scheme() {
        let s = SchemeSpec::new(vec![y(2)], abel_basis(3)).unwrap();
        assert!(matches!(representation(&s), Err(VfError::NotAScheme(_))));
    }

    #[test]
    fn dependent_v_is_rejected() {
        let v = vec![y(0), y(0).scale(&q_frac(1, 2))];
        assert!(matches!(SchemeSpec::new(vec![], v), Err(VfError::DependentBasis)));
    }

    #[test]
    fn scheme_json_round_trip() {
        let s = SchemeSpec::abel(3);
        let text = serde_json::to_string(&s).unwrap();
        assert!(text.contains("\"V_basis\""));
        let back: SchemeSpec = serde_json::from_str(&text).unwrap();
        assert_eq!(back, s);
    }
}
