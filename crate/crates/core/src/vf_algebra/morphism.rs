//! Algebraic morphisms between quasi-Lie schemes.

use serde::Serialize;

use super::field::{in_span, PolyVF};
use super::linalg::QMatrix;
use super::scheme::SchemeSpec;
use super::VfError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum MorphismKind {
    NotAMorphism,
    Morphism,
    Monomorphism,
    Epimorphism,
    Isomorphism,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MorphismReport {
    /// `ad_{φ(X)} φ(Y) = φ(ad_X Y)` on every `W_1 × V_1` basis pair.
    pub equivariant: bool,
    /// `φ(W_1) ⊆ W_2`.
    pub maps_w_into_w: bool,
    pub rank: usize,
    pub kind: MorphismKind,
    /// First failing `(W_1 index, V_1 index)` pair.
    pub witness: Option<(usize, usize)>,
}

/// Checks whether the linear map `phi: V_1 → V_2` (a `dim V_2 × dim V_1`
/// matrix in the two `V` bases) is a morphism of schemes.
pub fn check_morphism(
    s1: &SchemeSpec,
    s2: &SchemeSpec,
    phi: &QMatrix,
) -> Result<MorphismReport, VfError> {
    let (n1, n2) = (s1.dim_v(), s2.dim_v());
    if phi.rows() != n2 || phi.cols() != n1 {
        return Err(VfError::ShapeMismatch {
            expected: (n2, n1),
            found: (phi.rows(), phi.cols()),
        });
    }
    let image = |coords: &[_]| -> Result<PolyVF, VfError> {
        PolyVF::linear_combination(&phi.mul_vec(coords), s2.v_basis())
    };

    let w1 = s1.w_coordinates()?;
    let w2 = s2.w_coordinates()?;
    let w2_fields: Vec<PolyVF> = w2
        .iter()
        .map(|c| PolyVF::linear_combination(c, s2.v_basis()))
        .collect::<Result<_, _>>()?;

    let mut witness = None;
    'outer: for (i, xc) in w1.iter().enumerate() {
        let x = PolyVF::linear_combination(xc, s1.v_basis())?;
        let phi_x = image(xc)?;
        for (j, yj) in s1.v_basis().iter().enumerate() {
            let br1 = x.bracket(yj)?;
            let br1_coords = in_span(&br1, s1.v_basis())?.ok_or(VfError::NotInSpan { index: j })?;
            let rhs = phi.mul_vec(&br1_coords);
            let phi_y = PolyVF::linear_combination(&phi.column(j), s2.v_basis())?;
            let lhs = in_span(&phi_x.bracket(&phi_y)?, s2.v_basis())?;
            if lhs.as_deref() != Some(rhs.as_slice()) {
                witness = Some((i, j));
                break 'outer;
            }
        }
    }
    let equivariant = witness.is_none();

    let maps_w_into_w = w1.iter().all(|xc| {
        image(xc)
            .ok()
            .and_then(|f| in_span(&f, &w2_fields).ok().flatten())
            .is_some()
    });

    let rank = phi.rank();
    let kind = if !(equivariant && maps_w_into_w) {
        MorphismKind::NotAMorphism
    } else {
        match (rank == n1, rank == n2) {
            (true, true) => MorphismKind::Isomorphism,
            (true, false) => MorphismKind::Monomorphism,
            (false, true) => MorphismKind::Epimorphism,
            (false, false) => MorphismKind::Morphism,
        }
    };
    Ok(MorphismReport {
        equivariant,
        maps_w_into_w,
        rank,
        kind,
        witness,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::vf_algebra::linalg::{q, Q};
    use num_traits::Zero;

    fn permutation(n: usize, f: impl Fn(usize) -> usize) -> QMatrix {
        let mut m = QMatrix::zeros(n, n);
        for i in 0..n {
            m.set(f(i), i, q(1));
        }
        m
    }

    #[test]
    fn abel_to_planar_is_isomorphism() {
        let r = check_morphism(&SchemeSpec::abel(3), &SchemeSpec::planar(), &QMatrix::identity(4))
            .unwrap();
        assert_eq!(r.kind, MorphismKind::Isomorphism);
        assert!(r.equivariant && r.maps_w_into_w);
    }

    #[test]
    fn identity_is_isomorphism() {
        let s = SchemeSpec::abel(3);
        let r = check_morphism(&s, &s, &QMatrix::identity(4)).unwrap();
        assert_eq!(r.kind, MorphismKind::Isomorphism);
    }

    #[test]
    fn reversal_breaks_equivariance() {
        let phi = permutation(4, |i| 3 - i);
        let r = check_morphism(&SchemeSpec::abel(3), &SchemeSpec::planar(), &phi).unwrap();
        assert!(!r.equivariant);
        assert_eq!(r.kind, MorphismKind::NotAMorphism);
        // ad_{Z_3} Z_3 = 0 but φ(ad_{Y_0} Y_0) = 0 too; first failure is (Y_0, Y_1):
        // [Z_3, Z_2] = -Z_4 ∉ V_2 while φ([Y_0, Y_1]) = φ(Y_0) = Z_3.
        assert_eq!(r.witness, Some((0, 1)));
    }

    #[test]
    fn projection_onto_affine_part_is_not_equivariant() {
        // V_Abel → V_Abel killing Y_2, Y_3 is an epimorphism candidate of rank 2.
        let mut phi = QMatrix::zeros(4, 4);
        phi.set(0, 0, q(1));
        phi.set(1, 1, q(1));
        let r = check_morphism(&SchemeSpec::abel(3), &SchemeSpec::abel(3), &phi).unwrap();
        assert_eq!(r.rank, 2);
        // [Y_0, Y_2] = 2Y_1 but φ(Y_2) = 0
        assert!(!r.equivariant);
    }

    #[test]
    fn shape_is_checked() {
        let s = SchemeSpec::abel(3);
        let phi = QMatrix::from_rows(vec![vec![Q::zero(); 3]; 4]);
        assert!(matches!(
            check_morphism(&s, &s, &phi),
            Err(VfError::ShapeMismatch { .. })
        ));
    }
}
