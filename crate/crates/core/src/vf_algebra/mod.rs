//! Exact algebra of polynomial vector fields on ℝ and ℝ².
//!
//! Everything here is computed over the rationals: brackets, span
//! membership, normalizers, the scheme axioms `[W,W] ⊆ W ⊆ V`,
//! `[W,V] ⊆ V`, the representation `ρ_{W,V}` and morphism checks.
//! No tolerances are involved anywhere in this module.

pub mod field;
pub mod linalg;
pub mod morphism;
pub mod poly;
pub mod scheme;

use thiserror::Error;

pub use field::{in_span, span_rank, PolyVF};
pub use linalg::{q, q_frac, QMatrix, Q};
pub use morphism::{check_morphism, MorphismKind, MorphismReport};
pub use poly::Poly;
pub use scheme::{
    abel_basis, ad_matrix, affine_basis, check_scheme, normalizer, planar_fields,
    representation, AdMatrix, Axiom, SchemeReport, SchemeSpec, Witness,
};

#[derive(Debug, Error)]
pub enum VfError {
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("vector fields must live on R or R^2 (got dimension {0})")]
    InvalidDimension(usize),
    #[error("empty basis")]
    EmptyBasis,
    #[error("V basis is linearly dependent")]
    DependentBasis,
    #[error("element {index} does not lie in the required span")]
    NotInSpan { index: usize },
    #[error("degree cap {max_deg} is below the basis degree {required}")]
    DegreeCapTooSmall { max_deg: usize, required: usize },
    #[error("matrix shape {found:?}, expected {expected:?}")]
    ShapeMismatch {
        expected: (usize, usize),
        found: (usize, usize),
    },
    #[error("not a quasi-Lie scheme: {} witness(es)", .0.witnesses.len())]
    NotAScheme(Box<SchemeReport>),
    #[error("invalid vector field JSON: {0}")]
    Json(String),
}
