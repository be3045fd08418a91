pub mod abel_transform;
pub mod invariants;
pub mod cli;
pub mod jet_geometry;
pub mod numerics;
pub mod reduction;
pub mod sampling;
pub mod tjet;
pub mod tolerance;
pub mod vf_algebra;
