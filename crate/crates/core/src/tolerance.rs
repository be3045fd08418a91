//! Default tolerances shared by the pipelines.

/// Relative tolerance for identities that hold symbolically.
pub const SYMBOLIC_RTOL: f64 = 1e-9;
/// Tolerance for residuals of sampled ODE solutions.
pub const ODE_TOL: f64 = 1e-6;
/// Relative tolerance of the integrability condition.
pub const CA_RTOL: f64 = 1e-8;
/// Residual of a reduced solution pulled back to the original equation.
pub const ROUND_TRIP_TOL: f64 = 1e-5;
/// Canonical-form coefficients that must vanish.
pub const CANONICAL_TOL: f64 = 1e-7;
