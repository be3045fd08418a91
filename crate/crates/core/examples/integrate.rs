//! Fixed-step RK4 with blow-up detection and a residual check.

use quasilie::abel_transform::AbelEquation;
use quasilie::numerics::{integrate, residual};

fn main() {
    let x = AbelEquation::parse(&["0", "0", "0", "1"]).unwrap();
    let sol = integrate(&x, 1.0, 0.0, 0.45, 512).unwrap();
    let exact = 1.0 / (1.0f64 - 0.9).sqrt();
    println!("x(0.45) = {:.12} (exact {exact:.12})", sol.last());
    println!("global error estimate {:.2e}", sol.global_error_estimate);
    println!(
        "residual {:.2e} (expected size {:.2e})",
        residual(&sol.t, &sol.x, &x).unwrap(),
        sol.residual_estimate
    );

    let sol = integrate(&x, 1.0, 0.0, 1.0, 512).unwrap();
    println!("blow-up near t = {:?} (exact 0.5)", sol.blow_up);
}
