//! Given a particular solution β, remove the x⁰ and x¹ terms and rescale
//! time to reach x̄' = x̄³ + f̄₂(τ)x̄².

use quasilie::abel_transform::AbelEquation;
use quasilie::numerics::Grid;
use quasilie::reduction::canonical_form;
use quasilie::tjet::parse;

fn main() {
    // β = sin t is planted as a solution through f₀.
    let x = AbelEquation::parse(&[
        "cos(t) - (2 + cos(t))*sin(t)^3 - cos(t)*sin(t)^2 - t*sin(t)",
        "t",
        "cos(t)",
        "2 + cos(t)",
    ])
    .unwrap();
    let grid = Grid::new(0.0, 1.0, 512).unwrap();
    let c = canonical_form(&x, &parse("sin(t)").unwrap(), &grid, 1e-9).unwrap();
    println!("|f̄₀| ≤ {:.2e}, |f̄₁| ≤ {:.2e}", c.f0_residual, c.f1_residual);
    for i in (0..c.t.len()).step_by(128) {
        println!("t = {:.3}  τ = {:.6}  f̄₂ = {:.6}", c.t[i], c.tau[i], c.f2_bar[i]);
    }
}
