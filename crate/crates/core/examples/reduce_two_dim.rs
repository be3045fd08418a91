//! Integrability test, explicit reduction to λ₁Z₁ + λ₂Z₂ and the solution
//! obtained from the reduced Bernoulli equation.

use quasilie::numerics::Grid;
use quasilie::reduction::{check_ca, reduce_to_2d, BetaChoice, ReduceOptions};
use quasilie::sampling::{random_integrable, rng};

fn main() {
    let inst = random_integrable(&mut rng(4), 1.0);
    let x = &inst.equation;
    let grid = Grid::new(0.0, 0.5, 512).unwrap();
    let ca = check_ca(x, &grid.points(), 1e-8).unwrap();
    println!("integrability residual {:.3e} (relative {:.3e})", ca.max_residual, ca.relative);

    let h0 = inst.curve.at(0.0).unwrap();
    let x0 = (0.3 - 1.0 - h0.beta) / h0.alpha;
    let cert = reduce_to_2d(x, 1.0, &BetaChoice::Auto, &ReduceOptions::new(grid, x0)).unwrap();
    println!("β  = {}", cert.curve.beta);
    println!("α  = {}", cert.curve.alpha);
    println!("λ₁ = {}", cert.target.lambda1);
    println!("coefficient residual {:.3e}", cert.coefficient_residual);
    println!("solution residual    {:.3e}", cert.solution_residual);
    println!("x(0.5) = {:.12}", cert.x.last().unwrap());

    let bad = quasilie::abel_transform::AbelEquation::parse(&["1", "0", "0", "1"]).unwrap();
    println!("1 + x³: {}", reduce_to_2d(&bad, 1.0, &BetaChoice::Auto, &ReduceOptions::new(grid, 0.0)).unwrap_err());
}
