//! Searching for curves that map an equation onto ξ(t)(x² + x³).

use quasilie::abel_transform::{pushforward, AbelEquation, GroupCurve};
use quasilie::numerics::Grid;
use quasilie::reduction::onedim_candidates;

fn main() {
    let y = AbelEquation::parse(&["0", "0", "1 + t^2", "1 + t^2"]).unwrap();
    let h = GroupCurve::parse("sin(t)/2", "1 + t/2").unwrap();
    let x = pushforward(&y, &h).unwrap();
    let grid = Grid::new(0.0, 1.0, 512).unwrap();
    let rep = onedim_candidates(&x, [0.0, 0.0, 1.0, 1.0], &grid, 1e-6).unwrap();
    let inv = h.inverse();
    for b in &rep.branches {
        println!("branch on [{}, {}]: residual {:.2e}", b.t[0], b.t[b.t.len() - 1], b.residual);
        if let Some(c) = &b.certificate {
            let i = b.t.len() / 2;
            let e = inv.at(b.t[i]).unwrap();
            println!("  β = {:.9} (inverse curve {:.9})", b.beta[i], e.beta);
            println!("  α = {:.9} (inverse curve {:.9})", c.alpha[i], e.alpha);
            println!("  ξ = {:.9} (1 + t² = {:.9})", c.xi[i], 1.0 + b.t[i] * b.t[i]);
        }
    }
}
