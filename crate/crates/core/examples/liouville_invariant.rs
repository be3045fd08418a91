//! Φ₃, Φ₅ and the absolute invariant F = Φ₃⁵/Φ₅³ along a curve of
//! equivalent equations.

use quasilie::abel_transform::{pushforward, AbelEquation, GroupCurve};
use quasilie::invariants::liouville_f;

fn main() {
    let x = AbelEquation::parse(&["sin(t)", "1", "t", "2 + cos(t)"]).unwrap();
    let g = GroupCurve::parse("t^2/5", "-1 - t/3").unwrap();
    let y = pushforward(&x, &g).unwrap();
    println!("{:>5} {:>22} {:>22}", "t", "F(X)", "F(g★X)");
    for i in 0..=5 {
        let t = i as f64 / 5.0;
        let a = liouville_f(&x, t).unwrap();
        let b = liouville_f(&y, t).unwrap();
        println!("{t:>5.2} {:>22.15e} {:>22.15e}", a.f.unwrap(), b.f.unwrap());
    }
    let c = liouville_f(&AbelEquation::constant(&[1.0, 0.0, 0.0, 1.0]).unwrap(), 0.0).unwrap();
    println!("1 + x³: Φ₃ = {}, Φ₅ = {}, F = {:?}", c.phi3, c.phi5, c.f);
}
