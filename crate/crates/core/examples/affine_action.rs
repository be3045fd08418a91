//! Pushing a cubic equation along a curve x = α x̄ + β and checking that
//! flows are conjugated.

use quasilie::abel_transform::{
    flow_conjugacy_residual, pushforward, AbelEquation, GroupCurve, GroupElement,
};

fn main() {
    let x = AbelEquation::parse(&["0", "0", "0", "1"]).unwrap();
    let g = GroupCurve::constant(GroupElement::new(1.0, 2.0).unwrap());
    let y = pushforward(&x, &g).unwrap();
    println!("(1, 2)★(x³) = {:?}", y.coeffs().iter().map(|c| c.to_string()).collect::<Vec<_>>());

    let x = AbelEquation::parse(&["cos(t)", "t", "1/2", "2 + sin(t)"]).unwrap();
    let g = GroupCurve::parse("sin(t)/3", "1 + t^2/4").unwrap();
    let y = pushforward(&x, &g).unwrap();
    println!("moved f̄1 = {}", y.coeff(1));
    let r = flow_conjugacy_residual(&x, &g, 0.1, 0.0, 0.5, 512).unwrap();
    println!("flow conjugacy residual on [0, 0.5]: {r:.3e}");

    let h = GroupCurve::parse("t", "2 - t/2").unwrap();
    let lhs = pushforward(&y, &h).unwrap();
    let rhs = pushforward(&x, &g.compose(&h)).unwrap();
    let ts: Vec<f64> = (0..=10).map(|i| i as f64 / 10.0).collect();
    let dev = quasilie::abel_transform::coefficient_deviation(&lhs, &rhs, &ts).unwrap();
    println!("action property deviation: {dev:.3e}");
}
