//! Parsing t-dependent coefficients and evaluating exact derivatives by jets.

use quasilie::tjet::parse;

fn main() {
    let f = parse("exp(t/2)*sin(3*t) + 1/(1 + t^2)").unwrap();
    println!("f   = {f}");
    println!("f'  = {}", f.derivative());
    let j = f.eval_jet(0.7, 4).unwrap();
    for k in 0..=4 {
        println!("f^({k})(0.7) = {:.15e}", j.d(k));
    }
    match parse("t^(1/2)") {
        Ok(_) => unreachable!(),
        Err(e) => println!("rejected: {e}"),
    }
}
