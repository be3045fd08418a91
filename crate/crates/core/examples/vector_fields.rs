//! Brackets, scheme axioms, normalizers and the adjoint representation.

use quasilie::vf_algebra::{
    abel_basis, check_scheme, in_span, normalizer, representation, PolyVF, SchemeSpec,
};

fn main() {
    let y: Vec<PolyVF> = abel_basis(3);
    let b = y[1].bracket(&y[3]).unwrap();
    println!("[x∂x, x³∂x] = {b}");
    println!("coordinates in V: {:?}", in_span(&b, &y).unwrap());

    for q in [2, 3, 4] {
        let n = normalizer(&abel_basis(q), q + 2).unwrap();
        let shown: Vec<String> = n.iter().map(|f| f.to_string()).collect();
        println!("normalizer of V_{q}: {}", shown.join(", "));
    }

    for (name, s) in [
        ("abel", SchemeSpec::abel(3)),
        ("riccati", SchemeSpec::riccati()),
        ("planar", SchemeSpec::planar()),
    ] {
        let r = check_scheme(&s);
        println!("{name}: scheme = {}", r.is_scheme());
    }

    for ad in representation(&SchemeSpec::abel(3)).unwrap() {
        println!(
            "ad of W[{}]: nilpotency index {:?}\n{:?}",
            ad.w_index,
            ad.matrix.nilpotency_index(),
            ad.matrix
        );
    }
}
