//! Ranks of the lifted distributions on jet spaces and the number of
//! functionally independent invariants they leave.

use quasilie::jet_geometry::{distribution_rank, fields_for_order, invariant_count};
use quasilie::sampling::normal_points;
use quasilie::vf_algebra::SchemeSpec;

fn main() {
    let s = SchemeSpec::abel(3);
    for p in 0..=2 {
        let fields = fields_for_order(&s, p).unwrap();
        let dim = (p + 1) * s.dim_v();
        let rep = distribution_rank(&fields, &normal_points(dim, 50, 7)).unwrap();
        println!(
            "p = {p}: dim {dim}, {} fields, generic rank {}, invariants {}",
            fields.len(),
            rep.generic_rank(),
            invariant_count(&s, p, 50, 7).unwrap()
        );
    }
    let fields = fields_for_order(&s, 2).unwrap();
    let rep = distribution_rank(&fields, &[vec![0.0; 12]]).unwrap();
    println!("rank at the origin of T²V: {}", rep.points[0].rank);
}
