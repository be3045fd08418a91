//! Seeded property tests across modules.

use proptest::prelude::*;

use quasilie::abel_transform::{coefficient_deviation, pushforward};
use quasilie::invariants::liouville_f;
use quasilie::reduction::check_ca;
use quasilie::sampling::{
    random_curve, random_equation, random_integrable, random_poly_vf, rng,
};
use quasilie::vf_algebra::{abel_basis, in_span, normalizer, PolyVF};

fn grid() -> Vec<f64> {
    (0..8).map(|i| i as f64 / 8.0).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn bracket_is_antisymmetric(seed in any::<u64>(), dim in 1usize..=2) {
        let mut r = rng(seed);
        let (a, b) = (random_poly_vf(&mut r, dim, 3), random_poly_vf(&mut r, dim, 3));
        let ab = a.bracket(&b).unwrap();
        let ba = b.bracket(&a).unwrap();
        prop_assert!(ab.add(&ba).unwrap().is_zero());
    }

    #[test]
    fn jacobi_identity(seed in any::<u64>(), dim in 1usize..=2) {
        let mut r = rng(seed);
        let f: Vec<PolyVF> = (0..3).map(|_| random_poly_vf(&mut r, dim, 3)).collect();
        let cyc = |a: &PolyVF, b: &PolyVF, c: &PolyVF| a.bracket(&b.bracket(c).unwrap()).unwrap();
        let sum = cyc(&f[0], &f[1], &f[2])
            .add(&cyc(&f[1], &f[2], &f[0])).unwrap()
            .add(&cyc(&f[2], &f[0], &f[1])).unwrap();
        prop_assert!(sum.is_zero());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    /// Every normalizer element maps V into V, and normalizing the
    /// normalizer of a space that contains it returns the same space.
    #[test]
    fn normalizer_is_sound_and_stable(mask in 1u8..=63) {
        let v: Vec<PolyVF> = (0..6).filter(|k| mask & (1 << k) != 0).map(PolyVF::x_pow).collect();
        let n = normalizer(&v, 7).unwrap();
        for x in &n {
            for y in &v {
                prop_assert!(in_span(&x.bracket(y).unwrap(), &v).unwrap().is_some());
            }
        }
        if !n.is_empty() && n.iter().all(|x| in_span(x, &v).unwrap().is_some()) {
            let again = normalizer(&n, 7).unwrap();
            prop_assert!(n.iter().all(|x| in_span(x, &again).unwrap().is_some()));
        }
    }
}

#[test]
fn normalizer_fixed_points() {
    let a = normalizer(&abel_basis(3), 5).unwrap();
    assert_eq!(normalizer(&a, 5).unwrap(), a);
    let r = abel_basis(2);
    assert_eq!(normalizer(&r, 5).unwrap(), r);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(50))]

    #[test]
    fn group_law(seed in any::<u64>()) {
        let mut r = rng(seed);
        let x = random_equation(&mut r);
        let (g, h) = (random_curve(&mut r), random_curve(&mut r));
        let ts = grid();
        let stepwise = pushforward(&pushforward(&x, &g).unwrap(), &h).unwrap();
        let once = pushforward(&x, &g.compose(&h)).unwrap();
        prop_assert!(coefficient_deviation(&stepwise, &once, &ts).unwrap() < 1e-9);
        let back = pushforward(&pushforward(&x, &g).unwrap(), &g.inverse()).unwrap();
        prop_assert!(coefficient_deviation(&back, &x, &ts).unwrap() < 1e-9);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn liouville_invariance(seed in any::<u64>()) {
        let mut r = rng(seed);
        let x = random_equation(&mut r);
        let g = random_curve(&mut r);
        let y = pushforward(&x, &g).unwrap();
        for t in [0.0, 0.35, 0.9] {
            let (a, b) = (liouville_f(&x, t).unwrap(), liouville_f(&y, t).unwrap());
            let w = g.alpha.eval(t).unwrap().powi(3);
            prop_assert!((a.phi3 * w - b.phi3).abs() <= 1e-8 * (1.0 + a.phi3.abs()) * w.abs());
            if let (Some(fa), Some(fb)) = (a.f, b.f) {
                prop_assert!((fa - fb).abs() <= 1e-7 * (1.0 + fa.abs()));
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(30))]

    #[test]
    fn integrability_is_orbit_invariant(seed in any::<u64>(), mu in -2.0f64..2.0) {
        let mut r = rng(seed);
        let ts = grid();
        let inst = random_integrable(&mut r, (mu * 4.0).round() / 4.0);
        let g = random_curve(&mut r);
        prop_assert!(check_ca(&pushforward(&inst.equation, &g).unwrap(), &ts, 1e-8).unwrap().passes);
        let x = random_equation(&mut r);
        let before = check_ca(&x, &ts, 1e-8).unwrap().passes;
        let after = check_ca(&pushforward(&x, &g).unwrap(), &ts, 1e-8).unwrap().passes;
        prop_assert_eq!(before, after);
    }
}
