//! One test per acceptance criterion. Each prints a single PASS/FAIL line
//! with the measured quantity, its pinned tolerance and the elapsed time.

use std::time::{Duration, Instant};

use quasilie::abel_transform::{coefficient_deviation, pushforward, AbelEquation};
use quasilie::invariants::liouville_f;
use quasilie::jet_geometry::{
    distribution_rank, fields_for_order, first_integral_check, invariant_count, lift_j, lift_t,
    order2_fields, theta1, theta2, Candidate, JetVF,
};
use quasilie::numerics::Grid;
use quasilie::reduction::{
    canonical_form, check_ca, reduce_to_2d, BetaChoice, ReduceOptions,
};
use quasilie::sampling::{
    normal_points, random_curve, random_equation, random_integrable, random_positive,
    random_smooth, rng,
};
use quasilie::tjet::{parse, Expr};
use quasilie::vf_algebra::{
    abel_basis, affine_basis, check_morphism, in_span, normalizer, planar_fields, q, MorphismKind, QMatrix,
    SchemeSpec,
};

fn report(id: &str, pass: bool, detail: String, elapsed: Duration) -> bool {
    println!(
        "criterion {id}: {} | {detail} | {:.3} s",
        if pass { "PASS" } else { "FAIL" },
        elapsed.as_secs_f64()
    );
    pass
}

fn grid_points(t0: f64, t1: f64, n: usize) -> Vec<f64> {
    Grid::new(t0, t1, n).unwrap().points()
}

#[test]
fn criterion_01_normalizers() {
    const LIMIT: Duration = Duration::from_secs(1);
    let mut ok = true;
    let mut worst = Duration::ZERO;
    let start = Instant::now();
    let ricc = normalizer(&abel_basis(2), 4).unwrap();
    worst = worst.max(start.elapsed());
    ok &= ricc == abel_basis(2);
    for qd in [3, 4, 5] {
        let start = Instant::now();
        let n = normalizer(&abel_basis(qd), qd + 2).unwrap();
        worst = worst.max(start.elapsed());
        ok &= n == affine_basis();
    }
    let pass = ok && worst < LIMIT;
    assert!(report(
        "1",
        pass,
        format!("exact match {ok}, slowest {:.3} s < {LIMIT:?}", worst.as_secs_f64()),
        worst
    ));
}

#[test]
fn criterion_02_liouville_invariance() {
    const TOL: f64 = 1e-7;
    const LIMIT: Duration = Duration::from_secs(30);
    let start = Instant::now();
    let mut r = rng(2002);
    let ts = grid_points(0.0, 1.0, 16);
    let ts = &ts[..10];
    let (mut worst, mut undefined) = (0.0f64, 0);
    for _ in 0..100 {
        let x = random_equation(&mut r);
        let g = random_curve(&mut r);
        let y = pushforward(&x, &g).unwrap();
        for &t in ts {
            match (liouville_f(&x, t).unwrap().f, liouville_f(&y, t).unwrap().f) {
                (Some(a), Some(b)) => worst = worst.max((b - a).abs() / (1.0 + a.abs())),
                (None, None) => undefined += 1,
                _ => worst = f64::INFINITY,
            }
        }
    }
    let el = start.elapsed();
    assert!(report(
        "2",
        worst <= TOL && el < LIMIT,
        format!("max relative |ΔF| {worst:.3e} ≤ {TOL:e} ({undefined} undefined points)"),
        el
    ));
}

#[test]
fn criterion_03_first_integral() {
    const TOL: f64 = 1e-9;
    const LIMIT: Duration = Duration::from_secs(5);
    let start = Instant::now();
    let fields = order2_fields(&SchemeSpec::abel(3)).unwrap();
    let pts = normal_points(12, 100, 3003);
    let rep = first_integral_check(&Candidate::Liouville, &fields, &pts).unwrap();
    let el = start.elapsed();
    assert!(report(
        "3",
        rep.max_normalized <= TOL && el < LIMIT,
        format!(
            "max normalized derivative {:.3e} ≤ {TOL:e} over {} fields, {} points",
            rep.max_normalized,
            fields.len(),
            rep.points_used
        ),
        el
    ));
}

#[test]
fn criterion_04a_rank_order_two() {
    const LIMIT: Duration = Duration::from_secs(5);
    let start = Instant::now();
    let s = SchemeSpec::abel(3);
    let rep = distribution_rank(&fields_for_order(&s, 2).unwrap(), &normal_points(12, 50, 4004))
        .unwrap();
    let hits = rep.count_at(8);
    let count = invariant_count(&s, 2, 50, 4004).unwrap();
    let el = start.elapsed();
    assert!(report(
        "4a",
        hits >= 49 && rep.generic_rank() == 8 && count == 4 && el < LIMIT,
        format!("rank 8 at {hits}/50 points (need ≥ 49), invariant count {count} (need 4)"),
        el
    ));
}

#[test]
fn criterion_04b_rank_order_one() {
    const LIMIT: Duration = Duration::from_secs(5);
    let start = Instant::now();
    let s = SchemeSpec::abel(3);
    let rep = distribution_rank(&fields_for_order(&s, 1).unwrap(), &normal_points(8, 50, 4005))
        .unwrap();
    let count = invariant_count(&s, 1, 50, 4005).unwrap();
    let el = start.elapsed();
    assert!(report(
        "4b",
        rep.generic_rank() == 8 && count == 0 && el < LIMIT,
        format!(
            "generic rank {} on R^8 (need 8), invariant count {count} (need 0)",
            rep.generic_rank()
        ),
        el
    ));
}

#[test]
fn criterion_05_structure_constants() {
    const LIMIT: Duration = Duration::from_secs(1);
    let start = Instant::now();
    let s = SchemeSpec::abel(3);
    let (y1j, y2j) = (lift_j(&s, 0, 2).unwrap(), lift_j(&s, 1, 2).unwrap());
    let (y1t, y2t) = (lift_t(&s, 0, 2).unwrap(), lift_t(&s, 1, 2).unwrap());
    let (t1a, t1b) = (theta1(&s, 0).unwrap(), theta1(&s, 1).unwrap());
    let (t2a, t2b) = (theta2(&s, 0).unwrap(), theta2(&s, 1).unwrap());
    let br = |a: &JetVF, b: &JetVF| a.bracket(b).unwrap();
    let m = |f: &JetVF, c: i64| f.scale(&q(c));
    let checks = [
        br(&y1j, &y2j) == m(&y1j, -1),
        br(&y1j, &y2t) == m(&y1t, -1),
        br(&y2j, &y1t) == y1t,
        br(&t2a, &y2j) == m(&t2a, -1),
        br(&t2b, &y1j) == t2a,
        br(&t1a, &t1b) == m(&t2a, 2),
        br(&t1a, &y2j) == m(&t1a, -1),
        br(&t1a, &t2b) == m(&y1t, 3),
        br(&t1b, &y1j) == t1a,
        br(&t1b, &t2a) == m(&y1t, -3),
    ];
    let held = checks.iter().filter(|&&c| c).count();
    let el = start.elapsed();
    assert!(report(
        "5",
        held == 10 && el < LIMIT,
        format!("{held}/10 identities hold exactly"),
        el
    ));
}

#[test]
fn criterion_06_reduction_round_trip() {
    const CA_TOL: f64 = 1e-8;
    const ODE_TOL: f64 = 1e-5;
    const LIMIT: Duration = Duration::from_secs(60);
    let start = Instant::now();
    let mus = [0.0, 0.5, -0.5, 1.0, -1.0];
    let grid = Grid::new(0.0, 0.5, 512).unwrap();
    let (mut ca_worst, mut sol_worst, mut issued) = (0.0f64, 0.0f64, 0);
    let mut failures = Vec::new();
    for i in 0..20u64 {
        let mu = mus[i as usize % mus.len()];
        let inst = random_integrable(&mut rng(6000 + i), mu);
        let ca = check_ca(&inst.equation, &grid.points(), CA_TOL).unwrap();
        ca_worst = ca_worst.max(ca.relative);
        // z = x̄ + μ starts at 0.3 in target coordinates.
        let h0 = inst.curve.at(0.0).unwrap();
        let x0 = (0.3 - mu - h0.beta) / h0.alpha;
        let mut opts = ReduceOptions::new(grid, x0);
        opts.ode_tol = ODE_TOL;
        match reduce_to_2d(&inst.equation, mu, &BetaChoice::Auto, &opts) {
            Ok(c) => {
                issued += 1;
                sol_worst = sol_worst.max(c.solution_residual);
            }
            Err(e) => failures.push(format!("seed {}: {e}", 6000 + i)),
        }
    }
    let el = start.elapsed();
    let pass = ca_worst <= CA_TOL && issued == 20 && sol_worst <= ODE_TOL && el < LIMIT;
    assert!(
        report(
            "6",
            pass,
            format!(
                "CA relative {ca_worst:.3e} ≤ {CA_TOL:e}, certificates {issued}/20, \
                 pulled-back residual {sol_worst:.3e} ≤ {ODE_TOL:e}"
            ),
            el
        ),
        "{failures:?}"
    );
}

#[test]
fn criterion_07_ca_orbit_invariance() {
    const RTOL: f64 = 1e-8;
    const LIMIT: Duration = Duration::from_secs(30);
    let start = Instant::now();
    let ts = grid_points(0.0, 1.0, 32);
    let mut r = rng(7007);
    let (mut kept_pass, mut kept_fail) = (0, 0);
    for i in 0..30 {
        let inst = random_integrable(&mut r, [0.0, 1.0, -2.0][i % 3]);
        let g = random_curve(&mut r);
        let before = check_ca(&inst.equation, &ts, RTOL).unwrap().passes;
        let after = check_ca(&pushforward(&inst.equation, &g).unwrap(), &ts, RTOL).unwrap();
        kept_pass += usize::from(before && after.passes);
    }
    for _ in 0..30 {
        let x = random_equation(&mut r);
        let g = random_curve(&mut r);
        let before = check_ca(&x, &ts, RTOL).unwrap().passes;
        let after = check_ca(&pushforward(&x, &g).unwrap(), &ts, RTOL).unwrap().passes;
        kept_fail += usize::from(!before && !after);
    }
    let el = start.elapsed();
    assert!(report(
        "7",
        kept_pass == 30 && kept_fail == 30 && el < LIMIT,
        format!("passing kept {kept_pass}/30, failing kept {kept_fail}/30 at rtol {RTOL:e}"),
        el
    ));
}

#[test]
fn criterion_08_canonical_form() {
    const TOL: f64 = 1e-7;
    const COROLLARY_TOL: f64 = 1e-10;
    let start = Instant::now();
    let grid = Grid::new(0.0, 1.0, 512).unwrap();
    let mut r = rng(8008);
    let mut worst = 0.0f64;
    let mut monotone = 0;
    for _ in 0..10 {
        let beta = random_smooth(&mut r);
        let (f1, f2, f3) = (random_smooth(&mut r), random_smooth(&mut r), random_positive(&mut r, 0.5));
        let rhs = Expr::add(
            Expr::add(
                Expr::mul(f3.clone(), Expr::powi(beta.clone(), 3)),
                Expr::mul(f2.clone(), Expr::powi(beta.clone(), 2)),
            ),
            Expr::mul(f1.clone(), beta.clone()),
        );
        let f0 = Expr::sub(Expr::deriv(beta.clone()), rhs);
        let x = AbelEquation::new(vec![f0, f1, f2, f3]).unwrap();
        if let Ok(c) = canonical_form(&x, &beta, &grid, 1e-9) {
            monotone += usize::from(c.tau.windows(2).all(|w| w[1] > w[0]));
            worst = worst.max(c.f0_residual).max(c.f1_residual);
        } else {
            worst = f64::INFINITY;
        }
    }
    let f2 = parse("3/sqrt(1 + 4*t)").unwrap();
    let mut corollary = 0.0f64;
    for t in grid.points() {
        let j = f2.eval_jet(t, 1).unwrap();
        corollary = corollary.max((9.0 * j.d(1) + 2.0 * j.d(0).powi(3)).abs());
    }
    let el = start.elapsed();
    assert!(report(
        "8",
        worst <= TOL && monotone == 10 && corollary <= COROLLARY_TOL,
        format!(
            "max |f̄0|,|f̄1| {worst:.3e} ≤ {TOL:e}, increasing τ {monotone}/10, \
             corollary residual {corollary:.3e} ≤ {COROLLARY_TOL:e}"
        ),
        el
    ));
}

#[test]
fn criterion_09_morphism() {
    let start = Instant::now();
    let (abel, planar) = (SchemeSpec::abel(3), SchemeSpec::planar());
    let rep = check_morphism(&abel, &planar, &QMatrix::identity(4)).unwrap();
    let (y, z) = (abel_basis(3), planar_fields());
    let mut transported = true;
    for i in 0..2 {
        for j in 0..4 {
            let cy = in_span(&y[i].bracket(&y[j]).unwrap(), &y).unwrap();
            if let Some(cy) = cy {
                let cz = in_span(&z[i].bracket(&z[j]).unwrap(), &z).unwrap();
                transported &= cz.as_ref() == Some(&cy);
            }
        }
    }
    let el = start.elapsed();
    assert!(report(
        "9",
        rep.kind == MorphismKind::Isomorphism && rep.equivariant && rep.maps_w_into_w && transported,
        format!(
            "kind {:?}, equivariant {}, W into W {}, brackets transported {transported}",
            rep.kind, rep.equivariant, rep.maps_w_into_w
        ),
        el
    ));
}

#[test]
fn criterion_10_group_law() {
    const TOL: f64 = 1e-9;
    let start = Instant::now();
    let ts = grid_points(0.0, 1.0, 16);
    let mut r = rng(1010);
    let (mut comp, mut inv) = (0.0f64, 0.0f64);
    for _ in 0..50 {
        let x = random_equation(&mut r);
        let (g, h) = (random_curve(&mut r), random_curve(&mut r));
        let stepwise = pushforward(&pushforward(&x, &g).unwrap(), &h).unwrap();
        let once = pushforward(&x, &g.compose(&h)).unwrap();
        comp = comp.max(coefficient_deviation(&stepwise, &once, &ts).unwrap());
        let back = pushforward(&pushforward(&x, &g).unwrap(), &g.inverse()).unwrap();
        inv = inv.max(coefficient_deviation(&back, &x, &ts).unwrap());
    }
    let el = start.elapsed();
    assert!(report(
        "10",
        comp <= TOL && inv <= TOL,
        format!("composition {comp:.3e}, inversion {inv:.3e}, both ≤ {TOL:e}"),
        el
    ));
}
