//! Seeded generators for test instances: jet-space points, polynomial
//! fields, smooth coefficient functions, equations and group curves.
//!
//! All constants in generated expressions are small exact rationals so the
//! printed forms are short and re-parse to the same tree.

use num_traits::Signed;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::abel_transform::{pushforward, AbelEquation, GroupCurve};
use crate::reduction::ReductionTarget2D;
use crate::tjet::{Expr, Func};
use crate::vf_algebra::linalg::{q_frac, Q};
use crate::vf_algebra::{Poly, PolyVF};

pub type SampleRng = ChaCha8Rng;

pub fn rng(seed: u64) -> SampleRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `count` points of `ℝ^dim` with independent standard normal coordinates.
pub fn normal_points(dim: usize, count: usize, seed: u64) -> Vec<Vec<f64>> {
    let mut r = rng(seed);
    (0..count)
        .map(|_| (0..dim).map(|_| r.sample(StandardNormal)).collect())
        .collect()
}

/// A rational `p/q` with `|p| ≤ num`, `1 ≤ q ≤ den`.
pub fn rational(r: &mut SampleRng, num: i64, den: i64) -> Q {
    q_frac(r.random_range(-num..=num), r.random_range(1..=den))
}

fn lit(c: Q) -> Expr {
    Expr::num(c)
}

/// Random polynomial field of degree ≤ `max_deg`, about half the monomials
/// populated.
pub fn random_poly_vf(r: &mut SampleRng, dim: usize, max_deg: usize) -> PolyVF {
    let comp = |r: &mut SampleRng| {
        let mut terms = Vec::new();
        for dx in 0..=max_deg {
            for dy in 0..=(if dim == 2 { max_deg - dx } else { 0 }) {
                if r.random_bool(0.5) {
                    terms.push(((dx, dy), rational(r, 9, 5)));
                }
            }
        }
        Poly::from_terms(terms)
    };
    let components = (0..dim).map(|_| comp(r)).collect();
    PolyVF::new(components).expect("dimension 1 or 2")
}

/// `c₀ + c₁t + c₂t²`.
fn quadratic(r: &mut SampleRng) -> Expr {
    let t = Expr::t;
    Expr::add(
        Expr::add(lit(rational(r, 3, 4)), Expr::mul(lit(rational(r, 3, 4)), t())),
        Expr::mul(lit(rational(r, 2, 4)), Expr::powi(t(), 2)),
    )
}

/// `a·f(ωt + φ)` for an entire `f`.
fn oscillation(r: &mut SampleRng) -> Expr {
    let f = [Func::Sin, Func::Cos, Func::Exp][r.random_range(0..3)];
    let omega = if f == Func::Exp {
        q_frac(r.random_range(-2..=2), 2)
    } else {
        q_frac(r.random_range(1..=6), 2)
    };
    let phase = rational(r, 3, 4);
    let arg = Expr::add(Expr::mul(lit(omega), Expr::t()), lit(phase));
    Expr::mul(lit(rational(r, 2, 3)), Expr::call(f, arg))
}

/// A smooth coefficient: quadratic plus one or two oscillations.
pub fn random_smooth(r: &mut SampleRng) -> Expr {
    let mut e = quadratic(r);
    for _ in 0..r.random_range(1..=2) {
        e = Expr::add(e, oscillation(r));
    }
    e
}

/// `a + b·sin(ωt + φ)` with `a ≥ |b| + margin`, so it stays ≥ margin.
pub fn random_positive(r: &mut SampleRng, margin: f64) -> Expr {
    let b = q_frac(r.random_range(-4..=4), 10);
    let extra = q_frac(r.random_range(0..=10), 10);
    let a = Q::from_float(margin).expect("finite") + b.abs() + extra;
    let arg = Expr::add(
        Expr::mul(lit(q_frac(r.random_range(1..=4), 2)), Expr::t()),
        lit(rational(r, 3, 4)),
    );
    Expr::add(lit(a), Expr::mul(lit(b), Expr::call(Func::Sin, arg)))
}

/// Cubic equation with smooth coefficients and `f₃ ≥ 1/2`.
pub fn random_equation(r: &mut SampleRng) -> AbelEquation {
    AbelEquation::new(vec![
        random_smooth(r),
        random_smooth(r),
        random_smooth(r),
        random_positive(r, 0.5),
    ])
    .expect("four coefficients")
}

/// Curve with `|α| ∈ [0.5, 2]` for every `t`, random orientation.
pub fn random_curve(r: &mut SampleRng) -> GroupCurve {
    let b = q_frac(r.random_range(-4..=4), 10);
    let a = q_frac(r.random_range(9..=12), 10);
    let arg = Expr::add(
        Expr::mul(lit(q_frac(r.random_range(1..=4), 2)), Expr::t()),
        lit(rational(r, 3, 4)),
    );
    let mut alpha = Expr::add(lit(a), Expr::mul(lit(b), Expr::call(Func::Cos, arg)));
    if r.random_bool(0.3) {
        alpha = Expr::neg(alpha);
    }
    GroupCurve::new(random_smooth(r), alpha)
}

/// Curve with `α > 0` (for the `f₃ > 0` reduction branch).
pub fn random_positive_curve(r: &mut SampleRng) -> GroupCurve {
    GroupCurve::new(random_smooth(r), random_positive(r, 0.5))
}

/// An equation satisfying the integrability condition by construction:
/// `λ₁Z₁ + λ₂Z₂` pushed forward along `curve`.
#[derive(Clone, Debug)]
pub struct IntegrableInstance {
    pub equation: AbelEquation,
    pub target: ReductionTarget2D,
    pub curve: GroupCurve,
}

pub fn random_integrable(r: &mut SampleRng, mu: f64) -> IntegrableInstance {
    let target = ReductionTarget2D::new(
        mu,
        random_positive(r, 0.5),
        Expr::mul(lit(q_frac(1, 4)), random_smooth(r)),
    );
    let curve = random_positive_curve(r);
    let equation = pushforward(&target.equation(), &curve).expect("cubic target");
    IntegrableInstance {
        equation,
        target,
        curve,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic_per_seed() {
        assert_eq!(normal_points(3, 4, 9), normal_points(3, 4, 9));
        assert_ne!(normal_points(3, 4, 9), normal_points(3, 4, 10));
        let a = random_equation(&mut rng(1));
        let b = random_equation(&mut rng(1));
        assert_eq!(a, b);
    }

    #[test]
    fn generated_text_round_trips() {
        let mut r = rng(5);
        for _ in 0..20 {
            let e = random_smooth(&mut r);
            let back = crate::tjet::parse(&e.to_string()).unwrap();
            for t in [-1.0, 0.0, 0.8] {
                assert!((back.eval(t).unwrap() - e.eval(t).unwrap()).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn curves_keep_alpha_away_from_zero() {
        let mut r = rng(2);
        for _ in 0..20 {
            let g = random_curve(&mut r);
            for i in 0..=40 {
                let a = g.alpha.eval(-2.0 + 0.1 * i as f64).unwrap().abs();
                assert!((0.5..=2.0).contains(&a), "{a}");
            }
        }
    }

    #[test]
    fn positive_coefficients() {
        let mut r = rng(3);
        for _ in 0..20 {
            let e = random_positive(&mut r, 0.5);
            for i in 0..=40 {
                assert!(e.eval(-2.0 + 0.1 * i as f64).unwrap() >= 0.5 - 1e-12);
            }
        }
    }
}
