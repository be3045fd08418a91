use serde::Serialize;

use super::{require_cubic, require_positive_f3, ReductionError};
use crate::abel_transform::AbelEquation;
use crate::numerics::{gradient4, Grid};

/// Dense polynomials in β, lowest degree first.
type P = Vec<f64>;

fn padd(a: &[f64], b: &[f64]) -> P {
    let mut out = vec![0.0; a.len().max(b.len())];
    for (i, v) in a.iter().enumerate() {
        out[i] += v;
    }
    for (i, v) in b.iter().enumerate() {
        out[i] += v;
    }
    out
}

fn pmul(a: &[f64], b: &[f64]) -> P {
    let mut out = vec![0.0; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn pscale(a: &[f64], c: f64) -> P {
    a.iter().map(|v| v * c).collect()
}

fn peval(a: &[f64], x: f64) -> f64 {
    a.iter().rev().fold(0.0, |acc, c| acc * x + c)
}

fn newton(c: &[f64], mut x: f64) -> f64 {
    let dc: Vec<f64> = c.iter().enumerate().skip(1).map(|(i, v)| i as f64 * v).collect();
    for _ in 0..3 {
        let d = peval(&dc, x);
        if d == 0.0 {
            break;
        }
        let step = peval(c, x) / d;
        if !step.is_finite() {
            break;
        }
        x -= step;
    }
    x
}

/// Real roots of a polynomial of degree ≤ 3, ascending. The flag is set
/// when a negligible leading coefficient was dropped.
pub fn real_roots(c: &[f64]) -> (Vec<f64>, bool) {
    let mut c = c.to_vec();
    let big = c.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let declared = c.len();
    while c.len() > 1 && c.last().unwrap().abs() <= 1e-12 * big {
        c.pop();
    }
    let degenerate = c.len() < declared && declared == 4;
    let mut roots = match c.len() {
        0 | 1 => vec![],
        2 => vec![-c[0] / c[1]],
        3 => {
            let (a, b, k) = (c[2], c[1], c[0]);
            let disc = b * b - 4.0 * a * k;
            if disc < 0.0 {
                vec![]
            } else {
                let q = -0.5 * (b + b.signum() * disc.sqrt());
                if q == 0.0 {
                    vec![0.0, 0.0]
                } else {
                    vec![q / a, k / q]
                }
            }
        }
        _ => {
            let (a, b, k) = (c[2] / c[3], c[1] / c[3], c[0] / c[3]);
            let p = b - a * a / 3.0;
            let q = 2.0 * a * a * a / 27.0 - a * b / 3.0 + k;
            let disc = (q / 2.0).powi(2) + (p / 3.0).powi(3);
            let shift = -a / 3.0;
            if disc > 0.0 {
                let s = disc.sqrt();
                vec![(-q / 2.0 + s).cbrt() + (-q / 2.0 - s).cbrt() + shift]
            } else if p == 0.0 {
                vec![shift]
            } else {
                let r = 2.0 * (-p / 3.0).sqrt();
                let arg = (3.0 * q / (p * r)).clamp(-1.0, 1.0);
                let phi = arg.acos() / 3.0;
                (0..3)
                    .map(|k| r * (phi - 2.0 * std::f64::consts::PI * k as f64 / 3.0).cos() + shift)
                    .collect()
            }
        }
    };
    for x in &mut roots {
        *x = newton(&c, *x);
    }
    roots.sort_by(|a, b| a.total_cmp(b));
    (roots, degenerate)
}

#[derive(Clone, Debug, Serialize)]
pub struct BranchCertificate {
    pub alpha: Vec<f64>,
    pub xi: Vec<f64>,
    /// Max relative deviation of `g★X` from `ξ(t)·(c₀ + c₁x + c₂x² + c₃x³)`.
    pub coefficient_residual: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct Branch {
    pub t: Vec<f64>,
    pub beta: Vec<f64>,
    /// Max of `|β̇ − P(β)|/(1 + |P(β)|)` with `β̇` from differences.
    pub residual: f64,
    pub certificate: Option<BranchCertificate>,
}

#[derive(Clone, Debug, Serialize)]
pub struct OneDimReport {
    pub c: [f64; 4],
    pub branches: Vec<Branch>,
    pub warnings: Vec<String>,
}

struct Local {
    f: [f64; 4],
    u: P,
    slope: P,
    /// `β̇` as a polynomial in β.
    rate: P,
    cubic: P,
}

fn local(x: &AbelEquation, c: &[f64; 4], t: f64) -> Result<Local, ReductionError> {
    let j = x.jets(t, 1)?;
    let f = [0, 1, 2, 3].map(|k| j[k].d(0));
    let (df2, df3) = (j[2].d(1), j[3].d(1));
    let [c0, c1, c2, c3] = *c;
    let u = vec![f[2], 3.0 * f[3]];
    let slope = vec![f[1], 2.0 * f[2], 3.0 * f[3]];
    let u3 = pmul(&pmul(&u, &u), &u);
    let rate = padd(&f, &pscale(&u3, -c3 * c3 * c0 / (c2 * c2 * c2 * f[3] * f[3])));
    let cubic = padd(
        &padd(&pmul(&pscale(&u, f[3]), &slope), &[f[2] * df3 - f[3] * df2]),
        &padd(
            &pscale(&rate, -3.0 * f[3] * f[3]),
            &pscale(&u3, -c1 * c3 / (c2 * c2)),
        ),
    );
    Ok(Local {
        f,
        u,
        slope,
        rate,
        cubic,
    })
}

struct Track {
    start: usize,
    beta: Vec<f64>,
    open: bool,
}

/// Pointwise roots of the cubic obtained by eliminating `β̇` from the two
/// conditions for `g★X = ξ(t)·Σ c_k x^k`, linked into continuous branches.
/// Each branch is checked against `β̇ = P(β)`; branches covering the whole
/// grid and passing both checks carry a certificate.
pub fn onedim_candidates(
    x: &AbelEquation,
    c: [f64; 4],
    grid: &Grid,
    tol: f64,
) -> Result<OneDimReport, ReductionError> {
    require_cubic(x)?;
    if c[2] * c[3] == 0.0 {
        return Err(ReductionError::InvalidConstants);
    }
    let ts = grid.points();
    require_positive_f3(x, &ts)?;
    let h = grid.step();
    let locals = ts
        .iter()
        .map(|&t| local(x, &c, t))
        .collect::<Result<Vec<_>, _>>()?;

    let mut warnings = Vec::new();
    let mut tracks: Vec<Track> = Vec::new();
    for (i, loc) in locals.iter().enumerate() {
        let (roots, degenerate) = real_roots(&loc.cubic);
        if degenerate {
            warnings.push(format!("leading coefficient vanishes at t = {}", ts[i]));
        }
        let roots: Vec<f64> = roots
            .into_iter()
            .filter(|&b| peval(&loc.u, b).abs() > 1e-12 * (1.0 + loc.f[2].abs()))
            .collect();
        let mut pairs = Vec::new();
        for (ti, tr) in tracks.iter().enumerate().filter(|(_, tr)| tr.open) {
            let n = tr.beta.len();
            let last = tr.beta[n - 1];
            let pred = if n >= 2 { 2.0 * last - tr.beta[n - 2] } else { last };
            for (ri, &r) in roots.iter().enumerate() {
                let d = (r - pred).abs();
                if d <= 0.25 * (1.0 + pred.abs()) {
                    pairs.push((d, ti, ri));
                }
            }
        }
        pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
        let mut used_track = vec![false; tracks.len()];
        let mut used_root = vec![false; roots.len()];
        for (_, ti, ri) in pairs {
            if !used_track[ti] && !used_root[ri] {
                used_track[ti] = true;
                used_root[ri] = true;
                tracks[ti].beta.push(roots[ri]);
            }
        }
        for (ti, tr) in tracks.iter_mut().enumerate() {
            if tr.open && !used_track[ti] {
                tr.open = false;
            }
        }
        for (ri, &r) in roots.iter().enumerate() {
            if !used_root[ri] {
                tracks.push(Track {
                    start: i,
                    beta: vec![r],
                    open: true,
                });
            }
        }
    }

    let mut branches = Vec::new();
    for tr in tracks {
        let n = tr.beta.len();
        if n < 5 {
            continue;
        }
        let seg = &locals[tr.start..tr.start + n];
        let dbeta = gradient4(&tr.beta, h);
        let residual = seg
            .iter()
            .zip(&tr.beta)
            .zip(&dbeta)
            .fold(0.0f64, |m, ((loc, &b), &db)| {
                let p = peval(&loc.rate, b);
                m.max((db - p).abs() / (1.0 + p.abs()))
            });
        let full = tr.start == 0 && n == ts.len();
        let certificate = if full && residual <= tol {
            let cert = certify(seg, &tr.beta, &dbeta, &c, h);
            (cert.coefficient_residual <= tol).then_some(cert)
        } else {
            None
        };
        branches.push(Branch {
            t: ts[tr.start..tr.start + n].to_vec(),
            beta: tr.beta,
            residual,
            certificate,
        });
    }
    Ok(OneDimReport {
        c,
        branches,
        warnings,
    })
}

/// `α = c₃u/(c₂f₃)`, `ξ = f₃α²/c₃`, and the sampled transformed
/// coefficients compared with `ξ c_k`.
fn certify(seg: &[Local], beta: &[f64], dbeta: &[f64], c: &[f64; 4], h: f64) -> BranchCertificate {
    let alpha: Vec<f64> = seg
        .iter()
        .zip(beta)
        .map(|(loc, &b)| c[3] * peval(&loc.u, b) / (c[2] * loc.f[3]))
        .collect();
    let xi: Vec<f64> = seg
        .iter()
        .zip(&alpha)
        .map(|(loc, a)| loc.f[3] * a * a / c[3])
        .collect();
    let dalpha = gradient4(&alpha, h);
    let mut worst = 0.0f64;
    for i in 0..seg.len() {
        let (loc, b, a) = (&seg[i], beta[i], alpha[i]);
        let bar = [
            (peval(&loc.f, b) - dbeta[i]) / a,
            peval(&loc.slope, b) - dalpha[i] / a,
            a * peval(&loc.u, b),
            loc.f[3] * a * a,
        ];
        for k in 0..4 {
            let want = xi[i] * c[k];
            worst = worst.max((bar[k] - want).abs() / (1.0 + want.abs()));
        }
    }
    BranchCertificate {
        alpha,
        xi,
        coefficient_residual: worst,
    }
}
