//! Command-line front end. Every command writes one JSON document (or JSON
//! lines, or CSV for `solve`) to `--out` or stdout.

use std::fmt::Write as _;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use serde::de::DeserializeOwned;
use serde::Serialize;
use serde_json::{json, Value};

use crate::abel_transform::{self, AbelEquation, AbelError, GroupCurve};
use crate::invariants::{self, InvariantError};
use crate::jet_geometry::{fields_for_order, distribution_rank, GeoError};
use crate::numerics::{self, Grid, NumError};
use crate::reduction::{self, BetaChoice, ReduceOptions, ReductionError};
use crate::sampling;
use crate::tjet::{parse, TFunc};
use crate::tolerance::{CANONICAL_TOL, CA_RTOL, ODE_TOL};
use crate::vf_algebra::{check_scheme, representation, SchemeSpec};

pub const EXIT_OK: i32 = 0;
pub const EXIT_NEGATIVE: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "quasilie", version, about = "Affine reductions and invariants of cubic Abel equations")]
pub struct Cli {
    /// Sampling grid `t0:t1:n` (n points).
    #[arg(long, global = true, default_value = "0:1:64")]
    pub grid: Grid,
    /// Overrides the command's default tolerance.
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Adds numerical cross-checks to the report.
    #[arg(long, global = true)]
    pub verify: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Push an equation forward along a curve `x = α x̄ + β`.
    Transform {
        equation: PathBuf,
        curve: PathBuf,
        /// Initial value of `x̄` for the `--verify` flow check.
        #[arg(long, default_value_t = 0.1, allow_hyphen_values = true)]
        xbar0: f64,
    },
    /// Φ₃, DΦ₃, Φ₅ and F on the grid, one JSON line per point.
    Invariant {
        equation: PathBuf,
        /// A second equation whose F is compared point by point.
        #[arg(long)]
        against: Option<PathBuf>,
    },
    /// Integrability verdict and reduction certificate.
    Reduce {
        equation: PathBuf,
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        mu: f64,
        /// Explicit β (an expression in t) for μ ≠ 0.
        #[arg(long, allow_hyphen_values = true)]
        beta: Option<String>,
        /// Initial value of the original equation at t0.
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        x0: f64,
        /// One-dimensional target constants `c0,c1,c2,c3`.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        c: Option<Vec<f64>>,
    },
    /// Canonical form `x̄' = x̄³ + f̄₂(τ)x̄²` from a particular solution β.
    Canonical {
        equation: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        beta: String,
    },
    /// Scheme axioms and the adjoint representation.
    Scheme { scheme: PathBuf },
    /// Rank of the lifted distribution on `T^pV` at random points.
    Rank {
        scheme: PathBuf,
        #[arg(long)]
        p: usize,
        #[arg(long, default_value_t = 50)]
        samples: usize,
    },
    /// RK4 solution as CSV `t,x`.
    Solve {
        equation: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        x0: f64,
    },
}

#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    fn input(message: impl Into<String>) -> Self {
        CliError {
            code: EXIT_INPUT,
            message: message.into(),
        }
    }

    fn numerical(message: impl Into<String>) -> Self {
        CliError {
            code: EXIT_NUMERICAL,
            message: message.into(),
        }
    }
}

impl From<AbelError> for CliError {
    fn from(e: AbelError) -> Self {
        match e {
            AbelError::Parse { .. }
            | AbelError::CoeffCount(_)
            | AbelError::DegreeMismatch { .. }
            | AbelError::Unsupported(_) => CliError::input(e.to_string()),
            _ => CliError::numerical(e.to_string()),
        }
    }
}

impl From<InvariantError> for CliError {
    fn from(e: InvariantError) -> Self {
        match e {
            InvariantError::Unsupported(_) => CliError::input(e.to_string()),
            _ => CliError::numerical(e.to_string()),
        }
    }
}

impl From<NumError> for CliError {
    fn from(e: NumError) -> Self {
        CliError::numerical(e.to_string())
    }
}

impl From<GeoError> for CliError {
    fn from(e: GeoError) -> Self {
        CliError::input(e.to_string())
    }
}

impl From<ReductionError> for CliError {
    fn from(e: ReductionError) -> Self {
        use ReductionError::*;
        let code = match e {
            Unsupported(_) | InvalidConstants | NonPositiveF3 { .. } => EXIT_INPUT,
            CaFails { .. } | BranchFails { .. } | NotASolution { .. } => EXIT_NEGATIVE,
            Abel(ref a) if matches!(a, AbelError::Parse { .. }) => EXIT_INPUT,
            _ => EXIT_NUMERICAL,
        };
        CliError {
            code,
            message: e.to_string(),
        }
    }
}

/// JSON with every float written as `{:.16e}` (17 significant digits).
pub fn to_json(v: &Value) -> String {
    let mut out = String::new();
    write_value(v, &mut out);
    out
}

fn write_value(v: &Value, out: &mut String) {
    match v {
        Value::Number(n) if n.is_f64() => {
            let x = n.as_f64().expect("f64");
            write!(out, "{x:.16e}").expect("string write");
        }
        Value::Array(items) => {
            out.push('[');
            for (i, item) in items.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                write_value(item, out);
            }
            out.push(']');
        }
        Value::Object(map) => {
            out.push('{');
            for (i, (k, item)) in map.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                out.push_str(&Value::String(k.clone()).to_string());
                out.push(':');
                write_value(item, out);
            }
            out.push('}');
        }
        other => out.push_str(&other.to_string()),
    }
}

fn value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("serializable report")
}

fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::input(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::input(format!("{}: {e}", path.display())))
}

/// A scheme file, or one of the built-in names `abel`, `riccati`, `planar`.
fn read_scheme(path: &Path) -> Result<SchemeSpec, CliError> {
    let spec = match path.to_str() {
        Some("abel") => SchemeSpec::abel(3),
        Some("riccati") => SchemeSpec::riccati(),
        Some("planar") => SchemeSpec::planar(),
        _ => read_json(path)?,
    };
    spec.validate()
        .map_err(|e| CliError::input(format!("{}: {e}", path.display())))?;
    Ok(spec)
}

fn parse_expr(src: &str, what: &str) -> Result<TFunc, CliError> {
    parse(src).map_err(|e| CliError::input(format!("{what}: {e}")))
}

/// Parses `args` (including the program name) and runs the command,
/// writing the report to `--out` or `stdout`. Returns the exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let _ = if code == EXIT_OK {
                write!(stdout, "{e}")
            } else {
                write!(stderr, "{e}")
            };
            return code;
        }
    };
    let mut report = String::new();
    let result = dispatch(&cli, &mut report);
    let code = match &result {
        Ok(code) => *code,
        Err(e) => {
            let _ = writeln!(stderr, "error: {}", e.message);
            e.code
        }
    };
    if !report.is_empty() {
        let written = match &cli.out {
            Some(path) => fs::write(path, &report).map_err(|e| e.to_string()),
            None => stdout.write_all(report.as_bytes()).map_err(|e| e.to_string()),
        };
        if let Err(e) = written {
            let _ = writeln!(stderr, "error: writing output: {e}");
            return EXIT_INPUT;
        }
    }
    code
}

/// Entry point for the binary.
pub fn main() -> i32 {
    run(
        std::env::args_os(),
        &mut std::io::stdout().lock(),
        &mut std::io::stderr().lock(),
    )
}

fn dispatch(cli: &Cli, out: &mut String) -> Result<i32, CliError> {
    match &cli.command {
        Command::Transform {
            equation,
            curve,
            xbar0,
        } => transform(cli, equation, curve, *xbar0, out),
        Command::Invariant { equation, against } => invariant(cli, equation, against.as_deref(), out),
        Command::Reduce {
            equation,
            mu,
            beta,
            x0,
            c,
        } => reduce(cli, equation, *mu, beta.as_deref(), *x0, c.as_deref(), out),
        Command::Canonical { equation, beta } => canonical(cli, equation, beta, out),
        Command::Scheme { scheme } => scheme_report(scheme, out),
        Command::Rank { scheme, p, samples } => rank(cli, scheme, *p, *samples, out),
        Command::Solve { equation, x0 } => solve(cli, equation, *x0, out),
    }
}

fn transform(
    cli: &Cli,
    equation: &Path,
    curve: &Path,
    xbar0: f64,
    out: &mut String,
) -> Result<i32, CliError> {
    let x: AbelEquation = read_json(equation)?;
    let g: GroupCurve = read_json(curve)?;
    g.check_on_grid(&cli.grid)?;
    let pushed = abel_transform::pushforward(&x, &g)?;
    let mut samples = Vec::new();
    for t in cli.grid.points() {
        samples.push(json!({ "t": t, "coeffs": pushed.eval_coeffs(t).map_err(AbelError::from)? }));
    }
    let mut report = json!({
        "grid": cli.grid.to_string(),
        "input": value(&x),
        "curve": value(&g),
        "transformed": value(&pushed),
        "samples": samples,
    });
    if cli.verify {
        let steps = cli.grid.intervals();
        let r = abel_transform::flow_conjugacy_residual(
            &x,
            &g,
            xbar0,
            cli.grid.t0,
            cli.grid.t1,
            steps,
        )?;
        report["flow_conjugacy_residual"] = json!(r);
        report["xbar0"] = json!(xbar0);
    }
    out.push_str(&to_json(&report));
    out.push('\n');
    Ok(EXIT_OK)
}

fn invariant(
    cli: &Cli,
    equation: &Path,
    against: Option<&Path>,
    out: &mut String,
) -> Result<i32, CliError> {
    let x: AbelEquation = read_json(equation)?;
    let other: Option<AbelEquation> = against.map(read_json).transpose()?;
    let mut worst: Option<f64> = None;
    for t in cli.grid.points() {
        let v = invariants::liouville_f(&x, t)?;
        let mut line = value(&v);
        if let Some(y) = &other {
            let w = invariants::liouville_f(y, t)?;
            line["F_against"] = json!(w.f);
            if let (Some(a), Some(b)) = (v.f, w.f) {
                let d = (a - b).abs() / (1.0 + b.abs());
                worst = Some(worst.map_or(d, |m| m.max(d)));
            }
        }
        out.push_str(&to_json(&line));
        out.push('\n');
    }
    if other.is_some() {
        out.push_str(&to_json(&json!({ "max_F_deviation": worst })));
        out.push('\n');
        let tol = cli.tol.unwrap_or(1e-8);
        if worst.is_some_and(|w| w > tol) {
            return Ok(EXIT_NEGATIVE);
        }
    }
    Ok(EXIT_OK)
}

fn samples_of(exprs: &[(&str, &TFunc)], ts: &[f64]) -> Result<Value, CliError> {
    let mut obj = serde_json::Map::new();
    obj.insert("t".into(), json!(ts));
    for (name, e) in exprs {
        let vals = ts
            .iter()
            .map(|&t| e.eval(t))
            .collect::<Result<Vec<f64>, _>>()
            .map_err(|err| CliError::numerical(err.to_string()))?;
        obj.insert((*name).into(), json!(vals));
    }
    Ok(Value::Object(obj))
}

fn reduce(
    cli: &Cli,
    equation: &Path,
    mu: f64,
    beta: Option<&str>,
    x0: f64,
    c: Option<&[f64]>,
    out: &mut String,
) -> Result<i32, CliError> {
    let x: AbelEquation = read_json(equation)?;
    let ts = cli.grid.points();
    let ca = reduction::check_ca(&x, &ts, CA_RTOL)?;
    let mut report = json!({
        "grid": cli.grid.to_string(),
        "CA_max_residual": ca.max_residual,
        "CA_relative": ca.relative,
        "CA_scale": ca.scale,
        "mu": mu,
    });
    let mut code = EXIT_OK;
    if !ca.passes {
        report["reducible_2d"] = json!(false);
        report["verdict"] = json!("not reducible to the two-dimensional targets");
        report["certificate"] = Value::Null;
        code = EXIT_NEGATIVE;
    } else {
        let choice = match beta {
            Some(src) => BetaChoice::Explicit(parse_expr(src, "--beta")?),
            None => BetaChoice::Auto,
        };
        let mut opts = ReduceOptions::new(cli.grid, x0);
        if let Some(tol) = cli.tol {
            opts.ode_tol = tol;
        }
        match reduction::reduce_to_2d(&x, mu, &choice, &opts) {
            Ok(cert) => {
                let samples = samples_of(
                    &[
                        ("beta", &cert.curve.beta),
                        ("alpha", &cert.curve.alpha),
                        ("lambda1", &cert.target.lambda1),
                        ("lambda2", &cert.target.lambda2),
                    ],
                    &ts,
                )?;
                report["reducible_2d"] = json!(true);
                report["certificate"] = json!({
                    "mu": cert.target.mu,
                    "beta": cert.curve.beta.to_string(),
                    "alpha": cert.curve.alpha.to_string(),
                    "lambda1": cert.target.lambda1.to_string(),
                    "lambda2": cert.target.lambda2.to_string(),
                    "coefficient_residual": cert.coefficient_residual,
                    "solution_residual": cert.solution_residual,
                    "x0": x0,
                    "samples": samples,
                    "solution": { "t": cert.t, "x": cert.x, "xbar": cert.xbar },
                });
            }
            Err(e) => {
                let e = CliError::from(e);
                report["reducible_2d"] = Value::Null;
                report["certificate"] = Value::Null;
                report["error"] = json!(e.message);
                code = e.code;
            }
        }
    }
    if let Some(c) = c {
        let c: [f64; 4] = c
            .try_into()
            .map_err(|_| CliError::input("--c needs four constants"))?;
        let rep = reduction::onedim_candidates(&x, c, &cli.grid, cli.tol.unwrap_or(1e-6))?;
        let found = rep.branches.iter().any(|b| b.certificate.is_some());
        report["reducible_1d"] = json!(found);
        report["one_dim"] = value(&rep);
        // With --c the verdict is the one-dimensional one.
        code = if found { EXIT_OK } else { EXIT_NEGATIVE };
    }
    out.push_str(&to_json(&report));
    out.push('\n');
    Ok(code)
}

fn canonical(cli: &Cli, equation: &Path, beta: &str, out: &mut String) -> Result<i32, CliError> {
    let x: AbelEquation = read_json(equation)?;
    let b = parse_expr(beta, "--beta")?;
    let tol = cli.tol.unwrap_or(CANONICAL_TOL);
    let form = reduction::canonical_form(&x, &b, &cli.grid, 1e-9)?;
    let mut report = value(&form);
    report["beta"] = json!(b.to_string());
    let ok = form.f0_residual <= tol && form.f1_residual <= tol;
    report["passes"] = json!(ok);
    out.push_str(&to_json(&report));
    out.push('\n');
    Ok(if ok { EXIT_OK } else { EXIT_NEGATIVE })
}

fn scheme_report(path: &Path, out: &mut String) -> Result<i32, CliError> {
    let s = read_scheme(path)?;
    let report = check_scheme(&s);
    let mut doc = json!({
        "dim_w": s.dim_w(),
        "dim_v": s.dim_v(),
        "is_scheme": report.is_scheme(),
        "report": value(&report),
    });
    if report.is_scheme() {
        let reps = representation(&s).map_err(|e| CliError::input(e.to_string()))?;
        doc["ad_matrices"] = reps
            .iter()
            .map(|a| {
                json!({
                    "w_index": a.w_index,
                    "matrix": a.matrix.to_string_rows(),
                    "nilpotency_index": a.matrix.nilpotency_index(),
                })
            })
            .collect();
    }
    out.push_str(&to_json(&doc));
    out.push('\n');
    Ok(if report.is_scheme() { EXIT_OK } else { EXIT_NEGATIVE })
}

fn rank(cli: &Cli, path: &Path, p: usize, samples: usize, out: &mut String) -> Result<i32, CliError> {
    let s = read_scheme(path)?;
    let fields = fields_for_order(&s, p)?;
    let dim = (p + 1) * s.dim_v();
    let points = sampling::normal_points(dim, samples, cli.seed);
    let mut report = distribution_rank(&fields, &points)?;
    report.seed = Some(cli.seed);
    let generic = report.generic_rank();
    let mut doc = value(&report);
    doc["p"] = json!(p);
    doc["generic_rank"] = json!(generic);
    doc["invariant_count"] = json!(dim - generic);
    out.push_str(&to_json(&doc));
    out.push('\n');
    Ok(EXIT_OK)
}

fn solve(cli: &Cli, equation: &Path, x0: f64, out: &mut String) -> Result<i32, CliError> {
    let x: AbelEquation = read_json(equation)?;
    let g = cli.grid;
    let sol = numerics::integrate(&x, x0, g.t0, g.t1, g.intervals())?;
    out.push_str("t,x\n");
    for (t, v) in sol.t.iter().zip(&sol.x) {
        writeln!(out, "{t:.16e},{v:.16e}").expect("string write");
    }
    if let Some(t) = sol.blow_up {
        return Err(CliError::numerical(format!("solution blows up at t = {t}")));
    }
    if cli.verify {
        let r = numerics::residual(&sol.t, &sol.x, &x)?;
        let tol = cli.tol.unwrap_or(ODE_TOL);
        if r > tol.max(10.0 * sol.residual_estimate) {
            return Err(CliError::numerical(format!(
                "residual {r:e} exceeds {tol:e} (estimate {:e})",
                sol.residual_estimate
            )));
        }
    }
    Ok(EXIT_OK)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floats_have_seventeen_digits() {
        let s = to_json(&json!({"a": 0.1, "b": [1, null, -2.5], "c": "x"}));
        assert_eq!(
            s,
            r#"{"a":1.0000000000000001e-1,"b":[1,null,-2.5000000000000000e0],"c":"x"}"#
        );
        let back: Value = serde_json::from_str(&s).unwrap();
        assert_eq!(back["a"].as_f64(), Some(0.1));
    }
}
