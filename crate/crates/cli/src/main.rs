//! qcalc: numerical q-series calculator and identity verifier.
//!
//! Subcommands:
//! * `list`    - print the identity registry
//! * `verify`  - seeded verification sweeps, one JSON object per point
//! * `eval`    - evaluate a primitive (Pochhammer, polynomial, series,
//!   q-integral, theta integral), a single JSON object
//! * `expand`  - expand a coefficient grid file in homogeneous Hahn polynomials
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage or parse error,
//! 3 numeric non-evaluability (pole, overflow, non-convergence),
//! 4 grid not in the kernel of the q-difference operator.
//!
//! Identical invocations (same flags and seed) produce byte-identical
//! output; sweeps never consult any entropy source beyond the seed.

// `!(x > 0.0)`-style checks deliberately fail on NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod grid;

use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};
use qcalc_core::contour::askey_wilson;
use qcalc_core::expansion::{self, expand_in_hahn};
use qcalc_core::hyperseries::{phi, PhiSpec};
use qcalc_core::pochhammer::{qbinom, qpoch_finite, qpoch_inf};
use qcalc_core::polynomials::{hahn, hahn_hom, rogers_szego, w_poly};
use qcalc_core::qintegral::{jackson_weight, PochWeight};
use qcalc_core::verify::{registry, sweep, IdentityId, IdentityReport, SweepConfig};
use qcalc_core::{Complex64, Error, QContext, SeriesValue};
use serde_json::{json, Map, Value};

const EXIT_VERIFY_FAIL: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_NUMERIC: u8 = 3;
const EXIT_NOT_IN_KERNEL: u8 = 4;

/// Complex argument: `RE` or `RE,IM`.
#[derive(Debug, Clone, Copy)]
struct CxArg(Complex64);

impl FromStr for CxArg {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let mut parts = s.split(',');
        let re: f64 = parts
            .next()
            .unwrap_or("")
            .trim()
            .parse()
            .map_err(|_| format!("cannot parse '{s}' as a complex number (RE or RE,IM)"))?;
        let im: f64 = match parts.next() {
            Some(t) => t
                .trim()
                .parse()
                .map_err(|_| format!("cannot parse '{s}' as a complex number (RE or RE,IM)"))?,
            None => 0.0,
        };
        if parts.next().is_some() {
            return Err(format!("too many components in complex number '{s}'"));
        }
        if !(re.is_finite() && im.is_finite()) {
            return Err(format!("complex number '{s}' is not finite"));
        }
        Ok(CxArg(Complex64::new(re, im)))
    }
}

/// Series order: a non-negative integer or `inf`.
#[derive(Debug, Clone, Copy)]
enum OrderArg {
    Finite(usize),
    Infinite,
}

impl FromStr for OrderArg {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        if s.eq_ignore_ascii_case("inf") || s == "∞" {
            return Ok(OrderArg::Infinite);
        }
        s.parse::<usize>()
            .map(OrderArg::Finite)
            .map_err(|_| format!("expected a non-negative integer or 'inf', got '{s}'"))
    }
}

#[derive(Parser)]
#[command(
    name = "qcalc",
    about = "Numerical q-series toolkit: evaluate q-calculus primitives and verify classical q-identities at sampled parameter points",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the identity registry, one line per entry.
    List,
    /// Run seeded verification sweeps; one JSON object per sampled point.
    Verify(VerifyArgs),
    /// Evaluate a primitive and print a single JSON object.
    Eval(EvalArgs),
    /// Expand a grid file in homogeneous Hahn polynomials.
    Expand(ExpandArgs),
}

#[derive(Args)]
struct VerifyArgs {
    /// Identity ID (see `qcalc list`); omit with --all.
    id: Option<String>,

    /// Sweep every registry identity with its default point count.
    #[arg(long)]
    all: bool,

    /// Points per identity (default: per-identity).
    #[arg(long)]
    points: Option<u32>,

    /// Sweep seed.
    #[arg(long, env = "QCALC_SEED", default_value_t = 0)]
    seed: u64,

    /// Sampling disk radius (0 < radius < 1).
    #[arg(long, default_value_t = 0.5)]
    radius: f64,

    /// Minimum distance kept between 1 and every guarded factor.
    #[arg(long, default_value_t = 0.05)]
    pole_margin: f64,

    /// Target relative truncation error of the kernels.
    #[arg(long, default_value_t = 1e-10)]
    eps: f64,

    /// Pass-tolerance override, `ID=VALUE`; repeatable.
    #[arg(long, value_name = "ID=TOL")]
    tolerance: Vec<String>,

    /// Write the JSON lines to this file instead of stdout.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct EvalArgs {
    #[command(subcommand)]
    kind: EvalKind,
}

#[derive(Subcommand)]
#[command(rename_all = "snake_case")]
enum EvalKind {
    /// q-shifted factorial (a;q)_n, n a non-negative integer or 'inf'.
    Qpoch {
        #[arg(long, allow_hyphen_values = true)]
        a: CxArg,
        #[arg(long, default_value = "inf", allow_hyphen_values = true)]
        n: OrderArg,
        #[arg(long, allow_hyphen_values = true)]
        q: CxArg,
    },
    /// q-binomial coefficient [n k]_q.
    Qbinom {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: i64,
        #[arg(long, allow_hyphen_values = true)]
        q: CxArg,
    },
    /// Hahn polynomial Phi_n^(alpha)(x|q).
    Hahn {
        #[arg(long)]
        n: usize,
        #[arg(long, allow_hyphen_values = true)]
        alpha: CxArg,
        #[arg(long, allow_hyphen_values = true)]
        x: CxArg,
        #[arg(long, allow_hyphen_values = true)]
        q: CxArg,
    },
    /// Homogeneous Hahn polynomial Phi_n^(alpha)(x, y|q).
    HahnHom {
        #[arg(long)]
        n: usize,
        #[arg(long, allow_hyphen_values = true)]
        alpha: CxArg,
        #[arg(long, allow_hyphen_values = true)]
        x: CxArg,
        #[arg(long, allow_hyphen_values = true)]
        y: CxArg,
        #[arg(long, allow_hyphen_values = true)]
        q: CxArg,
    },
    /// Rogers-Szego polynomial h_n(x, y|q).
    Rs {
        #[arg(long)]
        n: usize,
        #[arg(long, allow_hyphen_values = true)]
        x: CxArg,
        #[arg(long, allow_hyphen_values = true)]
        y: CxArg,
        #[arg(long, allow_hyphen_values = true)]
        q: CxArg,
    },
    /// W_n(a, b, u, v|q).
    W {
        #[arg(long)]
        n: usize,
        #[arg(long, allow_hyphen_values = true)]
        a: CxArg,
        #[arg(long, allow_hyphen_values = true)]
        b: CxArg,
        #[arg(long, allow_hyphen_values = true)]
        u: CxArg,
        #[arg(long, allow_hyphen_values = true)]
        v: CxArg,
        #[arg(long, allow_hyphen_values = true)]
        q: CxArg,
    },
    /// Basic hypergeometric series r_phi_s(num; den; q, z).
    Phi {
        /// Upper parameter; repeatable.
        #[arg(long = "num", allow_hyphen_values = true)]
        num: Vec<CxArg>,
        /// Lower parameter; repeatable.
        #[arg(long = "den", allow_hyphen_values = true)]
        den: Vec<CxArg>,
        #[arg(long, allow_hyphen_values = true)]
        z: CxArg,
        #[arg(long, allow_hyphen_values = true)]
        q: CxArg,
    },
    /// Jackson q-integral of x^power prod(n_i x;q)inf / prod(d_j x;q)inf.
    Jackson {
        #[arg(long, allow_hyphen_values = true)]
        u: CxArg,
        #[arg(long, allow_hyphen_values = true)]
        v: CxArg,
        /// Numerator weight parameter; repeatable.
        #[arg(long = "numer", allow_hyphen_values = true)]
        numer: Vec<CxArg>,
        /// Denominator weight parameter; repeatable.
        #[arg(long = "denom", allow_hyphen_values = true)]
        denom: Vec<CxArg>,
        /// Monomial factor x^power.
        #[arg(long, default_value_t = 0)]
        power: usize,
        #[arg(long, allow_hyphen_values = true)]
        q: CxArg,
    },
    /// Askey-Wilson theta integral of h(cos 2t; 1)/h(cos t; a, b, c, d).
    Aw {
        #[arg(long, allow_hyphen_values = true)]
        a: CxArg,
        #[arg(long, allow_hyphen_values = true)]
        b: CxArg,
        #[arg(long, allow_hyphen_values = true)]
        c: CxArg,
        #[arg(long, allow_hyphen_values = true)]
        d: CxArg,
        #[arg(long, allow_hyphen_values = true)]
        q: CxArg,
    },
}

#[derive(Args)]
struct ExpandArgs {
    /// Grid file: JSON with fields m, n, coeffs (row-major [re, im] pairs).
    grid: PathBuf,

    #[arg(long, allow_hyphen_values = true)]
    alpha: CxArg,

    #[arg(long, allow_hyphen_values = true)]
    q: CxArg,

    /// Absolute coefficient tolerance for the kernel membership check.
    #[arg(long, default_value_t = expansion::DEFAULT_TOL)]
    tol: f64,
}

fn main() -> ExitCode {
    // Die quietly on a closed pipe (e.g. `qcalc list | head`).
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    let cli = Cli::parse();
    let code = match cli.command {
        Command::List => cmd_list(),
        Command::Verify(args) => cmd_verify(args),
        Command::Eval(args) => cmd_eval(args),
        Command::Expand(args) => cmd_expand(args),
    };
    ExitCode::from(code)
}

fn usage_error(msg: &str) -> u8 {
    eprintln!("error: {msg}");
    EXIT_USAGE
}

fn cmd_list() -> u8 {
    for id in registry() {
        println!("{:<20} {}", id.as_str(), id.description());
    }
    0
}

fn pair(z: Complex64) -> Value {
    json!([z.re, z.im])
}

fn report_to_json(r: &IdentityReport) -> Value {
    let mut params = Map::new();
    for &(name, value) in &r.params {
        params.insert(name.to_string(), pair(value));
    }
    for &(name, value) in &r.ints {
        params.insert(name.to_string(), json!([value as f64, 0.0]));
    }
    json!({
        "id": r.id.as_str(),
        "seed": r.seed,
        "point_index": r.point_index,
        "params": params,
        "q": pair(r.q),
        "lhs": pair(r.lhs),
        "rhs": pair(r.rhs),
        "abs_resid": r.abs_resid,
        "rel_resid": r.rel_resid,
        "pass": r.pass,
        "reason": r.reason,
    })
}

fn cmd_verify(args: VerifyArgs) -> u8 {
    if !(args.radius > 0.0 && args.radius < 1.0) {
        return usage_error("--radius must lie strictly between 0 and 1");
    }
    if !(args.pole_margin > 0.0) || !args.pole_margin.is_finite() {
        return usage_error("--pole-margin must be a positive finite real");
    }
    if !(args.eps > 0.0) || !args.eps.is_finite() {
        return usage_error("--eps must be a positive finite real");
    }

    let mut overrides: Vec<(IdentityId, f64)> = Vec::new();
    for spec in &args.tolerance {
        let Some((name, value)) = spec.split_once('=') else {
            return usage_error(&format!("--tolerance expects ID=VALUE, got '{spec}'"));
        };
        let Some(id) = IdentityId::parse(name) else {
            return usage_error(&format!("unknown identity '{name}' in --tolerance"));
        };
        let Ok(tol) = value.parse::<f64>() else {
            return usage_error(&format!("cannot parse tolerance '{value}'"));
        };
        if !(tol > 0.0) || !tol.is_finite() {
            return usage_error("tolerance overrides must be positive finite reals");
        }
        overrides.push((id, tol));
    }

    let ids: Vec<IdentityId> = if args.all {
        if args.id.is_some() {
            return usage_error("give an identity ID or --all, not both");
        }
        registry().to_vec()
    } else {
        match &args.id {
            None => return usage_error("give an identity ID or --all"),
            Some(name) => match IdentityId::parse(name) {
                Some(id) => vec![id],
                None => return usage_error(&format!("unknown identity '{name}'")),
            },
        }
    };

    let mut out = String::new();
    let mut total_pass = 0usize;
    let mut total_fail = 0usize;
    let mut summaries = Vec::new();
    for &id in &ids {
        let cfg = SweepConfig {
            radius: args.radius,
            pole_margin: args.pole_margin,
            eps: args.eps,
            tolerance_override: overrides
                .iter()
                .find(|(o, _)| *o == id)
                .map(|&(_, t)| t),
            ..SweepConfig::default()
        };
        let points = args.points.unwrap_or_else(|| id.default_points());
        let reports = sweep(id, points, args.seed, &cfg);
        let pass = reports.iter().filter(|r| r.pass).count();
        let fail = reports.len() - pass;
        total_pass += pass;
        total_fail += fail;
        for r in &reports {
            writeln!(out, "{}", report_to_json(r)).unwrap();
        }
        summaries.push(json!({
            "id": id.as_str(),
            "points": reports.len(),
            "pass": pass,
            "fail": fail,
        }));
    }
    if args.all {
        for s in &summaries {
            writeln!(out, "{s}").unwrap();
        }
        writeln!(
            out,
            "{}",
            json!({
                "ids": ids.len(),
                "total_points": total_pass + total_fail,
                "total_pass": total_pass,
                "total_fail": total_fail,
            })
        )
        .unwrap();
    }

    match &args.output {
        Some(path) => {
            if let Err(e) = std::fs::write(path, out) {
                eprintln!("error: cannot write {}: {e}", path.display());
                return EXIT_USAGE;
            }
        }
        None => print!("{out}"),
    }
    if total_fail > 0 {
        EXIT_VERIFY_FAIL
    } else {
        0
    }
}

fn exact_json(value: Complex64) -> Value {
    json!({ "value": [value.re, value.im] })
}

fn truncated_json(v: &SeriesValue) -> Value {
    json!({
        "value": [v.value.re, v.value.im],
        "err_est": v.err_est,
        "terms_used": v.terms_used,
        "converged": v.converged,
    })
}

fn numeric_exit(e: &Error) -> u8 {
    match e {
        Error::Domain { .. } => EXIT_USAGE,
        _ => EXIT_NUMERIC,
    }
}

fn cmd_eval(args: EvalArgs) -> u8 {
    let ctx = |q: CxArg| QContext::new(q.0);
    let result: Result<(Value, bool), Error> = (|| {
        match args.kind {
            EvalKind::Qpoch { a, n, q } => {
                let ctx = ctx(q)?;
                match n {
                    OrderArg::Finite(n) => Ok((exact_json(qpoch_finite(a.0, n, &ctx)?), true)),
                    OrderArg::Infinite => {
                        let v = qpoch_inf(a.0, &ctx)?;
                        Ok((truncated_json(&v), v.converged))
                    }
                }
            }
            EvalKind::Qbinom { n, k, q } => Ok((exact_json(qbinom(n, k, &ctx(q)?)), true)),
            EvalKind::Hahn { n, alpha, x, q } => {
                Ok((exact_json(hahn(n, alpha.0, x.0, &ctx(q)?)), true))
            }
            EvalKind::HahnHom { n, alpha, x, y, q } => Ok((
                exact_json(hahn_hom(n, alpha.0, x.0, y.0, &ctx(q)?)),
                true,
            )),
            EvalKind::Rs { n, x, y, q } => {
                Ok((exact_json(rogers_szego(n, x.0, y.0, &ctx(q)?)), true))
            }
            EvalKind::W { n, a, b, u, v, q } => Ok((
                exact_json(w_poly(n, a.0, b.0, u.0, v.0, &ctx(q)?)?),
                true,
            )),
            EvalKind::Phi { num, den, z, q } => {
                let spec = PhiSpec::new(
                    num.iter().map(|c| c.0).collect(),
                    den.iter().map(|c| c.0).collect(),
                    z.0,
                );
                let v = phi(&spec, &ctx(q)?)?;
                Ok((truncated_json(&v), v.converged))
            }
            EvalKind::Jackson {
                u,
                v,
                numer,
                denom,
                power,
                q,
            } => {
                let w = PochWeight::new(
                    numer.iter().map(|c| c.0).collect(),
                    denom.iter().map(|c| c.0).collect(),
                )
                .with_power(power);
                let r = jackson_weight(&w, u.0, v.0, &ctx(q)?)?;
                Ok((truncated_json(&r), r.converged))
            }
            EvalKind::Aw { a, b, c, d, q } => {
                let r = askey_wilson(a.0, b.0, c.0, d.0, &ctx(q)?)?;
                Ok((
                    json!({
                        "value": [r.value.re, r.value.im],
                        "err_est": r.err_est,
                        "nodes_used": r.nodes_used,
                        "converged": r.converged,
                    }),
                    r.converged,
                ))
            }
        }
    })();
    match result {
        Ok((value, converged)) => {
            println!("{value}");
            if converged {
                0
            } else {
                EXIT_NUMERIC
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            numeric_exit(&e)
        }
    }
}

fn cmd_expand(args: ExpandArgs) -> u8 {
    let series = match grid::read(&args.grid) {
        Ok(s) => s,
        Err(msg) => return usage_error(&msg),
    };
    let ctx = match QContext::new(args.q.0) {
        Ok(c) => c,
        Err(e) => return usage_error(&format!("{e}")),
    };
    if !(args.tol > 0.0) || !args.tol.is_finite() {
        return usage_error("--tol must be a positive finite real");
    }
    match expand_in_hahn(&series, args.alpha.0, &ctx, args.tol) {
        Ok(e) => {
            let lambda: Vec<Value> = e.lambdas.iter().map(|&c| pair(c)).collect();
            println!(
                "{}",
                json!({
                    "alpha": pair(e.alpha),
                    "order": e.order(),
                    "lambda": lambda,
                })
            );
            0
        }
        Err(Error::NotInKernel { residual }) => {
            println!(
                "{}",
                json!({ "error": "not in kernel", "residual": residual })
            );
            EXIT_NOT_IN_KERNEL
        }
        Err(Error::GridInconsistent {
            row,
            col,
            deviation,
        }) => {
            println!(
                "{}",
                json!({
                    "error": "grid inconsistent",
                    "row": row,
                    "col": col,
                    "deviation": deviation,
                })
            );
            EXIT_NOT_IN_KERNEL
        }
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_NUMERIC
        }
    }
}
