//! q-shifted factorials and q-binomial coefficients.
//!
//! For `|q| < 1` the finite and infinite q-shifted factorials are
//!
//!   (a;q)_0 = 1,   (a;q)_n = prod_{k=0}^{n-1} (1 - a q^k),
//!   (a;q)_inf = prod_{k=0}^{inf} (1 - a q^k),
//!
//! with the compact multi-parameter form
//! `(a_1,...,a_m;q)_n = (a_1;q)_n ... (a_m;q)_n`. The q-binomial
//! coefficients are `[n k]_q = (q;q)_n / ((q;q)_k (q;q)_{n-k})`.
//!
//! Infinite products are truncated after `M` factors with the rigorous tail
//! bound `|log tail| <= |a||q|^M / ((1 - |q|)(1 - |a||q|^M))`, and are
//! accumulated in log space unless a factor comes within `POLE_EPS` of zero,
//! in which case direct multiplication is used (log of a near-zero factor
//! would lose the value's scale).

// Inherent f64 math is std-only; the trait supplies it (via libm) in no_std builds.
#[allow(unused_imports)]
use num_traits::Float;

use crate::context::{QContext, SeriesValue};
use crate::error::{Error, Result};
use crate::{is_finite_c, Complex64, POLE_EPS};

const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Finite q-shifted factorial `(a;q)_n`. Exact product, no truncation.
pub fn qpoch_finite(a: Complex64, n: usize, ctx: &QContext) -> Result<Complex64> {
    let mut prod = ONE;
    let mut qk = ONE;
    for _ in 0..n {
        prod *= ONE - a * qk;
        qk *= ctx.q;
    }
    if !is_finite_c(prod) {
        return Err(Error::Overflow { op: "qpoch_finite" });
    }
    Ok(prod)
}

/// Infinite q-shifted factorial `(a;q)_inf`, truncated under the context
/// policy. Non-convergence within `max_product_terms` is reported through
/// the `converged` flag, not as an error.
pub fn qpoch_inf(a: Complex64, ctx: &QContext) -> Result<SeriesValue> {
    qpoch_inf_impl(a, ctx, false)
}

/// `(a;q)_inf` for use in denominators: identical to [`qpoch_inf`] except
/// that a factor within `POLE_EPS` of zero is a [`Error::PoleParameter`].
pub fn qpoch_inf_nonzero(a: Complex64, ctx: &QContext) -> Result<SeriesValue> {
    qpoch_inf_impl(a, ctx, true)
}

/// Tail bound on `|log prod_{k>=M} (1 - a q^k)|` given `t = |a| |q|^M`.
/// Valid for `t < 1`; returns infinity otherwise.
fn log_tail_bound(t: f64, q_norm: f64) -> f64 {
    if t < 1.0 && q_norm < 1.0 {
        t / ((1.0 - q_norm) * (1.0 - t))
    } else {
        f64::INFINITY
    }
}

fn qpoch_inf_impl(a: Complex64, ctx: &QContext, reject_zero: bool) -> Result<SeriesValue> {
    if a == Complex64::new(0.0, 0.0) {
        return Ok(SeriesValue::exact(ONE));
    }
    let qn = ctx.q_norm();
    // Factors are cheap and products feed into badly conditioned sums, so
    // truncate well below eps, down to the f64 roundoff floor.
    let target = (0.5 * ctx.eps).min(1e-14);

    // Log-space pass. Falls back to direct multiplication on the first
    // factor within POLE_EPS of zero.
    let mut log_sum = Complex64::new(0.0, 0.0);
    let mut qk = ONE;
    let mut t = a.norm();
    let mut terms = 0usize;
    let mut bound = f64::INFINITY;
    let mut direct_from: Option<usize> = None;
    while terms < ctx.max_product_terms {
        let factor = ONE - a * qk;
        if factor.norm() < POLE_EPS {
            if reject_zero {
                return Err(Error::PoleParameter { factor });
            }
            direct_from = Some(terms);
            break;
        }
        log_sum += factor.ln();
        qk *= ctx.q;
        t *= qn;
        terms += 1;
        bound = log_tail_bound(t, qn);
        if bound <= target {
            break;
        }
    }

    let value;
    if direct_from.is_some() {
        // Direct product over the same truncation range.
        let mut prod = ONE;
        let mut qk = ONE;
        let mut t = a.norm();
        terms = 0;
        bound = f64::INFINITY;
        while terms < ctx.max_product_terms {
            let factor = ONE - a * qk;
            prod *= factor;
            qk *= ctx.q;
            t *= qn;
            terms += 1;
            if prod == Complex64::new(0.0, 0.0) {
                // An exactly vanishing factor annihilates the product.
                return Ok(SeriesValue {
                    value: prod,
                    err_est: 0.0,
                    terms_used: terms,
                    converged: true,
                });
            }
            bound = log_tail_bound(t, qn);
            if bound <= target {
                break;
            }
        }
        value = prod;
    } else {
        value = log_sum.exp();
    }

    if !is_finite_c(value) {
        return Err(Error::Overflow { op: "qpoch_inf" });
    }
    let err_est = value.norm() * bound.min(700.0).exp_m1();
    let converged = err_est <= ctx.eps * value.norm().max(1.0);
    Ok(SeriesValue {
        value,
        err_est,
        terms_used: terms,
        converged,
    })
}

/// Multiple finite q-shifted factorial `(a_1,...,a_m;q)_n`.
pub fn qpoch_multi_finite(params: &[Complex64], n: usize, ctx: &QContext) -> Result<Complex64> {
    let mut prod = ONE;
    for &a in params {
        prod *= qpoch_finite(a, n, ctx)?;
    }
    if !is_finite_c(prod) {
        return Err(Error::Overflow {
            op: "qpoch_multi_finite",
        });
    }
    Ok(prod)
}

/// Multiple infinite q-shifted factorial `(a_1,...,a_m;q)_inf`;
/// error estimates of the factors accumulate.
pub fn qpoch_multi_inf(params: &[Complex64], ctx: &QContext) -> Result<SeriesValue> {
    let mut acc = SeriesValue::exact(ONE);
    for &a in params {
        acc = acc.mul(&qpoch_inf(a, ctx)?);
    }
    Ok(acc)
}

/// Denominator variant of [`qpoch_multi_inf`]: any vanishing factor is a
/// [`Error::PoleParameter`].
pub fn qpoch_multi_inf_nonzero(params: &[Complex64], ctx: &QContext) -> Result<SeriesValue> {
    let mut acc = SeriesValue::exact(ONE);
    for &a in params {
        acc = acc.mul(&qpoch_inf_nonzero(a, ctx)?);
    }
    Ok(acc)
}

/// q-binomial coefficient `[n k]_q`, zero for `k < 0` or `k > n`.
///
/// Computed by the cancellation-free product
/// `prod_{j=1}^{k} (1 - q^{n-k+j}) / (1 - q^j)` with `k` canonicalized to
/// `min(k, n-k)`, so `qbinom(n, k)` and `qbinom(n, n-k)` evaluate the same
/// factor sequence and agree bit for bit.
pub fn qbinom(n: usize, k: i64, ctx: &QContext) -> Complex64 {
    if k < 0 || k as usize > n {
        return Complex64::new(0.0, 0.0);
    }
    let k = (k as usize).min(n - k as usize);
    let mut prod = ONE;
    // q^{n-k+j} and q^j, advanced one power per step.
    let mut q_hi = ctx.q.powu((n - k + 1) as u32);
    let mut q_lo = ctx.q;
    for _ in 1..=k {
        prod *= (ONE - q_hi) / (ONE - q_lo);
        q_hi *= ctx.q;
        q_lo *= ctx.q;
    }
    prod
}
