//! Jackson q-integrals.
//!
//! The q-integral on `[u, v]` is the pair of geometric sums
//!
//!   int_u^v f(x) d_q x = (1-q) sum_{n>=0} [v f(v q^n) - u f(u q^n)] q^n,
//!
//! truncated when both tail summands stay below threshold for
//! `stall_window` consecutive terms. [`PochWeight`] builds the
//! `x^p prod (s_i x;q)_inf / prod (t_j x;q)_inf` integrands that all the
//! closed-form q-integral identities use, so each identity is expressed as
//! a parameter list rather than a hand-coded closure.

use alloc::vec::Vec;

use crate::context::{QContext, SeriesValue};
use crate::error::{Error, Result};
use crate::pochhammer::{qpoch_inf, qpoch_inf_nonzero};
use crate::{is_finite_c, Complex64};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Result of a truncated Jackson q-integral; same layout and invariants as
/// [`SeriesValue`].
pub type QIntegralResult = SeriesValue;

/// Jackson q-integral of `f` from `u` to `v`.
///
/// Evaluation errors from `f` propagate; running out of terms is reported
/// through the `converged` flag. Antisymmetry `jackson(f, u, v) =
/// -jackson(f, v, u)` holds exactly because the two geometric tails are
/// subtracted termwise.
pub fn jackson<F>(f: F, u: Complex64, v: Complex64, ctx: &QContext) -> Result<QIntegralResult>
where
    F: Fn(Complex64) -> Result<Complex64>,
{
    let one_m_q = ONE - ctx.q;
    let mut sum = ZERO;
    let mut qn = ONE;
    let mut below = 0usize;
    let mut window_max = 0.0_f64;
    let mut last_mag = 0.0_f64;
    for n in 0..ctx.max_series_terms {
        let tv = v * f(v * qn)? * qn;
        let tu = u * f(u * qn)? * qn;
        sum += tv - tu;
        if !is_finite_c(sum) {
            return Err(Error::Overflow { op: "jackson" });
        }
        let mv = tv.norm();
        let mu = tu.norm();
        last_mag = mv.max(mu);
        // Relative to the running sum, with no absolute floor: integrals
        // whose tails nearly cancel keep their relative accuracy.
        let thresh = 1e-3 * ctx.eps * sum.norm();
        if mv <= thresh && mu <= thresh {
            below += 1;
            window_max = window_max.max(last_mag);
        } else {
            below = 0;
            window_max = 0.0;
        }
        if below >= ctx.stall_window {
            let err_est = 9.0 * window_max * one_m_q.norm();
            let value = one_m_q * sum;
            return Ok(SeriesValue {
                value,
                err_est,
                terms_used: n + 1,
                converged: err_est <= ctx.eps * value.norm().max(1.0),
            });
        }
        qn *= ctx.q;
    }
    let value = one_m_q * sum;
    Ok(SeriesValue {
        value,
        err_est: 9.0 * last_mag * one_m_q.norm(),
        terms_used: ctx.max_series_terms,
        converged: false,
    })
}

/// Declarative integrand `x^power prod_i (s_i x;q)_inf / prod_j (t_j x;q)_inf`.
///
/// The `s_i` live in `numer`, the `t_j` in `denom`; e.g. the weight
/// `(qx/u, qx/v;q)_inf / (bx, cx;q)_inf` is
/// `PochWeight::new(vec![q/u, q/v], vec![b, c])`.
#[derive(Debug, Clone, PartialEq)]
pub struct PochWeight {
    pub numer: Vec<Complex64>,
    pub denom: Vec<Complex64>,
    pub power: usize,
}

impl PochWeight {
    pub fn new(numer: Vec<Complex64>, denom: Vec<Complex64>) -> Self {
        PochWeight {
            numer,
            denom,
            power: 0,
        }
    }

    /// Attach a monomial factor `x^power`.
    pub fn with_power(mut self, power: usize) -> Self {
        self.power = power;
        self
    }

    /// Evaluate at `x`. Denominator products use the pole-checked
    /// Pochhammer path.
    pub fn eval(&self, x: Complex64, ctx: &QContext) -> Result<Complex64> {
        let mut num = x.powu(self.power as u32);
        for &s in &self.numer {
            num *= qpoch_inf(s * x, ctx)?.value;
        }
        let mut den = ONE;
        for &t in &self.denom {
            den *= qpoch_inf_nonzero(t * x, ctx)?.value;
        }
        let value = num / den;
        if !is_finite_c(value) {
            return Err(Error::Overflow {
                op: "PochWeight::eval",
            });
        }
        Ok(value)
    }
}

/// Jackson q-integral of a [`PochWeight`] integrand on `[u, v]`.
pub fn jackson_weight(
    w: &PochWeight,
    u: Complex64,
    v: Complex64,
    ctx: &QContext,
) -> Result<QIntegralResult> {
    jackson(|x| w.eval(x, ctx), u, v, ctx)
}

/// The q-integral `int_u^v (qx/u, qx/v;q)_inf / (bx, cx;q)_inf d_q x`
/// (the left side of the Andrews-Askey evaluation).
pub fn andrews_askey_lhs(
    b: Complex64,
    c: Complex64,
    u: Complex64,
    v: Complex64,
    ctx: &QContext,
) -> Result<QIntegralResult> {
    let w = endpoint_weight(u, v, ctx)?.into_weight(alloc::vec![b, c]);
    jackson_weight(&w, u, v, ctx)
}

/// The numerator parameters `[q/u, q/v]` shared by every endpoint weight
/// `(qx/u, qx/v;q)_inf`. Endpoints must be nonzero.
pub fn endpoint_weight(u: Complex64, v: Complex64, ctx: &QContext) -> Result<EndpointWeight> {
    if u.norm() < 1e-300 || v.norm() < 1e-300 {
        return Err(Error::Domain {
            op: "endpoint_weight",
            reason: "q-integral endpoints must be nonzero to form (qx/u, qx/v;q)_inf",
        });
    }
    Ok(EndpointWeight {
        qu: ctx.q / u,
        qv: ctx.q / v,
    })
}

/// Builder carrying `[q/u, q/v]`; extend with extra numerator parameters
/// and denominator parameters to form the full integrand.
#[derive(Debug, Clone, Copy)]
pub struct EndpointWeight {
    qu: Complex64,
    qv: Complex64,
}

impl EndpointWeight {
    pub fn into_weight(self, denom: Vec<Complex64>) -> PochWeight {
        PochWeight::new(alloc::vec![self.qu, self.qv], denom)
    }

    pub fn with_extra_numer(self, extra: &[Complex64], denom: Vec<Complex64>) -> PochWeight {
        let mut numer = alloc::vec![self.qu, self.qv];
        numer.extend_from_slice(extra);
        PochWeight::new(numer, denom)
    }
}
