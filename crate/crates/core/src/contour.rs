//! Askey-Wilson kernels and theta integrals on `[0, pi]`.
//!
//! For `x = cos(theta)` the kernel is
//!
//!   h(x; a) = (a e^{i theta}, a e^{-i theta};q)_inf
//!           = prod_{k>=0} (1 - 2 q^k a x + q^{2k} a^2),
//!
//! extended multiplicatively over parameter lists. The two forms are
//! independent evaluation routes: [`h_kernel`] pairs two infinite
//! Pochhammer products, [`h_kernel_product`] multiplies the real-coefficient
//! quadratic factors directly.
//!
//! [`theta_quadrature`] integrates an analytic integrand over `[0, pi]` by
//! Gauss-Legendre rules, doubling the node count from 64 until successive
//! estimates agree to the context accuracy (cap 4096). The integrands used
//! here are analytic in theta whenever all kernel parameters have modulus
//! below 1, so the doubling converges spectrally and the successive
//! difference is a usable error estimate.

use alloc::vec::Vec;

// Inherent f64 math is std-only; the trait supplies it (via libm) in no_std builds.
#[allow(unused_imports)]
use num_traits::Float;

use crate::context::{QContext, SeriesValue};
use crate::error::{Error, Result};
use crate::pochhammer::{qpoch_inf, qpoch_multi_inf_nonzero};
use crate::{is_finite_c, Complex64};

const ONE: Complex64 = Complex64::new(1.0, 0.0);
const PI: f64 = core::f64::consts::PI;

/// Result of a truncated theta integral.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThetaIntegralResult {
    pub value: Complex64,
    pub err_est: f64,
    pub nodes_used: usize,
    pub converged: bool,
}

/// `h(cos theta; a)` through the paired-Pochhammer route
/// `(a e^{i theta};q)_inf (a e^{-i theta};q)_inf`.
pub fn h_kernel(theta: f64, a: Complex64, ctx: &QContext) -> Result<SeriesValue> {
    let e = Complex64::from_polar(1.0, theta);
    let plus = qpoch_inf(a * e, ctx)?;
    let minus = qpoch_inf(a * e.conj(), ctx)?;
    Ok(plus.mul(&minus))
}

/// `h(cos theta; a)` through the direct quadratic-factor product
/// `prod_k (1 - 2 q^k a cos theta + q^{2k} a^2)`.
pub fn h_kernel_product(theta: f64, a: Complex64, ctx: &QContext) -> SeriesValue {
    let table = KernelTable::new(&[a], ctx);
    let x = theta.cos();
    let value = table.eval(x);
    SeriesValue {
        value,
        err_est: table.tail_bound * value.norm(),
        terms_used: table.len(),
        converged: true,
    }
}

/// Precomputed quadratic-factor coefficients for a product of kernels
/// `prod_i h(cos theta; a_i)`, shared across the nodes of a quadrature:
/// factor `k` of parameter `a` contributes `(1 - c1 x + c2)` with
/// `c1 = 2 a q^k`, `c2 = a^2 q^{2k}`.
pub struct KernelTable {
    factors: Vec<(Complex64, Complex64)>,
    /// Relative bound on the neglected tail factors.
    pub tail_bound: f64,
}

impl KernelTable {
    pub fn new(params: &[Complex64], ctx: &QContext) -> Self {
        let qn = ctx.q_norm();
        let mut factors = Vec::new();
        let mut tail_bound = 0.0_f64;
        for &a in params {
            let mut aq = a;
            let mut t = a.norm();
            let mut k = 0usize;
            while 3.0 * t > 1e-16 * (1.0 - qn) && k < ctx.max_product_terms {
                factors.push((2.0 * aq, aq * aq));
                aq *= ctx.q;
                t *= qn;
                k += 1;
            }
            // |log| of the dropped factors is at most sum 3|a|q^k <= 3t/(1-q).
            tail_bound += 3.0 * t / (1.0 - qn);
        }
        KernelTable {
            factors,
            tail_bound,
        }
    }

    pub fn len(&self) -> usize {
        self.factors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }

    /// Product of all factors at `x = cos theta`.
    #[inline]
    pub fn eval(&self, x: f64) -> Complex64 {
        let mut prod = ONE;
        for &(c1, c2) in &self.factors {
            prod *= ONE - c1 * x + c2;
        }
        prod
    }
}

/// Gauss-Legendre nodes and weights on `[-1, 1]`, by Newton iteration on the
/// Legendre recurrence.
pub(crate) fn gauss_legendre(n: usize) -> Vec<(f64, f64)> {
    let mut rule = alloc::vec![(0.0, 0.0); n];
    let nf = n as f64;
    for i in 1..=n.div_ceil(2) {
        let mut x = (PI * (i as f64 - 0.25) / (nf + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_p_dp(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        rule[i - 1] = (x, w);
        rule[n - i] = (-x, w);
    }
    rule
}

fn legendre_p_dp(n: usize, x: f64) -> (f64, f64) {
    let mut p_prev = 1.0;
    let mut p = x;
    for k in 1..n {
        let kf = k as f64;
        let p_next = ((2.0 * kf + 1.0) * x * p - kf * p_prev) / (kf + 1.0);
        p_prev = p;
        p = p_next;
    }
    let dp = n as f64 * (x * p - p_prev) / (x * x - 1.0);
    (p, dp)
}

const QUAD_START: usize = 64;
const QUAD_CAP: usize = 4096;

/// Integrate `g` over `[0, pi]`, doubling the Gauss-Legendre node count
/// from 64 until successive estimates differ by at most
/// `eps * max(1, |value|)`, or the 4096-node cap is hit (reported through
/// the `converged` flag).
pub fn theta_quadrature<G>(g: G, ctx: &QContext) -> Result<ThetaIntegralResult>
where
    G: Fn(f64) -> Result<Complex64>,
{
    let run = |n: usize| -> Result<Complex64> {
        let mut acc = Complex64::new(0.0, 0.0);
        for (x, w) in gauss_legendre(n) {
            let theta = 0.5 * PI * (x + 1.0);
            acc += g(theta)? * w;
        }
        Ok(acc * 0.5 * PI)
    };
    let mut prev = run(QUAD_START)?;
    let mut nodes = QUAD_START;
    while nodes < QUAD_CAP {
        let next_nodes = nodes * 2;
        let next = run(next_nodes)?;
        let diff = (next - prev).norm();
        if !is_finite_c(next) {
            return Err(Error::Overflow {
                op: "theta_quadrature",
            });
        }
        if diff <= ctx.eps * next.norm().max(1.0) {
            return Ok(ThetaIntegralResult {
                value: next,
                err_est: diff,
                nodes_used: next_nodes,
                converged: true,
            });
        }
        prev = next;
        nodes = next_nodes;
    }
    Ok(ThetaIntegralResult {
        value: prev,
        err_est: f64::INFINITY,
        nodes_used: nodes,
        converged: false,
    })
}

/// The Askey-Wilson integral `int_0^pi h(cos 2 theta; 1) /
/// h(cos theta; a, b, c, d) d theta`, computed by quadrature. Its closed
/// form is `2 pi (abcd;q)_inf / (q, ab, ac, ad, bc, bd, cd;q)_inf` for
/// parameter moduli below 1.
pub fn askey_wilson(
    a: Complex64,
    b: Complex64,
    c: Complex64,
    d: Complex64,
    ctx: &QContext,
) -> Result<ThetaIntegralResult> {
    let numer = KernelTable::new(&[ONE], ctx);
    let denom = KernelTable::new(&[a, b, c, d], ctx);
    theta_quadrature(
        |theta| {
            let top = numer.eval((2.0 * theta).cos());
            let bottom = denom.eval(theta.cos());
            Ok(top / bottom)
        },
        ctx,
    )
}

/// Closed form of the Askey-Wilson integral (the product side), shared by
/// several verification entries.
pub fn askey_wilson_closed_form(
    a: Complex64,
    b: Complex64,
    c: Complex64,
    d: Complex64,
    ctx: &QContext,
) -> Result<SeriesValue> {
    let num = qpoch_inf(a * b * c * d, ctx)?;
    let den = qpoch_multi_inf_nonzero(
        &[ctx.q, a * b, a * c, a * d, b * c, b * d, c * d],
        ctx,
    )?;
    Ok(num.div(&den).scale(Complex64::new(2.0 * PI, 0.0)))
}
