//! Evaluation context and truncated-value types.
//!
//! [`QContext`] bundles the base `q` with the truncation policy every
//! adaptive sum, product, and quadrature obeys. [`SeriesValue`] is the
//! uniform return type of those truncated computations: a value plus an
//! absolute error estimate, a term count, and a convergence flag.

use crate::error::{Error, Result};
use crate::Complex64;

/// Base `q` and truncation policy.
///
/// Invariants enforced at construction:
/// * `|q| < 1` strictly (finite components),
/// * `eps > 0`, `max_series_terms >= 1`, `max_product_terms >= 1`,
///   `stall_window >= 1`.
///
/// The context is immutable after construction; operations taking a
/// `&QContext` are pure and reentrant.
#[derive(Debug, Clone, PartialEq)]
pub struct QContext {
    /// Base of the q-calculus, `|q| < 1`.
    pub q: Complex64,
    /// Target relative truncation error for adaptive sums and products.
    pub eps: f64,
    /// Cap on the number of series terms per (single) summation index.
    pub max_series_terms: usize,
    /// Cap on the number of factors of a truncated infinite product.
    pub max_product_terms: usize,
    /// Consecutive below-threshold terms required before a series sum is
    /// declared converged.
    pub stall_window: usize,
}

impl QContext {
    pub const DEFAULT_EPS: f64 = 1e-10;
    pub const DEFAULT_MAX_SERIES_TERMS: usize = 10_000;
    pub const DEFAULT_MAX_PRODUCT_TERMS: usize = 2_000;
    pub const DEFAULT_STALL_WINDOW: usize = 3;

    /// Context with the default truncation policy.
    pub fn new(q: Complex64) -> Result<Self> {
        Self::with_policy(
            q,
            Self::DEFAULT_EPS,
            Self::DEFAULT_MAX_SERIES_TERMS,
            Self::DEFAULT_MAX_PRODUCT_TERMS,
            Self::DEFAULT_STALL_WINDOW,
        )
    }

    /// Context with a real base `q`.
    pub fn real(q: f64) -> Result<Self> {
        Self::new(Complex64::new(q, 0.0))
    }

    /// Fully explicit constructor; rejects any invalid field.
    pub fn with_policy(
        q: Complex64,
        eps: f64,
        max_series_terms: usize,
        max_product_terms: usize,
        stall_window: usize,
    ) -> Result<Self> {
        if !(q.re.is_finite() && q.im.is_finite()) || q.norm() >= 1.0 {
            return Err(Error::Domain {
                op: "QContext",
                reason: "|q| must be strictly less than 1",
            });
        }
        if !(eps > 0.0) || !eps.is_finite() {
            return Err(Error::Domain {
                op: "QContext",
                reason: "eps must be a positive finite real",
            });
        }
        if max_series_terms == 0 || max_product_terms == 0 || stall_window == 0 {
            return Err(Error::Domain {
                op: "QContext",
                reason: "term caps and stall window must be at least 1",
            });
        }
        Ok(QContext {
            q,
            eps,
            max_series_terms,
            max_product_terms,
            stall_window,
        })
    }

    /// Same `q`, different target accuracy.
    pub fn with_eps(&self, eps: f64) -> Result<Self> {
        Self::with_policy(
            self.q,
            eps,
            self.max_series_terms,
            self.max_product_terms,
            self.stall_window,
        )
    }

    /// `|q|`.
    #[inline]
    pub fn q_norm(&self) -> f64 {
        self.q.norm()
    }

    /// `q^n` for small non-negative `n`.
    #[inline]
    pub fn q_pow(&self, n: usize) -> Complex64 {
        self.q.powu(n as u32)
    }
}

/// A truncated numerical value: the computed value, an estimate of the
/// absolute truncation error, the number of terms (or factors, or nodes)
/// consumed, and whether the producing policy's accuracy target was met.
///
/// When `converged` is true, `err_est <= eps * max(1, |value|)` under the
/// producing context.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesValue {
    pub value: Complex64,
    pub err_est: f64,
    pub terms_used: usize,
    pub converged: bool,
}

impl SeriesValue {
    /// An exactly known value: zero error, zero terms, converged.
    pub fn exact(value: Complex64) -> Self {
        SeriesValue {
            value,
            err_est: 0.0,
            terms_used: 0,
            converged: true,
        }
    }

    /// Product of two truncated values with first-order error propagation.
    pub fn mul(&self, other: &SeriesValue) -> SeriesValue {
        SeriesValue {
            value: self.value * other.value,
            err_est: self.err_est * other.value.norm()
                + other.err_est * self.value.norm()
                + self.err_est * other.err_est,
            terms_used: self.terms_used + other.terms_used,
            converged: self.converged && other.converged,
        }
    }

    /// Quotient of two truncated values. The caller is responsible for
    /// keeping the divisor away from zero (see `pochhammer::qpoch_inf_nonzero`).
    pub fn div(&self, other: &SeriesValue) -> SeriesValue {
        let dn = other.value.norm();
        let value = self.value / other.value;
        let err_est = if dn > 0.0 {
            (self.err_est + value.norm() * other.err_est) / dn
        } else {
            f64::INFINITY
        };
        SeriesValue {
            value,
            err_est,
            terms_used: self.terms_used + other.terms_used,
            converged: self.converged && other.converged && dn > 0.0,
        }
    }

    /// Scale by an exactly known complex factor.
    pub fn scale(&self, c: Complex64) -> SeriesValue {
        SeriesValue {
            value: self.value * c,
            err_est: self.err_est * c.norm(),
            terms_used: self.terms_used,
            converged: self.converged,
        }
    }

    /// Sum of two truncated values; error estimates add.
    pub fn add(&self, other: &SeriesValue) -> SeriesValue {
        SeriesValue {
            value: self.value + other.value,
            err_est: self.err_est + other.err_est,
            terms_used: self.terms_used + other.terms_used,
            converged: self.converged && other.converged,
        }
    }
}
