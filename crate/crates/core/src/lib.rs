//! Numerical q-calculus in complex double precision.
//!
//! The crate evaluates the classical objects of q-series analysis:
//!
//! * q-shifted factorials `(a;q)_n` and `(a;q)_inf` ([`pochhammer`]),
//! * Hahn, homogeneous Hahn, Rogers-Szego and `W_n` polynomials ([`polynomials`]),
//! * q-derivatives and q-shift operators, pointwise and on truncated
//!   power-series coefficient grids ([`operators`]),
//! * basic hypergeometric series `r_phi_s` and k-fold multiple sums
//!   ([`hyperseries`]),
//! * Jackson q-integrals `int_u^v f(x) d_q x` ([`qintegral`]),
//! * Askey-Wilson kernels `h(cos theta; a)` and theta integrals over
//!   `[0, pi]` ([`contour`]),
//! * the homogeneous-Hahn expansion of bivariate analytic functions, driven
//!   by the q-difference equation
//!   `D_{q,x} f = D_{q,y} (1 - alpha eta_x) f` ([`expansion`]).
//!
//! On top of the kernels sits a registry of 22 q-identities ([`verify`]):
//! each entry evaluates both sides of one identity through independent code
//! paths at randomly sampled parameter points and reports the residual.
//!
//! Every truncated sum, product, or quadrature returns its value together
//! with an error estimate and a convergence flag (see [`SeriesValue`]); the
//! truncation policy lives in [`QContext`]. All operations are pure functions
//! of their arguments and safe to call concurrently.
//!
//! The crate is `no_std` (with `alloc`); IO, file formats and the CLI live in
//! the companion `qcalc` crate.

#![cfg_attr(not(test), no_std)]
// `!(x <= tol)` is used instead of `x > tol` where a NaN must fail the
// check rather than slip through.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

pub mod context;
pub mod contour;
pub mod error;
pub mod expansion;
pub mod hyperseries;
pub mod operators;
pub mod pochhammer;
pub mod polynomials;
pub mod qintegral;
pub mod verify;

pub use context::{QContext, SeriesValue};
pub use error::{Error, Result};
pub use num_complex::Complex64;

/// Modulus below which a Pochhammer denominator factor `1 - a q^k` is
/// treated as a pole rather than roundoff.
pub const POLE_EPS: f64 = 1e-12;

/// True when both components of `z` are finite.
#[inline]
pub(crate) fn is_finite_c(z: Complex64) -> bool {
    z.re.is_finite() && z.im.is_finite()
}
