//! Error type shared by all numerical kernels.

use core::fmt;

use crate::Complex64;

/// Failure modes of the q-calculus kernels.
///
/// Truncation that merely fails to converge is *not* an error: it is reported
/// through the `converged` flag of [`crate::SeriesValue`]. The variants here
/// are conditions under which no meaningful value exists.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// An exact product or sum left the representable range of `f64`.
    /// Overflow is an error, never a value: no NaN or infinity escapes a
    /// public operation.
    Overflow { op: &'static str },
    /// A denominator Pochhammer factor `1 - a q^k` came within `POLE_EPS`
    /// of zero; the parameter point sits on (or numerically on) a pole.
    PoleParameter { factor: Complex64 },
    /// Input outside an operation's domain, e.g. the pointwise q-derivative
    /// at `x = 0` or a context with `|q| >= 1`.
    Domain { op: &'static str, reason: &'static str },
    /// Rejection sampling could not satisfy the modulus and pole-margin
    /// constraints within the attempt budget.
    SamplingExhausted { attempts: u32 },
    /// A coefficient grid does not satisfy the q-difference equation
    /// `D_{q,x} f = D_{q,y} (1 - alpha eta_x) f` within tolerance, so no
    /// homogeneous-Hahn expansion exists.
    NotInKernel { residual: f64 },
    /// A grid satisfies the q-difference equation but its rows contradict
    /// the coefficient recurrence implied by the `x = 0` slice; the input
    /// was not a consistent truncation.
    GridInconsistent {
        row: usize,
        col: usize,
        deviation: f64,
    },
}

pub type Result<T> = core::result::Result<T, Error>;

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Overflow { op } => write!(f, "overflow in {op}"),
            Error::PoleParameter { factor } => {
                write!(
                    f,
                    "pole parameter: denominator factor {} + {}i vanishes",
                    factor.re, factor.im
                )
            }
            Error::Domain { op, reason } => write!(f, "domain error in {op}: {reason}"),
            Error::SamplingExhausted { attempts } => {
                write!(f, "sampling exhausted after {attempts} attempts")
            }
            Error::NotInKernel { residual } => {
                write!(
                    f,
                    "grid is not in the kernel of the q-difference operator (residual {residual:.3e})"
                )
            }
            Error::GridInconsistent {
                row,
                col,
                deviation,
            } => {
                write!(
                    f,
                    "grid row {row}, column {col} deviates from the slice recurrence by {deviation:.3e}"
                )
            }
        }
    }
}

impl core::error::Error for Error {}

impl Error {
    /// Short machine-readable tag, used in verification reports.
    pub fn reason(&self) -> &'static str {
        match self {
            Error::Overflow { .. } => "overflow",
            Error::PoleParameter { .. } => "pole parameter",
            Error::Domain { .. } => "domain error",
            Error::SamplingExhausted { .. } => "sampling exhausted",
            Error::NotInKernel { .. } => "not in kernel",
            Error::GridInconsistent { .. } => "grid inconsistent",
        }
    }
}
