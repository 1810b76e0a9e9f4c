//! q-derivatives, q-partial derivatives, and the q-shift operator.
//!
//! The pointwise q-derivative is `D_{q,x} f(x) = (f(x) - f(qx)) / x`. On a
//! truncated power series it acts termwise through
//! `D_{q,x} x^k = (1 - q^k) x^{k-1}`, which is how everything here operates
//! on coefficient data: [`UniSeries`] holds a univariate truncation,
//! [`BivarSeries`] a rectangular bivariate coefficient grid
//! `f(x, y) = sum_{m,n} c_{m,n} x^m y^n`, `0 <= m <= M`, `0 <= n <= N`.
//!
//! [`qpde_residual_series`] measures how far a grid is from solving
//!
//!   D_{q,x} f = D_{q,y} (1 - alpha eta_x) f,
//!
//! where `eta_x` replaces `x` by `qx`. In coefficients the residual at
//! `(m, n)` is `c_{m+1,n} (1 - q^{m+1}) - c_{m,n+1} (1 - alpha q^m)(1 - q^{n+1})`,
//! which the truncation determines only for `m <= M-1`, `n <= N-1`.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::Complex64;

const ONE: Complex64 = Complex64::new(1.0, 0.0);
const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Truncated univariate power series; `coeffs[k]` multiplies `x^k`.
/// An empty coefficient list is the zero series of truncation order -1.
#[derive(Debug, Clone, PartialEq)]
pub struct UniSeries {
    coeffs: Vec<Complex64>,
}

impl UniSeries {
    pub fn new(coeffs: Vec<Complex64>) -> Self {
        UniSeries { coeffs }
    }

    pub fn zero() -> Self {
        UniSeries { coeffs: Vec::new() }
    }

    /// Truncation order `N` (coefficients 0..=N); -1 for the empty series.
    pub fn trunc_order(&self) -> isize {
        self.coeffs.len() as isize - 1
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> Complex64 {
        self.coeffs.get(k).copied().unwrap_or(ZERO)
    }

    /// Horner evaluation at `x`.
    pub fn eval(&self, x: Complex64) -> Complex64 {
        let mut acc = ZERO;
        for &c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }
}

/// Rectangular bivariate coefficient grid, row-major in the x-power.
#[derive(Debug, Clone, PartialEq)]
pub struct BivarSeries {
    x_order: usize,
    y_order: usize,
    coeffs: Vec<Complex64>,
}

impl BivarSeries {
    /// All-zero grid with x-powers `0..=m` and y-powers `0..=n`.
    pub fn zeros(m: usize, n: usize) -> Self {
        BivarSeries {
            x_order: m,
            y_order: n,
            coeffs: vec![ZERO; (m + 1) * (n + 1)],
        }
    }

    /// Truncation orders `(M, N)`.
    pub fn trunc_orders(&self) -> (usize, usize) {
        (self.x_order, self.y_order)
    }

    #[inline]
    pub fn get(&self, m: usize, n: usize) -> Complex64 {
        if m <= self.x_order && n <= self.y_order {
            self.coeffs[m * (self.y_order + 1) + n]
        } else {
            ZERO
        }
    }

    #[inline]
    pub fn set(&mut self, m: usize, n: usize, value: Complex64) {
        assert!(m <= self.x_order && n <= self.y_order, "index out of grid");
        self.coeffs[m * (self.y_order + 1) + n] = value;
    }

    /// Largest coefficient magnitude.
    pub fn max_abs(&self) -> f64 {
        self.coeffs.iter().fold(0.0, |m, c| m.max(c.norm()))
    }

    /// Polynomial evaluation `sum c_{m,n} x^m y^n`.
    pub fn eval(&self, x: Complex64, y: Complex64) -> Complex64 {
        let mut acc = ZERO;
        for m in (0..=self.x_order).rev() {
            let mut row = ZERO;
            for n in (0..=self.y_order).rev() {
                row = row * y + self.get(m, n);
            }
            acc = acc * x + row;
        }
        acc
    }

    /// Coefficient-wise sum; the result spans the larger of the two grids.
    pub fn add(&self, other: &BivarSeries) -> BivarSeries {
        let m = self.x_order.max(other.x_order);
        let n = self.y_order.max(other.y_order);
        let mut out = BivarSeries::zeros(m, n);
        for i in 0..=m {
            for j in 0..=n {
                out.set(i, j, self.get(i, j) + other.get(i, j));
            }
        }
        out
    }

    /// Add `c * other` into `self` (grids may differ in size; `other` must
    /// fit inside `self`).
    pub fn add_scaled(&mut self, other: &BivarSeries, c: Complex64) {
        assert!(
            other.x_order <= self.x_order && other.y_order <= self.y_order,
            "scaled grid does not fit"
        );
        for i in 0..=other.x_order {
            for j in 0..=other.y_order {
                let v = self.get(i, j) + c * other.get(i, j);
                self.set(i, j, v);
            }
        }
    }
}

/// Pointwise q-derivative `(f(x) - f(qx)) / x`.
///
/// The pointwise form is singular at `x = 0`; use [`qderiv_series`] there.
pub fn qderiv_point<F>(f: F, x: Complex64, q: Complex64) -> Result<Complex64>
where
    F: Fn(Complex64) -> Complex64,
{
    if x.norm() < 1e-14 {
        return Err(Error::Domain {
            op: "qderiv_point",
            reason: "pointwise q-derivative is singular at x = 0; use the series form",
        });
    }
    Ok((f(x) - f(q * x)) / x)
}

/// Termwise q-derivative of a univariate truncation: the output coefficient
/// at `k - 1` is `c_k (1 - q^k)`, and the truncation order drops by one.
pub fn qderiv_series(s: &UniSeries, q: Complex64) -> UniSeries {
    if s.coeffs().is_empty() {
        return UniSeries::zero();
    }
    let mut out = Vec::with_capacity(s.coeffs().len() - 1);
    let mut qk = q;
    for k in 1..s.coeffs().len() {
        out.push(s.coeff(k) * (ONE - qk));
        qk *= q;
    }
    UniSeries::new(out)
}

/// q-partial derivative in `x`: grid rule `(m, n) <- c_{m+1,n} (1 - q^{m+1})`.
pub fn qpartial_x(s: &BivarSeries, q: Complex64) -> BivarSeries {
    let (big_m, big_n) = s.trunc_orders();
    let m_out = big_m.saturating_sub(1);
    let mut out = BivarSeries::zeros(m_out, big_n);
    let mut qk = q;
    for m in 0..big_m {
        for n in 0..=big_n {
            out.set(m, n, s.get(m + 1, n) * (ONE - qk));
        }
        qk *= q;
    }
    out
}

/// q-partial derivative in `y`: grid rule `(m, n) <- c_{m,n+1} (1 - q^{n+1})`.
pub fn qpartial_y(s: &BivarSeries, q: Complex64) -> BivarSeries {
    let (big_m, big_n) = s.trunc_orders();
    let n_out = big_n.saturating_sub(1);
    let mut out = BivarSeries::zeros(big_m, n_out);
    for m in 0..=big_m {
        let mut qk = q;
        for n in 0..big_n {
            out.set(m, n, s.get(m, n + 1) * (ONE - qk));
            qk *= q;
        }
    }
    out
}

/// q-shift `eta_x`: coefficient `(m, n)` is multiplied by `q^m`.
pub fn qshift_x(s: &BivarSeries, q: Complex64) -> BivarSeries {
    let (big_m, big_n) = s.trunc_orders();
    let mut out = BivarSeries::zeros(big_m, big_n);
    let mut qk = ONE;
    for m in 0..=big_m {
        for n in 0..=big_n {
            out.set(m, n, s.get(m, n) * qk);
        }
        qk *= q;
    }
    out
}

/// Residual of the q-difference equation, together with the largest input
/// coefficient magnitude so callers can form a relative figure.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PdeResidual {
    /// Max absolute residual coefficient over the determined window.
    pub max_abs: f64,
    /// Max absolute input coefficient over the whole grid.
    pub input_scale: f64,
}

/// Max absolute coefficient of `D_{q,x} f - D_{q,y}(1 - alpha eta_x) f`
/// over the indices the truncation determines (`m <= M-1`, `n <= N-1`).
pub fn qpde_residual_series(s: &BivarSeries, alpha: Complex64, q: Complex64) -> PdeResidual {
    pde_residual_windowed(s, alpha, q, None)
}

/// Same residual restricted to anti-diagonals `m + n <= max_total` when a
/// window is given.
pub(crate) fn pde_residual_windowed(
    s: &BivarSeries,
    alpha: Complex64,
    q: Complex64,
    max_total: Option<usize>,
) -> PdeResidual {
    let (big_m, big_n) = s.trunc_orders();
    let mut max_res = 0.0_f64;
    let mut qm = ONE; // q^m
    for m in 0..big_m {
        let mut qn1 = q; // q^{n+1}
        for n in 0..big_n {
            if max_total.is_some_and(|t| m + n > t) {
                break;
            }
            let lhs = s.get(m + 1, n) * (ONE - qm * q);
            let rhs = s.get(m, n + 1) * (ONE - alpha * qm) * (ONE - qn1);
            max_res = max_res.max((lhs - rhs).norm());
            qn1 *= q;
        }
        qm *= q;
    }
    PdeResidual {
        max_abs: max_res,
        input_scale: s.max_abs(),
    }
}
