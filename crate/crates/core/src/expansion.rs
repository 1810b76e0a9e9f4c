//! Homogeneous-Hahn expansion of bivariate coefficient grids.
//!
//! A function analytic at the origin can be written as
//! `f(x, y) = sum_n lambda_n Phi_n^(alpha)(x, y|q)` exactly when it solves
//! the q-difference equation `D_{q,x} f = D_{q,y} (1 - alpha eta_x) f`.
//! On a truncated grid the decision is made numerically:
//! [`expand_in_hahn`] checks the equation's residual, reads the expansion
//! coefficients off the `x^0` slice (`Phi_n^(alpha)(0, y|q) = y^n`), and
//! cross-checks every determined grid entry against the implied recurrence
//!
//!   c_{m,j} = (alpha;q)_m [m+j, m]_q lambda_{m+j}.
//!
//! Only anti-diagonals `m + n <= min(M, N)` are treated as determined:
//! `Phi_n` mixes monomials of total degree `n`, so higher anti-diagonals of
//! a rectangular truncation carry incomplete information.

use alloc::vec::Vec;

use crate::context::QContext;
use crate::error::{Error, Result};
use crate::operators::{pde_residual_windowed, BivarSeries};
use crate::pochhammer::qbinom;
use crate::polynomials::{hahn_hom, hahn_hom_grid};
use crate::Complex64;

const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Default absolute tolerance on grid coefficients for kernel and
/// consistency checks; inputs are synthesized in double precision.
pub const DEFAULT_TOL: f64 = 1e-9;

/// Expansion coefficients `lambda_0..lambda_N` with their `alpha`.
#[derive(Debug, Clone, PartialEq)]
pub struct HahnExpansion {
    pub alpha: Complex64,
    pub lambdas: Vec<Complex64>,
}

impl HahnExpansion {
    /// Highest stored coefficient index.
    pub fn order(&self) -> usize {
        self.lambdas.len().saturating_sub(1)
    }

    /// The expansion of `Phi_k^(alpha)` itself: a unit coefficient vector.
    pub fn unit(k: usize, order: usize, alpha: Complex64) -> Self {
        let mut lambdas = alloc::vec![Complex64::new(0.0, 0.0); order + 1];
        lambdas[k] = ONE;
        HahnExpansion { alpha, lambdas }
    }
}

/// Decide membership in the kernel of the q-difference operator and
/// extract the expansion coefficients.
///
/// Fails with [`Error::NotInKernel`] when the equation residual exceeds
/// `tol` on the determined window, and with [`Error::GridInconsistent`]
/// when the `x^0` slice does not reproduce the rest of the grid through the
/// recurrence (a truncation-inconsistent input).
pub fn expand_in_hahn(
    s: &BivarSeries,
    alpha: Complex64,
    ctx: &QContext,
    tol: f64,
) -> Result<HahnExpansion> {
    let (big_m, big_n) = s.trunc_orders();
    let det = big_m.min(big_n);

    let residual = pde_residual_windowed(s, alpha, ctx.q, Some(det));
    if !(residual.max_abs <= tol) {
        return Err(Error::NotInKernel {
            residual: residual.max_abs,
        });
    }

    let mut lambdas = Vec::with_capacity(det + 1);
    for n in 0..=det {
        lambdas.push(s.get(0, n));
    }

    // Row m of the grid must equal (alpha;q)_m [m+j, m]_q lambda_{m+j}.
    let mut alpha_poch = ONE;
    let mut qm = ONE;
    for m in 0..=big_m.min(det) {
        if m > 0 {
            alpha_poch *= ONE - alpha * qm;
            qm *= ctx.q;
        }
        for j in 0..=det.saturating_sub(m).min(big_n) {
            let expected = alpha_poch * qbinom(m + j, m as i64, ctx) * lambdas[m + j];
            let deviation = (s.get(m, j) - expected).norm();
            if !(deviation <= tol) {
                return Err(Error::GridInconsistent {
                    row: m,
                    col: j,
                    deviation,
                });
            }
        }
    }

    Ok(HahnExpansion { alpha, lambdas })
}

/// Resummation `sum_n lambda_n Phi_n^(alpha)(x, y|q)`.
pub fn eval_expansion(e: &HahnExpansion, x: Complex64, y: Complex64, ctx: &QContext) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for (n, &lam) in e.lambdas.iter().enumerate() {
        acc += lam * hahn_hom(n, e.alpha, x, y, ctx);
    }
    acc
}

/// Coefficient grid of the truncated expansion: the exact polynomial
/// `sum_{n<=N} lambda_n Phi_n^(alpha)(x, y|q)` on an `N x N` grid. This is
/// a kernel member by construction, so it round-trips through
/// [`expand_in_hahn`].
pub fn expansion_grid(e: &HahnExpansion, ctx: &QContext) -> BivarSeries {
    let order = e.order();
    let mut acc = BivarSeries::zeros(order, order);
    for (n, &lam) in e.lambdas.iter().enumerate() {
        acc.add_scaled(&hahn_hom_grid(n, e.alpha, ctx), lam);
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pochhammer::{qpoch_finite, qpoch_multi_inf_nonzero};
    use crate::pochhammer::qpoch_inf;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn rand_c(rng: &mut ChaCha8Rng, r: f64) -> Complex64 {
        Complex64::new(rng.random_range(-r..r), rng.random_range(-r..r))
    }

    #[test]
    fn unit_grid_expands_to_unit_vector() {
        let ctx = QContext::real(0.5).unwrap();
        let alpha = Complex64::new(0.3, -0.2);
        for k in 0..=6usize {
            let g = hahn_hom_grid(k, alpha, &ctx);
            let e = expand_in_hahn(&g, alpha, &ctx, DEFAULT_TOL).unwrap();
            for (n, lam) in e.lambdas.iter().enumerate() {
                let expect = if n == k { ONE } else { Complex64::new(0.0, 0.0) };
                assert!((lam - expect).norm() < 1e-13, "k={k} n={n}");
            }
        }
    }

    #[test]
    fn unit_expansion_resums_to_the_polynomial_itself() {
        let ctx = QContext::real(0.45).unwrap();
        let alpha = Complex64::new(0.2, -0.4);
        let (x, y) = (Complex64::new(0.3, 0.1), Complex64::new(-0.2, 0.5));
        for k in 0..=5usize {
            let e = HahnExpansion::unit(k, 8, alpha);
            let resummed = eval_expansion(&e, x, y, &ctx);
            let direct = hahn_hom(k, alpha, x, y, &ctx);
            assert!((resummed - direct).norm() <= 1e-14 * direct.norm().max(1.0));
        }
    }

    #[test]
    fn roundtrip_recovers_random_coefficients() {
        let ctx = QContext::real(0.4).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for _ in 0..20 {
            let alpha = rand_c(&mut rng, 0.5);
            let mut lambdas = Vec::new();
            let mut scale: f64 = 1.0;
            for _ in 0..=16 {
                lambdas.push(rand_c(&mut rng, scale.max(1e-12)));
                scale *= 0.5;
            }
            let e = HahnExpansion {
                alpha,
                lambdas: lambdas.clone(),
            };
            let grid = expansion_grid(&e, &ctx);
            let back = expand_in_hahn(&grid, alpha, &ctx, DEFAULT_TOL).unwrap();
            let worst = lambdas
                .iter()
                .zip(&back.lambdas)
                .map(|(a, b)| (a - b).norm())
                .fold(0.0_f64, f64::max);
            assert!(worst <= 1e-10, "recovery error {worst}");
        }
    }

    #[test]
    fn roundtrip_evaluation_matches_grid_evaluation() {
        let ctx = QContext::real(0.55).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let alpha = c(0.25);
        let mut lambdas = Vec::new();
        let mut scale: f64 = 1.0;
        for _ in 0..=12 {
            lambdas.push(rand_c(&mut rng, scale.max(1e-12)));
            scale *= 0.5;
        }
        let e = HahnExpansion { alpha, lambdas };
        let grid = expansion_grid(&e, &ctx);
        let back = expand_in_hahn(&grid, alpha, &ctx, DEFAULT_TOL).unwrap();
        for &(x, y) in &[(0.1, 0.2), (-0.25, 0.15), (0.3, -0.3)] {
            let (x, y) = (c(x), c(y));
            let direct = grid.eval(x, y);
            let resummed = eval_expansion(&back, x, y, &ctx);
            assert!(
                (direct - resummed).norm() <= 1e-8 * direct.norm().max(1e-8),
                "at ({x}, {y})"
            );
        }
    }

    #[test]
    fn xy_grid_is_rejected() {
        let ctx = QContext::real(0.5).unwrap();
        let mut g = BivarSeries::zeros(2, 2);
        g.set(1, 1, ONE);
        let r = expand_in_hahn(&g, c(0.0), &ctx, DEFAULT_TOL);
        match r {
            Err(Error::NotInKernel { residual }) => assert!(residual > 1e-6),
            other => panic!("expected NotInKernel, got {other:?}"),
        }
    }

    #[test]
    fn generating_function_coefficients_resum_to_closed_form() {
        // lambda_n = t^n/(q;q)_n resums to (alpha x t;q)inf/((xt, yt;q)inf).
        let ctx = QContext::real(0.5).unwrap();
        let alpha = c(0.3);
        let t = c(0.5);
        let order = 28usize;
        let mut lambdas = Vec::new();
        for n in 0..=order {
            lambdas.push(t.powu(n as u32) / qpoch_finite(ctx.q, n, &ctx).unwrap());
        }
        let e = HahnExpansion { alpha, lambdas };
        // Synthesize, expand back, and resum at small moduli.
        let grid = expansion_grid(&e, &ctx);
        let back = expand_in_hahn(&grid, alpha, &ctx, 1e-8).unwrap();
        for &(x, y) in &[(0.4, 0.3), (-0.35, 0.2), (0.25, -0.45)] {
            let (x, y) = (c(x), c(y));
            let resummed = eval_expansion(&back, x, y, &ctx);
            let closed = qpoch_inf(alpha * x * t, &ctx)
                .unwrap()
                .div(&qpoch_multi_inf_nonzero(&[x * t, y * t], &ctx).unwrap());
            assert!(
                (resummed - closed.value).norm() <= 1e-8 * closed.value.norm(),
                "at ({x}, {y}): {resummed} vs {}",
                closed.value
            );
        }
    }

    #[test]
    fn expansion_is_linear_in_the_grid() {
        let ctx = QContext::real(0.45).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(33);
        let alpha = Complex64::new(0.2, 0.3);
        let make = |rng: &mut ChaCha8Rng| {
            let mut lambdas = Vec::new();
            let mut scale: f64 = 1.0;
            for _ in 0..=10 {
                lambdas.push(rand_c(rng, scale.max(1e-12)));
                scale *= 0.5;
            }
            expansion_grid(&HahnExpansion { alpha, lambdas }, &ctx)
        };
        let g1 = make(&mut rng);
        let g2 = make(&mut rng);
        let sum = g1.add(&g2);
        let e1 = expand_in_hahn(&g1, alpha, &ctx, DEFAULT_TOL).unwrap();
        let e2 = expand_in_hahn(&g2, alpha, &ctx, DEFAULT_TOL).unwrap();
        let es = expand_in_hahn(&sum, alpha, &ctx, DEFAULT_TOL).unwrap();
        for n in 0..=10 {
            let expect = e1.lambdas[n] + e2.lambdas[n];
            assert!((es.lambdas[n] - expect).norm() <= 1e-10);
        }
    }

    #[test]
    fn perturbed_grid_is_rejected_with_large_residual() {
        let ctx = QContext::real(0.6).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for _ in 0..20 {
            let alpha = rand_c(&mut rng, 0.5);
            let mut lambdas = Vec::new();
            let mut scale: f64 = 1.0;
            for _ in 0..=16 {
                lambdas.push(rand_c(&mut rng, scale.max(1e-12)));
                scale *= 0.5;
            }
            let mut grid = expansion_grid(&HahnExpansion { alpha, lambdas }, &ctx);
            let m0 = rng.random_range(1..=5usize);
            let n0 = rng.random_range(1..=5usize);
            let delta = Complex64::new(rng.random_range(1e-3..1e-2), 0.0);
            grid.set(m0, n0, grid.get(m0, n0) + delta);
            match expand_in_hahn(&grid, alpha, &ctx, DEFAULT_TOL) {
                Err(Error::NotInKernel { residual }) => {
                    assert!(residual >= 1e-6, "residual {residual} too small")
                }
                other => panic!("expected NotInKernel, got {other:?}"),
            }
        }
    }
}
