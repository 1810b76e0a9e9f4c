//! The four polynomial families.
//!
//! * Hahn:             `Phi_n^(alpha)(x|q)    = sum_k [n k]_q (alpha;q)_k x^k`
//! * homogeneous Hahn: `Phi_n^(alpha)(x,y|q)  = sum_k [n k]_q (alpha;q)_k x^k y^{n-k}`
//! * Rogers-Szego:     `h_n(x,y|q)            = sum_k [n k]_q x^k y^{n-k}`
//!   (the `alpha = 0` homogeneous Hahn polynomial)
//! * `W_n(a,b,u,v|q)   = sum_j [n j]_q (av;q)_j (bv;q)_j / (abuv;q)_j u^j v^{n-j}`
//!
//! All are evaluated by direct summation with incrementally updated binomial
//! and Pochhammer factors, O(n) per call; degrees stay small (<= 64) in every
//! verification, so no asymptotic machinery is needed.

use alloc::vec::Vec;

use crate::context::QContext;
use crate::error::{Error, Result};
use crate::operators::BivarSeries;
use crate::{Complex64, POLE_EPS};

const ONE: Complex64 = Complex64::new(1.0, 0.0);
const ZERO: Complex64 = Complex64::new(0.0, 0.0);

fn powers(base: Complex64, n: usize) -> Vec<Complex64> {
    let mut p = Vec::with_capacity(n + 1);
    p.push(ONE);
    for k in 1..=n {
        p.push(p[k - 1] * base);
    }
    p
}

/// Hahn polynomial `Phi_n^(alpha)(x|q)`.
pub fn hahn(n: usize, alpha: Complex64, x: Complex64, ctx: &QContext) -> Complex64 {
    let qpow = powers(ctx.q, n);
    let mut acc = ZERO;
    let mut binom = ONE;
    let mut poch = ONE;
    let mut xpow = ONE;
    for k in 0..=n {
        acc += binom * poch * xpow;
        if k < n {
            binom *= (ONE - qpow[n - k]) / (ONE - qpow[k + 1]);
            poch *= ONE - alpha * qpow[k];
            xpow *= x;
        }
    }
    acc
}

/// Homogeneous Hahn polynomial `Phi_n^(alpha)(x, y|q)`.
pub fn hahn_hom(
    n: usize,
    alpha: Complex64,
    x: Complex64,
    y: Complex64,
    ctx: &QContext,
) -> Complex64 {
    let qpow = powers(ctx.q, n);
    let ypow = powers(y, n);
    let mut acc = ZERO;
    let mut binom = ONE;
    let mut poch = ONE;
    let mut xpow = ONE;
    for k in 0..=n {
        acc += binom * poch * xpow * ypow[n - k];
        if k < n {
            binom *= (ONE - qpow[n - k]) / (ONE - qpow[k + 1]);
            poch *= ONE - alpha * qpow[k];
            xpow *= x;
        }
    }
    acc
}

/// Homogeneous Rogers-Szego polynomial `h_n(x, y|q)`.
pub fn rogers_szego(n: usize, x: Complex64, y: Complex64, ctx: &QContext) -> Complex64 {
    hahn_hom(n, ZERO, x, y, ctx)
}

/// `W_n(a, b, u, v|q)`.
///
/// Fails with [`Error::PoleParameter`] when a factor of the denominator
/// `(abuv;q)_j` lies within `POLE_EPS` of zero.
pub fn w_poly(
    n: usize,
    a: Complex64,
    b: Complex64,
    u: Complex64,
    v: Complex64,
    ctx: &QContext,
) -> Result<Complex64> {
    let av = a * v;
    let bv = b * v;
    let abuv = a * b * u * v;
    let qpow = powers(ctx.q, n);
    let vpow = powers(v, n);
    let mut acc = ZERO;
    let mut binom = ONE;
    let mut ratio = ONE; // (av;q)_j (bv;q)_j / (abuv;q)_j
    let mut upow = ONE;
    for j in 0..=n {
        acc += binom * ratio * upow * vpow[n - j];
        if j < n {
            let den = ONE - abuv * qpow[j];
            if den.norm() < POLE_EPS {
                return Err(Error::PoleParameter { factor: den });
            }
            binom *= (ONE - qpow[n - j]) / (ONE - qpow[j + 1]);
            ratio *= (ONE - av * qpow[j]) * (ONE - bv * qpow[j]) / den;
            upow *= u;
        }
    }
    Ok(acc)
}

/// Coefficient grid of `Phi_n^(alpha)(x, y|q)`: entry `(k, n-k)` is
/// `[n k]_q (alpha;q)_k`, on an `n x n` grid.
pub fn hahn_hom_grid(n: usize, alpha: Complex64, ctx: &QContext) -> BivarSeries {
    let qpow = powers(ctx.q, n);
    let mut g = BivarSeries::zeros(n, n);
    let mut binom = ONE;
    let mut poch = ONE;
    for k in 0..=n {
        g.set(k, n - k, binom * poch);
        if k < n {
            binom *= (ONE - qpow[n - k]) / (ONE - qpow[k + 1]);
            poch *= ONE - alpha * qpow[k];
        }
    }
    g
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn rand_c(rng: &mut ChaCha8Rng, r: f64) -> Complex64 {
        Complex64::new(rng.random_range(-r..r), rng.random_range(-r..r))
    }

    #[test]
    fn hahn_degree_zero_is_one() {
        let ctx = QContext::real(0.5).unwrap();
        assert_eq!(hahn(0, c(0.7), Complex64::new(2.0, -1.0), &ctx), c(1.0));
    }

    #[test]
    fn hahn_degree_one_closed_form() {
        // Phi_1 = 1 + (1 - alpha) x
        let ctx = QContext::real(0.4).unwrap();
        let alpha = Complex64::new(0.2, 0.1);
        let x = Complex64::new(-0.3, 0.5);
        let expect = ONE + (ONE - alpha) * x;
        assert!((hahn(1, alpha, x, &ctx) - expect).norm() < 1e-15);
    }

    #[test]
    fn hahn_alpha_zero_matches_rogers_szego_at_y_one() {
        let ctx = QContext::real(0.62).unwrap();
        let x = Complex64::new(0.4, -0.2);
        for n in 0..=8 {
            let lhs = hahn(n, ZERO, x, &ctx);
            let rhs = rogers_szego(n, x, c(1.0), &ctx);
            assert!((lhs - rhs).norm() <= 1e-13 * lhs.norm().max(1.0));
        }
    }

    #[test]
    fn hahn_hom_at_x_zero_is_y_power() {
        let ctx = QContext::real(0.5).unwrap();
        let y = Complex64::new(0.3, 0.4);
        for n in 0..=6 {
            let v = hahn_hom(n, c(0.37), ZERO, y, &ctx);
            assert!((v - y.powu(n as u32)).norm() < 1e-14);
        }
    }

    #[test]
    fn hahn_hom_at_y_one_is_hahn() {
        let ctx = QContext::real(0.71).unwrap();
        let alpha = Complex64::new(0.1, -0.3);
        let x = Complex64::new(0.5, 0.2);
        for n in 0..=9 {
            let lhs = hahn_hom(n, alpha, x, c(1.0), &ctx);
            let rhs = hahn(n, alpha, x, &ctx);
            assert!((lhs - rhs).norm() <= 1e-13 * rhs.norm().max(1.0));
        }
    }

    #[test]
    fn hahn_hom_degree_two_closed_form() {
        // Phi_2 = y^2 + (1+q)(1-alpha) x y + (1-alpha)(1-alpha q) x^2
        let ctx = QContext::real(0.45).unwrap();
        let (alpha, x, y) = (
            Complex64::new(0.3, 0.2),
            Complex64::new(-0.4, 0.1),
            Complex64::new(0.6, -0.5),
        );
        let q = ctx.q;
        let expect = y * y
            + (ONE + q) * (ONE - alpha) * x * y
            + (ONE - alpha) * (ONE - alpha * q) * x * x;
        assert!((hahn_hom(2, alpha, x, y, &ctx) - expect).norm() < 1e-14);
    }

    #[test]
    fn rogers_szego_basics() {
        let ctx = QContext::real(0.5).unwrap();
        let (x, y) = (Complex64::new(0.2, 0.7), Complex64::new(-0.1, 0.4));
        assert!((rogers_szego(0, x, y, &ctx) - ONE).norm() < 1e-15);
        assert!((rogers_szego(1, x, y, &ctx) - (x + y)).norm() < 1e-15);
        let v = rogers_szego(3, ZERO, y, &ctx);
        assert!((v - y.powu(3)).norm() < 1e-15);
    }

    #[test]
    fn rogers_szego_symmetric_in_x_and_y() {
        let ctx = QContext::real(0.58).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..50 {
            let x = rand_c(&mut rng, 0.9);
            let y = rand_c(&mut rng, 0.9);
            let n = rng.random_range(0..=10usize);
            let a = rogers_szego(n, x, y, &ctx);
            let b = rogers_szego(n, y, x, &ctx);
            assert!((a - b).norm() <= 1e-12 * a.norm().max(1.0));
        }
    }

    #[test]
    fn hahn_hom_is_homogeneous_of_degree_n() {
        let ctx = QContext::real(0.52).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..50 {
            let (alpha, x, y, t) = (
                rand_c(&mut rng, 0.8),
                rand_c(&mut rng, 0.9),
                rand_c(&mut rng, 0.9),
                rand_c(&mut rng, 1.5),
            );
            if t.norm() < 1e-3 {
                continue;
            }
            let n = rng.random_range(0..=8usize);
            let scaled = hahn_hom(n, alpha, t * x, t * y, &ctx);
            let direct = t.powu(n as u32) * hahn_hom(n, alpha, x, y, &ctx);
            assert!(
                (scaled - direct).norm() <= 1e-10 * direct.norm().max(1e-6),
                "n={n}"
            );
        }
    }

    #[test]
    fn w_degree_zero_is_one() {
        let ctx = QContext::real(0.5).unwrap();
        let v = w_poly(0, c(0.3), c(0.4), c(0.5), c(0.6), &ctx).unwrap();
        assert_eq!(v, c(1.0));
    }

    #[test]
    fn w_with_second_parameter_zero_is_hahn_hom() {
        // W_n(c, 0, u, v) = Phi_n^(cv)(u, v)
        let ctx = QContext::real(0.47).unwrap();
        let (cc, u, v) = (
            Complex64::new(0.4, -0.1),
            Complex64::new(0.3, 0.3),
            Complex64::new(-0.2, 0.5),
        );
        for n in 0..=7 {
            let lhs = w_poly(n, cc, ZERO, u, v, &ctx).unwrap();
            let rhs = hahn_hom(n, cc * v, u, v, &ctx);
            assert!((lhs - rhs).norm() <= 1e-12 * rhs.norm().max(1.0), "n={n}");
        }
    }

    #[test]
    fn w_degree_one_closed_form() {
        // W_1 = v + (1-av)(1-bv)/(1-abuv) u
        let ctx = QContext::real(0.33).unwrap();
        let (a, b, u, v) = (c(0.25), c(-0.4), c(0.5), c(0.7));
        let expect = v + (ONE - a * v) * (ONE - b * v) / (ONE - a * b * u * v) * u;
        let got = w_poly(1, a, b, u, v, &ctx).unwrap();
        assert!((got - expect).norm() < 1e-14);
    }

    #[test]
    fn w_pole_parameter_detected() {
        // abuv = 1 makes the j = 1 denominator factor vanish exactly.
        let ctx = QContext::real(0.5).unwrap();
        let r = w_poly(2, c(2.0), c(1.0), c(1.0), c(0.5), &ctx);
        assert!(matches!(r, Err(Error::PoleParameter { .. })));
    }

    #[test]
    fn w_scales_as_degree_n_when_pochhammer_arguments_are_held_fixed() {
        // The products av, bv, abuv are what enter the coefficients, so the
        // degree-n homogeneity in (u, v) holds with a, b counter-scaled:
        // W_n(a/t, b/t, tu, tv) = t^n W_n(a, b, u, v).
        let ctx = QContext::real(0.5).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..50 {
            let (a, b, u, v) = (
                rand_c(&mut rng, 0.6),
                rand_c(&mut rng, 0.6),
                rand_c(&mut rng, 0.8),
                rand_c(&mut rng, 0.8),
            );
            let t = Complex64::new(rng.random_range(0.3..1.7), rng.random_range(-0.5..0.5));
            let n = rng.random_range(0..=6usize);
            let lhs = w_poly(n, a / t, b / t, t * u, t * v, &ctx).unwrap();
            let rhs = t.powu(n as u32) * w_poly(n, a, b, u, v, &ctx).unwrap();
            assert!(
                (lhs - rhs).norm() <= 1e-10 * rhs.norm().max(1e-6),
                "n={n} lhs={lhs} rhs={rhs}"
            );
        }
    }

    #[test]
    fn hahn_hom_solves_the_q_difference_equation_pointwise() {
        // D_{q,x} Phi = D_{q,y} [Phi - alpha Phi(qx, y)] at sampled points,
        // through the pointwise q-derivative rather than the grid rule.
        use crate::operators::qderiv_point;
        let mut rng = ChaCha8Rng::seed_from_u64(27);
        for _ in 0..25 {
            let q = rng.random_range(0.1..0.8);
            let ctx = QContext::real(q).unwrap();
            let alpha = rand_c(&mut rng, 0.8);
            let x = rand_c(&mut rng, 0.9);
            let y = rand_c(&mut rng, 0.9);
            if x.norm() < 1e-3 || y.norm() < 1e-3 {
                continue;
            }
            for n in 0..=12usize {
                let lhs = qderiv_point(|t| hahn_hom(n, alpha, t, y, &ctx), x, ctx.q).unwrap();
                let rhs = qderiv_point(
                    |t| {
                        hahn_hom(n, alpha, x, t, &ctx)
                            - alpha * hahn_hom(n, alpha, ctx.q * x, t, &ctx)
                    },
                    y,
                    ctx.q,
                )
                .unwrap();
                let scale = lhs.norm().max(rhs.norm()).max(1.0);
                assert!(
                    (lhs - rhs).norm() <= 1e-10 * scale,
                    "n={n} q={q} alpha={alpha} x={x} y={y}"
                );
            }
        }
    }

    #[test]
    fn grid_matches_pointwise_evaluation() {
        let ctx = QContext::real(0.66).unwrap();
        let alpha = Complex64::new(0.25, 0.4);
        for n in 0..=8usize {
            let g = hahn_hom_grid(n, alpha, &ctx);
            let (x, y) = (Complex64::new(0.31, -0.22), Complex64::new(-0.15, 0.48));
            let direct = hahn_hom(n, alpha, x, y, &ctx);
            let from_grid = g.eval(x, y);
            assert!((direct - from_grid).norm() <= 1e-12 * direct.norm().max(1.0));
        }
    }
}
