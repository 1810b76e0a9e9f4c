//! Basic hypergeometric series and multiple q-sums.
//!
//! The series `r_phi_s(a_1..a_r; b_1..b_s; q, z)` is
//!
//!   sum_{n>=0} [(a_1..a_r;q)_n / ((q;q)_n (b_1..b_s;q)_n)]
//!              * [(-1)^n q^{n(n-1)/2}]^(s-r+1) * z^n.
//!
//! Every series used by the verification registry has `r = s + 1`, making
//! the bracketed compensation factor 1; [`PhiSpec::balanced`] pads the
//! parameter lists with zeros (`(0;q)_n = 1`) to reach that normal form.
//!
//! [`multisum`] sums a k-fold series over a growing hypercube with
//! shell-based stopping, and backs the q-Lauricella and Rogers-Szego
//! multiple sums.

use alloc::vec;
use alloc::vec::Vec;

// Inherent f64 math is std-only; the trait supplies it (via libm) in no_std builds.
#[allow(unused_imports)]
use num_traits::Float;

use crate::context::{QContext, SeriesValue};
use crate::error::{Error, Result};
use crate::pochhammer::{qpoch_finite, qpoch_inf_nonzero};
use crate::{is_finite_c, Complex64, POLE_EPS};

const ONE: Complex64 = Complex64::new(1.0, 0.0);
const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Parameters of a basic hypergeometric series.
#[derive(Debug, Clone, PartialEq)]
pub struct PhiSpec {
    /// Upper parameters `a_1..a_r`.
    pub num_params: Vec<Complex64>,
    /// Lower parameters `b_1..b_s`.
    pub den_params: Vec<Complex64>,
    /// Argument `z`.
    pub z: Complex64,
}

impl PhiSpec {
    pub fn new(num_params: Vec<Complex64>, den_params: Vec<Complex64>, z: Complex64) -> Self {
        PhiSpec {
            num_params,
            den_params,
            z,
        }
    }

    /// Pad the shorter side with zero parameters until `r = s + 1`, the
    /// normal form in which the compensation factor is identically 1.
    pub fn balanced(
        mut num_params: Vec<Complex64>,
        mut den_params: Vec<Complex64>,
        z: Complex64,
    ) -> Self {
        while num_params.len() < den_params.len() + 1 {
            num_params.push(ZERO);
        }
        while den_params.len() + 1 < num_params.len() {
            den_params.push(ZERO);
        }
        PhiSpec {
            num_params,
            den_params,
            z,
        }
    }
}

/// Adaptive single-index summation `sum_{n>=0} term(n)` under the context
/// policy: stops after `stall_window` consecutive terms below a small
/// fraction of `eps * |partial|` and reports a geometric tail estimate.
/// The threshold is relative to the partial sum itself (no absolute floor),
/// so small totals reached through cancellation keep their relative
/// accuracy.
pub fn sum_series<F>(ctx: &QContext, mut term: F) -> Result<SeriesValue>
where
    F: FnMut(usize) -> Result<Complex64>,
{
    let mut sum = ZERO;
    let mut below = 0usize;
    let mut window_max = 0.0_f64;
    let mut last_mag = 0.0_f64;
    for n in 0..ctx.max_series_terms {
        let t = term(n)?;
        sum += t;
        if !is_finite_c(sum) {
            return Err(Error::Overflow { op: "sum_series" });
        }
        last_mag = t.norm();
        let thresh = 1e-3 * ctx.eps * sum.norm();
        if last_mag <= thresh {
            below += 1;
            window_max = window_max.max(last_mag);
        } else {
            below = 0;
            window_max = 0.0;
        }
        if below >= ctx.stall_window {
            let err_est = 9.0 * window_max;
            return Ok(SeriesValue {
                value: sum,
                err_est,
                terms_used: n + 1,
                converged: err_est <= ctx.eps * sum.norm().max(1.0),
            });
        }
    }
    Ok(SeriesValue {
        value: sum,
        err_est: 9.0 * last_mag,
        terms_used: ctx.max_series_terms,
        converged: false,
    })
}

/// Evaluate a basic hypergeometric series.
///
/// Denominator factors `1 - b_j q^n` are checked against `POLE_EPS` before
/// each use; a vanishing factor is a [`Error::PoleParameter`]. Failure to
/// reach the stall criterion is reported through the `converged` flag.
pub fn phi(spec: &PhiSpec, ctx: &QContext) -> Result<SeriesValue> {
    let p = spec.den_params.len() as i32 + 1 - spec.num_params.len() as i32;
    let mut t = ONE;
    let mut qn = ONE; // q^n
    sum_series(ctx, move |n| {
        if n == 0 {
            return Ok(t);
        }
        // Ratio from term n-1 to term n, using factors at index n-1.
        let mut ratio = spec.z;
        for &a in &spec.num_params {
            ratio *= ONE - a * qn;
        }
        let den_q = ONE - qn * ctx.q; // 1 - q^n
        for &b in &spec.den_params {
            let factor = ONE - b * qn;
            if factor.norm() < POLE_EPS {
                return Err(Error::PoleParameter { factor });
            }
            ratio /= factor;
        }
        if p != 0 {
            ratio *= (-qn).powi(p);
        }
        qn *= ctx.q;
        t *= ratio / den_q;
        Ok(t)
    })
}

/// Direct rectangular truncation `sum_{0 <= n_i <= n_max} term(n)` of a
/// k-fold series, in lexicographic order.
pub fn box_sum<F>(k: usize, n_max: usize, term: &mut F) -> Result<Complex64>
where
    F: FnMut(&[usize]) -> Result<Complex64>,
{
    let mut idx = vec![0usize; k];
    let mut sum = ZERO;
    loop {
        sum += term(&idx)?;
        // Odometer increment.
        let mut pos = k;
        loop {
            if pos == 0 {
                return Ok(sum);
            }
            pos -= 1;
            if idx[pos] < n_max {
                idx[pos] += 1;
                for slot in idx[pos + 1..].iter_mut() {
                    *slot = 0;
                }
                break;
            }
        }
    }
}

/// Adaptive k-fold summation over the hypercube `[0, N]^k`: `N` starts at 8
/// and doubles until the newest hyper-shell contributes no more than
/// `eps * |partial sum|`, or `max_series_terms^(1/k)` is reached.
pub fn multisum<F>(k: usize, mut term: F, ctx: &QContext) -> Result<SeriesValue>
where
    F: FnMut(&[usize]) -> Result<Complex64>,
{
    if k == 0 {
        return Err(Error::Domain {
            op: "multisum",
            reason: "the number of summation indices must be at least 1",
        });
    }
    let cap = (ctx.max_series_terms as f64)
        .powf(1.0 / k as f64)
        .floor()
        .max(8.0) as usize;
    let mut n = 8usize.min(cap);
    let mut total = box_sum(k, n, &mut term)?;
    let mut terms_used = (n + 1).pow(k as u32);

    while n < cap {
        let n2 = (2 * n).min(cap);
        // Shell: indices in [0, n2]^k with at least one coordinate > n.
        let mut shell = ZERO;
        let mut idx = vec![0usize; k];
        'outer: loop {
            if idx.iter().any(|&i| i > n) {
                shell += term(&idx)?;
                terms_used += 1;
            }
            let mut pos = k;
            loop {
                if pos == 0 {
                    break 'outer;
                }
                pos -= 1;
                if idx[pos] < n2 {
                    idx[pos] += 1;
                    for slot in idx[pos + 1..].iter_mut() {
                        *slot = 0;
                    }
                    break;
                }
            }
        }
        total += shell;
        if !is_finite_c(total) {
            return Err(Error::Overflow { op: "multisum" });
        }
        let shell_mag = shell.norm();
        if shell_mag <= ctx.eps * total.norm() + f64::MIN_POSITIVE {
            return Ok(SeriesValue {
                value: total,
                err_est: shell_mag,
                terms_used,
                converged: true,
            });
        }
        n = n2;
    }
    Ok(SeriesValue {
        value: total,
        err_est: total.norm(),
        terms_used,
        converged: false,
    })
}

/// Ratio of finite q-shifted factorials `(a;q)_m / (c;q)_m` with pole checks
/// on the denominator factors.
pub(crate) fn poch_ratio_checked(
    a: Complex64,
    c: Complex64,
    m: usize,
    ctx: &QContext,
) -> Result<Complex64> {
    let mut ratio = ONE;
    let mut qj = ONE;
    for _ in 0..m {
        let den = ONE - c * qj;
        if den.norm() < POLE_EPS {
            return Err(Error::PoleParameter { factor: den });
        }
        ratio *= (ONE - a * qj) / den;
        qj *= ctx.q;
    }
    Ok(ratio)
}

/// q-Lauricella multiple sum
///
///   sum_{n_1..n_k} (a;q)_{n_1+..+n_k} prod_i (b_i;q)_{n_i} y_i^{n_i}
///                  / [(c;q)_{n_1+..+n_k} prod_i (q;q)_{n_i}]
///
/// over independent upper parameters `b_i` (`bs` and `ys` must have equal
/// length, `k >= 1`).
pub fn qlauricella(
    a: Complex64,
    c: Complex64,
    bs: &[Complex64],
    ys: &[Complex64],
    ctx: &QContext,
) -> Result<SeriesValue> {
    if bs.len() != ys.len() || bs.is_empty() {
        return Err(Error::Domain {
            op: "qlauricella",
            reason: "bs and ys must be non-empty lists of equal length",
        });
    }
    let k = bs.len();
    multisum(
        k,
        |idx| {
            let total: usize = idx.iter().sum();
            let mut t = poch_ratio_checked(a, c, total, ctx)?;
            for i in 0..k {
                t *= qpoch_finite(bs[i], idx[i], ctx)? * ys[i].powu(idx[i] as u32)
                    / qpoch_finite(ctx.q, idx[i], ctx)?;
            }
            Ok(t)
        },
        ctx,
    )
}

/// Partial-fraction form of the Rogers-Szego polynomial `h_k(a, b|q)`:
///
///   a^k/(b/a;q)_inf sum_n q^{n(k+1)}/((q;q)_n (qa/b;q)_n)  +  (a <-> b).
///
/// Requires nonzero `a`, `b` with `b/a` off the lattice `q^{-m}` (poles are
/// reported as [`Error::PoleParameter`]).
pub fn rs_partial_fraction(
    k: usize,
    a: Complex64,
    b: Complex64,
    ctx: &QContext,
) -> Result<SeriesValue> {
    if a.norm() < 1e-14 || b.norm() < 1e-14 {
        return Err(Error::Domain {
            op: "rs_partial_fraction",
            reason: "a and b must be nonzero",
        });
    }
    let zk = ctx.q.powu(k as u32 + 1);
    let half = |p: Complex64, r: Complex64| -> Result<SeriesValue> {
        // p^k / (r/p;q)_inf * phi(-; q p / r; q, q^{k+1}) with r/p = other/this
        let quot = r / p;
        let series = phi(&PhiSpec::balanced(vec![], vec![ctx.q / quot], zk), ctx)?;
        let den = qpoch_inf_nonzero(quot, ctx)?;
        Ok(series.div(&den).scale(p.powu(k as u32)))
    };
    let ta = half(a, b)?;
    let tb = half(b, a)?;
    Ok(ta.add(&tb))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pochhammer::{qpoch_inf, qpoch_multi_inf};
    use crate::polynomials::rogers_szego;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn ctx(q: f64) -> QContext {
        QContext::real(q).unwrap()
    }

    #[test]
    fn phi_at_zero_argument_is_one() {
        let ctx = ctx(0.5);
        let spec = PhiSpec::new(vec![c(0.3), c(0.4)], vec![c(0.2)], ZERO);
        let v = phi(&spec, &ctx).unwrap();
        assert_eq!(v.value, ONE);
        assert!(v.converged);
    }

    #[test]
    fn phi_with_unit_upper_parameter_is_one() {
        let ctx = ctx(0.5);
        let spec = PhiSpec::new(vec![c(1.0), c(0.4)], vec![c(0.2)], c(0.6));
        let v = phi(&spec, &ctx).unwrap();
        assert!((v.value - ONE).norm() < 1e-14);
        assert!(v.converged);
    }

    #[test]
    fn phi_balanced_pads_to_normal_form() {
        let s = PhiSpec::balanced(vec![c(0.5)], vec![c(0.1), c(0.2), c(0.3)], c(0.4));
        assert_eq!(s.num_params.len(), 4);
        assert_eq!(s.den_params.len(), 3);
        let s2 = PhiSpec::balanced(vec![], vec![c(0.1)], c(0.4));
        assert_eq!(s2.num_params.len(), 2);
    }

    #[test]
    fn phi_q_gauss_summation() {
        // 2phi1(A, B; C; q, C/(AB)) = (C/A, C/B;q)inf / ((C, C/(AB));q)inf
        let ctx = ctx(0.55);
        let a = Complex64::new(0.4, 0.1);
        let b = Complex64::new(-0.3, 0.2);
        let cc = Complex64::new(0.05, -0.02);
        let z = cc / (a * b);
        assert!(z.norm() < 1.0);
        let lhs = phi(&PhiSpec::new(vec![a, b], vec![cc], z), &ctx).unwrap();
        let num = qpoch_multi_inf(&[cc / a, cc / b], &ctx).unwrap();
        let den = qpoch_multi_inf(&[cc, z], &ctx).unwrap();
        let rhs = num.div(&den);
        assert!(
            (lhs.value - rhs.value).norm() <= 1e-10 * rhs.value.norm(),
            "lhs {} rhs {}",
            lhs.value,
            rhs.value
        );
    }

    #[test]
    fn phi_detects_pole_in_lower_parameter() {
        // b = 1/q puts a zero of (b;q)_n at n = 1.
        let ctx = ctx(0.5);
        let spec = PhiSpec::new(vec![c(0.3), c(0.2)], vec![c(2.0)], c(0.5));
        assert!(matches!(
            phi(&spec, &ctx),
            Err(Error::PoleParameter { .. })
        ));
    }

    #[test]
    fn multisum_of_zero_terms_is_zero() {
        let v = multisum(2, |_| Ok(ZERO), &ctx(0.5)).unwrap();
        assert_eq!(v.value, ZERO);
        assert!(v.converged);
    }

    #[test]
    fn multisum_geometric_single_index() {
        let z = Complex64::new(0.35, 0.2);
        let v = multisum(1, |idx| Ok(z.powu(idx[0] as u32)), &ctx(0.5)).unwrap();
        let expect = ONE / (ONE - z);
        assert!(v.converged);
        assert!((v.value - expect).norm() <= 1e-9 * expect.norm());
    }

    #[test]
    fn multisum_separable_double_sum_factorizes() {
        // sum x^m y^n / ((q;q)_m (q;q)_n) = [sum x^m/(q;q)_m][sum y^n/(q;q)_n]
        let ctx = ctx(0.45).with_eps(1e-12).unwrap();
        let x = Complex64::new(0.4, -0.15);
        let y = Complex64::new(-0.25, 0.3);
        let double = multisum(
            2,
            |idx| {
                Ok(x.powu(idx[0] as u32) * y.powu(idx[1] as u32)
                    / (qpoch_finite(ctx.q, idx[0], &ctx)? * qpoch_finite(ctx.q, idx[1], &ctx)?))
            },
            &ctx,
        )
        .unwrap();
        let single = |w: Complex64| {
            multisum(
                1,
                |idx| Ok(w.powu(idx[0] as u32) / qpoch_finite(ctx.q, idx[0], &ctx)?),
                &ctx,
            )
            .unwrap()
            .value
        };
        let product = single(x) * single(y);
        assert!((double.value - product).norm() <= 1e-10 * product.norm());
        // Euler: sum z^n/(q;q)_n = 1/(z;q)_inf
        let euler = (qpoch_inf(x, &ctx).unwrap().value * qpoch_inf(y, &ctx).unwrap().value)
            .finv();
        assert!((double.value - euler).norm() <= 1e-9 * euler.norm());
    }

    #[test]
    fn multisum_box_enlargement_stays_within_err_est() {
        let ctx = ctx(0.5);
        let x = Complex64::new(0.45, 0.1);
        let y = Complex64::new(0.2, -0.35);
        let mut term = |idx: &[usize]| -> Result<Complex64> {
            Ok(x.powu(idx[0] as u32) * y.powu(idx[1] as u32))
        };
        let adaptive = multisum(2, &mut term, &ctx).unwrap();
        let n_used = (adaptive.terms_used as f64).sqrt() as usize;
        let bigger = box_sum(2, 2 * n_used, &mut term).unwrap();
        assert!(
            (bigger - adaptive.value).norm() <= adaptive.err_est.max(1e-15),
            "enlarged box moved the value by more than err_est"
        );
    }

    #[test]
    fn qlauricella_trivial_cases() {
        let ctx = ctx(0.5);
        let v = qlauricella(
            c(0.4),
            c(0.2),
            &[c(0.3), c(0.6)],
            &[ZERO, ZERO],
            &ctx,
        )
        .unwrap();
        assert!((v.value - ONE).norm() < 1e-12);
    }

    #[test]
    fn qlauricella_single_index_matches_direct_sum() {
        let ctx = ctx(0.5);
        let (a, cc, b, y) = (c(0.45), c(0.15), c(-0.3), c(0.4));
        let lhs = qlauricella(a, cc, &[b], &[y], &ctx).unwrap();
        let direct = sum_series(&ctx, |n| {
            Ok(poch_ratio_checked(a, cc, n, &ctx)? * qpoch_finite(b, n, &ctx)?
                * y.powu(n as u32)
                / qpoch_finite(ctx.q, n, &ctx)?)
        })
        .unwrap();
        assert!((lhs.value - direct.value).norm() <= 1e-11 * direct.value.norm().max(1.0));
    }

    #[test]
    fn qlauricella_symmetric_under_pair_permutation() {
        let ctx = ctx(0.42);
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for _ in 0..10 {
            let a = Complex64::new(rng.random_range(-0.5..0.5), rng.random_range(-0.5..0.5));
            let cc = Complex64::new(rng.random_range(-0.4..0.4), rng.random_range(-0.4..0.4));
            let b1 = Complex64::new(rng.random_range(-0.5..0.5), 0.1);
            let b2 = Complex64::new(0.2, rng.random_range(-0.5..0.5));
            let y1 = Complex64::new(rng.random_range(-0.4..0.4), 0.2);
            let y2 = Complex64::new(-0.1, rng.random_range(-0.4..0.4));
            let v12 = qlauricella(a, cc, &[b1, b2], &[y1, y2], &ctx).unwrap();
            let v21 = qlauricella(a, cc, &[b2, b1], &[y2, y1], &ctx).unwrap();
            assert!((v12.value - v21.value).norm() <= 1e-10 * v12.value.norm().max(1.0));
        }
    }

    #[test]
    fn rs_partial_fraction_degree_zero_is_one() {
        // The two partial-fraction halves are separately large and cancel
        // to h_0 = 1, so accuracy is a few orders above the context eps.
        let ctx = ctx(0.5);
        let v = rs_partial_fraction(0, c(0.3), c(0.7), &ctx).unwrap();
        assert!((v.value - ONE).norm() < 1e-8, "got {}", v.value);
    }

    #[test]
    fn rs_partial_fraction_matches_direct_rogers_szego() {
        // h_2(0.3, 0.7|0.5) = a^2 + (1+q)ab + b^2 = 0.895
        let ctx = ctx(0.5);
        let v = rs_partial_fraction(2, c(0.3), c(0.7), &ctx).unwrap();
        assert!((v.value - c(0.895)).norm() < 1e-9, "got {}", v.value);
        let direct = rogers_szego(2, c(0.3), c(0.7), &ctx);
        assert!((v.value - direct).norm() <= 1e-8 * direct.norm());
    }

    #[test]
    fn rs_partial_fraction_rejects_pole_ratio() {
        // b/a = q^{-1} zeroes a factor of (b/a;q)_inf.
        let ctx = ctx(0.5);
        assert!(matches!(
            rs_partial_fraction(3, c(0.25), c(0.5), &ctx),
            Err(Error::PoleParameter { .. })
        ));
        assert!(matches!(
            rs_partial_fraction(3, ZERO, c(0.5), &ctx),
            Err(Error::Domain { .. })
        ));
    }
}
