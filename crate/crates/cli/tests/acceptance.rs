//! Acceptance suite.
//!
//! One test per acceptance criterion; each prints a single PASS/FAIL line
//! (visible with `cargo test --test acceptance -- --nocapture`). Tolerances
//! and runtime budgets are pinned in the assertions.

use std::process::Command;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use qcalc_core::contour::{askey_wilson, h_kernel, h_kernel_product};
use qcalc_core::expansion::{expand_in_hahn, expansion_grid, HahnExpansion, DEFAULT_TOL};
use qcalc_core::hyperseries::multisum;
use qcalc_core::operators::qpde_residual_series;
use qcalc_core::pochhammer::{qpoch_finite, qpoch_inf};
use qcalc_core::polynomials::hahn_hom_grid;
use qcalc_core::verify::{sweep, IdentityId, IdentityReport, SweepConfig};
use qcalc_core::{Complex64, Error, QContext};

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

fn rand_disk(rng: &mut ChaCha8Rng, r: f64) -> Complex64 {
    loop {
        let z = Complex64::new(rng.random_range(-r..r), rng.random_range(-r..r));
        if z.norm() <= r {
            return z;
        }
    }
}

struct Criterion {
    name: &'static str,
    started: Instant,
    budget: Duration,
}

impl Criterion {
    fn start(name: &'static str, budget_secs: u64) -> Self {
        Criterion {
            name,
            started: Instant::now(),
            budget: Duration::from_secs(budget_secs),
        }
    }

    fn finish(self, detail: &str) {
        let elapsed = self.started.elapsed();
        println!(
            "PASS {} ({detail}; {:.2?} of {:.0?} budget)",
            self.name, elapsed, self.budget
        );
        assert!(
            elapsed <= self.budget,
            "{} exceeded its runtime budget: {elapsed:.2?}",
            self.name
        );
    }
}

/// Sweep `id` and require every point to pass, with the relative residual
/// additionally bounded by `max_rel` where one is given.
fn sweep_checked(
    id: IdentityId,
    points: u32,
    seed: u64,
    max_rel: Option<f64>,
) -> Vec<IdentityReport> {
    let cfg = SweepConfig::default();
    let reports = sweep(id, points, seed, &cfg);
    assert_eq!(reports.len(), points as usize);
    for r in &reports {
        assert!(
            r.pass,
            "{} point {} failed: {} (abs {:.3e}, rel {:.3e}, ints {:?})",
            id.as_str(),
            r.point_index,
            r.reason,
            r.abs_resid,
            r.rel_resid,
            r.ints
        );
        if let Some(tol) = max_rel {
            assert!(
                r.rel_resid <= tol,
                "{} point {}: rel {:.3e} above {tol:.0e}",
                id.as_str(),
                r.point_index,
                r.rel_resid
            );
        }
    }
    reports
}

#[test]
fn criterion_1_coefficient_exact_qpde() {
    let crit = Criterion::start("coefficient-exact q-difference equation", 1);
    let alphas = [c(0.0), c(0.3), Complex64::new(0.7, 0.1)];
    let qs = [0.2, 0.5, 0.8];
    let mut worst = 0.0_f64;
    for &q in &qs {
        let ctx = QContext::real(q).unwrap();
        for &alpha in &alphas {
            for n in 0..=12usize {
                let grid = hahn_hom_grid(n, alpha, &ctx);
                let r = qpde_residual_series(&grid, alpha, ctx.q);
                worst = worst.max(r.max_abs);
                assert!(
                    r.max_abs <= 1e-12,
                    "residual {:.3e} at n={n}, alpha={alpha}, q={q}",
                    r.max_abs
                );
            }
        }
    }
    crit.finish(&format!("117 grids, worst residual {worst:.2e}"));
}

#[test]
fn criterion_2_expansion_roundtrip() {
    let crit = Criterion::start("expansion round trip and rejection", 5);
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut worst_recovery = 0.0_f64;
    for case in 0..50 {
        let q = rng.random_range(0.1..0.7);
        let ctx = QContext::real(q).unwrap();
        let alpha = rand_disk(&mut rng, 0.5);
        let mut lambdas = Vec::new();
        let mut radius = 1.0_f64;
        for _ in 0..=16 {
            lambdas.push(rand_disk(&mut rng, radius.max(1e-12)));
            radius *= 0.5;
        }
        let e = HahnExpansion {
            alpha,
            lambdas: lambdas.clone(),
        };
        let grid = expansion_grid(&e, &ctx);
        let back = expand_in_hahn(&grid, alpha, &ctx, DEFAULT_TOL)
            .unwrap_or_else(|err| panic!("case {case}: clean grid rejected: {err}"));
        let worst = lambdas
            .iter()
            .zip(&back.lambdas)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0_f64, f64::max);
        worst_recovery = worst_recovery.max(worst);
        assert!(worst <= 1e-10, "case {case}: recovery error {worst:.3e}");

        // Perturbed copy: injected residual of at least 1e-6 must be caught.
        let mut bad = grid.clone();
        let (pm, pn) = (rng.random_range(1..=5), rng.random_range(1..=5));
        let delta = c(rng.random_range(1e-3..1e-2));
        bad.set(pm, pn, bad.get(pm, pn) + delta);
        match expand_in_hahn(&bad, alpha, &ctx, DEFAULT_TOL) {
            Err(Error::NotInKernel { residual }) => {
                assert!(residual >= 1e-6, "case {case}: residual {residual:.3e}")
            }
            other => panic!("case {case}: perturbed grid accepted: {other:?}"),
        }
    }
    crit.finish(&format!(
        "50 round trips (worst recovery {worst_recovery:.2e}), 50 rejections"
    ));
}

#[test]
fn criterion_3_series_product_identities() {
    let crit = Criterion::start("series/product identities at rel 1e-8", 10);
    for id in [
        IdentityId::GenFunc,
        IdentityId::Mehler,
        IdentityId::QGaussStep,
        IdentityId::HkPartialFraction,
        IdentityId::QLauricella,
    ] {
        sweep_checked(id, 25, 1, Some(1e-8));
    }
    crit.finish("5 identities x 25 points");
}

#[test]
fn criterion_4_jackson_integral_identities() {
    let crit = Criterion::start("Jackson q-integral identities", 30);
    for id in [
        IdentityId::AndrewsAskey,
        IdentityId::MomentW,
        IdentityId::QintHahnSeries,
        IdentityId::Qint3Phi2,
        IdentityId::AlSalamVerma,
    ] {
        sweep_checked(id, 25, 1, Some(1e-7));
    }
    let reports = sweep_checked(IdentityId::QintDouble, 25, 1, Some(1e-6));
    assert!(reports.iter().all(|r| r.pass));
    crit.finish("6 identities x 25 points");
}

#[test]
fn criterion_5_quadrature_identities() {
    let crit = Criterion::start("theta quadrature identities at rel 1e-8", 60);
    for id in [
        IdentityId::AskeyWilson,
        IdentityId::Isv,
        IdentityId::LiuBeta,
        IdentityId::NassrallahRahman,
    ] {
        sweep_checked(id, 25, 1, Some(1e-8));
    }
    // Askey-Wilson with all parameters zero: quadrature against the closed
    // form 2 pi / (q;q)_inf, relative 1e-10.
    for &q in &[0.2, 0.5, 0.7] {
        let ctx = QContext::real(q).unwrap();
        let zero = c(0.0);
        let quad = askey_wilson(zero, zero, zero, zero, &ctx).unwrap();
        let closed = c(2.0 * std::f64::consts::PI) / qpoch_inf(ctx.q, &ctx).unwrap().value;
        assert!(
            (quad.value - closed).norm() <= 1e-10 * closed.norm(),
            "q={q}: quadrature {} vs closed {}",
            quad.value,
            closed
        );
    }
    crit.finish("4 identities x 25 points + degenerate closed form");
}

#[test]
fn criterion_6_exchange_identities() {
    let crit = Criterion::start("exchange identities at rel 1e-6", 120);
    let reports = sweep_checked(IdentityId::AwQintExchange, 10, 1, Some(1e-6));
    let fcases: Vec<i64> = reports
        .iter()
        .map(|r| r.ints.iter().find(|(n, _)| *n == "fcase").unwrap().1)
        .collect();
    assert!(
        fcases.contains(&0) && fcases.contains(&1),
        "both pinned integrand choices must be exercised, got {fcases:?}"
    );
    sweep_checked(IdentityId::Curious, 10, 1, Some(1e-6));
    crit.finish("2 identities x 10 points, both pinned f choices");
}

#[test]
fn criterion_7_multilinear_identities() {
    let crit = Criterion::start("multilinear identities", 60);
    let mut folds = Vec::new();
    let mut offsets = Vec::new();
    let reports = sweep_checked(IdentityId::Multilinear, 10, 1, Some(1e-6));
    for r in &reports {
        let k = r.ints.iter().find(|(n, _)| *n == "k").unwrap().1;
        folds.push(k);
        if k == 1 {
            assert!(
                r.rel_resid <= 1e-8,
                "single-fold degeneration must hold at 1e-8, got {:.3e}",
                r.rel_resid
            );
        }
    }
    for id in [IdentityId::RsMultisum, IdentityId::SrivastavaJain] {
        let reports = sweep_checked(id, 10, 1, Some(1e-6));
        for r in &reports {
            let s = r.ints.iter().find(|(n, _)| *n == "s").unwrap().1;
            let koff = r.ints.iter().find(|(n, _)| *n == "koff").unwrap().1;
            folds.push(s);
            offsets.push(koff);
            if s == 1 {
                assert!(
                    r.rel_resid <= 1e-8,
                    "{} single-fold degeneration must hold at 1e-8, got {:.3e}",
                    id.as_str(),
                    r.rel_resid
                );
            }
        }
    }
    assert!(folds.contains(&1) && folds.contains(&2));
    for koff in [0, 1, 3] {
        assert!(offsets.contains(&koff), "offset {koff} never sampled");
    }
    crit.finish("3 identities x 10 points, folds {1,2}, offsets {0,1,3}");
}

#[test]
fn criterion_8_cross_oracle_checks() {
    let crit = Criterion::start("cross-oracle checks at rel 1e-10", 5);
    let mut rng = ChaCha8Rng::seed_from_u64(7);

    // Splitting identity (a;q)_inf = (a;q)_n (a q^n;q)_inf.
    for _ in 0..100 {
        let q = rng.random_range(0.1..0.8);
        let ctx = QContext::real(q).unwrap();
        let a = rand_disk(&mut rng, 0.9);
        let n = rng.random_range(0..12usize);
        let whole = qpoch_inf(a, &ctx).unwrap().value;
        let split = qpoch_finite(a, n, &ctx).unwrap()
            * qpoch_inf(a * ctx.q_pow(n), &ctx).unwrap().value;
        assert!(
            (whole - split).norm() <= 1e-10 * whole.norm().max(1e-10),
            "split mismatch at a={a}, q={q}, n={n}"
        );
    }

    // Kernel dual evaluation paths.
    for _ in 0..100 {
        let q = rng.random_range(0.1..0.8);
        let ctx = QContext::real(q).unwrap();
        let a = rand_disk(&mut rng, 0.9);
        let theta = rng.random_range(0.0..std::f64::consts::PI);
        let pair = h_kernel(theta, a, &ctx).unwrap().value;
        let prod = h_kernel_product(theta, a, &ctx).value;
        assert!(
            (pair - prod).norm() <= 1e-10 * pair.norm().max(1e-8),
            "kernel route mismatch at a={a}, q={q}, theta={theta}"
        );
    }

    // Separability of a factorizable double sum. The 1e-10 agreement needs
    // truncation below the default policy, so tighten eps for the check.
    for _ in 0..100 {
        let q = rng.random_range(0.1..0.7);
        let ctx = QContext::real(q).unwrap().with_eps(1e-12).unwrap();
        let x = rand_disk(&mut rng, 0.6);
        let y = rand_disk(&mut rng, 0.6);
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
        assert!(
            (double.value - product).norm() <= 1e-10 * product.norm().max(1e-8),
            "separability mismatch at x={x}, y={y}, q={q}"
        );
    }
    crit.finish("3 oracles x 100 cases");
}

#[test]
fn criterion_9_cli_determinism() {
    let crit = Criterion::start("CLI determinism", 600);
    let run = || {
        Command::new(env!("CARGO_BIN_EXE_qcalc"))
            .args(["verify", "--all", "--points", "3", "--seed", "1"])
            .env_remove("QCALC_SEED")
            .output()
            .expect("binary runs")
    };
    let first = run();
    let second = run();
    assert_eq!(first.status.code(), Some(0), "verify --all must pass");
    assert!(!first.stdout.is_empty());
    assert_eq!(
        first.stdout, second.stdout,
        "two identical invocations must be byte-identical"
    );
    crit.finish("verify --all --points 3 --seed 1, twice");
}
