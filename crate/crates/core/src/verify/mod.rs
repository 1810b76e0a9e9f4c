//! Numerical verification registry for q-identities.
//!
//! Each [`IdentityId`] names one identity. Verification evaluates the two
//! sides through *independent* code paths (different top-level module entry
//! points, see [`IdentityId::entry_points`]) at randomly sampled parameter
//! points and reports absolute and relative residuals. Sampling is
//! deterministic in the seed; a [`sweep`] is therefore reproducible bit for
//! bit.
//!
//! Two registry entries are coefficient-exact rather than residual-based:
//! `QPDE_HAHN` checks the q-difference equation on polynomial coefficient
//! grids, and `EXPANSION_ROUNDTRIP` round-trips random expansions through
//! grid synthesis and recovery. Both use absolute tolerances.

mod identities;
mod sample;

use alloc::string::String;
use alloc::vec::Vec;

use crate::context::QContext;
use crate::Complex64;

pub use sample::{sample_params, ParamSample};

/// Identity registry entries.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum IdentityId {
    QpdeHahn,
    ExpansionRoundtrip,
    GenFunc,
    Mehler,
    AndrewsAskey,
    MomentW,
    QintHahnSeries,
    Qint3Phi2,
    AlSalamVerma,
    QGaussStep,
    QintDouble,
    AskeyWilson,
    AwQintExchange,
    Curious,
    Isv,
    LiuBeta,
    NassrallahRahman,
    Multilinear,
    QLauricella,
    HkPartialFraction,
    RsMultisum,
    SrivastavaJain,
}

use IdentityId::*;

/// All registry entries, in registry order.
pub const REGISTRY: [IdentityId; 22] = [
    QpdeHahn,
    ExpansionRoundtrip,
    GenFunc,
    Mehler,
    AndrewsAskey,
    MomentW,
    QintHahnSeries,
    Qint3Phi2,
    AlSalamVerma,
    QGaussStep,
    QintDouble,
    AskeyWilson,
    AwQintExchange,
    Curious,
    Isv,
    LiuBeta,
    NassrallahRahman,
    Multilinear,
    QLauricella,
    HkPartialFraction,
    RsMultisum,
    SrivastavaJain,
];

/// The full identity registry.
pub fn registry() -> &'static [IdentityId; 22] {
    &REGISTRY
}

impl IdentityId {
    pub fn as_str(&self) -> &'static str {
        match self {
            QpdeHahn => "QPDE_HAHN",
            ExpansionRoundtrip => "EXPANSION_ROUNDTRIP",
            GenFunc => "GEN_FUNC",
            Mehler => "MEHLER",
            AndrewsAskey => "ANDREWS_ASKEY",
            MomentW => "MOMENT_W",
            QintHahnSeries => "QINT_HAHN_SERIES",
            Qint3Phi2 => "QINT_3PHI2",
            AlSalamVerma => "AL_SALAM_VERMA",
            QGaussStep => "QGAUSS_STEP",
            QintDouble => "QINT_DOUBLE",
            AskeyWilson => "ASKEY_WILSON",
            AwQintExchange => "AW_QINT_EXCHANGE",
            Curious => "CURIOUS",
            Isv => "ISV",
            LiuBeta => "LIU_BETA",
            NassrallahRahman => "NASSRALLAH_RAHMAN",
            Multilinear => "MULTILINEAR",
            QLauricella => "Q_LAURICELLA",
            HkPartialFraction => "HK_PARTIAL_FRACTION",
            RsMultisum => "RS_MULTISUM",
            SrivastavaJain => "SRIVASTAVA_JAIN",
        }
    }

    pub fn parse(s: &str) -> Option<IdentityId> {
        REGISTRY.iter().copied().find(|id| id.as_str() == s)
    }

    /// One-line statement of what the identity asserts.
    pub fn description(&self) -> &'static str {
        match self {
            QpdeHahn => {
                "homogeneous Hahn polynomials solve D_{q,x}Phi = D_{q,y}(1 - alpha eta_x)Phi, coefficient-exact"
            }
            ExpansionRoundtrip => {
                "kernel grids round-trip through Hahn expansion; perturbed grids are rejected"
            }
            GenFunc => {
                "sum_n Phi_n^(a)(x,y) t^n/(q;q)_n = (a x t;q)inf / (xt, yt;q)inf"
            }
            Mehler => {
                "q-Mehler bilinear sum of Hahn pairs equals a Pochhammer prefactor times 3phi2"
            }
            AndrewsAskey => {
                "int_u^v (qx/u,qx/v;q)inf/(bx,cx;q)inf d_q x in closed product form"
            }
            MomentW => {
                "x^n moment of the Andrews-Askey weight equals the closed form times W_n(b,c,u,v|q)"
            }
            QintHahnSeries => {
                "q-integral with four denominator parameters equals sum_n W_n Phi_n/(q;q)_n"
            }
            Qint3Phi2 => {
                "q-integral with three denominator parameters equals a 3phi2 closed form"
            }
            AlSalamVerma => {
                "Al-Salam-Verma q-integral in closed product form"
            }
            QGaussStep => {
                "q-Gauss summation of 2phi1(bv, cv; abcuv^2; q, au)"
            }
            QintDouble => {
                "q-integral with two extra numerator factors expands as a double Hahn series"
            }
            AskeyWilson => {
                "Askey-Wilson theta integral equals 2pi(abcd;q)inf/(q,ab,ac,ad,bc,bd,cd;q)inf"
            }
            AwQintExchange => {
                "theta integral of a Jackson q-integral collapses to one q-integral, for pinned f"
            }
            Curious => {
                "theta integral of a 3phi2-weighted Askey-Wilson kernel equals a Jackson q-integral"
            }
            Isv => "Ismail-Stanton-Viennot theta integral in 3phi2 form",
            LiuBeta => {
                "beta-type theta integral with h(cos theta; duv) numerator equals a q-integral"
            }
            NassrallahRahman => "Nassrallah-Rahman theta integral in closed product form",
            Multilinear => {
                "k-fold multilinear Hahn generating sum equals a (2k+1)phi(2k) closed form"
            }
            QLauricella => {
                "q-Lauricella k-fold sum reduces to a (k+1)phi(k) with product prefactor"
            }
            HkPartialFraction => {
                "partial-fraction representation of Rogers-Szego polynomials"
            }
            RsMultisum => {
                "s-fold generating sum of index-shifted Rogers-Szego polynomials"
            }
            SrivastavaJain => {
                "Srivastava-Jain multilinear sum of shifted Rogers-Szego times Hahn products"
            }
        }
    }

    /// Base pass tolerance. `QPDE_HAHN` and `EXPANSION_ROUNDTRIP` are
    /// absolute; everything else is relative to `max(|lhs|, |rhs|)`.
    pub fn tolerance(&self) -> f64 {
        match self {
            QpdeHahn => 1e-12,
            ExpansionRoundtrip => 1e-10,
            GenFunc | Mehler | QGaussStep | HkPartialFraction | QLauricella => 1e-8,
            AndrewsAskey | MomentW | QintHahnSeries | Qint3Phi2 | AlSalamVerma => 1e-7,
            QintDouble => 1e-6,
            AskeyWilson | Isv | LiuBeta | NassrallahRahman => 1e-8,
            AwQintExchange | Curious => 1e-6,
            Multilinear | RsMultisum | SrivastavaJain => 1e-6,
        }
    }

    /// Tolerance at a concrete sample: the single-index degenerations of the
    /// multilinear identities are held to the series tolerance.
    pub fn tolerance_for(&self, sample: &ParamSample) -> f64 {
        match self {
            Multilinear if sample.get_int("k") == 1 => 1e-8,
            RsMultisum | SrivastavaJain if sample.get_int("s") == 1 => 1e-8,
            _ => self.tolerance(),
        }
    }

    /// Whether the pass criterion compares the absolute residual (true) or
    /// the relative residual (false).
    pub fn absolute_tolerance(&self) -> bool {
        matches!(self, QpdeHahn | ExpansionRoundtrip)
    }

    /// Default sweep size used by `verify --all`.
    pub fn default_points(&self) -> u32 {
        match self {
            ExpansionRoundtrip => 10,
            AwQintExchange | Curious => 10,
            Multilinear | RsMultisum | SrivastavaJain => 10,
            _ => 25,
        }
    }

    /// Top-level evaluation entry points of the two sides; distinct for
    /// every identity, which is the structural independence audit.
    pub fn entry_points(&self) -> (&'static str, &'static str) {
        match self {
            QpdeHahn => (
                "operators::qpde_residual_series",
                "zero (polynomials::hahn_hom_grid synthesis)",
            ),
            ExpansionRoundtrip => (
                "expansion::expand_in_hahn",
                "expansion::expansion_grid synthesis",
            ),
            GenFunc => (
                "hyperseries::sum_series over polynomials::hahn_hom",
                "pochhammer::qpoch_inf product",
            ),
            Mehler => (
                "hyperseries::sum_series over hahn_hom pairs",
                "hyperseries::phi with Pochhammer prefactor",
            ),
            AndrewsAskey => (
                "qintegral::andrews_askey_lhs",
                "pochhammer::qpoch_multi_inf product",
            ),
            MomentW => (
                "qintegral::jackson_weight with monomial factor",
                "polynomials::w_poly times product closed form",
            ),
            QintHahnSeries => (
                "qintegral::jackson_weight",
                "hyperseries::sum_series over w_poly times hahn",
            ),
            Qint3Phi2 => (
                "qintegral::jackson_weight",
                "hyperseries::phi with product prefactor",
            ),
            AlSalamVerma => (
                "qintegral::jackson_weight",
                "pochhammer::qpoch_multi_inf product",
            ),
            QGaussStep => ("hyperseries::phi", "pochhammer::qpoch_multi_inf product"),
            QintDouble => (
                "qintegral::jackson_weight",
                "hyperseries::multisum of hahn pairs",
            ),
            AskeyWilson => (
                "contour::askey_wilson quadrature",
                "contour::askey_wilson_closed_form",
            ),
            AwQintExchange => (
                "contour::theta_quadrature of inner qintegral::jackson",
                "qintegral::jackson_weight with product prefactor",
            ),
            Curious => (
                "contour::theta_quadrature of phi-weighted kernel",
                "qintegral::jackson_weight with product prefactor",
            ),
            Isv => (
                "contour::theta_quadrature",
                "hyperseries::phi with product prefactor",
            ),
            LiuBeta => (
                "contour::theta_quadrature with kernel numerator",
                "qintegral::jackson_weight with product prefactor",
            ),
            NassrallahRahman => (
                "contour::theta_quadrature with kernel numerator",
                "pochhammer::qpoch_multi_inf product",
            ),
            Multilinear => (
                "hyperseries::multisum of hahn products",
                "hyperseries::phi with product prefactor",
            ),
            QLauricella => (
                "hyperseries::qlauricella",
                "hyperseries::phi with product prefactor",
            ),
            HkPartialFraction => (
                "polynomials::rogers_szego",
                "hyperseries::rs_partial_fraction",
            ),
            RsMultisum => (
                "hyperseries::multisum of rogers_szego",
                "hyperseries::phi pair with product prefactors",
            ),
            SrivastavaJain => (
                "hyperseries::multisum of rogers_szego times hahn",
                "hyperseries::phi pair with product prefactors",
            ),
        }
    }
}

/// Sampling and truncation policy for a verification run.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    /// Disk radius for sampled complex parameters (strictly below 1).
    pub radius: f64,
    /// Minimum modulus kept between 1 and every guarded Pochhammer factor.
    pub pole_margin: f64,
    pub eps: f64,
    pub max_series_terms: usize,
    pub max_product_terms: usize,
    pub stall_window: usize,
    /// Per-run pass-tolerance override (CLI `--tolerance`).
    pub tolerance_override: Option<f64>,
}

impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig {
            radius: 0.5,
            pole_margin: 0.05,
            eps: QContext::DEFAULT_EPS,
            max_series_terms: QContext::DEFAULT_MAX_SERIES_TERMS,
            max_product_terms: QContext::DEFAULT_MAX_PRODUCT_TERMS,
            stall_window: QContext::DEFAULT_STALL_WINDOW,
            tolerance_override: None,
        }
    }
}

impl SweepConfig {
    fn context(&self, q: Complex64) -> QContext {
        QContext::with_policy(
            q,
            self.eps,
            self.max_series_terms,
            self.max_product_terms,
            self.stall_window,
        )
        .expect("sampled q is always a valid context base")
    }
}

/// Outcome of one identity check at one parameter point.
#[derive(Debug, Clone, PartialEq)]
pub struct IdentityReport {
    pub id: IdentityId,
    pub seed: u64,
    pub point_index: u32,
    /// Sampled complex parameters, in sampling order.
    pub params: Vec<(&'static str, Complex64)>,
    /// Sampled integer parameters (degrees, fold counts, offsets).
    pub ints: Vec<(&'static str, i64)>,
    pub q: Complex64,
    pub lhs: Complex64,
    pub rhs: Complex64,
    pub lhs_err_est: f64,
    pub rhs_err_est: f64,
    pub abs_resid: f64,
    pub rel_resid: f64,
    pub pass: bool,
    /// Empty on pass; otherwise a short failure tag.
    pub reason: String,
}

/// Evaluate both sides of `id` at `sample` and assemble the report.
///
/// Evaluation errors (pole parameters, overflow) are never silent: they
/// produce `pass = false` with the error tag in `reason`.
pub fn verify_identity(id: IdentityId, sample: &ParamSample, cfg: &SweepConfig) -> IdentityReport {
    let ctx = cfg.context(sample.q);
    let mut report = IdentityReport {
        id,
        seed: sample.seed,
        point_index: 0,
        params: sample.values().to_vec(),
        ints: sample.ints().to_vec(),
        q: sample.q,
        lhs: Complex64::new(0.0, 0.0),
        rhs: Complex64::new(0.0, 0.0),
        lhs_err_est: 0.0,
        rhs_err_est: 0.0,
        abs_resid: 0.0,
        rel_resid: 0.0,
        pass: false,
        reason: String::new(),
    };
    match identities::evaluate(id, sample, &ctx) {
        Ok((lhs, rhs)) => {
            report.lhs = lhs.value;
            report.rhs = rhs.value;
            report.lhs_err_est = lhs.err_est;
            report.rhs_err_est = rhs.err_est;
            report.abs_resid = (lhs.value - rhs.value).norm();
            report.rel_resid =
                report.abs_resid / lhs.value.norm().max(rhs.value.norm()).max(1e-300);
            let tol = cfg
                .tolerance_override
                .unwrap_or_else(|| id.tolerance_for(sample));
            let resid = if id.absolute_tolerance() {
                report.abs_resid
            } else {
                report.rel_resid
            };
            let converged = lhs.converged && rhs.converged;
            report.pass = resid <= tol && converged;
            if !report.pass {
                report.reason = if !converged {
                    String::from("non-convergence")
                } else {
                    String::from("residual above tolerance")
                };
            }
        }
        Err(e) => {
            report.reason = String::from(e.reason());
        }
    }
    report
}

/// SplitMix64-style derivation of per-point seeds from the sweep seed.
fn mix_seed(seed: u64, point: u32) -> u64 {
    let mut z = seed ^ 0x9E37_79B9_7F4A_7C15u64.wrapping_mul(point as u64 + 1);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Run `num_points` independent checks of `id`. Deterministic in `seed`;
/// reports carry the sweep seed and their point index, in sample order.
/// Per-point failures (including sampling exhaustion) are recorded in the
/// reports, never raised.
pub fn sweep(
    id: IdentityId,
    num_points: u32,
    seed: u64,
    cfg: &SweepConfig,
) -> Vec<IdentityReport> {
    let mut out = Vec::with_capacity(num_points as usize);
    for i in 0..num_points {
        let point_seed = mix_seed(seed, i);
        let mut report = match sample_params(id, point_seed, cfg.radius, cfg.pole_margin) {
            Ok(sample) => verify_identity(id, &sample, cfg),
            Err(e) => IdentityReport {
                id,
                seed,
                point_index: i,
                params: Vec::new(),
                ints: Vec::new(),
                q: Complex64::new(0.0, 0.0),
                lhs: Complex64::new(0.0, 0.0),
                rhs: Complex64::new(0.0, 0.0),
                lhs_err_est: 0.0,
                rhs_err_est: 0.0,
                abs_resid: 0.0,
                rel_resid: 0.0,
                pass: false,
                reason: String::from(e.reason()),
            },
        };
        report.seed = seed;
        report.point_index = i;
        out.push(report);
    }
    out
}
