//! Deterministic rejection sampling of identity parameters.
//!
//! Every free complex symbol is drawn uniformly from a disk of the
//! configured radius (some with a small minimum-modulus floor where the
//! identity forms ratios such as `u/v` or `b/a`); `q` is uniform real in
//! `[0.1, 0.7]`. A candidate is accepted only when every guarded
//! Pochhammer argument `xi` keeps `|1 - xi q^j| >= pole_margin` for all
//! `j >= 0`, so neither side of the identity is evaluated near a pole or a
//! vanishing normalizing factor. Rejection keeps resampling the whole
//! candidate, deterministically in the seed, up to 10000 attempts.

use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::identities::guard_factors;
use super::IdentityId;
use crate::error::{Error, Result};
use crate::Complex64;

const MAX_ATTEMPTS: u32 = 10_000;

/// One sampled parameter point for one identity.
#[derive(Debug, Clone, PartialEq)]
pub struct ParamSample {
    pub id: IdentityId,
    /// Seed this sample was drawn from.
    pub seed: u64,
    pub q: Complex64,
    values: Vec<(&'static str, Complex64)>,
    ints: Vec<(&'static str, i64)>,
}

impl ParamSample {
    /// Hand-built sample, bypassing the rejection sampler. Used to probe
    /// error paths (e.g. forcing a parameter point onto a pole); the caller
    /// is responsible for supplying every name the identity reads.
    pub fn synthetic(
        id: IdentityId,
        q: Complex64,
        values: Vec<(&'static str, Complex64)>,
        ints: Vec<(&'static str, i64)>,
    ) -> Self {
        ParamSample {
            id,
            seed: 0,
            q,
            values,
            ints,
        }
    }

    /// Named complex parameters, in sampling order.
    pub fn values(&self) -> &[(&'static str, Complex64)] {
        &self.values
    }

    /// Named integer parameters (degrees, fold counts, offsets).
    pub fn ints(&self) -> &[(&'static str, i64)] {
        &self.ints
    }

    /// Fetch a complex parameter by name; panics on a name the identity
    /// does not sample (an internal programming error, not a data error).
    pub fn get(&self, name: &str) -> Complex64 {
        self.values
            .iter()
            .find(|(n, _)| *n == name)
            .map(|(_, v)| *v)
            .unwrap_or_else(|| panic!("sample for {} has no parameter {name}", self.id.as_str()))
    }

    pub fn get_int(&self, name: &str) -> i64 {
        self.ints
            .iter()
            .find(|(n, _)| *n == name)
            .map(|(_, v)| *v)
            .unwrap_or_else(|| panic!("sample for {} has no integer {name}", self.id.as_str()))
    }
}

/// How one complex parameter is drawn.
enum Draw {
    /// Uniform in the disk of the sweep radius, with a minimum modulus.
    Disk { floor: f64 },
    /// Uniform in a disk of fixed radius (independent of the sweep radius).
    Fixed { radius: f64 },
    /// Uniform in the annulus `lo <= |z| <= hi`.
    Annulus { lo: f64, hi: f64 },
}

struct ParamDecl {
    name: &'static str,
    draw: Draw,
}

fn disk(name: &'static str) -> ParamDecl {
    ParamDecl {
        name,
        draw: Draw::Disk { floor: 0.0 },
    }
}

/// Disk draw with the 0.05 modulus floor used wherever the identity forms
/// a ratio or an endpoint in this parameter.
fn disk_floored(name: &'static str) -> ParamDecl {
    ParamDecl {
        name,
        draw: Draw::Disk { floor: 0.05 },
    }
}

const DEGREES_0_12: &[i64] = &[0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12];
const DEGREES_0_6: &[i64] = &[0, 1, 2, 3, 4, 5, 6];
const DEGREES_0_10: &[i64] = &[0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10];
const FOLDS_1_2: &[i64] = &[1, 2];
const OFFSETS_0_1_3: &[i64] = &[0, 1, 3];
const CASES_0_1: &[i64] = &[0, 1];
const PERT_1_5: &[i64] = &[1, 2, 3, 4, 5];

pub(super) const LAMBDA_NAMES: [&str; 17] = [
    "lam0", "lam1", "lam2", "lam3", "lam4", "lam5", "lam6", "lam7", "lam8", "lam9", "lam10",
    "lam11", "lam12", "lam13", "lam14", "lam15", "lam16",
];

fn int_decls(id: IdentityId) -> &'static [(&'static str, &'static [i64])] {
    use IdentityId::*;
    match id {
        QpdeHahn => &[("n", DEGREES_0_12)],
        ExpansionRoundtrip => &[("pert_m", PERT_1_5), ("pert_n", PERT_1_5)],
        MomentW => &[("n", DEGREES_0_6)],
        AwQintExchange => &[("fcase", CASES_0_1)],
        Multilinear => &[("k", FOLDS_1_2)],
        HkPartialFraction => &[("k", DEGREES_0_10)],
        RsMultisum => &[("s", FOLDS_1_2), ("koff", OFFSETS_0_1_3)],
        SrivastavaJain => &[("s", FOLDS_1_2), ("koff", OFFSETS_0_1_3)],
        _ => &[],
    }
}

fn param_decls(id: IdentityId, ints: &[(&'static str, i64)]) -> Vec<ParamDecl> {
    use IdentityId::*;
    let int_of = |name: &str| -> i64 {
        ints.iter()
            .find(|(n, _)| *n == name)
            .map(|(_, v)| *v)
            .unwrap_or(0)
    };
    match id {
        QpdeHahn => alloc::vec![disk("alpha")],
        ExpansionRoundtrip => {
            let mut decls = alloc::vec![disk("alpha")];
            let mut radius = 1.0_f64;
            for name in LAMBDA_NAMES {
                decls.push(ParamDecl {
                    name,
                    draw: Draw::Fixed { radius },
                });
                radius *= 0.5;
            }
            decls.push(ParamDecl {
                name: "pert_delta",
                draw: Draw::Annulus { lo: 1e-3, hi: 1e-2 },
            });
            decls
        }
        GenFunc => alloc::vec![disk("alpha"), disk("x"), disk("y"), disk("t")],
        Mehler => alloc::vec![
            disk("alpha"),
            disk("beta"),
            disk("x"),
            disk("y"),
            disk("u"),
            disk("v"),
            disk("t"),
        ],
        AndrewsAskey | MomentW => {
            alloc::vec![disk("b"), disk("c"), disk_floored("u"), disk_floored("v")]
        }
        QintHahnSeries => alloc::vec![
            disk("alpha"),
            disk("a"),
            disk("b"),
            disk("c"),
            disk("d"),
            disk_floored("u"),
            disk_floored("v"),
        ],
        Qint3Phi2 => alloc::vec![
            disk("alpha"),
            disk("a"),
            disk("b"),
            disk("c"),
            disk_floored("u"),
            disk_floored("v"),
        ],
        AlSalamVerma => alloc::vec![
            disk("a"),
            disk("b"),
            disk("c"),
            disk_floored("u"),
            disk_floored("v"),
        ],
        QGaussStep => alloc::vec![disk("a"), disk("b"), disk("c"), disk("u"), disk("v")],
        QintDouble => alloc::vec![
            disk("alpha"),
            disk("beta"),
            disk("a"),
            disk("b"),
            disk("c"),
            disk("d"),
            disk_floored("u"),
            disk_floored("v"),
        ],
        AskeyWilson => alloc::vec![disk("a"), disk("b"), disk("c"), disk("d")],
        AwQintExchange => {
            let mut decls = alloc::vec![
                disk("a"),
                disk("b"),
                disk("c"),
                disk_floored("u"),
                disk_floored("v"),
            ];
            if int_of("fcase") == 1 {
                decls.push(disk("alpha"));
                decls.push(disk("d"));
            }
            decls
        }
        Curious => alloc::vec![
            disk("alpha"),
            disk("a"),
            disk("b"),
            disk("c"),
            disk("d"),
            disk_floored("u"),
            disk_floored("v"),
        ],
        Isv | NassrallahRahman => {
            alloc::vec![disk("a"), disk("b"), disk("c"), disk("u"), disk("v")]
        }
        LiuBeta => alloc::vec![
            disk("a"),
            disk("b"),
            disk("c"),
            disk("d"),
            disk_floored("u"),
            disk_floored("v"),
        ],
        Multilinear => {
            let k = int_of("k");
            let mut decls = alloc::vec![disk_floored("a"), disk("c")];
            decls.push(disk("alpha1"));
            decls.push(disk("x1"));
            decls.push(disk("y1"));
            if k >= 2 {
                decls.push(disk("alpha2"));
                decls.push(disk("x2"));
                decls.push(disk("y2"));
            }
            decls
        }
        QLauricella => alloc::vec![
            disk_floored("a"),
            disk("c"),
            disk("b1"),
            disk("b2"),
            disk("y1"),
            disk("y2"),
        ],
        HkPartialFraction => alloc::vec![disk_floored("a"), disk_floored("b")],
        RsMultisum => {
            let s = int_of("s");
            let mut decls = alloc::vec![disk_floored("a"), disk_floored("b"), disk("u1")];
            if s >= 2 {
                decls.push(disk("u2"));
            }
            decls
        }
        SrivastavaJain => {
            let s = int_of("s");
            let mut decls = alloc::vec![
                disk_floored("a"),
                disk_floored("b"),
                disk("alpha1"),
                disk("u1"),
                disk("v1"),
            ];
            if s >= 2 {
                decls.push(disk("alpha2"));
                decls.push(disk("u2"));
                decls.push(disk("v2"));
            }
            decls
        }
    }
}

fn draw_in_annulus(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> Complex64 {
    loop {
        let re = rng.random_range(-hi..hi);
        let im = rng.random_range(-hi..hi);
        let z = Complex64::new(re, im);
        let n = z.norm();
        if n <= hi && n >= lo {
            return z;
        }
    }
}

/// Does `(xi;q)`-type sampling stay at least `margin` away from a zero,
/// i.e. `|1 - xi q^j| >= margin` for every `j >= 0`? Once `|xi q^j|`
/// drops below `1 - margin` all later factors are safe.
fn poch_guard_ok(xi: Complex64, q: Complex64, margin: f64) -> bool {
    let mut w = xi;
    for _ in 0..MAX_ATTEMPTS {
        if w.norm() <= 1.0 - margin {
            return true;
        }
        if (Complex64::new(1.0, 0.0) - w).norm() < margin {
            return false;
        }
        w *= q;
    }
    false
}

/// Draw a parameter point for `id`, deterministically in `seed`.
///
/// `radius` bounds every sampled modulus (strictly below 1);
/// `pole_margin` is the minimum distance kept between 1 and every guarded
/// Pochhammer factor of either side. Rejection resamples the whole
/// candidate; after 10000 failures the constraint set is reported as
/// infeasible.
pub fn sample_params(
    id: IdentityId,
    seed: u64,
    radius: f64,
    pole_margin: f64,
) -> Result<ParamSample> {
    if !(radius > 0.0 && radius < 1.0) {
        return Err(Error::Domain {
            op: "sample_params",
            reason: "radius must lie strictly between 0 and 1",
        });
    }
    // A margin of 1 or more is permitted but unsatisfiable (the factors
    // converge to 1), so it exhausts the attempt budget by construction.
    if !(pole_margin > 0.0) || !pole_margin.is_finite() {
        return Err(Error::Domain {
            op: "sample_params",
            reason: "pole_margin must be a positive finite real",
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..MAX_ATTEMPTS {
        let q = Complex64::new(rng.random_range(0.1..0.7), 0.0);
        let mut ints = Vec::new();
        for &(name, choices) in int_decls(id) {
            let pick = choices[rng.random_range(0..choices.len())];
            ints.push((name, pick));
        }
        let mut values = Vec::new();
        for decl in param_decls(id, &ints) {
            let z = match decl.draw {
                Draw::Disk { floor } => {
                    draw_in_annulus(&mut rng, floor.min(0.5 * radius), radius)
                }
                Draw::Fixed { radius } => {
                    if radius < 1e-300 {
                        Complex64::new(0.0, 0.0)
                    } else {
                        draw_in_annulus(&mut rng, 0.0, radius)
                    }
                }
                Draw::Annulus { lo, hi } => draw_in_annulus(&mut rng, lo, hi),
            };
            values.push((decl.name, z));
        }
        let candidate = ParamSample {
            id,
            seed,
            q,
            values,
            ints,
        };
        if guard_factors(id, &candidate)
            .iter()
            .all(|&xi| poch_guard_ok(xi, q, pole_margin))
        {
            return Ok(candidate);
        }
    }
    Err(Error::SamplingExhausted {
        attempts: MAX_ATTEMPTS,
    })
}
