//! Grid file format: a bivariate coefficient grid as JSON with the two
//! truncation orders and the coefficients as row-major `[re, im]` pairs
//! (rows indexed by the x-power).

use qcalc_core::operators::BivarSeries;
use qcalc_core::Complex64;
use serde::{Deserialize, Serialize};

#[derive(Debug, Serialize, Deserialize)]
pub struct GridFile {
    /// Truncation order in x (rows are `0..=m`).
    pub m: usize,
    /// Truncation order in y (columns are `0..=n`).
    pub n: usize,
    /// Row-major coefficients, `(m+1)*(n+1)` entries of `[re, im]`.
    pub coeffs: Vec<[f64; 2]>,
}

impl GridFile {
    pub fn into_series(self) -> Result<BivarSeries, String> {
        let expected = (self.m + 1) * (self.n + 1);
        if self.coeffs.len() != expected {
            return Err(format!(
                "grid with orders ({}, {}) needs {} coefficients, found {}",
                self.m,
                self.n,
                expected,
                self.coeffs.len()
            ));
        }
        let mut g = BivarSeries::zeros(self.m, self.n);
        for (i, &[re, im]) in self.coeffs.iter().enumerate() {
            if !(re.is_finite() && im.is_finite()) {
                return Err(format!("coefficient {i} is not finite"));
            }
            g.set(i / (self.n + 1), i % (self.n + 1), Complex64::new(re, im));
        }
        Ok(g)
    }

    #[allow(dead_code)]
    pub fn from_series(s: &BivarSeries) -> Self {
        let (m, n) = s.trunc_orders();
        let mut coeffs = Vec::with_capacity((m + 1) * (n + 1));
        for i in 0..=m {
            for j in 0..=n {
                let c = s.get(i, j);
                coeffs.push([c.re, c.im]);
            }
        }
        GridFile { m, n, coeffs }
    }
}

pub fn read(path: &std::path::Path) -> Result<BivarSeries, String> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    let file: GridFile =
        serde_json::from_str(&text).map_err(|e| format!("cannot parse {}: {e}", path.display()))?;
    file.into_series()
}
