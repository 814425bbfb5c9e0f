//! Curve files and command-line values.
//!
//! A curve file is one JSON object tagged by `kind`:
//!
//! ```json
//! {"kind": "circle", "center": [0, 0], "radius": 1}
//! {"kind": "conformal", "coeffs": [[0, 0], [1, 0], [0.3, 0]], "rho": 0.75}
//! {"kind": "polygon", "vertices": [[0, 0], [1, 0], [1, 1], [0, 1]]}
//! ```
//!
//! Complex numbers are `[re, im]` pairs; `coeffs` lists `a₀, a₁, …` of
//! `φ(ζ) = Σ a_k ζ^k`; `rho` is the inner radius of the annulus on which the
//! map is validated and defaults to 0.8.

use std::path::Path;
use std::str::FromStr;

use schwarz_core::{AnalyticCurve, Polynomial, C64};
use serde::Deserialize;

use crate::error::CliError;

const DEFAULT_RHO: f64 = 0.8;

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum CurveFile {
    Circle {
        #[serde(default)]
        center: [f64; 2],
        radius: f64,
    },
    Conformal {
        coeffs: Vec<[f64; 2]>,
        #[serde(default = "default_rho")]
        rho: f64,
    },
    Polygon {
        vertices: Vec<[f64; 2]>,
    },
}

fn default_rho() -> f64 {
    DEFAULT_RHO
}

fn pair(p: &[f64; 2]) -> C64 {
    C64::new(p[0], p[1])
}

impl CurveFile {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::Parse(format!("curve file: {e}")))
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Parse(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    /// Builds and validates the curve.
    pub fn build(&self) -> Result<AnalyticCurve, CliError> {
        Ok(match self {
            CurveFile::Circle { center, radius } => AnalyticCurve::circle(pair(center), *radius)?,
            CurveFile::Conformal { coeffs, rho } => {
                AnalyticCurve::polynomial(coeffs.iter().map(pair).collect(), *rho)?
            }
            CurveFile::Polygon { vertices } => AnalyticCurve::polygon(vertices.iter().map(pair).collect())?,
        })
    }
}

/// Accepts `a+bi` style complex literals as well as `re,im`.
pub fn parse_complex(s: &str) -> Result<C64, String> {
    let s = s.trim();
    if let Some((re, im)) = s.split_once(',') {
        let re = re.trim().parse::<f64>().map_err(|e| format!("bad real part {re:?}: {e}"))?;
        let im = im.trim().parse::<f64>().map_err(|e| format!("bad imaginary part {im:?}: {e}"))?;
        return Ok(C64::new(re, im));
    }
    C64::from_str(s).map_err(|_| format!("not a complex number: {s:?}"))
}

/// Ascending polynomial coefficients separated by commas; each may be a
/// complex literal such as `0.5-2i`.
pub fn parse_polynomial(s: &str) -> Result<Polynomial, String> {
    let coeffs = s
        .split(',')
        .map(|t| C64::from_str(t.trim()).map_err(|_| format!("bad coefficient {t:?}")))
        .collect::<Result<Vec<C64>, String>>()?;
    Ok(Polynomial::new(coeffs))
}

/// A closed interval written `lo,hi`.
pub fn parse_range(s: &str) -> Result<(f64, f64), String> {
    let (lo, hi) = s.split_once(',').ok_or_else(|| format!("expected lo,hi, got {s:?}"))?;
    let lo = lo.trim().parse::<f64>().map_err(|e| e.to_string())?;
    let hi = hi.trim().parse::<f64>().map_err(|e| e.to_string())?;
    if !(lo <= hi) {
        return Err(format!("empty range {s:?}"));
    }
    Ok((lo, hi))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complex_literals() {
        assert_eq!(parse_complex("2").unwrap(), C64::new(2.0, 0.0));
        assert_eq!(parse_complex("0.4+0.2i").unwrap(), C64::new(0.4, 0.2));
        assert_eq!(parse_complex("-1.5, 3").unwrap(), C64::new(-1.5, 3.0));
        assert!(parse_complex("two").is_err());
    }

    #[test]
    fn polynomials_and_ranges() {
        let p = parse_polynomial("0, 0, 1").unwrap();
        assert_eq!(p.degree(), 2);
        let q = parse_polynomial("1+1i,-2").unwrap();
        assert_eq!(q.coeffs()[0], C64::new(1.0, 1.0));
        assert_eq!(parse_range("1.5,4").unwrap(), (1.5, 4.0));
        assert!(parse_range("4,1").is_err());
    }

    #[test]
    fn curve_files() {
        let disk = CurveFile::parse(r#"{"kind":"circle","radius":1}"#).unwrap();
        assert!(disk.build().unwrap().as_conformal().is_ok());
        let lima = CurveFile::parse(r#"{"kind":"conformal","coeffs":[[0,0],[1,0],[0.3,0]],"rho":0.75}"#).unwrap();
        assert!(lima.build().is_ok());
        let bad = CurveFile::parse(r#"{"kind":"conformal","coeffs":[[0,0],[1,0],[0.6,0]]}"#).unwrap();
        assert_eq!(bad.build().unwrap_err().exit_code(), 1);
        assert_eq!(CurveFile::parse("{").unwrap_err().exit_code(), 2);
        assert_eq!(CurveFile::parse(r#"{"kind":"spiral"}"#).unwrap_err().exit_code(), 2);
    }
}
