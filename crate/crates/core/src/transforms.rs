//! Harmonic moments, Cauchy transforms and the exponential transform.
//!
//! Everything here is a trapezoidal contour integral over a [`ContourGrid`].
//! The double Cauchy transform `C(z, w)` is assembled quadrant by quadrant
//! from one base Cauchy integral plus a closed-form correction when `z` is
//! interior; `E = exp(C)` and the pieces `F`, `G`, `G*`, `H` follow from it.

use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::curve::{ContourGrid, Location};
use crate::error::{Error, Result};
use crate::phase::unwrap_log;
use crate::C64;

const I: C64 = C64 { re: 0.0, im: 1.0 };

/// Side of the curve a point lies on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Side {
    Interior,
    Exterior,
}

impl Side {
    pub fn tag(self) -> &'static str {
        match self {
            Side::Interior => "int",
            Side::Exterior => "ext",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Quadrant {
    pub z: Side,
    pub w: Side,
}

impl Quadrant {
    /// `"ext-int"` style tag, side of `z` first.
    pub fn tag(&self) -> &'static str {
        match (self.z, self.w) {
            (Side::Exterior, Side::Exterior) => "ext-ext",
            (Side::Interior, Side::Exterior) => "int-ext",
            (Side::Exterior, Side::Interior) => "ext-int",
            (Side::Interior, Side::Interior) => "int-int",
        }
    }
}

/// Classifies `z`, refusing points in the exclusion band.
pub fn side(grid: &ContourGrid, z: C64) -> Result<Side> {
    match grid.locate(z) {
        Location::Interior => Ok(Side::Interior),
        Location::Exterior => Ok(Side::Exterior),
        Location::NearBoundary => Err(Error::NearBoundary),
    }
}

/// `M_k = (1/2πi) ∮ z^k conj(z) dz` for `k_min ≤ k ≤ k_max`.
#[derive(Debug, Clone, PartialEq)]
pub struct MomentTable {
    k_min: i32,
    values: Vec<C64>,
}

impl MomentTable {
    pub fn k_min(&self) -> i32 {
        self.k_min
    }

    pub fn k_max(&self) -> i32 {
        self.k_min + self.values.len() as i32 - 1
    }

    pub fn get(&self, k: i32) -> Option<C64> {
        usize::try_from(k - self.k_min)
            .ok()
            .and_then(|i| self.values.get(i).copied())
    }

    pub fn iter(&self) -> impl Iterator<Item = (i32, C64)> + '_ {
        self.values
            .iter()
            .enumerate()
            .map(move |(i, &m)| (self.k_min + i as i32, m))
    }
}

/// A value of the double Cauchy and exponential transforms at `(z, w)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransformValue {
    pub z: C64,
    pub w: C64,
    pub quadrant: Quadrant,
    pub c: C64,
    pub e: C64,
}

/// `C_Ω(z)` for exterior `z` and the boundary-integral exterior transform
/// `C_{Ωᵉ}(z)` for interior `z`; both are `∓(1/2πi) ∮ conj(ζ) dζ / (ζ - z)`.
pub fn cauchy_transform(grid: &ContourGrid, z: C64) -> Result<C64> {
    let s = side(grid, z)?;
    let density: Vec<C64> = grid.points().iter().map(|p| p.conj()).collect();
    let integral = grid.cauchy_integral(&density, z);
    Ok(match s {
        Side::Exterior => -integral,
        Side::Interior => integral,
    })
}

pub fn harmonic_moments(grid: &ContourGrid, k_min: i32, k_max: i32) -> Result<MomentTable> {
    if k_min < 0 && side(grid, C64::new(0.0, 0.0)) != Ok(Side::Interior) {
        return Err(Error::OriginNotInterior);
    }
    let values = (k_min..=k_max)
        .map(|k| {
            grid.integrate(grid.points().iter().map(|p| p.powi(k) * p.conj())) / (2.0 * PI * I)
        })
        .collect();
    Ok(MomentTable { k_min, values })
}

/// Laurent coefficients of `log f₂` at infinity next to the moments they
/// should reproduce (`coefficient_k = -M_k`).
#[derive(Debug, Clone)]
pub struct LaurentCheck {
    pub coefficients: Vec<C64>,
    pub moments: MomentTable,
    pub residual: f64,
}

/// Extracts the coefficients of `z^{-(k+1)}`, `0 ≤ k ≤ k_max`, of the
/// exterior log-section of `exp(S)` by discrete Fourier analysis on a circle
/// enclosing the curve, and compares them with `-M_k`.
pub fn moment_expansion_check(grid: &ContourGrid, k_max: usize) -> Result<LaurentCheck> {
    let radius = 2.0 * grid.points().iter().map(|p| p.norm()).fold(0.0, f64::max);
    let m = (2 * (k_max + 2)).next_power_of_two().max(64);
    let density: Vec<C64> = grid.points().iter().map(|p| p.conj()).collect();
    let mut samples = Vec::with_capacity(m);
    for j in 0..m {
        let z = C64::from_polar(radius, 2.0 * PI * j as f64 / m as f64);
        if side(grid, z)? != Side::Exterior {
            return Err(Error::NearBoundary);
        }
        samples.push(grid.cauchy_integral(&density, z));
    }
    let coefficients: Vec<C64> = (0..=k_max)
        .map(|k| {
            let p = (k + 1) as f64;
            let sum: C64 = samples
                .iter()
                .enumerate()
                .map(|(j, s)| s * C64::from_polar(1.0, p * 2.0 * PI * j as f64 / m as f64))
                .sum();
            sum / m as f64 * libm::pow(radius, (k + 1) as f64)
        })
        .collect();
    let moments = harmonic_moments(grid, 0, k_max as i32)?;
    let residual = coefficients
        .iter()
        .zip(moments.iter())
        .map(|(c, (_, mk))| (c + mk).norm())
        .fold(0.0, f64::max);
    Ok(LaurentCheck {
        coefficients,
        moments,
        residual,
    })
}

/// Double Cauchy transform `C(z, w)` and `E(z, w) = exp C(z, w)`.
///
/// With `I = -(1/2πi) ∮ L_w(ζ) dζ/(ζ - z)`, where `L_w = log(conj ζ - conj w)`
/// for exterior `w` and `L_w = log|ζ - w|²` for interior `w`:
///
/// | z    | w    | C                        |
/// |------|------|--------------------------|
/// | ext  | ext  | `I`                      |
/// | int  | ext  | `I + log(conj z - conj w)` |
/// | ext  | int  | `I`                      |
/// | int  | int  | `I + log|z - w|²`        |
///
/// In the int-ext row the logarithm is the branch that is continuous on the
/// closed interior with boundary values `L_w`, which makes `C` single valued.
pub fn double_cauchy(grid: &ContourGrid, z: C64, w: C64) -> Result<TransformValue> {
    let quadrant = Quadrant {
        z: side(grid, z)?,
        w: side(grid, w)?,
    };
    let c = match quadrant.w {
        Side::Exterior => {
            let samples: Vec<C64> = grid.points().iter().map(|p| p.conj() - w.conj()).collect();
            let log = unwrap_log(&samples)?;
            if log.winding != 0 {
                return Err(Error::BranchUnresolved);
            }
            let base = -grid.cauchy_integral(&log.values, z);
            match quadrant.z {
                Side::Exterior => base,
                Side::Interior => {
                    // conj(L_w) are boundary values of the analytic log(ζ - w)
                    let conj_density: Vec<C64> = log.values.iter().map(|l| l.conj()).collect();
                    let continued = grid.cauchy_integral(&conj_density, z).conj();
                    let principal = (z.conj() - w.conj()).ln();
                    let turns = libm::round((continued.im - principal.im) / (2.0 * PI));
                    base + principal + I * (2.0 * PI * turns)
                }
            }
        }
        Side::Interior => {
            if quadrant.z == Side::Interior && (z - w).norm() <= 1e-12 * z.norm().max(1.0) {
                return Err(Error::CoincidentInteriorPoints);
            }
            let density: Vec<C64> = grid
                .points()
                .iter()
                .map(|p| C64::new(libm::log((p - w).norm_sqr()), 0.0))
                .collect();
            let base = -grid.cauchy_integral(&density, z);
            match quadrant.z {
                Side::Exterior => base,
                Side::Interior => base + libm::log((z - w).norm_sqr()),
            }
        }
    };
    Ok(TransformValue {
        z,
        w,
        quadrant,
        c,
        e: c.exp(),
    })
}

pub fn exponential_transform(grid: &ContourGrid, z: C64, w: C64) -> Result<TransformValue> {
    double_cauchy(grid, z, w)
}

fn in_quadrant(grid: &ContourGrid, z: C64, w: C64, want: Quadrant) -> Result<TransformValue> {
    let q = Quadrant {
        z: side(grid, z)?,
        w: side(grid, w)?,
    };
    if q != want {
        return Err(Error::WrongQuadrant);
    }
    double_cauchy(grid, z, w)
}

/// `F = E` for `z, w` exterior.
pub fn piece_f(grid: &ContourGrid, z: C64, w: C64) -> Result<C64> {
    let q = Quadrant {
        z: Side::Exterior,
        w: Side::Exterior,
    };
    Ok(in_quadrant(grid, z, w, q)?.e)
}

/// `G = E / (conj z - conj w)` for `z` interior, `w` exterior.
pub fn piece_g(grid: &ContourGrid, z: C64, w: C64) -> Result<C64> {
    let q = Quadrant {
        z: Side::Interior,
        w: Side::Exterior,
    };
    Ok(in_quadrant(grid, z, w, q)?.e / (z.conj() - w.conj()))
}

/// `G*(z, w) = conj G(w, z) = -E / (z - w)` for `z` exterior, `w` interior.
pub fn piece_g_star(grid: &ContourGrid, z: C64, w: C64) -> Result<C64> {
    let q = Quadrant {
        z: Side::Exterior,
        w: Side::Interior,
    };
    Ok(-in_quadrant(grid, z, w, q)?.e / (z - w))
}

/// Interior exponential transform `H = E / |z - w|²`.
pub fn piece_h(grid: &ContourGrid, z: C64, w: C64) -> Result<C64> {
    let q = Quadrant {
        z: Side::Interior,
        w: Side::Interior,
    };
    Ok(in_quadrant(grid, z, w, q)?.e / (z - w).norm_sqr())
}
