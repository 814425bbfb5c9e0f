//! The Schwarz function `S` of a curve, with `S(z) = conj(z)` on the curve.
//!
//! For `Γ = φ(|ζ| = 1)` the reflection in Γ is `φ(ζ) ↦ φ(1/conj ζ)`, so in
//! the pullback coordinate `S(φ(ζ)) = φ*(1/ζ)`. Evaluation at a plane point
//! inverts `φ` by Newton iteration and is confined to the validated annulus.

use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::curve::{ConformalCurve, PolygonCurve};
use crate::error::{Error, Result};
use crate::C64;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NewtonSettings {
    pub max_iter: usize,
    pub tol: f64,
}

impl Default for NewtonSettings {
    fn default() -> Self {
        Self {
            max_iter: 50,
            tol: 1e-13,
        }
    }
}

/// Evaluates `S`, `S'` and the reflection near a conformal-map curve.
#[derive(Debug, Clone)]
pub struct SchwarzEvaluator<'a> {
    curve: &'a ConformalCurve,
    settings: NewtonSettings,
    seeds: Vec<(C64, C64)>,
}

impl<'a> SchwarzEvaluator<'a> {
    pub fn new(curve: &'a ConformalCurve) -> Self {
        Self::with_settings(curve, NewtonSettings::default())
    }

    pub fn with_settings(curve: &'a ConformalCurve, settings: NewtonSettings) -> Self {
        let rho = curve.rho();
        let radii = [rho, 0.5 * (rho + 1.0), 1.0, 0.5 * (1.0 + 1.0 / rho), 1.0 / rho];
        let angles = 128;
        let seeds = radii
            .iter()
            .flat_map(|&r| {
                (0..angles).map(move |k| C64::from_polar(r, 2.0 * PI * k as f64 / angles as f64))
            })
            .map(|zeta| (zeta, curve.map(zeta)))
            .collect();
        Self {
            curve,
            settings,
            seeds,
        }
    }

    pub fn curve(&self) -> &'a ConformalCurve {
        self.curve
    }

    /// Solves `φ(ζ) = z` for `ζ` in the validated annulus.
    pub fn preimage(&self, z: C64) -> Result<C64> {
        if !z.re.is_finite() || !z.im.is_finite() {
            return Err(Error::OutsideAnnulus);
        }
        let mut zeta = self
            .seeds
            .iter()
            .min_by(|a, b| (a.1 - z).norm().total_cmp(&(b.1 - z).norm()))
            .map(|s| s.0)
            .ok_or(Error::NewtonDiverged)?;
        let scale = z.norm().max(1.0);
        let max_step = 0.25 / self.curve.rho();
        for _ in 0..self.settings.max_iter {
            let residual = self.curve.map(zeta) - z;
            let d = self.curve.map_prime(zeta);
            if d.norm() == 0.0 {
                return Err(Error::NewtonDiverged);
            }
            let mut step = residual / d;
            if step.norm() > max_step {
                step *= max_step / step.norm();
            }
            zeta -= step;
            if !zeta.re.is_finite() || !zeta.im.is_finite() {
                return Err(Error::NewtonDiverged);
            }
            if residual.norm() <= self.settings.tol * scale && step.norm() <= 1e-8 {
                return if self.curve.in_annulus(zeta) {
                    Ok(zeta)
                } else {
                    Err(Error::OutsideAnnulus)
                };
            }
        }
        if (self.curve.map(zeta) - z).norm() <= self.settings.tol * scale {
            if self.curve.in_annulus(zeta) {
                return Ok(zeta);
            }
            return Err(Error::OutsideAnnulus);
        }
        Err(Error::NewtonDiverged)
    }

    /// `S` at the image of a pullback point, `φ*(1/ζ)`.
    pub fn schwarz_at_zeta(&self, zeta: C64) -> C64 {
        self.curve.reflected(zeta.inv())
    }

    /// `S'` at the image of a pullback point, `-φ*'(1/ζ) / (ζ² φ'(ζ))`.
    pub fn schwarz_prime_at_zeta(&self, zeta: C64) -> C64 {
        -self.curve.reflected_prime(zeta.inv()) / (zeta * zeta * self.curve.map_prime(zeta))
    }

    pub fn schwarz(&self, z: C64) -> Result<C64> {
        Ok(self.schwarz_at_zeta(self.preimage(z)?))
    }

    pub fn schwarz_prime(&self, z: C64) -> Result<C64> {
        Ok(self.schwarz_prime_at_zeta(self.preimage(z)?))
    }

    /// Anti-conformal reflection `z ↦ conj(S(z))` in the curve.
    pub fn reflect(&self, z: C64) -> Result<C64> {
        self.schwarz(z).map(|s| s.conj())
    }
}

/// `S(z(t)) = conj(z(t))` on the curve.
pub fn schwarz_boundary(curve: &ConformalCurve, t: f64) -> C64 {
    curve.point_at(t).conj()
}

pub fn schwarz_near(curve: &ConformalCurve, z: C64) -> Result<C64> {
    SchwarzEvaluator::new(curve).schwarz(z)
}

pub fn schwarz_prime(curve: &ConformalCurve, z: C64) -> Result<C64> {
    SchwarzEvaluator::new(curve).schwarz_prime(z)
}

/// Edge-local Schwarz data of a polygon: `S(z) = αz + β` on the open edge,
/// with `α = conj(T)/T` for the edge's unit tangent `T`.
pub fn polygon_schwarz(polygon: &PolygonCurve, edge: usize) -> Result<(C64, C64)> {
    let (a, b) = polygon.edge(edge)?;
    let d = b - a;
    let len = d.norm();
    if !(len > 0.0) {
        return Err(Error::DegenerateEdge(edge));
    }
    let t = d / len;
    let alpha = t.conj() / t;
    Ok((alpha, a.conj() - alpha * a))
}
