//! Analytic Jordan curves, contour grids and point classification.
//!
//! A smooth curve is the image of the unit circle under a polynomial map
//! `φ(ζ) = a₀ + a₁ζ + … + aₙζⁿ` that is validated to be univalent with
//! nonvanishing derivative on the closed annulus `ρ ≤ |ζ| ≤ 1/ρ`. Contour
//! integrals over it use the uniform-parameter trapezoidal rule, which is
//! spectrally accurate for periodic analytic integrands.

use alloc::format;
use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::error::{Error, Result};
use crate::phase::unwrap_log;
use crate::poly::Polynomial;
use crate::C64;

/// Exclusion band width in units of the largest node spacing.
pub const BAND_SAFETY_FACTOR: f64 = 5.0;
/// Largest node count reachable by [`adaptive_refine`].
pub const MAX_NODES: usize = 1 << 16;
/// Annulus radius used for circles, whose maps are univalent everywhere.
pub const CIRCLE_RHO: f64 = 0.5;

const I: C64 = C64 { re: 0.0, im: 1.0 };

/// Polynomial conformal map of the closed unit disk, validated on an annulus.
#[derive(Debug, Clone, PartialEq)]
pub struct ConformalCurve {
    map: Polynomial,
    map_prime: Polynomial,
    reflected: Polynomial,
    reflected_prime: Polynomial,
    rho: f64,
}

/// Simple counterclockwise polygon.
#[derive(Debug, Clone, PartialEq)]
pub struct PolygonCurve {
    vertices: Vec<C64>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum AnalyticCurve {
    Conformal(ConformalCurve),
    Polygon(PolygonCurve),
}

/// Position of a point relative to the curve.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Location {
    Interior,
    Exterior,
    NearBoundary,
}

impl AnalyticCurve {
    /// `φ(ζ) = center + radius·ζ`.
    pub fn circle(center: C64, radius: f64) -> Result<Self> {
        if !(radius > 0.0) || !radius.is_finite() {
            return Err(Error::NonPositiveRadius(radius));
        }
        Ok(Self::Conformal(ConformalCurve::new(
            alloc::vec![center, C64::new(radius, 0.0)],
            CIRCLE_RHO,
        )?))
    }

    pub fn polynomial(coeffs: Vec<C64>, rho: f64) -> Result<Self> {
        ConformalCurve::new(coeffs, rho).map(Self::Conformal)
    }

    pub fn polygon(vertices: Vec<C64>) -> Result<Self> {
        PolygonCurve::new(vertices).map(Self::Polygon)
    }

    pub fn as_conformal(&self) -> Result<&ConformalCurve> {
        match self {
            Self::Conformal(c) => Ok(c),
            Self::Polygon(_) => Err(Error::NotConformalMapCurve),
        }
    }

    pub fn as_polygon(&self) -> Result<&PolygonCurve> {
        match self {
            Self::Polygon(p) => Ok(p),
            Self::Conformal(_) => Err(Error::NotPolygon),
        }
    }

    /// Uniform-parameter grid of `n` nodes on the curve.
    pub fn sample(&self, n: usize) -> Result<ContourGrid> {
        self.as_conformal()?.sample(n)
    }
}

impl ConformalCurve {
    /// Validates `φ` on `ρ ≤ |ζ| ≤ 1/ρ`: the derivative must not vanish on
    /// the closed disk of radius `1/ρ` and the boundary image must be simple.
    pub fn new(coeffs: Vec<C64>, rho: f64) -> Result<Self> {
        if !(rho > 0.0 && rho < 1.0) {
            return Err(Error::BadAnnulusRadius(rho));
        }
        if coeffs.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
            return Err(Error::CurveNotSimple("non-finite coefficient".into()));
        }
        let map = Polynomial::new(coeffs);
        if map.degree() < 1 {
            return Err(Error::CurveNotSimple("map is constant".into()));
        }
        let map_prime = map.derivative();
        let reflected = map.conj_coeffs();
        let reflected_prime = reflected.derivative();
        let curve = Self {
            map,
            map_prime,
            reflected,
            reflected_prime,
            rho,
        };
        curve.check_derivative()?;
        curve.check_simple_boundary()?;
        Ok(curve)
    }

    fn check_derivative(&self) -> Result<()> {
        let scale: f64 = self.map.coeffs().iter().map(|c| c.norm()).sum();
        let outer = 1.0 / self.rho;
        let (rings, angles) = (32usize, 1024usize);
        let mut min_modulus = f64::INFINITY;
        for r in 0..=rings {
            let radius = self.rho + (outer - self.rho) * r as f64 / rings as f64;
            for k in 0..angles {
                let zeta = C64::from_polar(radius, 2.0 * PI * k as f64 / angles as f64);
                min_modulus = min_modulus.min(self.map_prime.eval(zeta).norm());
            }
        }
        if !(min_modulus > 1e-10 * scale) {
            return Err(Error::CurveNotSimple(format!(
                "derivative of the map nearly vanishes on the annulus (min |φ'| = {min_modulus:.3e})"
            )));
        }
        // zeros of φ' inside |ζ| < 1/ρ, by the argument principle
        let samples: Vec<C64> = (0..4096)
            .map(|k| {
                self.map_prime
                    .eval(C64::from_polar(outer, 2.0 * PI * k as f64 / 4096.0))
            })
            .collect();
        let zeros = unwrap_log(&samples)
            .map_err(|_| Error::CurveNotSimple("cannot resolve the winding of φ'".into()))?
            .winding;
        if zeros != 0 {
            return Err(Error::CurveNotSimple(format!(
                "φ' has {zeros} zero(s) inside |ζ| < 1/ρ"
            )));
        }
        Ok(())
    }

    fn check_simple_boundary(&self) -> Result<()> {
        let m = 1024;
        let pts: Vec<C64> = (0..m)
            .map(|k| self.point_at(2.0 * PI * k as f64 / m as f64))
            .collect();
        if polyline_self_intersects(&pts) {
            return Err(Error::CurveNotSimple(
                "boundary image intersects itself".into(),
            ));
        }
        if signed_area(&pts) <= 0.0 {
            return Err(Error::CurveNotSimple("boundary is not counterclockwise".into()));
        }
        Ok(())
    }

    pub fn coeffs(&self) -> &[C64] {
        self.map.coeffs()
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }

    pub fn map(&self, zeta: C64) -> C64 {
        self.map.eval(zeta)
    }

    pub fn map_prime(&self, zeta: C64) -> C64 {
        self.map_prime.eval(zeta)
    }

    /// `φ*(ζ) = conj(φ(conj ζ))`; `φ*(1/ζ)` is the Schwarz function in the pullback.
    pub fn reflected(&self, zeta: C64) -> C64 {
        self.reflected.eval(zeta)
    }

    pub fn reflected_prime(&self, zeta: C64) -> C64 {
        self.reflected_prime.eval(zeta)
    }

    /// Conformal center `φ(0)`.
    pub fn center(&self) -> C64 {
        self.map.coeffs()[0]
    }

    /// `area(Ω)/π = Σ k |a_k|²`.
    pub fn area_over_pi(&self) -> f64 {
        self.map
            .coeffs()
            .iter()
            .enumerate()
            .map(|(k, c)| k as f64 * c.norm_sqr())
            .sum()
    }

    pub fn in_annulus(&self, zeta: C64) -> bool {
        let r = zeta.norm();
        r >= self.rho * (1.0 - 1e-12) && r <= (1.0 + 1e-12) / self.rho
    }

    pub fn point_at(&self, t: f64) -> C64 {
        self.map(C64::from_polar(1.0, t))
    }

    /// `z'(t) = iζ φ'(ζ)` at `ζ = e^{it}`.
    pub fn velocity_at(&self, t: f64) -> C64 {
        let zeta = C64::from_polar(1.0, t);
        I * zeta * self.map_prime(zeta)
    }

    /// Unit tangent `z'(t)/|z'(t)|` of the positively oriented boundary.
    pub fn unit_tangent(&self, t: f64) -> Result<C64> {
        let v = self.velocity_at(t);
        let m = v.norm();
        if !(m > 0.0) {
            return Err(Error::DegenerateTangent);
        }
        Ok(v / m)
    }

    /// Holomorphic continuation of the unit tangent into the annulus, written
    /// in the pullback coordinate: `T(φ(ζ)) = iζ φ'(ζ) / sqrt(φ'(ζ) φ*'(1/ζ))`.
    pub fn tangent_continued(&self, zeta: C64) -> C64 {
        let d = self.map_prime(zeta);
        let product = d * self.reflected_prime(zeta.inv());
        I * zeta * d / product.sqrt()
    }

    pub fn sample(&self, n: usize) -> Result<ContourGrid> {
        self.sample_on_circle(n, 1.0)
    }

    /// Grid on the image of the circle `|ζ| = radius`; `radius = 1` is the curve.
    pub fn sample_on_circle(&self, n: usize, radius: f64) -> Result<ContourGrid> {
        if n < 16 || !n.is_power_of_two() {
            return Err(Error::BadNodeCount(n));
        }
        let weight = 2.0 * PI / n as f64;
        let mut points = Vec::with_capacity(n);
        let mut velocities = Vec::with_capacity(n);
        for j in 0..n {
            let zeta = C64::from_polar(radius, j as f64 * weight);
            points.push(self.map(zeta));
            velocities.push(I * zeta * self.map_prime(zeta));
        }
        let spacing = (0..n)
            .map(|j| (points[(j + 1) % n] - points[j]).norm())
            .fold(0.0, f64::max);
        let grid = ContourGrid {
            radius,
            points,
            velocities,
            weight,
            band: BAND_SAFETY_FACTOR * spacing,
        };
        debug_assert!({
            let total: C64 = grid.velocities.iter().sum::<C64>() * weight;
            let scale: f64 = grid.velocities.iter().map(|v| v.norm()).sum::<f64>() * weight;
            total.norm() < 1e-12 * scale
        });
        Ok(grid)
    }
}

impl PolygonCurve {
    pub fn new(vertices: Vec<C64>) -> Result<Self> {
        let n = vertices.len();
        if n < 3 {
            return Err(Error::InvalidPolygon(format!("{n} vertices, need at least 3")));
        }
        if vertices.iter().any(|v| !v.re.is_finite() || !v.im.is_finite()) {
            return Err(Error::InvalidPolygon("non-finite vertex".into()));
        }
        let scale = vertices.iter().map(|v| v.norm()).fold(1.0, f64::max);
        for i in 0..n {
            for j in i + 1..n {
                if (vertices[i] - vertices[j]).norm() <= 1e-14 * scale {
                    return Err(Error::InvalidPolygon(format!("vertices {i} and {j} repeat")));
                }
            }
        }
        if polyline_self_intersects(&vertices) {
            return Err(Error::InvalidPolygon("edges intersect".into()));
        }
        if signed_area(&vertices) <= 0.0 {
            return Err(Error::InvalidPolygon("vertices are not counterclockwise".into()));
        }
        Ok(Self { vertices })
    }

    pub fn vertices(&self) -> &[C64] {
        &self.vertices
    }

    pub fn area(&self) -> f64 {
        signed_area(&self.vertices)
    }

    /// Edge `e` runs from vertex `e` to vertex `e + 1` (cyclically).
    pub fn edge(&self, e: usize) -> Result<(C64, C64)> {
        let n = self.vertices.len();
        if e >= n {
            return Err(Error::DegenerateEdge(e));
        }
        Ok((self.vertices[e], self.vertices[(e + 1) % n]))
    }
}

/// Nodes, parameter derivatives and trapezoidal weight of a closed contour.
#[derive(Debug, Clone, PartialEq)]
pub struct ContourGrid {
    radius: f64,
    points: Vec<C64>,
    velocities: Vec<C64>,
    weight: f64,
    band: f64,
}

impl ContourGrid {
    pub fn n(&self) -> usize {
        self.points.len()
    }

    /// Radius of the pullback circle this grid samples (1 for the curve itself).
    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn param(&self, j: usize) -> f64 {
        j as f64 * self.weight
    }

    pub fn points(&self) -> &[C64] {
        &self.points
    }

    pub fn velocities(&self) -> &[C64] {
        &self.velocities
    }

    pub fn weight(&self) -> f64 {
        self.weight
    }

    /// Width of the band around the contour where evaluation is refused.
    pub fn band(&self) -> f64 {
        self.band
    }

    /// Pullback nodes `ζ_j = radius · e^{2πij/N}`.
    pub fn zeta(&self, j: usize) -> C64 {
        C64::from_polar(self.radius, self.param(j))
    }

    /// Trapezoidal `∮ g(z) dz` for nodal values `g_j`.
    pub fn integrate(&self, values: impl IntoIterator<Item = C64>) -> C64 {
        values
            .into_iter()
            .zip(&self.velocities)
            .map(|(g, dz)| g * dz)
            .sum::<C64>()
            * self.weight
    }

    /// `(1/2πi) ∮ g(ζ) dζ / (ζ - z)` for nodal density values `g_j`.
    pub fn cauchy_integral(&self, density: &[C64], z: C64) -> C64 {
        debug_assert_eq!(density.len(), self.n());
        let sum: C64 = density
            .iter()
            .zip(self.points.iter().zip(&self.velocities))
            .map(|(g, (p, dz))| g * dz / (p - z))
            .sum();
        sum * self.weight / (2.0 * PI * I)
    }

    pub fn distance_to_nodes(&self, z: C64) -> f64 {
        self.points
            .iter()
            .map(|p| (p - z).norm())
            .fold(f64::INFINITY, f64::min)
    }

    /// Winding number of the contour around `z`, before rounding.
    pub fn winding(&self, z: C64) -> C64 {
        let ones = alloc::vec![C64::new(1.0, 0.0); self.n()];
        self.cauchy_integral(&ones, z)
    }

    pub fn locate(&self, z: C64) -> Location {
        if !z.re.is_finite() || !z.im.is_finite() {
            return Location::Exterior;
        }
        if self.distance_to_nodes(z) < self.band {
            return Location::NearBoundary;
        }
        let w = self.winding(z);
        let rounded = libm::round(w.re);
        if (w - rounded).norm() > 1e-6 {
            return Location::NearBoundary;
        }
        if rounded == 1.0 {
            Location::Interior
        } else {
            Location::Exterior
        }
    }
}

/// Doubles `N` from `n0` until a functional of the grid changes by less than
/// `tol`, returning the grid at the smaller `N` of the converged pair.
pub fn adaptive_refine<F>(curve: &ConformalCurve, n0: usize, tol: f64, functional: F) -> Result<ContourGrid>
where
    F: FnMut(&ContourGrid) -> Result<C64>,
{
    adaptive_refine_to(curve, n0, MAX_NODES, tol, functional)
}

/// [`adaptive_refine`] with a caller-chosen ceiling on `N`.
pub fn adaptive_refine_to<F>(
    curve: &ConformalCurve,
    n0: usize,
    n_max: usize,
    tol: f64,
    mut functional: F,
) -> Result<ContourGrid>
where
    F: FnMut(&ContourGrid) -> Result<C64>,
{
    if !(tol > 0.0) {
        return Err(Error::NoConvergence(n0));
    }
    let n_max = n_max.min(MAX_NODES);
    let mut grid = curve.sample(n0)?;
    let mut value = functional(&grid)?;
    while grid.n() * 2 <= n_max {
        let finer = curve.sample(grid.n() * 2)?;
        let next = functional(&finer)?;
        if (next - value).norm() < tol {
            return Ok(grid);
        }
        grid = finer;
        value = next;
    }
    Err(Error::NoConvergence(n_max))
}

pub(crate) fn signed_area(pts: &[C64]) -> f64 {
    let n = pts.len();
    0.5 * (0..n)
        .map(|j| {
            let (a, b) = (pts[j], pts[(j + 1) % n]);
            a.re * b.im - a.im * b.re
        })
        .sum::<f64>()
}

fn orient(a: C64, b: C64, c: C64) -> f64 {
    (b.re - a.re) * (c.im - a.im) - (b.im - a.im) * (c.re - a.re)
}

fn on_segment(a: C64, b: C64, p: C64) -> bool {
    p.re >= a.re.min(b.re) && p.re <= a.re.max(b.re) && p.im >= a.im.min(b.im) && p.im <= a.im.max(b.im)
}

fn segments_intersect(a: C64, b: C64, c: C64, d: C64) -> bool {
    let (d1, d2) = (orient(c, d, a), orient(c, d, b));
    let (d3, d4) = (orient(a, b, c), orient(a, b, d));
    if ((d1 > 0.0 && d2 < 0.0) || (d1 < 0.0 && d2 > 0.0)) && ((d3 > 0.0 && d4 < 0.0) || (d3 < 0.0 && d4 > 0.0)) {
        return true;
    }
    (d1 == 0.0 && on_segment(c, d, a))
        || (d2 == 0.0 && on_segment(c, d, b))
        || (d3 == 0.0 && on_segment(a, b, c))
        || (d4 == 0.0 && on_segment(a, b, d))
}

/// Whether any two non-adjacent edges of the closed polyline meet.
fn polyline_self_intersects(pts: &[C64]) -> bool {
    let n = pts.len();
    let edge = |i: usize| (pts[i], pts[(i + 1) % n]);
    for i in 0..n {
        let (a, b) = edge(i);
        let (lo_x, hi_x) = (a.re.min(b.re), a.re.max(b.re));
        let (lo_y, hi_y) = (a.im.min(b.im), a.im.max(b.im));
        for j in i + 2..n {
            if i == 0 && j == n - 1 {
                continue;
            }
            let (c, d) = edge(j);
            if c.re.max(d.re) < lo_x || c.re.min(d.re) > hi_x || c.im.max(d.im) < lo_y || c.im.min(d.im) > hi_y {
                continue;
            }
            if segments_intersect(a, b, c, d) {
                return true;
            }
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn unit_circle() -> ConformalCurve {
        AnalyticCurve::circle(c(0.0, 0.0), 1.0).unwrap().as_conformal().unwrap().clone()
    }

    #[test]
    fn circles() {
        let a = AnalyticCurve::circle(c(0.0, 0.0), 1.0).unwrap();
        assert_eq!(a.as_conformal().unwrap().coeffs(), &[c(0.0, 0.0), c(1.0, 0.0)]);
        let b = AnalyticCurve::circle(c(2.0, 1.0), 0.5).unwrap();
        assert_eq!(b.as_conformal().unwrap().coeffs(), &[c(2.0, 1.0), c(0.5, 0.0)]);
        assert_eq!(
            AnalyticCurve::circle(c(0.0, 0.0), -1.0).unwrap_err(),
            Error::NonPositiveRadius(-1.0)
        );
    }

    #[test]
    fn polynomial_validation() {
        assert!(AnalyticCurve::polynomial(vec![c(0.0, 0.0), c(1.0, 0.0), c(0.3, 0.0)], 0.9).is_ok());
        assert!(AnalyticCurve::polynomial(vec![c(0.0, 0.0), c(1.0, 0.0)], 0.9).is_ok());
        // φ' = 1 + 1.2ζ vanishes at ζ = -5/6, inside 0.8 ≤ |ζ| ≤ 1.25
        assert!(matches!(
            AnalyticCurve::polynomial(vec![c(0.0, 0.0), c(1.0, 0.0), c(0.6, 0.0)], 0.8),
            Err(Error::CurveNotSimple(_))
        ));
        // φ' vanishes inside the unit disk: boundary image loops
        assert!(matches!(
            AnalyticCurve::polynomial(vec![c(0.0, 0.0), c(1.0, 0.0), c(1.0, 0.0)], 0.9),
            Err(Error::CurveNotSimple(_))
        ));
        assert!(matches!(
            AnalyticCurve::polynomial(vec![c(1.0, 0.0)], 0.9),
            Err(Error::CurveNotSimple(_))
        ));
        assert_eq!(
            AnalyticCurve::polynomial(vec![c(0.0, 0.0), c(1.0, 0.0)], 1.0).unwrap_err(),
            Error::BadAnnulusRadius(1.0)
        );
    }

    #[test]
    fn polygon_validation() {
        let square = vec![c(0.0, 0.0), c(1.0, 0.0), c(1.0, 1.0), c(0.0, 1.0)];
        let p = AnalyticCurve::polygon(square.clone()).unwrap();
        assert!((p.as_polygon().unwrap().area() - 1.0).abs() < 1e-15);
        let mut cw = square.clone();
        cw.reverse();
        assert!(AnalyticCurve::polygon(cw).is_err());
        let bowtie = vec![c(0.0, 0.0), c(1.0, 1.0), c(1.0, 0.0), c(0.0, 1.0)];
        assert!(AnalyticCurve::polygon(bowtie).is_err());
        assert!(AnalyticCurve::polygon(vec![c(0.0, 0.0), c(1.0, 0.0)]).is_err());
        let repeated = vec![c(0.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(0.0, 1.0)];
        assert!(AnalyticCurve::polygon(repeated).is_err());
        assert_eq!(p.sample(16).unwrap_err(), Error::NotConformalMapCurve);
    }

    #[test]
    fn unit_circle_grid() {
        let g = unit_circle().sample(16).unwrap();
        for j in 0..16 {
            let z = C64::from_polar(1.0, 2.0 * PI * j as f64 / 16.0);
            assert!((g.points()[j] - z).norm() < 1e-15);
            assert!((g.velocities()[j] - I * z).norm() < 1e-15);
        }
        assert_eq!(unit_circle().sample(12).unwrap_err(), Error::BadNodeCount(12));
        assert_eq!(unit_circle().sample(8).unwrap_err(), Error::BadNodeCount(8));
    }

    #[test]
    fn locate_points() {
        let g = unit_circle().sample(256).unwrap();
        assert_eq!(g.locate(c(0.0, 0.0)), Location::Interior);
        assert_eq!(g.locate(c(3.0, 0.0)), Location::Exterior);
        assert_eq!(g.locate(c(1.0 + 1e-15, 0.0)), Location::NearBoundary);
        assert_eq!(g.locate(c(0.0, 1.01)), Location::NearBoundary);
    }

    #[test]
    fn tangents_on_unit_circle() {
        let u = unit_circle();
        assert!((u.unit_tangent(0.0).unwrap() - I).norm() < 1e-15);
        assert!((u.unit_tangent(PI / 2.0).unwrap() - c(-1.0, 0.0)).norm() < 1e-15);
        let zeta = c(0.9, 0.2);
        // continued tangent of the unit circle is iz
        assert!((u.tangent_continued(zeta) - I * zeta).norm() < 1e-14);
    }

    #[test]
    fn area_formula() {
        let curve = ConformalCurve::new(vec![c(0.0, 0.0), c(1.0, 0.0), c(0.3, 0.0)], 0.9).unwrap();
        assert!((curve.area_over_pi() - 1.18).abs() < 1e-15);
        let g = curve.sample(64).unwrap();
        let moment = g.integrate(g.points().iter().map(|z| z.conj())) / (2.0 * PI * I);
        assert!((moment - 1.18).norm() < 1e-13);
    }

    #[test]
    fn refinement_stops_early_for_trigonometric_integrands() {
        let u = unit_circle();
        let g = adaptive_refine(&u, 16, 1e-10, |g| {
            Ok(g.integrate(g.points().iter().map(|z| z.conj())) / (2.0 * PI * I))
        })
        .unwrap();
        assert_eq!(g.n(), 16);
        let near = c(1.0 + 1e-9, 0.0);
        let err = adaptive_refine(&u, 16, 1e-10, |g| match g.locate(near) {
            Location::NearBoundary => Err(Error::NearBoundary),
            _ => Ok(g.winding(near)),
        })
        .unwrap_err();
        assert_eq!(err, Error::NearBoundary);
    }
}
