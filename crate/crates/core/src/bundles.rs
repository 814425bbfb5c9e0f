//! Line bundles on the Riemann sphere glued across a curve.
//!
//! The sphere is covered by two charts: `U₁` is the interior of Γ together
//! with a collar, `U₂` the exterior together with a collar. A bundle is one
//! nonvanishing transition function `λ₁₂` on the collar, and a holomorphic
//! section is a pair `(f₁, f₂)` with `f₁ = λ₁₂ f₂` there. Transition
//! functions are evaluated in the pullback coordinate `ζ`, where the collar is
//! the validated annulus `ρ ≤ |ζ| ≤ 1/ρ`.
//!
//! Sections are found by splitting `log λ₁₂` with the Cauchy integral: if
//! `J` is the Cauchy integral of the boundary density, `J₊ - J₋ = density`
//! on Γ, so `f₁ = exp J₊` and `f₂ = exp J₋` glue correctly. When the Chern
//! class `c` is nonzero the density is first made single valued by the
//! factor `(z - a)^{-c}` for an interior point `a`, and `f₂` is multiplied
//! back by it.

use alloc::boxed::Box;
use alloc::vec::Vec;
use core::f64::consts::PI;
use core::fmt;

use crate::curve::{ConformalCurve, ContourGrid, Location, MAX_NODES};
use crate::error::{Error, Result};
use crate::phase::unwrap_log;
use crate::schwarz::SchwarzEvaluator;
use crate::C64;

const I: C64 = C64 { re: 0.0, im: 1.0 };
const ONE: C64 = C64 { re: 1.0, im: 0.0 };

/// Step of the central difference used for the pre-rounding Chern estimate.
const DIFF_STEP: f64 = 1e-5;
/// A transition smaller than this at a node counts as vanishing.
const VANISHING: f64 = 1e-12;
/// Allowed distance of the pre-rounding Chern estimate from an integer.
pub const CHERN_INTEGER_TOL: f64 = 1e-6;

/// Transition functions with closed forms, plus an escape hatch.
pub enum BundleKind<'a> {
    /// `λ₁₂ = exp S`.
    ExpSchwarz,
    /// `λ₁₂ = 1 / (S - conj w)`.
    SchwarzPole { w: C64 },
    /// `λ₁₂ = T^{-m}`; `m = 2` gives `S' = 1/T²`, the canonical bundle.
    TangentPower { m: i32 },
    /// Any `λ₁₂(z)` analytic and nonvanishing on the collar. It receives the
    /// plane point `z = φ(ζ)`.
    Custom(Box<dyn Fn(C64) -> C64 + Send + Sync + 'a>),
}

impl fmt::Debug for BundleKind<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::ExpSchwarz => f.write_str("ExpSchwarz"),
            Self::SchwarzPole { w } => f.debug_struct("SchwarzPole").field("w", w).finish(),
            Self::TangentPower { m } => f.debug_struct("TangentPower").field("m", m).finish(),
            Self::Custom(_) => f.write_str("Custom(..)"),
        }
    }
}

#[derive(Debug)]
pub struct LineBundle<'a> {
    curve: &'a ConformalCurve,
    kind: BundleKind<'a>,
}

impl<'a> LineBundle<'a> {
    pub fn new(curve: &'a ConformalCurve, kind: BundleKind<'a>) -> Self {
        Self { curve, kind }
    }

    pub fn exp_schwarz(curve: &'a ConformalCurve) -> Self {
        Self::new(curve, BundleKind::ExpSchwarz)
    }

    pub fn schwarz_pole(curve: &'a ConformalCurve, w: C64) -> Self {
        Self::new(curve, BundleKind::SchwarzPole { w })
    }

    pub fn tangent_power(curve: &'a ConformalCurve, m: i32) -> Self {
        Self::new(curve, BundleKind::TangentPower { m })
    }

    pub fn custom(curve: &'a ConformalCurve, f: impl Fn(C64) -> C64 + Send + Sync + 'a) -> Self {
        Self::new(curve, BundleKind::Custom(Box::new(f)))
    }

    pub fn curve(&self) -> &'a ConformalCurve {
        self.curve
    }

    pub fn kind(&self) -> &BundleKind<'a> {
        &self.kind
    }

    /// `λ₁₂(φ(ζ))`.
    pub fn transition_at_zeta(&self, zeta: C64) -> C64 {
        let s = || self.curve.reflected(zeta.inv());
        match &self.kind {
            BundleKind::ExpSchwarz => s().exp(),
            BundleKind::SchwarzPole { w } => (s() - w.conj()).inv(),
            BundleKind::TangentPower { m } => self.curve.tangent_continued(zeta).powi(-m),
            BundleKind::Custom(f) => f(self.curve.map(zeta)),
        }
    }

    /// `λ₂₁(φ(ζ))`, computed from its own closed form rather than as `1/λ₁₂`
    /// wherever one exists.
    pub fn inverse_transition_at_zeta(&self, zeta: C64) -> C64 {
        let s = || self.curve.reflected(zeta.inv());
        match &self.kind {
            BundleKind::ExpSchwarz => (-s()).exp(),
            BundleKind::SchwarzPole { w } => s() - w.conj(),
            BundleKind::TangentPower { m } => self.curve.tangent_continued(zeta).powi(*m),
            BundleKind::Custom(f) => f(self.curve.map(zeta)).inv(),
        }
    }

    /// `λ₁₂(z)` at a plane point of the collar.
    pub fn transition(&self, z: C64) -> Result<C64> {
        let zeta = SchwarzEvaluator::new(self.curve).preimage(z)?;
        Ok(self.transition_at_zeta(zeta))
    }

    /// Exact `log λ₁₂` where the bundle has one on the grid.
    fn exact_log(&self, grid: &ContourGrid) -> Option<Vec<C64>> {
        match self.kind {
            BundleKind::ExpSchwarz => Some(
                (0..grid.n())
                    .map(|j| self.curve.reflected(grid.zeta(j).inv()))
                    .collect(),
            ),
            _ => None,
        }
    }

    fn nodal_transitions(&self, grid: &ContourGrid) -> Result<Vec<C64>> {
        let values: Vec<C64> = (0..grid.n())
            .map(|j| self.transition_at_zeta(grid.zeta(j)))
            .collect();
        if values
            .iter()
            .any(|v| !(v.norm() > VANISHING) || !v.re.is_finite() || !v.im.is_finite())
        {
            return Err(Error::TransitionVanishes);
        }
        Ok(values)
    }
}

/// Chern class together with the trapezoidal estimate it was rounded from.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChernClass {
    pub class: i64,
    pub raw: f64,
}

/// `c(λ) = (1/2πi) ∮ d log λ₁₂`.
///
/// The integer comes from the unwrapped phase of `λ₁₂` at the nodes; the raw
/// value is an independent trapezoidal sum of `d log λ₁₂ / dt` by central
/// differences. Disagreement between the two is never rounded away.
pub fn chern_class(bundle: &LineBundle<'_>, grid: &ContourGrid) -> Result<ChernClass> {
    let values = bundle.nodal_transitions(grid)?;
    let winding = unwrap_log(&values)?.winding;
    let r = grid.radius();
    let sum: C64 = (0..grid.n())
        .map(|j| {
            let t = grid.param(j);
            let plus = bundle.transition_at_zeta(C64::from_polar(r, t + DIFF_STEP));
            let minus = bundle.transition_at_zeta(C64::from_polar(r, t - DIFF_STEP));
            (plus - minus) / (2.0 * DIFF_STEP * values[j])
        })
        .sum();
    let raw = (sum * grid.weight() / (2.0 * PI * I)).re;
    let rounded = libm::round(raw);
    if !((raw - rounded).abs() < CHERN_INTEGER_TOL) {
        return Err(Error::NotAnInteger(raw));
    }
    if rounded as i64 != winding {
        return Err(Error::BranchUnresolved);
    }
    Ok(ChernClass {
        class: winding,
        raw,
    })
}

/// Behaviour of `f₂` at infinity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Normalization {
    /// `f₂(∞) = 1`, used when `c = 0`.
    OneAtInfinity,
    /// `f₂(z) = 1/z + O(1/z²)`, used when `c = 1`.
    LeadingOneOverZ,
    /// `f₂(z) = z^{-c} + O(z^{-c-1})` for `c ≥ 2`.
    LeadingInversePower(u32),
}

impl Normalization {
    pub fn for_chern(c: i64) -> Result<Self> {
        match c {
            0 => Ok(Self::OneAtInfinity),
            1 => Ok(Self::LeadingOneOverZ),
            c if c >= 2 => Ok(Self::LeadingInversePower(c as u32)),
            c => Err(Error::NoHolomorphicSection(c)),
        }
    }

    pub fn tag(&self) -> &'static str {
        match self {
            Self::OneAtInfinity => "one-at-infinity",
            Self::LeadingOneOverZ => "leading-one-over-z",
            Self::LeadingInversePower(_) => "leading-inverse-power",
        }
    }
}

/// A holomorphic section `(f₁, f₂)` stored as its boundary log-density.
#[derive(Debug, Clone)]
pub struct SectionPair {
    grid: ContourGrid,
    density: Vec<C64>,
    chern: i64,
    adjustment: Option<C64>,
    normalization: Normalization,
}

impl SectionPair {
    /// Builds a section directly from a single-valued boundary density.
    /// `adjustment` is required exactly when `chern ≠ 0`.
    pub fn from_density(
        grid: ContourGrid,
        density: Vec<C64>,
        chern: i64,
        adjustment: Option<C64>,
    ) -> Result<Self> {
        if density.len() != grid.n() {
            return Err(Error::BadNodeCount(density.len()));
        }
        let normalization = Normalization::for_chern(chern)?;
        let adjustment = match (chern, adjustment) {
            (0, _) => None,
            (_, None) => return Err(Error::AdjustmentPointMissing),
            (_, Some(a)) => {
                if grid.locate(a) != Location::Interior {
                    return Err(Error::AdjustmentPointNotInterior);
                }
                Some(a)
            }
        };
        Ok(Self {
            grid,
            density,
            chern,
            adjustment,
            normalization,
        })
    }

    pub fn grid(&self) -> &ContourGrid {
        &self.grid
    }

    pub fn density(&self) -> &[C64] {
        &self.density
    }

    pub fn chern(&self) -> i64 {
        self.chern
    }

    pub fn adjustment(&self) -> Option<C64> {
        self.adjustment
    }

    pub fn normalization(&self) -> Normalization {
        self.normalization
    }

    /// `(z - a)^{-c}`, the factor restored on the exterior side.
    fn twist(&self, z: C64) -> C64 {
        match self.adjustment {
            Some(a) => (z - a).powi(-(self.chern as i32)),
            None => ONE,
        }
    }

    /// `f₁(z)` for interior `z`.
    pub fn f1(&self, z: C64) -> Result<C64> {
        match self.grid.locate(z) {
            Location::Interior => Ok(self.grid.cauchy_integral(&self.density, z).exp()),
            Location::Exterior => Err(Error::WrongQuadrant),
            Location::NearBoundary => Err(Error::NearBoundary),
        }
    }

    /// `f₂(z)` for exterior `z`.
    pub fn f2(&self, z: C64) -> Result<C64> {
        match self.grid.locate(z) {
            Location::Exterior => Ok(self.grid.cauchy_integral(&self.density, z).exp() * self.twist(z)),
            Location::Interior => Err(Error::WrongQuadrant),
            Location::NearBoundary => Err(Error::NearBoundary),
        }
    }

    /// Distance of `f₂` from its normalization at `Z = 10⁶`.
    pub fn normalization_defect(&self) -> Result<f64> {
        let big = C64::new(1e6, 0.0);
        Ok((self.f2(big)? * big.powi(self.chern as i32) - ONE).norm())
    }
}

/// The canonical holomorphic section of a bundle with `c ≥ 0`.
///
/// For `c ≠ 0` the adjustment point `a` defaults to `w` for a pole bundle
/// with interior `w`, and to the conformal center `φ(0)` otherwise.
pub fn canonical_section(
    bundle: &LineBundle<'_>,
    grid: &ContourGrid,
    a: Option<C64>,
) -> Result<SectionPair> {
    let chern = chern_class(bundle, grid)?.class;
    Normalization::for_chern(chern)?;
    if chern == 0 {
        let density = match bundle.exact_log(grid) {
            Some(d) => d,
            None => {
                let log = unwrap_log(&bundle.nodal_transitions(grid)?)?;
                if log.winding != 0 {
                    return Err(Error::BranchUnresolved);
                }
                log.values
            }
        };
        return SectionPair::from_density(grid.clone(), density, 0, None);
    }
    let a = match a {
        Some(a) => a,
        None => match bundle.kind {
            BundleKind::SchwarzPole { w } if grid.locate(w) == Location::Interior => w,
            _ => bundle.curve.center(),
        },
    };
    if grid.locate(a) != Location::Interior {
        return Err(Error::AdjustmentPointNotInterior);
    }
    let density = adjusted_log(bundle, grid, chern, a)?;
    SectionPair::from_density(grid.clone(), density, chern, Some(a))
}

/// Unwrapped `log(λ₁₂ (z - a)^{-c})` on a grid; it must close up.
fn adjusted_log(bundle: &LineBundle<'_>, grid: &ContourGrid, chern: i64, a: C64) -> Result<Vec<C64>> {
    let samples: Vec<C64> = (0..grid.n())
        .map(|j| {
            bundle.transition_at_zeta(grid.zeta(j)) * (grid.points()[j] - a).powi(-(chern as i32))
        })
        .collect();
    let log = unwrap_log(&samples)?;
    if log.winding != 0 {
        return Err(Error::BranchUnresolved);
    }
    Ok(log.values)
}

/// `f₁(z)` inside and `f₂(z)` outside the curve.
pub fn evaluate_section(section: &SectionPair, z: C64) -> Result<C64> {
    match section.grid.locate(z) {
        Location::Interior => section.f1(z),
        Location::Exterior => section.f2(z),
        Location::NearBoundary => Err(Error::NearBoundary),
    }
}

/// Pairs of collar points just inside and just outside Γ, mirror images in
/// the pullback circle, at twice the exclusion band from the curve.
pub fn transition_test_points(curve: &ConformalCurve, grid: &ContourGrid, count: usize) -> Result<Vec<C64>> {
    let pairs = count.div_ceil(2);
    let mut points = Vec::with_capacity(2 * pairs);
    for k in 0..pairs {
        let t = 2.0 * PI * (k as f64 + 0.5) / pairs as f64;
        let unit = C64::from_polar(1.0, t);
        let eps = 2.0 * grid.band() / curve.map_prime(unit).norm();
        if !(1.0 - eps > curve.rho()) {
            return Err(Error::NearBoundary);
        }
        points.push(curve.map(unit * (1.0 - eps)));
        points.push(curve.map(unit / (1.0 - eps)));
    }
    points.truncate(count);
    Ok(points)
}

/// `max |f₁(z) - λ₁₂(z) f₂(z)| / (1 + |f₂(z)|)` over collar points.
///
/// At each point one side comes straight from the section; the other is
/// continued across Γ by moving its Cauchy contour to a concentric pullback
/// circle on the far side of the point, where the density is recomputed from
/// `λ₁₂` itself.
pub fn verify_transition(section: &SectionPair, bundle: &LineBundle<'_>, points: &[C64]) -> Result<f64> {
    let curve = bundle.curve;
    let evaluator = SchwarzEvaluator::new(curve);
    let grid = &section.grid;
    let mut worst: f64 = 0.0;
    for &z in points {
        let zeta = evaluator.preimage(z)?;
        let r = zeta.norm();
        let lambda = bundle.transition_at_zeta(zeta);
        let (f1, f2) = match grid.locate(z) {
            Location::NearBoundary => return Err(Error::NearBoundary),
            Location::Interior => {
                let inner = (2.0 * r - 1.0).max(curve.rho());
                let j = shifted_cauchy(section, bundle, inner, r, z)?;
                (section.f1(z)?, j.exp() * section.twist(z))
            }
            Location::Exterior => {
                let outer = (2.0 * r - 1.0).min(1.0 / curve.rho());
                let j = shifted_cauchy(section, bundle, outer, r, z)?;
                (j.exp(), section.f2(z)?)
            }
        };
        worst = worst.max((f1 - lambda * f2).norm() / (1.0 + f2.norm()));
    }
    Ok(worst)
}

/// Cauchy integral of the section's density recomputed on the image of
/// `|ζ| = radius`, evaluated at a point whose preimage has modulus `r`.
fn shifted_cauchy(section: &SectionPair, bundle: &LineBundle<'_>, radius: f64, r: f64, z: C64) -> Result<C64> {
    let ratio = if radius < r { radius / r } else { r / radius };
    if !(ratio < 1.0) {
        return Err(Error::NearBoundary);
    }
    let needed = libm::ceil(36.0 / -libm::log(ratio)) as usize;
    let n = needed.max(section.grid.n()).next_power_of_two();
    if n > MAX_NODES {
        return Err(Error::NearBoundary);
    }
    let contour = bundle.curve.sample_on_circle(n, radius)?;
    let density = match (section.adjustment, bundle.exact_log(&contour)) {
        (None, Some(exact)) => exact,
        (adjustment, _) => {
            let c = section.chern;
            let a = adjustment.unwrap_or(ONE);
            let samples: Vec<C64> = (0..n)
                .map(|j| {
                    let lam = bundle.transition_at_zeta(contour.zeta(j));
                    if c == 0 {
                        lam
                    } else {
                        lam * (contour.points()[j] - a).powi(-(c as i32))
                    }
                })
                .collect();
            let log = unwrap_log(&samples)?;
            if log.winding != 0 {
                return Err(Error::BranchUnresolved);
            }
            log.values
        }
    };
    Ok(contour.cauchy_integral(&density, z))
}

/// `max_j |f₁(z_j) T(z_j)^m - conj f₂(z_j)|`, the matching condition of an
/// `m/2`-differential across the curve.
pub fn verify_m_differential_match(
    f1: impl Fn(C64) -> C64,
    f2: impl Fn(C64) -> C64,
    grid: &ContourGrid,
    m: i32,
) -> f64 {
    grid.points()
        .iter()
        .zip(grid.velocities())
        .map(|(&z, v)| {
            let t = v / v.norm();
            (f1(z) * t.powi(m) - f2(z).conj()).norm()
        })
        .fold(0.0, f64::max)
}
