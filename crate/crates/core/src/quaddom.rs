//! Quadrature identities of domains bounded by polynomial conformal images
//! and by polygons, and the rational structure of the exponential transform.
//!
//! Every residue identity is turned into a point rule: the residue at `ζ = 0`
//! in the pullback plane is a trapezoidal sum on the small circle
//! `|ζ| = 1/2`, so the rule's nodes are `φ(ζ_j)` (inside the domain) and its
//! weights absorb the Schwarz-function factor. For polynomial `f` of bounded
//! degree such a sum is exact up to rounding.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::curve::{AnalyticCurve, ConformalCurve, ContourGrid, PolygonCurve};
use crate::error::{Error, Result};
use crate::linalg::null_vector;
use crate::poly::Polynomial;
use crate::schwarz::polygon_schwarz;
use crate::transforms::{double_cauchy, Side};
use crate::C64;

const I: C64 = C64 { re: 0.0, im: 1.0 };

/// Radius of the pullback circle on which residues at `ζ = 0` are taken.
pub const RESIDUE_RADIUS: f64 = 0.5;
/// Fit residual above which a domain is reported as not a quadrature domain
/// at the fitted degree.
pub const QD_RESIDUAL_THRESHOLD: f64 = 1e-3;
/// Samples of `|φ'|` on the unit circle used to expand `1/T`.
const TANGENT_SAMPLES: usize = 256;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum QuadratureKind {
    /// `(1/π) ∫ f dA = Σ res f S dz`.
    Classical,
    /// `(1/π) ∫ f' dA = -Σ res f S' dz`.
    Abelian,
    /// `∮ f |dz| = 2πi Σ res f dz / T`.
    ArcLength,
    /// `(1/π) ∫ f'' dA = Σ c_j f(a_j)` over polygon corners.
    PolygonCorner,
}

impl QuadratureKind {
    pub fn tag(self) -> &'static str {
        match self {
            Self::Classical => "classical",
            Self::Abelian => "abelian",
            Self::ArcLength => "arclength",
            Self::PolygonCorner => "corner",
        }
    }
}

/// A point rule `Q(f) = Σ_j weights_j · f(nodes_j)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ResidueQuadrature {
    pub kind: QuadratureKind,
    pub nodes: Vec<C64>,
    pub weights: Vec<C64>,
}

impl ResidueQuadrature {
    /// Residue rule for `Σ res f S dz`, exact for `deg f ≤ max_degree`.
    pub fn classical(curve: &ConformalCurve, max_degree: usize) -> Self {
        Self::small_circle(QuadratureKind::Classical, curve, max_degree, |zeta| {
            curve.reflected(zeta.inv()) * curve.map_prime(zeta)
        })
    }

    /// Residue rule for `-Σ res f S' dz`. In the pullback `S' dz` is
    /// `-φ*'(1/ζ) dζ / ζ²`, so the two signs cancel.
    pub fn abelian(curve: &ConformalCurve, max_degree: usize) -> Self {
        Self::small_circle(QuadratureKind::Abelian, curve, max_degree, |zeta| {
            curve.reflected_prime(zeta.inv()) / (zeta * zeta)
        })
    }

    /// Residue rule for `2πi Σ res f dz / T`.
    ///
    /// On `|ζ| = 1`, `φ'(ζ) dζ / T = |φ'(ζ)| dζ / (iζ)`. Its Laurent series is
    /// read off from Fourier coefficients; a meromorphic continuation to the
    /// disk exists only if no coefficient below `ζ^{-deg φ}` survives.
    pub fn arclength(curve: &ConformalCurve, max_degree: usize) -> Result<Self> {
        let m = TANGENT_SAMPLES;
        let samples: Vec<C64> = (0..m)
            .map(|j| {
                let zeta = C64::from_polar(1.0, 2.0 * PI * j as f64 / m as f64);
                curve.map_prime(zeta).norm() / (I * zeta)
            })
            .collect();
        // b_k for k in -m/2 .. m/2, stored at index k + m/2
        let half = (m / 2) as i64;
        let coeff = |k: i64| -> C64 {
            samples
                .iter()
                .enumerate()
                .map(|(j, s)| s * C64::from_polar(1.0, -2.0 * PI * (k * j as i64) as f64 / m as f64))
                .sum::<C64>()
                / m as f64
        };
        let laurent: Vec<C64> = (-half..half).map(coeff).collect();
        let scale = laurent.iter().map(|b| b.norm()).fold(0.0, f64::max);
        let pole = curve.coeffs().len() as i64 - 1;
        let tail = laurent[..(half - pole) as usize]
            .iter()
            .map(|b| b.norm())
            .fold(0.0, f64::max);
        if tail > 1e-10 * scale {
            return Err(Error::TangentNotMeromorphic);
        }
        let principal = &laurent[(half - pole) as usize..];
        let mut rule = Self::small_circle(QuadratureKind::ArcLength, curve, max_degree, |zeta| {
            // the positive part of the series is evaluated well inside its disk
            let mut sum = C64::new(0.0, 0.0);
            let mut power = zeta.powi(-(pole as i32));
            for b in principal {
                sum += b * power;
                power *= zeta;
            }
            sum
        });
        for w in &mut rule.weights {
            *w *= 2.0 * PI * I;
        }
        Ok(rule)
    }

    /// `(1/2πi) ∮_{|ζ|=1/2} f(φ(ζ)) g(ζ) dζ` as a point rule.
    fn small_circle(
        kind: QuadratureKind,
        curve: &ConformalCurve,
        max_degree: usize,
        g: impl Fn(C64) -> C64,
    ) -> Self {
        let deg = curve.coeffs().len() - 1;
        let n = (max_degree * deg + 2 * deg + 16).next_power_of_two();
        let mut nodes = Vec::with_capacity(n);
        let mut weights = Vec::with_capacity(n);
        for j in 0..n {
            let zeta = C64::from_polar(RESIDUE_RADIUS, 2.0 * PI * j as f64 / n as f64);
            nodes.push(curve.map(zeta));
            weights.push(g(zeta) * zeta / n as f64);
        }
        Self {
            kind,
            nodes,
            weights,
        }
    }

    /// Corner rule of a polygon: `c_j = (α_j - α_{j-1}) / 2πi` with `α_j`
    /// the Schwarz slope of the edge leaving corner `a_j`.
    pub fn polygon_corner(polygon: &PolygonCurve) -> Result<Self> {
        let n = polygon.vertices().len();
        let slopes = (0..n)
            .map(|e| polygon_schwarz(polygon, e).map(|(alpha, _)| alpha))
            .collect::<Result<Vec<C64>>>()?;
        let weights = (0..n)
            .map(|j| (slopes[j] - slopes[(j + n - 1) % n]) / (2.0 * PI * I))
            .collect();
        Ok(Self {
            kind: QuadratureKind::PolygonCorner,
            nodes: polygon.vertices().to_vec(),
            weights,
        })
    }

    pub fn apply(&self, f: impl Fn(C64) -> C64) -> C64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&z, w)| w * f(z))
            .sum()
    }
}

/// `Σ res f S dz = (1/π) ∫_Ω f dA`.
pub fn classical_quadrature(curve: &AnalyticCurve, f: &Polynomial) -> Result<C64> {
    let curve = curve.as_conformal()?;
    Ok(ResidueQuadrature::classical(curve, f.degree()).apply(|z| f.eval(z)))
}

/// `-Σ res f S' dz = (1/π) ∫_Ω f' dA`.
pub fn abelian_quadrature(curve: &AnalyticCurve, f: &Polynomial) -> Result<C64> {
    let curve = curve.as_conformal()?;
    Ok(ResidueQuadrature::abelian(curve, f.degree()).apply(|z| f.eval(z)))
}

/// `2πi Σ res f dz / T = ∮ f |dz|`.
pub fn arclength_quadrature(curve: &AnalyticCurve, f: &Polynomial) -> Result<C64> {
    let curve = curve.as_conformal()?;
    Ok(ResidueQuadrature::arclength(curve, f.degree())?.apply(|z| f.eval(z)))
}

/// Corners `a_j` and weights `c_j` with `(1/π) ∫ f'' dA = Σ c_j f(a_j)`.
pub fn polygon_quadrature(curve: &AnalyticCurve) -> Result<Vec<(C64, C64)>> {
    let rule = ResidueQuadrature::polygon_corner(curve.as_polygon()?)?;
    Ok(rule.nodes.into_iter().zip(rule.weights).collect())
}

/// Boundary-integral forms of the three smooth identities, by trapezoidal
/// quadrature on a grid of the curve itself.
pub fn boundary_oracle(kind: QuadratureKind, grid: &ContourGrid, f: impl Fn(C64) -> C64) -> Result<C64> {
    let w = grid.weight();
    let terms = grid.points().iter().zip(grid.velocities());
    Ok(match kind {
        QuadratureKind::Classical => {
            terms.map(|(&z, dz)| f(z) * z.conj() * dz).sum::<C64>() * w / (2.0 * PI * I)
        }
        QuadratureKind::Abelian => {
            -terms.map(|(&z, dz)| f(z) * dz.conj()).sum::<C64>() * w / (2.0 * PI * I)
        }
        QuadratureKind::ArcLength => terms.map(|(&z, dz)| f(z) * dz.norm()).sum::<C64>() * w,
        QuadratureKind::PolygonCorner => return Err(Error::NotConformalMapCurve),
    })
}

/// `(1/2πi) ∮ f''(z) conj(z) dz = (1/π) ∫ f'' dA` over a polygon, integrated
/// exactly edge by edge from the Taylor expansion of `f''` at each vertex.
pub fn polygon_boundary_oracle(polygon: &PolygonCurve, f: &Polynomial) -> C64 {
    let mut derivatives = vec![f.derivative().derivative()];
    while derivatives.last().is_some_and(|d| d.degree() > 0) {
        let next = derivatives[derivatives.len() - 1].derivative();
        derivatives.push(next);
    }
    let n = polygon.vertices().len();
    let mut total = C64::new(0.0, 0.0);
    for e in 0..n {
        let (a, b) = (polygon.vertices()[e], polygon.vertices()[(e + 1) % n]);
        let d = b - a;
        // f''(a + t d) = Σ_k D^k f''(a) d^k / k! · t^k, times conj(a) + t conj(d)
        let mut factor = C64::new(1.0, 0.0);
        for (k, dk) in derivatives.iter().enumerate() {
            if k > 0 {
                factor *= d / k as f64;
            }
            let coef = dk.eval(a) * factor;
            total += coef * (a.conj() / (k + 1) as f64 + d.conj() / (k + 2) as f64) * d;
        }
    }
    total / (2.0 * PI * I)
}

/// Polynomial `Σ q_{jk} z^j w̄^k` in `z` and the conjugate variable.
#[derive(Debug, Clone, PartialEq)]
pub struct BivariatePoly {
    degree: usize,
    /// Row-major `(degree + 1)²` coefficients, `q_{jk}` at `j·(degree+1) + k`.
    coeffs: Vec<C64>,
}

impl BivariatePoly {
    pub fn new(degree: usize, coeffs: Vec<C64>) -> Result<Self> {
        if coeffs.len() != (degree + 1) * (degree + 1) {
            return Err(Error::BadNodeCount(coeffs.len()));
        }
        Ok(Self { degree, coeffs })
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn coeffs(&self) -> &[C64] {
        &self.coeffs
    }

    pub fn get(&self, j: usize, k: usize) -> C64 {
        self.coeffs[j * (self.degree + 1) + k]
    }

    /// `Q(z, wbar)`, with the second argument already conjugated.
    pub fn eval(&self, z: C64, wbar: C64) -> C64 {
        monomials(z, self.degree)
            .iter()
            .enumerate()
            .map(|(j, zj)| {
                zj * monomials(wbar, self.degree)
                    .iter()
                    .enumerate()
                    .map(|(k, wk)| self.get(j, k) * wk)
                    .sum::<C64>()
            })
            .sum()
    }

    /// `max |q_{jk} - conj q_{kj}|` relative to the largest coefficient.
    pub fn hermitian_defect(&self) -> f64 {
        let d = self.degree + 1;
        let scale = self.coeffs.iter().map(|q| q.norm()).fold(0.0, f64::max);
        let mut worst: f64 = 0.0;
        for j in 0..d {
            for k in 0..d {
                worst = worst.max((self.get(j, k) - self.get(k, j).conj()).norm());
            }
        }
        if scale > 0.0 {
            worst / scale
        } else {
            worst
        }
    }
}

fn monomials(x: C64, degree: usize) -> Vec<C64> {
    let mut out = vec![C64::new(1.0, 0.0); degree + 1];
    for i in 1..=degree {
        out[i] = out[i - 1] * x;
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QdClassification {
    QuadratureDomainAtDegree(usize),
    NotQuadratureDomainAtDegree(usize),
}

/// `F(z, w) ≈ Q(z, w̄) / (P(z) conj P(w))` on exterior pairs, `P` monic.
#[derive(Debug, Clone, PartialEq)]
pub struct RationalStructure {
    pub q: BivariatePoly,
    pub p: Polynomial,
    /// Scalar divided out of the raw null vector to make `P` monic.
    pub scale: C64,
    /// `‖F P P̄ - Q‖ / ‖F P P̄‖` over the samples.
    pub residual: f64,
}

impl RationalStructure {
    pub fn classification(&self) -> QdClassification {
        let d = self.q.degree();
        if self.residual < QD_RESIDUAL_THRESHOLD {
            QdClassification::QuadratureDomainAtDegree(d)
        } else {
            QdClassification::NotQuadratureDomainAtDegree(d)
        }
    }
}

/// Well-separated exterior pairs on two circles about the centroid of the
/// grid nodes.
pub fn exterior_sample_pairs(grid: &ContourGrid, count: usize) -> Vec<(C64, C64)> {
    let n = grid.n() as f64;
    let center = grid.points().iter().sum::<C64>() / n;
    let reach = grid.points().iter().map(|p| (p - center).norm()).fold(0.0, f64::max);
    let golden = 0.5 * (libm::sqrt(5.0) - 1.0);
    (0..count)
        .map(|i| {
            let (rz, rw) = if i % 2 == 0 { (1.4, 2.1) } else { (1.9, 1.5) };
            let z = center + C64::from_polar(rz * reach, 2.0 * PI * i as f64 / count as f64);
            let w = center + C64::from_polar(rw * reach, 2.0 * PI * golden * i as f64);
            (z, w)
        })
        .collect()
}

/// Fits `F(z, w) P(z) conj P(w) = Q(z, w̄)` by a homogeneous least-squares
/// problem in which the product `P(z) conj P(w)` is relaxed to a general
/// polynomial `D(z, w̄)`; `P` is then read off the dominant column of `D`.
pub fn fit_rational_structure(
    grid: &ContourGrid,
    deg_q: usize,
    deg_p: usize,
    samples: &[(C64, C64)],
) -> Result<RationalStructure> {
    let (nd, nq) = ((deg_p + 1) * (deg_p + 1), (deg_q + 1) * (deg_q + 1));
    let cols = nd + nq;
    if samples.len() < cols {
        return Err(Error::RankDeficient);
    }
    let sigma = samples
        .iter()
        .map(|(z, w)| z.norm().max(w.norm()))
        .fold(0.0, f64::max)
        .max(f64::MIN_POSITIVE);
    let values = samples
        .iter()
        .map(|&(z, w)| {
            let v = double_cauchy(grid, z, w)?;
            if v.quadrant.z != Side::Exterior || v.quadrant.w != Side::Exterior {
                return Err(Error::WrongQuadrant);
            }
            Ok(v.e)
        })
        .collect::<Result<Vec<C64>>>()?;
    let mut entries = Vec::with_capacity(samples.len() * cols);
    for (&(z, w), &f) in samples.iter().zip(&values) {
        let (zs, ws) = (monomials(z / sigma, deg_q.max(deg_p)), monomials(w.conj() / sigma, deg_q.max(deg_p)));
        let start = entries.len();
        for j in 0..=deg_p {
            for k in 0..=deg_p {
                entries.push(f * zs[j] * ws[k]);
            }
        }
        for j in 0..=deg_q {
            for k in 0..=deg_q {
                entries.push(-zs[j] * ws[k]);
            }
        }
        let norm = libm::sqrt(entries[start..].iter().map(|e| e.norm_sqr()).sum::<f64>());
        if norm > 0.0 {
            for e in &mut entries[start..] {
                *e /= norm;
            }
        }
    }
    let nv = null_vector(samples.len(), cols, &entries)?;
    let sv = &nv.singular_values;
    if sv.len() < 2 || !(sv[sv.len() - 2] > 1e-9 * sv[0]) {
        return Err(Error::RankDeficient);
    }
    let unscale = |x: C64, power: usize| x / libm::pow(sigma, power as f64);
    let d: Vec<C64> = (0..nd)
        .map(|i| unscale(nv.vector[i], i / (deg_p + 1) + i % (deg_p + 1)))
        .collect();
    let q: Vec<C64> = (0..nq)
        .map(|i| unscale(nv.vector[nd + i], i / (deg_q + 1) + i % (deg_q + 1)))
        .collect();

    // d_{jk} ≈ s · p_j conj(p_k): the dominant column is parallel to p
    let column_norm = |k: usize| (0..=deg_p).map(|j| d[j * (deg_p + 1) + k].norm_sqr()).sum::<f64>();
    let best = (0..=deg_p)
        .max_by(|&a, &b| column_norm(a).total_cmp(&column_norm(b)))
        .ok_or(Error::RankDeficient)?;
    let mut p: Vec<C64> = (0..=deg_p).map(|j| d[j * (deg_p + 1) + best]).collect();
    let p_scale = p.iter().map(|c| c.norm()).fold(0.0, f64::max);
    let lead = p
        .iter()
        .rev()
        .find(|c| c.norm() > 1e-8 * p_scale)
        .copied()
        .ok_or(Error::RankDeficient)?;
    for c in &mut p {
        *c /= lead;
    }
    let outer: Vec<C64> = (0..nd)
        .map(|i| p[i / (deg_p + 1)] * p[i % (deg_p + 1)].conj())
        .collect();
    let scale = outer.iter().zip(&d).map(|(o, d)| o.conj() * d).sum::<C64>()
        / outer.iter().map(|o| o.norm_sqr()).sum::<f64>();
    let q = BivariatePoly::new(deg_q, q.into_iter().map(|c| c / scale).collect())?;
    let p = Polynomial::new(p);

    let (mut num, mut den) = (0.0, 0.0);
    for (&(z, w), &f) in samples.iter().zip(&values) {
        let lhs = f * p.eval(z) * p.eval(w).conj();
        num += (lhs - q.eval(z, w.conj())).norm_sqr();
        den += lhs.norm_sqr();
    }
    let residual = if den > 0.0 { libm::sqrt(num / den) } else { f64::INFINITY };
    Ok(RationalStructure {
        q,
        p,
        scale,
        residual,
    })
}

/// `max_j |Q(z_j, conj z_j)|` on the grid, relative to the top coefficient
/// `|q_{dd}|` (or to the largest coefficient when that one vanishes).
pub fn verify_algebraic_boundary(q: &BivariatePoly, grid: &ContourGrid) -> f64 {
    let d = q.degree();
    let top = q.get(d, d).norm();
    let largest = q.coeffs().iter().map(|c| c.norm()).fold(0.0, f64::max);
    let norm = if top > 1e-12 * largest { top } else { largest };
    let worst = grid
        .points()
        .iter()
        .map(|&z| q.eval(z, z.conj()).norm())
        .fold(0.0, f64::max);
    if norm > 0.0 {
        worst / norm
    } else {
        worst
    }
}
