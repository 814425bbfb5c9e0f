//! Independent oracles shared by the integration tests: two-dimensional area
//! integrals over the domain, computed without any contour machinery.

#![allow(dead_code)]

use std::f64::consts::PI;

use gauss_quad::legendre::GaussLegendre;
use schwarz_core::{AnalyticCurve, ConformalCurve, C64};

pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

pub fn unit_disk() -> ConformalCurve {
    AnalyticCurve::circle(c(0.0, 0.0), 1.0).unwrap().as_conformal().unwrap().clone()
}

/// `φ(ζ) = ζ + 0.3ζ²`, univalent for `|ζ| < 5/3`.
pub fn lima() -> ConformalCurve {
    ConformalCurve::new(vec![c(0.0, 0.0), c(1.0, 0.0), c(0.3, 0.0)], 0.75).unwrap()
}

pub fn unit_square() -> Vec<C64> {
    vec![c(0.0, 0.0), c(1.0, 0.0), c(1.0, 1.0), c(0.0, 1.0)]
}

fn legendre_on_unit_interval(n: usize) -> Vec<(f64, f64)> {
    GaussLegendre::new(n.try_into().unwrap())
        .as_node_weight_pairs()
        .iter()
        .map(|&(x, w)| (0.5 * (x + 1.0), 0.5 * w))
        .collect()
}

/// `∫_Ω g dA` through the pullback `z = φ(ζ)`, in polar coordinates about the
/// preimage `b` of a chosen centre. The disk automorphism `u ↦ (u + b)/(1 + b̄u)`
/// puts the centre at `u = 0`, so an integrable `1/|z - center|` singularity
/// is cancelled by the polar Jacobian. `nr` Gauss-Legendre radii, `nt`
/// trapezoidal angles.
pub fn area_integral_about(curve: &ConformalCurve, b: C64, nr: usize, nt: usize, g: impl Fn(C64) -> C64) -> C64 {
    let radial = legendre_on_unit_interval(nr);
    let mut total = c(0.0, 0.0);
    for k in 0..nt {
        let theta = 2.0 * PI * k as f64 / nt as f64;
        for &(r, w) in &radial {
            let u = C64::from_polar(r, theta);
            let den = c(1.0, 0.0) + b.conj() * u;
            let zeta = (u + b) / den;
            let dzeta = (1.0 - b.norm_sqr()) / (den * den);
            let jac = (curve.map_prime(zeta) * dzeta).norm_sqr();
            total += g(curve.map(zeta)) * jac * r * w;
        }
    }
    total * (2.0 * PI / nt as f64)
}

pub fn area_integral(curve: &ConformalCurve, g: impl Fn(C64) -> C64) -> C64 {
    area_integral_about(curve, c(0.0, 0.0), 400, 400, g)
}

/// Midpoint rule on the unit square with `n × n` cells.
pub fn square_midpoint(n: usize, g: impl Fn(C64) -> C64) -> C64 {
    let h = 1.0 / n as f64;
    let mut total = c(0.0, 0.0);
    for i in 0..n {
        for j in 0..n {
            total += g(c((i as f64 + 0.5) * h, (j as f64 + 0.5) * h));
        }
    }
    total * h * h
}
