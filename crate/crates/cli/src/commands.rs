//! One function per verb. Each returns the text to print and the exit code;
//! failures that abort the verb come back as [`CliError`].

use std::path::Path;

use rayon::prelude::*;
use schwarz_core::bundles::{
    canonical_section, chern_class, evaluate_section, transition_test_points, verify_transition, LineBundle,
    SectionPair,
};
use schwarz_core::curve::adaptive_refine_to;
use schwarz_core::quaddom::{
    abelian_quadrature, arclength_quadrature, boundary_oracle, classical_quadrature, exterior_sample_pairs,
    fit_rational_structure, polygon_boundary_oracle, polygon_quadrature, verify_algebraic_boundary,
    QdClassification, QuadratureKind,
};
use schwarz_core::transforms::{cauchy_transform, double_cauchy, harmonic_moments, side, Quadrant, Side};
use schwarz_core::{AnalyticCurve, ConformalCurve, ContourGrid, Error, Location, Polynomial, C64};
use serde_json::{json, Value};

use crate::args::{BundleChoice, Format, QuadKind, Quantity, RunConfig};
use crate::error::{exit, CliError};
use crate::input::CurveFile;
use crate::output::{complex, fmt_real, optional_complex, real, to_pretty};

pub struct Output {
    pub text: String,
    pub code: u8,
}

impl Output {
    fn json(v: Value, code: u8) -> Self {
        Self {
            text: to_pretty(&v),
            code,
        }
    }
}

fn conformal(curve: &AnalyticCurve) -> Result<&ConformalCurve, CliError> {
    Ok(curve.as_conformal()?)
}

/// Smallest doubling of the starting grid that keeps every point out of the
/// exclusion band.
fn grid_clear_of(curve: &ConformalCurve, cfg: &RunConfig, points: &[C64]) -> Result<ContourGrid, CliError> {
    let mut n = cfg.n;
    loop {
        let grid = curve.sample(n)?;
        if points.iter().all(|&p| grid.locate(p) != Location::NearBoundary) {
            return Ok(grid);
        }
        if cfg.pinned || n * 2 > cfg.max_n {
            return Err(Error::NearBoundary.into());
        }
        n *= 2;
    }
}

/// The pinned grid, or the first converged grid from `start` upward.
fn refine(
    curve: &ConformalCurve,
    cfg: &RunConfig,
    start: ContourGrid,
    functional: impl FnMut(&ContourGrid) -> schwarz_core::Result<C64>,
) -> Result<ContourGrid, CliError> {
    if cfg.pinned {
        return Ok(start);
    }
    Ok(adaptive_refine_to(curve, start.n(), cfg.max_n, cfg.tol, functional)?)
}

pub fn validate(path: &Path) -> Result<Output, CliError> {
    let file = CurveFile::load(path)?;
    let curve = match file.build() {
        Ok(c) => c,
        Err(e) if e.exit_code() == exit::CHECK_FAILED => {
            return Ok(Output::json(json!({ "valid": false, "reason": e.to_string() }), exit::CHECK_FAILED));
        }
        Err(e) => return Err(e),
    };
    let report = match &curve {
        AnalyticCurve::Conformal(c) => json!({
            "valid": true,
            "kind": "conformal",
            "degree": c.coeffs().len() - 1,
            "annulus": [real(c.rho()), real(1.0 / c.rho())],
            "center": complex(c.center()),
            "area_over_pi": real(c.area_over_pi()),
        }),
        AnalyticCurve::Polygon(p) => json!({
            "valid": true,
            "kind": "polygon",
            "vertices": p.vertices().len(),
            "area_over_pi": real(p.area() / std::f64::consts::PI),
        }),
    };
    Ok(Output::json(report, exit::OK))
}

fn piece(quadrant: Quadrant, z: C64, w: C64, e: C64) -> (&'static str, C64) {
    match (quadrant.z, quadrant.w) {
        (Side::Exterior, Side::Exterior) => ("F", e),
        (Side::Interior, Side::Exterior) => ("G", e / (z.conj() - w.conj())),
        (Side::Exterior, Side::Interior) => ("G*", -e / (z - w)),
        (Side::Interior, Side::Interior) => ("H", e / (z - w).norm_sqr()),
    }
}

pub fn transform(path: &Path, cfg: &RunConfig, z: C64, w: Option<C64>) -> Result<Output, CliError> {
    let curve = CurveFile::load(path)?.build()?;
    let curve = conformal(&curve)?;
    let points: Vec<C64> = std::iter::once(z).chain(w).collect();
    let start = grid_clear_of(curve, cfg, &points)?;
    let report = match w {
        None => {
            let grid = refine(curve, cfg, start, |g| cauchy_transform(g, z))?;
            json!({
                "n": grid.n(),
                "z": complex(z),
                "side": side(&grid, z)?.tag(),
                "cauchy": complex(cauchy_transform(&grid, z)?),
            })
        }
        Some(w) => {
            let grid = refine(curve, cfg, start, |g| double_cauchy(g, z, w).map(|v| v.c))?;
            let v = double_cauchy(&grid, z, w)?;
            let (name, value) = piece(v.quadrant, z, w, v.e);
            json!({
                "n": grid.n(),
                "z": complex(z),
                "w": complex(w),
                "quadrant": v.quadrant.tag(),
                "c": complex(v.c),
                "e": complex(v.e),
                "piece": { "name": name, "value": complex(value) },
            })
        }
    };
    Ok(Output::json(report, exit::OK))
}

fn moment_table(curve: &ConformalCurve, cfg: &RunConfig, k_min: i32, k_max: i32) -> Result<(usize, Vec<(i32, C64)>), CliError> {
    if k_min > k_max {
        return Err(CliError::Parse(format!("empty moment range {k_min}..{k_max}")));
    }
    let start = curve.sample(cfg.n)?;
    let grid = refine(curve, cfg, start, |g| {
        Ok(harmonic_moments(g, k_min, k_max)?.iter().map(|(_, m)| m).sum())
    })?;
    Ok((grid.n(), harmonic_moments(&grid, k_min, k_max)?.iter().collect()))
}

fn moments_csv(table: &[(i32, C64)]) -> String {
    let mut out = String::from("k,re,im\n");
    for (k, m) in table {
        out.push_str(&format!("{k},{},{}\n", fmt_real(m.re), fmt_real(m.im)));
    }
    out
}

pub fn moments(path: &Path, cfg: &RunConfig, k_min: i32, k_max: i32) -> Result<Output, CliError> {
    let curve = CurveFile::load(path)?.build()?;
    let (n, table) = moment_table(conformal(&curve)?, cfg, k_min, k_max)?;
    Ok(match cfg.format {
        Format::Csv => Output {
            text: moments_csv(&table),
            code: exit::OK,
        },
        Format::Json => {
            let rows: Vec<Value> = table.iter().map(|(k, m)| json!({ "k": k, "value": complex(*m) })).collect();
            Output::json(json!({ "n": n, "moments": rows }), exit::OK)
        }
    })
}

fn make_bundle<'a>(
    curve: &'a ConformalCurve,
    choice: BundleChoice,
    w: Option<C64>,
    m: Option<i32>,
) -> Result<LineBundle<'a>, CliError> {
    Ok(match choice {
        BundleChoice::ExpSchwarz => LineBundle::exp_schwarz(curve),
        BundleChoice::SchwarzPole => {
            let w = w.ok_or_else(|| CliError::Parse("schwarz-pole needs --w".into()))?;
            LineBundle::schwarz_pole(curve, w)
        }
        BundleChoice::TangentPower => {
            let m = m.ok_or_else(|| CliError::Parse("tangent-power needs --m".into()))?;
            LineBundle::tangent_power(curve, m)
        }
    })
}

/// A point far outside the curve where `f₂` is compared across refinements.
fn far_point(grid: &ContourGrid) -> C64 {
    let center = grid.points().iter().sum::<C64>() / grid.n() as f64;
    let reach = grid.points().iter().map(|p| (p - center).norm()).fold(0.0, f64::max);
    center + C64::new(3.0 * reach, 0.0)
}

fn section_dump(section: &SectionPair) -> Value {
    let density: Vec<Value> = section
        .density()
        .iter()
        .enumerate()
        .map(|(j, d)| json!({ "t": real(section.grid().param(j)), "re": real(d.re), "im": real(d.im) }))
        .collect();
    json!({
        "chern": section.chern(),
        "a": optional_complex(section.adjustment()),
        "normalization": section.normalization().tag(),
        "n": section.grid().n(),
        "density": density,
    })
}

pub struct SectionRequest<'p> {
    pub choice: BundleChoice,
    pub w: Option<C64>,
    pub m: Option<i32>,
    pub a: Option<C64>,
    pub verify: bool,
    pub dump: Option<&'p Path>,
}

pub fn section(path: &Path, cfg: &RunConfig, req: SectionRequest<'_>) -> Result<Output, CliError> {
    let curve = CurveFile::load(path)?.build()?;
    let curve = conformal(&curve)?;
    let bundle = make_bundle(curve, req.choice, req.w, req.m)?;

    let mut n = cfg.n;
    let chern = loop {
        match chern_class(&bundle, &curve.sample(n)?) {
            Ok(k) => break k,
            Err(Error::BranchUnresolved | Error::NotAnInteger(_)) if !cfg.pinned && n * 2 <= cfg.max_n => n *= 2,
            Err(e) => return Err(e.into()),
        }
    };
    if chern.class < 0 {
        let report = json!({
            "n": n,
            "chern": chern.class,
            "chern_raw": real(chern.raw),
            "section": Value::Null,
            "note": "negative Chern class: no holomorphic sections",
        });
        return Ok(Output::json(report, exit::OK));
    }

    if req.verify {
        while transition_test_points(curve, &curve.sample(n)?, 32).is_err() {
            if cfg.pinned || n * 2 > cfg.max_n {
                return Err(Error::NearBoundary.into());
            }
            n *= 2;
        }
    }
    let start = curve.sample(n)?;
    let far = far_point(&start);
    let grid = refine(curve, cfg, start, |g| canonical_section(&bundle, g, req.a)?.f2(far))?;
    let section = canonical_section(&bundle, &grid, req.a)?;

    let residual = if req.verify {
        let points = transition_test_points(curve, &grid, 32)?;
        Some(verify_transition(&section, &bundle, &points)?)
    } else {
        None
    };
    if let Some(dump) = req.dump {
        std::fs::write(dump, to_pretty(&section_dump(&section)))
            .map_err(|e| CliError::Parse(format!("cannot write {}: {e}", dump.display())))?;
    }
    let code = match residual {
        Some(r) if !(r < cfg.tol) => exit::CHECK_FAILED,
        _ => exit::OK,
    };
    let report = json!({
        "n": grid.n(),
        "chern": chern.class,
        "chern_raw": real(chern.raw),
        "normalization": section.normalization().tag(),
        "a": optional_complex(section.adjustment()),
        "normalization_defect": real(section.normalization_defect()?),
        "residual": residual.map(real).unwrap_or(Value::Null),
    });
    Ok(Output::json(report, code))
}

pub fn quadrature(path: &Path, cfg: &RunConfig, kind: QuadKind, f: &Polynomial) -> Result<Output, CliError> {
    let curve = CurveFile::load(path)?.build()?;
    let eval = |z: C64| f.eval(z);
    let mut report = json!({ "f": f.coeffs().iter().map(|c| complex(*c)).collect::<Vec<_>>() });
    let (value, oracle) = match kind {
        QuadKind::Corner => {
            let rule = polygon_quadrature(&curve)?;
            let value = rule.iter().map(|&(a, w)| w * eval(a)).sum::<C64>();
            report["kind"] = json!(QuadratureKind::PolygonCorner.tag());
            report["nodes"] = json!(rule.iter().map(|(a, _)| complex(*a)).collect::<Vec<_>>());
            report["weights"] = json!(rule.iter().map(|(_, w)| complex(*w)).collect::<Vec<_>>());
            (value, polygon_boundary_oracle(curve.as_polygon()?, f))
        }
        smooth => {
            let (qkind, value) = match smooth {
                QuadKind::Classical => (QuadratureKind::Classical, classical_quadrature(&curve, f)?),
                QuadKind::Abelian => (QuadratureKind::Abelian, abelian_quadrature(&curve, f)?),
                _ => (QuadratureKind::ArcLength, arclength_quadrature(&curve, f)?),
            };
            let c = conformal(&curve)?;
            let grid = refine(c, cfg, c.sample(cfg.n)?, |g| boundary_oracle(qkind, g, eval))?;
            report["kind"] = json!(qkind.tag());
            report["n"] = json!(grid.n());
            (value, boundary_oracle(qkind, &grid, eval)?)
        }
    };
    let discrepancy = (value - oracle).norm();
    report["value"] = complex(value);
    report["oracle"] = complex(oracle);
    report["discrepancy"] = real(discrepancy);
    let code = if discrepancy < cfg.tol { exit::OK } else { exit::CHECK_FAILED };
    Ok(Output::json(report, code))
}

pub fn rational_fit(
    path: &Path,
    cfg: &RunConfig,
    deg_q: usize,
    deg_p: usize,
    samples: Option<usize>,
) -> Result<Output, CliError> {
    let curve = CurveFile::load(path)?.build()?;
    let grid = conformal(&curve)?.sample(cfg.n)?;
    let unknowns = (deg_q + 1).pow(2) + (deg_p + 1).pow(2);
    let pairs = exterior_sample_pairs(&grid, samples.unwrap_or(3 * unknowns));
    let fit = fit_rational_structure(&grid, deg_q, deg_p, &pairs)?;
    let q: Vec<Value> = (0..=deg_q)
        .map(|j| Value::Array((0..=deg_q).map(|k| complex(fit.q.get(j, k))).collect()))
        .collect();
    let classification = match fit.classification() {
        QdClassification::QuadratureDomainAtDegree(_) => "quadrature-domain-at-degree",
        QdClassification::NotQuadratureDomainAtDegree(_) => "not-quadrature-domain-at-degree",
    };
    let report = json!({
        "n": grid.n(),
        "deg_q": deg_q,
        "deg_p": deg_p,
        "samples": pairs.len(),
        "q": q,
        "p": fit.p.coeffs().iter().map(|c| complex(*c)).collect::<Vec<_>>(),
        "scale": complex(fit.scale),
        "residual": real(fit.residual),
        "hermitian_defect": real(fit.q.hermitian_defect()),
        "boundary_defect": real(verify_algebraic_boundary(&fit.q, &grid)),
        "classification": classification,
    });
    Ok(Output::json(report, exit::OK))
}

pub struct PlotRequest {
    pub quantity: Quantity,
    pub re: (f64, f64),
    pub im: (f64, f64),
    pub nx: usize,
    pub ny: usize,
    pub k_range: (i32, i32),
    pub bundle: Option<BundleChoice>,
    pub w: Option<C64>,
    pub m: Option<i32>,
    pub a: Option<C64>,
}

fn lattice(req: &PlotRequest) -> Vec<C64> {
    let step = |(lo, hi): (f64, f64), n: usize, i: usize| {
        if n <= 1 {
            lo
        } else {
            lo + (hi - lo) * i as f64 / (n - 1) as f64
        }
    };
    (0..req.ny)
        .flat_map(|j| (0..req.nx).map(move |i| (i, j)))
        .map(|(i, j)| C64::new(step(req.re, req.nx, i), step(req.im, req.ny, j)))
        .collect()
}

pub fn plotdata(path: &Path, cfg: &RunConfig, req: &PlotRequest) -> Result<Output, CliError> {
    let curve = CurveFile::load(path)?.build()?;
    let curve = conformal(&curve)?;
    if req.quantity == Quantity::Moments {
        let (_, table) = moment_table(curve, cfg, req.k_range.0, req.k_range.1)?;
        return Ok(Output {
            text: moments_csv(&table),
            code: exit::OK,
        });
    }
    let grid = curve.sample(cfg.n)?;
    let cells = lattice(req);
    let rows: Vec<String> = match req.quantity {
        Quantity::ExpTransform => {
            let w = req.w.ok_or_else(|| CliError::Parse("exp-transform plots need --w".into()))?;
            side(&grid, w)?;
            let header = "re_z,im_z,re_w,im_w,quadrant,re_c,im_c,re_e,im_e,abs_e".to_string();
            std::iter::once(header)
                .chain(cells.par_iter().map(|&z| {
                    let lead = format!("{},{},{},{}", fmt_real(z.re), fmt_real(z.im), fmt_real(w.re), fmt_real(w.im));
                    match double_cauchy(&grid, z, w) {
                        Ok(v) => format!(
                            "{lead},{},{},{},{},{},{}",
                            v.quadrant.tag(),
                            fmt_real(v.c.re),
                            fmt_real(v.c.im),
                            fmt_real(v.e.re),
                            fmt_real(v.e.im),
                            fmt_real(v.e.norm())
                        ),
                        Err(Error::NearBoundary) => format!("{lead},band,,,,,"),
                        Err(_) => format!("{lead},skipped,,,,,"),
                    }
                }).collect::<Vec<_>>())
                .collect()
        }
        Quantity::Section => {
            let choice = req.bundle.ok_or_else(|| CliError::Parse("section plots need --bundle".into()))?;
            let bundle = make_bundle(curve, choice, req.w, req.m)?;
            let section = canonical_section(&bundle, &grid, req.a)?;
            let header = "re_z,im_z,side,re_f,im_f".to_string();
            std::iter::once(header)
                .chain(cells.par_iter().map(|&z| {
                    let lead = format!("{},{}", fmt_real(z.re), fmt_real(z.im));
                    let tag = match grid.locate(z) {
                        Location::Interior => "int",
                        Location::Exterior => "ext",
                        Location::NearBoundary => return format!("{lead},band,,"),
                    };
                    match evaluate_section(&section, z) {
                        Ok(f) => format!("{lead},{tag},{},{}", fmt_real(f.re), fmt_real(f.im)),
                        Err(_) => format!("{lead},skipped,,"),
                    }
                }).collect::<Vec<_>>())
                .collect()
        }
        Quantity::Moments => unreachable!("handled above"),
    };
    let mut text = rows.join("\n");
    text.push('\n');
    Ok(Output { text, code: exit::OK })
}
