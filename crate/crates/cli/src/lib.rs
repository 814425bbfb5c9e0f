//! Command-line front end of `schwarz-core`: curve files, JSON and CSV
//! reports, and the `schwarz` binary's verbs.

pub mod args;
pub mod commands;
pub mod error;
pub mod input;
pub mod output;

use args::{Cli, Command};
use commands::{Output, PlotRequest, SectionRequest};
use error::CliError;

pub fn run(cli: &Cli) -> Result<Output, CliError> {
    let cfg = cli.config.resolve()?;
    match &cli.command {
        Command::Validate { curve } => commands::validate(curve),
        Command::Transform { curve, z, w } => commands::transform(curve, &cfg, *z, *w),
        Command::Moments { curve, k_min, k_max } => commands::moments(curve, &cfg, *k_min, *k_max),
        Command::Section {
            curve,
            bundle,
            verify,
            dump,
        } => commands::section(
            curve,
            &cfg,
            SectionRequest {
                choice: bundle.bundle,
                w: bundle.w,
                m: bundle.m,
                a: bundle.a,
                verify: *verify,
                dump: dump.as_deref(),
            },
        ),
        Command::Quadrature { curve, kind, f } => commands::quadrature(curve, &cfg, *kind, f),
        Command::RationalFit {
            curve,
            deg_q,
            deg_p,
            samples,
        } => commands::rational_fit(curve, &cfg, *deg_q, *deg_p, *samples),
        Command::Plotdata {
            curve,
            quantity,
            re,
            im,
            nx,
            ny,
            k_min,
            k_max,
            bundle,
        } => commands::plotdata(
            curve,
            &cfg,
            &PlotRequest {
                quantity: *quantity,
                re: *re,
                im: *im,
                nx: *nx,
                ny: *ny,
                k_range: (*k_min, *k_max),
                bundle: bundle.bundle,
                w: bundle.w,
                m: bundle.m,
                a: bundle.a,
            },
        ),
    }
}
