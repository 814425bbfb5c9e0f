//! Continuous logarithms of sampled closed loops.

use alloc::vec::Vec;
use core::f64::consts::{FRAC_PI_2, PI};

use crate::error::{Error, Result};
use crate::C64;

/// A logarithm of a closed sampled loop, continued node by node.
#[derive(Debug, Clone)]
pub struct UnwrappedLog {
    pub values: Vec<C64>,
    /// Net number of turns of the loop around the origin.
    pub winding: i64,
}

/// Continues `log(samples[j])` along the loop starting from the principal
/// branch at node 0. Adjacent phase increments must stay below π/2, otherwise
/// the branch cannot be resolved at this sampling density.
pub fn unwrap_log(samples: &[C64]) -> Result<UnwrappedLog> {
    if samples.is_empty() {
        return Ok(UnwrappedLog {
            values: Vec::new(),
            winding: 0,
        });
    }
    if samples.iter().any(|v| !(v.norm() > 0.0) || !v.re.is_finite() || !v.im.is_finite()) {
        return Err(Error::BranchUnresolved);
    }
    let mut values = Vec::with_capacity(samples.len());
    let mut phase = samples[0].arg();
    values.push(C64::new(libm::log(samples[0].norm()), phase));
    let step = |a: C64, b: C64| -> Result<f64> {
        let d = (b / a).arg();
        if d.abs() >= FRAC_PI_2 {
            Err(Error::BranchUnresolved)
        } else {
            Ok(d)
        }
    };
    for pair in samples.windows(2) {
        phase += step(pair[0], pair[1])?;
        values.push(C64::new(libm::log(pair[1].norm()), phase));
    }
    let closing = phase + step(samples[samples.len() - 1], samples[0])?;
    let turns = (closing - samples[0].arg()) / (2.0 * PI);
    Ok(UnwrappedLog {
        values,
        winding: libm::round(turns) as i64,
    })
}
