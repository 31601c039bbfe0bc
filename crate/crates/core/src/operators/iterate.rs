use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use super::apply::apply;
use super::config::OperatorConfig;
use super::residuals::fixed_point_residuals;
use crate::profiles::Profile;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IterationOptions {
    /// Stop when `sup |φ_{j+1} - φ_j| ≤ tol`.
    pub tol: f64,
    pub max_iter: usize,
    /// Keep `φ₋, 𝒦φ₋, …` up to this many profiles.
    pub emit_iterates: usize,
    /// Allowed dip of `𝒦(lower)` below `lower`.
    pub first_step_tol: f64,
    /// Allowed dip of each later iterate below its predecessor.
    pub monotone_tol: f64,
    /// Allowed excess over the upper solution.
    pub upper_tol: f64,
}

impl Default for IterationOptions {
    fn default() -> Self {
        Self {
            tol: 1e-10,
            max_iter: 5000,
            emit_iterates: 0,
            first_step_tol: 1e-10,
            monotone_tol: 1e-12,
            upper_tol: 1e-10,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IterationReport {
    pub iterations: usize,
    pub sup_increments: Vec<f64>,
    pub final_residual_fp: f64,
    pub final_residual_ode: f64,
    pub converged: bool,
    pub monotonicity_violations: usize,
}

impl IterationReport {
    pub fn last_increment(&self) -> f64 {
        self.sup_increments.last().copied().unwrap_or(f64::INFINITY)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct IterationOutcome {
    pub profile: Profile,
    pub report: IterationReport,
    pub iterates: Vec<Profile>,
}

impl IterationOutcome {
    /// `Err(NotConverged)` when the cap was hit.
    pub fn require_converged(self) -> Result<Self> {
        if self.report.converged {
            Ok(self)
        } else {
            Err(Error::NotConverged {
                iterations: self.report.iterations,
                last_increment: self.report.last_increment(),
            })
        }
    }
}

/// Monotone iteration `φ ← 𝒦φ` from `lower`.
///
/// Every iterate is checked to dominate its predecessor and, if an upper
/// solution is supplied (on the same grid), to stay below it. Hitting
/// `max_iter` is not an error here: the outcome carries `converged = false`.
///
/// Without an upper bound, a front that escapes the grid on the left
/// (every sample saturated at 1) triggers one retry on a grid extended by
/// its own length.
pub fn iterate(
    config: &OperatorConfig,
    lower: &Profile,
    upper: Option<&Profile>,
    opts: &IterationOptions,
) -> Result<IterationOutcome> {
    let partial = match run(config, lower, upper, opts) {
        Ok(p) => p,
        Err(Stop::Saturated) => {
            let grid = lower.grid.extended(lower.len(), 0);
            let widened = Profile::from_fn(grid, |t| lower.eval(t), lower.left, lower.right)?;
            run(config, &widened, None, opts).map_err(Stop::into_error)?
        }
        Err(e) => return Err(e.into_error()),
    };
    partial.finish(config)
}

enum Stop {
    Failed(Error),
    /// The whole grid saturated at 1 before convergence.
    Saturated,
}

impl Stop {
    fn into_error(self) -> Error {
        match self {
            Stop::Failed(e) => e,
            Stop::Saturated => Error::InvalidProfile("front left the grid (every sample at 1)".into()),
        }
    }
}

impl From<Error> for Stop {
    fn from(e: Error) -> Self {
        Stop::Failed(e)
    }
}

struct Partial {
    profile: Profile,
    increments: Vec<f64>,
    iterates: Vec<Profile>,
    converged: bool,
}

impl Partial {
    fn finish(self, config: &OperatorConfig) -> Result<IterationOutcome> {
        let (fp, ode) = fixed_point_residuals(config, &self.profile)?;
        Ok(IterationOutcome {
            report: IterationReport {
                iterations: self.increments.len(),
                sup_increments: self.increments,
                final_residual_fp: fp,
                final_residual_ode: ode,
                converged: self.converged,
                monotonicity_violations: 0,
            },
            profile: self.profile,
            iterates: self.iterates,
        })
    }
}

fn run(
    config: &OperatorConfig,
    lower: &Profile,
    upper: Option<&Profile>,
    opts: &IterationOptions,
) -> core::result::Result<Partial, Stop> {
    if let Some(up) = upper {
        if up.grid != lower.grid {
            return Err(Error::InvalidProfile("upper solution must share the lower's grid".into()).into());
        }
    }
    let mut cur = lower.clone();
    let mut increments = Vec::new();
    let mut iterates = Vec::new();
    if opts.emit_iterates > 0 {
        iterates.push(cur.clone());
    }
    for it in 1..=opts.max_iter {
        let next = apply(config, &cur)?;
        let mut dip: f64 = 0.0;
        let mut sup: f64 = 0.0;
        for (a, b) in cur.values.iter().zip(&next.values) {
            let d = b - a;
            dip = dip.min(d);
            sup = sup.max(d.abs());
        }
        if it == 1 {
            if dip < -opts.first_step_tol {
                return Err(Error::NotLowerSolution { worst: dip }.into());
            }
        } else if dip < -opts.monotone_tol {
            return Err(Error::MonotonicityBroken {
                iteration: it,
                worst: dip,
            }
            .into());
        }
        if let Some(up) = upper {
            let excess = next
                .values
                .iter()
                .zip(&up.values)
                .fold(f64::NEG_INFINITY, |m, (v, u)| m.max(v - u));
            if excess > opts.upper_tol {
                return Err(Error::UpperBoundBroken { iteration: it, excess }.into());
            }
        }
        increments.push(sup);
        if iterates.len() < opts.emit_iterates {
            iterates.push(next.clone());
        }
        cur = next;
        if sup <= opts.tol {
            return Ok(Partial {
                profile: cur,
                increments,
                iterates,
                converged: true,
            });
        }
        if upper.is_none() && cur.values[0] > 1.0 - 1e-13 {
            return Err(Stop::Saturated);
        }
    }
    Ok(Partial {
        profile: cur,
        increments,
        iterates,
        converged: false,
    })
}
