use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use log::{info, warn};
use serde::Serialize;
use wavefront_core::charroots::{classify_with, psi_hump, HALF_LN2, INV_E};
use wavefront_core::pipeline::{solve_with, LowerKind, UpperInfo};
use wavefront_core::prelude::*;

use crate::format::{fmt17, to_json};
use crate::profile_io::{save, stdout_json};
use crate::{CliError, EXIT_NOT_CONVERGED, EXIT_NOT_EXISTS, EXIT_OK, EXIT_THRESHOLDS};

/// `--c`: a number, or `critical` for `c*(h)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SpeedArg {
    Value(f64),
    Critical,
}

impl FromStr for SpeedArg {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s.eq_ignore_ascii_case("critical") {
            return Ok(SpeedArg::Critical);
        }
        s.parse::<f64>()
            .map(SpeedArg::Value)
            .map_err(|_| format!("expected a number or `critical`, got `{s}`"))
    }
}

/// Turns `(h, --c)` into checked parameters; `critical` needs a finite
/// `c*(h)`.
pub fn resolve_params(curves: &CriticalCurves, h: f64, speed: SpeedArg) -> Result<ModelParams, CliError> {
    let c = match speed {
        SpeedArg::Value(c) => c,
        SpeedArg::Critical => {
            // validates h before looking at the curve
            ModelParams::new(h, 2.0)?;
            if h > curves.h1 {
                return Err(Error::NotExists { h, c: f64::NAN }.into());
            }
            curves
                .c_star(h)
                .ok_or_else(|| CliError::Usage(format!("c*(h) is unbounded for h = {h} <= 1/e; pass a numeric --c")))?
        }
    };
    Ok(ModelParams::new(h, c)?)
}

pub fn region(curves: &CriticalCurves, h: f64, speed: SpeedArg, band: f64) -> Result<u8, CliError> {
    let params = match resolve_params(curves, h, speed) {
        Err(CliError::Core(Error::NotExists { .. })) => {
            // `critical` beyond h₁: still report the classification at c = 2
            ModelParams::new(h, 2.0)?
        }
        other => other?,
    };
    let report = classify_with(curves, &params, band);
    stdout_json(&report)?;
    Ok(if report.exists() { EXIT_OK } else { EXIT_NOT_EXISTS })
}

#[derive(Debug, Serialize)]
pub struct RootsOutput {
    pub params: ModelParams,
    pub roots: RootData,
    /// Location and height of the hump of `ψ` on `(-∞, 0)`.
    pub hump: Option<(f64, f64)>,
}

pub fn roots(curves: &CriticalCurves, h: f64, speed: SpeedArg) -> Result<u8, CliError> {
    let critical = speed == SpeedArg::Critical;
    let params = resolve_params(curves, h, speed)?;
    let roots = if critical {
        RootData::compute_double(&params)?
    } else {
        RootData::compute(&params)?
    };
    let hump = psi_hump(&params);
    stdout_json(&RootsOutput { params, roots, hump })?;
    Ok(EXIT_OK)
}

/// One row of the critical-curve table; `None` cells are outside the
/// curve's domain.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurveRow {
    pub h: f64,
    pub eps_star: Option<f64>,
    pub c_star: Option<f64>,
    pub eps_sharp: Option<f64>,
    pub c_sharp: Option<f64>,
}

/// `points` evenly spaced delays on `[0, h_max]` plus the curve breakpoints
/// `½ ln 2`, `1/e`, `h₀`, `h₁` (when inside the range).
pub fn curve_rows(curves: &CriticalCurves, points: usize, h_max: f64) -> Result<Vec<CurveRow>, CliError> {
    if !(h_max.is_finite() && h_max > 0.0) || points < 2 {
        return Err(CliError::Usage("curves needs --h-max > 0 and --points >= 2".into()));
    }
    let mut hs: Vec<f64> = (0..points).map(|i| h_max * i as f64 / (points - 1) as f64).collect();
    hs.extend(
        [HALF_LN2, INV_E, curves.h0, curves.h1]
            .into_iter()
            .filter(|&h| h <= h_max),
    );
    hs.sort_by(f64::total_cmp);
    hs.dedup();
    Ok(hs
        .into_iter()
        .map(|h| {
            let eps_star = curves.eps_star(h).ok();
            // unbounded below 1/e, no fronts above h₁
            let c_star = if h <= INV_E {
                Some(f64::INFINITY)
            } else {
                eps_star.map(|e| 1.0 / e.sqrt())
            };
            CurveRow {
                h,
                eps_star,
                c_star,
                eps_sharp: curves.eps_sharp(h).ok(),
                c_sharp: Some(curves.c_sharp(h)),
            }
        })
        .collect())
}

pub fn write_curves<W: Write>(w: W, curves: &CriticalCurves, rows: &[CurveRow]) -> Result<(), CliError> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(["h", "eps_star", "c_star", "eps_sharp", "c_sharp", "h0", "h1"])?;
    let cell = |x: Option<f64>| x.map(fmt17).unwrap_or_default();
    for r in rows {
        out.write_record([
            fmt17(r.h),
            cell(r.eps_star),
            cell(r.c_star),
            cell(r.eps_sharp),
            cell(r.c_sharp),
            fmt17(curves.h0),
            fmt17(curves.h1),
        ])?;
    }
    out.flush()?;
    Ok(())
}

#[derive(Debug, Clone)]
pub struct SolveRequest {
    pub h: f64,
    pub c: SpeedArg,
    pub options: SolveOptions,
    pub out_dir: PathBuf,
}

#[derive(Debug, Serialize)]
pub struct FitsOutput<'a> {
    pub plus: Option<&'a ExpansionFit>,
    pub minus: Option<&'a ExpansionFit>,
    pub errors: &'a [String],
}

#[derive(Debug, Serialize)]
pub struct SolveReport<'a> {
    pub h: f64,
    pub c: f64,
    pub epsilon: f64,
    pub regime: &'a RegimeReport,
    pub roots: &'a RootData,
    pub operator: &'a OperatorConfig,
    pub lower_kind: LowerKind,
    pub upper: Option<UpperInfo>,
    pub upper_note: Option<&'a str>,
    pub half_crossing: Option<f64>,
    pub iteration: &'a IterationReport,
    pub fits: FitsOutput<'a>,
    pub exit_code: u8,
}

/// Exit code of a finished solve.
pub fn outcome_code(out: &SolveOutcome) -> u8 {
    if out.report.converged {
        EXIT_OK
    } else {
        EXIT_NOT_CONVERGED
    }
}

/// Writes `profile.{csv,json}`, `report.json`, `fit_plus.json`,
/// `fit_minus.json` and `iterate_<j>.{csv,json}` into `dir`.
pub fn write_solve_outputs(dir: &Path, params: &ModelParams, out: &SolveOutcome) -> Result<(), CliError> {
    fs::create_dir_all(dir)?;
    save(dir, "profile", &out.profile, params.h, params.c)?;
    for (j, it) in out.iterates.iter().enumerate() {
        save(dir, &format!("iterate_{j}"), it, params.h, params.c)?;
    }
    let report = SolveReport {
        h: params.h,
        c: params.c,
        epsilon: params.epsilon,
        regime: &out.regime,
        roots: &out.roots,
        operator: &out.config,
        lower_kind: out.lower_kind,
        upper: out.upper,
        upper_note: out.upper_note.as_deref(),
        half_crossing: wavefront_core::operators::half_crossing(&out.profile).ok(),
        iteration: &out.report,
        fits: FitsOutput {
            plus: out.plus_fit.as_ref(),
            minus: out.minus_fit.as_ref(),
            errors: &out.fit_errors,
        },
        exit_code: outcome_code(out),
    };
    fs::write(dir.join("report.json"), to_json(&report)?)?;
    fs::write(dir.join("fit_plus.json"), to_json(&out.plus_fit)?)?;
    fs::write(dir.join("fit_minus.json"), to_json(&out.minus_fit)?)?;
    Ok(())
}

pub fn solve(curves: &CriticalCurves, req: &SolveRequest) -> Result<u8, CliError> {
    let params = resolve_params(curves, req.h, req.c)?;
    check_options(&req.options)?;
    info!(
        "solving h = {}, c = {}, epsilon = {}",
        params.h, params.c, params.epsilon
    );
    let out = solve_with(curves, &params, &req.options)?;
    info!(
        "{} iterations, converged = {}, ode residual {:e}",
        out.report.iterations, out.report.converged, out.report.final_residual_ode
    );
    for e in &out.fit_errors {
        warn!("{e}");
    }
    if let Some(note) = &out.upper_note {
        warn!("iterating without an upper bound: {note}");
    }
    write_solve_outputs(&req.out_dir, &params, &out)?;

    #[derive(Serialize)]
    struct Summary<'a> {
        h: f64,
        c: f64,
        epsilon: f64,
        iterations: usize,
        converged: bool,
        final_residual_ode: f64,
        out_dir: &'a Path,
    }
    stdout_json(&Summary {
        h: params.h,
        c: params.c,
        epsilon: params.epsilon,
        iterations: out.report.iterations,
        converged: out.report.converged,
        final_residual_ode: out.report.final_residual_ode,
        out_dir: &req.out_dir,
    })?;
    Ok(outcome_code(&out))
}

/// Rejects option values the library would only trip over later.
pub fn check_options(o: &SolveOptions) -> Result<(), CliError> {
    if !(o.delta.is_finite() && o.delta > 0.0 && o.delta <= 0.5) {
        return Err(CliError::Usage(format!(
            "--delta must lie in (0, 0.5], got {}",
            o.delta
        )));
    }
    if !(o.iteration.tol.is_finite() && o.iteration.tol > 0.0) {
        return Err(CliError::Usage(format!(
            "--tol must be positive, got {}",
            o.iteration.tol
        )));
    }
    if o.iteration.max_iter == 0 {
        return Err(CliError::Usage("--max-iter must be at least 1".into()));
    }
    Ok(())
}

pub fn validate(delta: f64) -> Result<u8, CliError> {
    if !(delta.is_finite() && delta > 0.0 && delta <= 0.5) {
        return Err(CliError::Usage(format!("--delta must lie in (0, 0.5], got {delta}")));
    }
    let v = validate_az(delta)?;
    info!("sup error {:e}, {} iterations", v.sup_error, v.iterations);
    stdout_json(&v)?;
    Ok(if v.passed { EXIT_OK } else { EXIT_THRESHOLDS })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn speed_argument() {
        assert_eq!("critical".parse::<SpeedArg>(), Ok(SpeedArg::Critical));
        assert_eq!("2.5".parse::<SpeedArg>(), Ok(SpeedArg::Value(2.5)));
        assert!("fast".parse::<SpeedArg>().is_err());
    }

    #[test]
    fn critical_keyword_resolves() {
        let curves = CriticalCurves::new().unwrap();
        let p = resolve_params(&curves, curves.h1, SpeedArg::Critical).unwrap();
        assert!((p.c - 2.0).abs() < 1e-6);
        assert!(matches!(
            resolve_params(&curves, 0.2, SpeedArg::Critical),
            Err(CliError::Usage(_))
        ));
        assert!(matches!(
            resolve_params(&curves, 0.7, SpeedArg::Critical),
            Err(CliError::Core(Error::NotExists { .. }))
        ));
        assert_eq!(
            resolve_params(&curves, -1.0, SpeedArg::Critical)
                .unwrap_err()
                .exit_code(),
            2
        );
    }
}
