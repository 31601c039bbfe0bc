//! `--sweep h0:h1:n,c0:c1:m`: independent solves over an `(h, c)` grid,
//! run in parallel, one output directory per cell plus `summary.csv`.

use std::fs::File;
use std::path::Path;
use std::str::FromStr;

use log::{info, warn};
use rayon::prelude::*;
use wavefront_core::pipeline::solve_with;
use wavefront_core::prelude::*;

use crate::commands::{check_options, outcome_code, write_solve_outputs};
use crate::format::fmt17;
use crate::{CliError, EXIT_NOT_EXISTS, EXIT_OK};

/// `lo:hi:n`, `n` evenly spaced values including both ends.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Axis {
    pub lo: f64,
    pub hi: f64,
    pub n: usize,
}

impl Axis {
    pub fn values(&self) -> Vec<f64> {
        if self.n == 1 {
            return vec![self.lo];
        }
        (0..self.n)
            .map(|i| self.lo + (self.hi - self.lo) * i as f64 / (self.n - 1) as f64)
            .collect()
    }
}

impl FromStr for Axis {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parts: Vec<&str> = s.split(':').collect();
        let [lo, hi, n] = parts[..] else {
            return Err(format!("expected lo:hi:n, got `{s}`"));
        };
        let num = |x: &str| x.trim().parse::<f64>().map_err(|e| format!("`{x}`: {e}"));
        let (lo, hi) = (num(lo)?, num(hi)?);
        let n: usize = n.trim().parse().map_err(|e| format!("`{n}`: {e}"))?;
        if n == 0 || !lo.is_finite() || !hi.is_finite() || hi < lo {
            return Err(format!("bad axis `{s}`: need lo <= hi and n >= 1"));
        }
        Ok(Axis { lo, hi, n })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepSpec {
    pub h: Axis,
    pub c: Axis,
}

impl FromStr for SweepSpec {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (h, c) = s
            .split_once(',')
            .ok_or_else(|| format!("expected h0:h1:n,c0:c1:m, got `{s}`"))?;
        Ok(SweepSpec {
            h: h.parse()?,
            c: c.parse()?,
        })
    }
}

/// One line of `summary.csv`.
#[derive(Debug, Clone, PartialEq)]
pub struct CellResult {
    pub h: f64,
    pub c: f64,
    pub exit_code: u8,
    pub status: String,
    pub iterations: Option<usize>,
    pub residual_ode: Option<f64>,
    pub plus_rate: Option<f64>,
    pub minus_rate: Option<f64>,
    pub dir: String,
}

fn run_cell(
    curves: &CriticalCurves,
    opts: &SolveOptions,
    out_dir: &Path,
    i: usize,
    j: usize,
    h: f64,
    c: f64,
) -> CellResult {
    let dir = format!("h{i:03}_c{j:03}");
    let mut cell = CellResult {
        h,
        c,
        exit_code: EXIT_OK,
        status: String::new(),
        iterations: None,
        residual_ode: None,
        plus_rate: None,
        minus_rate: None,
        dir: String::new(),
    };
    let result = ModelParams::new(h, c)
        .and_then(|p| solve_with(curves, &p, opts).map(|o| (p, o)))
        .map_err(CliError::from)
        .and_then(|(p, out)| {
            write_solve_outputs(&out_dir.join(&dir), &p, &out)?;
            Ok(out)
        });
    match result {
        Ok(out) => {
            cell.exit_code = outcome_code(&out);
            cell.status = if out.report.converged {
                "converged"
            } else {
                "not_converged"
            }
            .into();
            cell.iterations = Some(out.report.iterations);
            cell.residual_ode = Some(out.report.final_residual_ode);
            cell.plus_rate = out.plus_fit.map(|f| f.fitted_rate);
            cell.minus_rate = out.minus_fit.map(|f| f.fitted_rate);
            cell.dir = dir;
        }
        Err(e) => {
            cell.exit_code = e.exit_code();
            cell.status = match &e {
                CliError::Core(Error::NotExists { .. }) => "not_exists".into(),
                other => {
                    warn!("h = {h}, c = {c}: {other}");
                    format!("error: {other}")
                }
            };
        }
    }
    cell
}

/// Runs the sweep; cells are independent so they are solved in parallel.
///
/// The exit code is the worst cell code, where cells without a front do not
/// count as failures.
pub fn run(curves: &CriticalCurves, spec: &SweepSpec, opts: &SolveOptions, out_dir: &Path) -> Result<u8, CliError> {
    check_options(opts)?;
    std::fs::create_dir_all(out_dir)?;
    let (hs, cs) = (spec.h.values(), spec.c.values());
    let jobs: Vec<(usize, usize)> = (0..hs.len()).flat_map(|i| (0..cs.len()).map(move |j| (i, j))).collect();
    info!("sweeping {} cells", jobs.len());
    let opts = SolveOptions {
        iteration: IterationOptions {
            emit_iterates: 0,
            ..opts.iteration
        },
        ..*opts
    };
    let cells: Vec<CellResult> = jobs
        .par_iter()
        .map(|&(i, j)| run_cell(curves, &opts, out_dir, i, j, hs[i], cs[j]))
        .collect();
    write_summary(File::create(out_dir.join("summary.csv"))?, &cells)?;
    Ok(cells
        .iter()
        .map(|c| c.exit_code)
        .filter(|&code| code != EXIT_NOT_EXISTS)
        .max()
        .unwrap_or(EXIT_OK))
}

pub fn write_summary<W: std::io::Write>(w: W, cells: &[CellResult]) -> Result<(), CliError> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record([
        "h",
        "c",
        "epsilon",
        "status",
        "exit_code",
        "iterations",
        "residual_ode",
        "plus_rate",
        "minus_rate",
        "dir",
    ])?;
    let opt = |x: Option<f64>| x.map(fmt17).unwrap_or_default();
    for c in cells {
        out.write_record([
            fmt17(c.h),
            fmt17(c.c),
            fmt17(1.0 / (c.c * c.c)),
            c.status.clone(),
            c.exit_code.to_string(),
            c.iterations.map(|n| n.to_string()).unwrap_or_default(),
            opt(c.residual_ode),
            opt(c.plus_rate),
            opt(c.minus_rate),
            c.dir.clone(),
        ])?;
    }
    out.flush()?;
    Ok(())
}
