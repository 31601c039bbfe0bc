//! Profiles on disk: `t,phi` CSV plus a JSON sidecar with the grid and the
//! analytic tails.

use std::fs::File;
use std::io::{self, Read, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};
use wavefront_core::prelude::{Grid, LeftTail, Profile, RightTail};

use crate::format::{fmt17, to_json};
use crate::CliError;

/// Everything besides the samples needed to rebuild a [`Profile`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProfileSidecar {
    pub h: f64,
    pub c: f64,
    pub epsilon: f64,
    pub t_min: f64,
    pub t_max: f64,
    pub step: f64,
    pub len: usize,
    pub left_tail: LeftTail,
    pub right_tail: RightTail,
}

impl ProfileSidecar {
    pub fn of(phi: &Profile, h: f64, c: f64) -> Self {
        Self {
            h,
            c,
            epsilon: 1.0 / (c * c),
            t_min: phi.t_min(),
            t_max: phi.t_max(),
            step: phi.step(),
            len: phi.len(),
            left_tail: phi.left,
            right_tail: phi.right,
        }
    }
}

pub fn write_csv<W: Write>(w: W, phi: &Profile) -> Result<(), CliError> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(["t", "phi"])?;
    for i in 0..phi.len() {
        out.write_record([fmt17(phi.t(i)), fmt17(phi.values[i])])?;
    }
    out.flush()?;
    Ok(())
}

/// `(t, phi)` columns of a profile CSV.
pub fn read_csv<R: Read>(r: R) -> Result<(Vec<f64>, Vec<f64>), CliError> {
    let mut rdr = csv::Reader::from_reader(r);
    let headers = rdr.headers()?.clone();
    if headers.iter().collect::<Vec<_>>() != ["t", "phi"] {
        return Err(CliError::Format(format!("expected header t,phi, found {headers:?}")));
    }
    let (mut ts, mut vs) = (Vec::new(), Vec::new());
    for row in rdr.records() {
        let row = row?;
        let parse = |k: usize| -> Result<f64, CliError> {
            row.get(k)
                .ok_or_else(|| CliError::Format("short CSV row".into()))?
                .trim()
                .parse()
                .map_err(|e| CliError::Format(format!("bad number in CSV: {e}")))
        };
        ts.push(parse(0)?);
        vs.push(parse(1)?);
    }
    Ok((ts, vs))
}

/// Writes `<stem>.csv` and `<stem>.json` into `dir`.
pub fn save(dir: &Path, stem: &str, phi: &Profile, h: f64, c: f64) -> Result<(), CliError> {
    write_csv(File::create(dir.join(format!("{stem}.csv")))?, phi)?;
    let sidecar = to_json(&ProfileSidecar::of(phi, h, c))?;
    std::fs::write(dir.join(format!("{stem}.json")), sidecar)?;
    Ok(())
}

/// Rebuilds a profile from a CSV and its sidecar; the grid in the CSV must
/// agree with the sidecar.
pub fn load(csv_path: &Path, sidecar_path: &Path) -> Result<Profile, CliError> {
    let side: ProfileSidecar = serde_json::from_str(&std::fs::read_to_string(sidecar_path)?)?;
    let (ts, vs) = read_csv(File::open(csv_path)?)?;
    from_parts(&side, &ts, vs)
}

pub fn from_parts(side: &ProfileSidecar, ts: &[f64], vs: Vec<f64>) -> Result<Profile, CliError> {
    let grid = Grid {
        t_min: side.t_min,
        step: side.step,
        len: side.len,
    };
    if ts.len() != side.len {
        return Err(CliError::Format(format!(
            "{} rows for a grid of {}",
            ts.len(),
            side.len
        )));
    }
    if let Some(i) = (0..ts.len()).find(|&i| (ts[i] - grid.t(i)).abs() > 1e-9 * (1.0 + ts[i].abs())) {
        return Err(CliError::Format(format!("row {i}: t = {} off the grid", ts[i])));
    }
    Ok(Profile::new(grid, vs, side.left_tail, side.right_tail)?)
}

pub fn stdout_json<T: Serialize + ?Sized>(value: &T) -> Result<(), CliError> {
    let mut out = io::stdout().lock();
    writeln!(out, "{}", to_json(value)?)?;
    Ok(())
}
