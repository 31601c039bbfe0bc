use super::apply::apply_values;
use super::config::OperatorConfig;
use crate::profiles::Profile;
use crate::{Error, Result};

/// Points excluded from the ODE residual at each end of the grid.
const EDGE: usize = 2;

/// `(sup |𝒦φ - φ|, sup |ε φ'' - φ' + φ(1 - φ(· - h))|)` over the grid, the
/// second by central differences on the interior.
pub fn fixed_point_residuals(config: &OperatorConfig, phi: &Profile) -> Result<(f64, f64)> {
    let k = apply_values(config, phi)?;
    let fp = k.iter().zip(&phi.values).fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
    let ode = ode_residual(phi, config.epsilon, config.h, &[])?;
    Ok((fp, ode))
}

/// Sup of the central-difference ODE residual, skipping two points at each
/// end and the stencils touching any of the `junctions`.
pub fn ode_residual(phi: &Profile, epsilon: f64, h: f64, junctions: &[f64]) -> Result<f64> {
    let m = phi.grid.delay_steps(h)?;
    let v = &phi.values;
    let n = v.len();
    let step = phi.step();
    let mut sup: f64 = 0.0;
    for i in EDGE..n.saturating_sub(EDGE) {
        let t = phi.t(i);
        if junctions.iter().any(|&j| (t - j).abs() <= 1.5 * step) {
            continue;
        }
        let d2 = (v[i + 1] - 2.0 * v[i] + v[i - 1]) / (step * step);
        let d1 = (v[i + 1] - v[i - 1]) / (2.0 * step);
        let lag = if i >= m {
            phi.gap_at(i - m)
        } else {
            1.0 - phi.left.eval(t - h)
        };
        let r = epsilon * d2 - d1 + v[i] * lag;
        sup = sup.max(r.abs());
    }
    Ok(sup)
}

/// The `t` where a monotone profile crosses 1/2: binary search for the
/// bracketing samples, then linear interpolation.
pub fn half_crossing(phi: &Profile) -> Result<f64> {
    let v = &phi.values;
    let n = v.len();
    if !(v[0] < 0.5 && v[n - 1] >= 0.5) {
        return Err(Error::NoHalfCrossing);
    }
    let (mut lo, mut hi) = (0, n - 1);
    while hi - lo > 1 {
        let mid = (lo + hi) / 2;
        if v[mid] < 0.5 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let frac = (0.5 - v[lo]) / (v[hi] - v[lo]);
    Ok(phi.t(lo) + frac * phi.step())
}

/// Sup distance between two fronts after translating both so they cross
/// 1/2 at `t = 0`, over the overlap of their grids (cubic interpolation
/// for the second profile).
pub fn uniqueness_check(phi_a: &Profile, phi_b: &Profile) -> Result<f64> {
    let ta = half_crossing(phi_a)?;
    let tb = half_crossing(phi_b)?;
    let shift = tb - ta;
    let mut sup: f64 = 0.0;
    for i in 0..phi_a.len() {
        let t = phi_a.t(i) + shift;
        if t < phi_b.t_min() || t > phi_b.t_max() {
            continue;
        }
        sup = sup.max((phi_a.values[i] - phi_b.eval_cubic(t)).abs());
    }
    Ok(sup)
}
