use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_traits::Float;

use super::config::{OperatorConfig, OperatorKind};
use super::tail::TailModel;
use super::weights::Channel;
use crate::math::{fit_line, fit_two_columns};
use crate::profiles::{LeftTail, Profile, RightTail};
use crate::{Error, Result};

/// `1 - φ` is carried at full relative precision (see [`apply_split`]), so
/// every positive normal sample may enter the right-tail refit.
const RIGHT_FIT_FLOOR: f64 = f64::MIN_POSITIVE;
const MIN_FIT_POINTS: usize = 3;

/// `𝒦φ` on `φ`'s grid, by one right-to-left recurrence sweep per channel.
///
/// Beyond the grid `g` is replaced by the exact product of `φ`'s tail model;
/// the output tails are refit from the first/last 10% of the samples (the
/// right tail keeps the input's polynomial degree).
pub fn apply(config: &OperatorConfig, phi: &Profile) -> Result<Profile> {
    let (values, gap) = apply_split(config, phi)?;
    let left = refit_left(phi, &values)?;
    let right = refit_right(phi, &gap)?;
    Profile::new(phi.grid, values, left, right)?.with_gap(gap)
}

/// `g_i = φ(t_i) φ(t_i - h)`, reading the left tail for `t_i - h < t_min`.
pub(crate) fn products(phi: &Profile, h: f64) -> Result<Vec<f64>> {
    let m = phi.grid.delay_steps(h)?;
    let v = &phi.values;
    Ok((0..v.len())
        .map(|i| {
            let lag = if i >= m { v[i - m] } else { phi.left.eval(phi.t(i) - h) };
            v[i] * lag
        })
        .collect())
}

/// `1 - g_i = y_i + y_lag - y_i y_lag` with `y = 1 - φ`, accurate where
/// `φ ≈ 1`.
fn complements(phi: &Profile, h: f64) -> Result<Vec<f64>> {
    let m = phi.grid.delay_steps(h)?;
    let v = &phi.values;
    Ok((0..v.len())
        .map(|i| {
            let y = phi.gap_at(i);
            let lag = if i >= m {
                phi.gap_at(i - m)
            } else {
                1.0 - phi.left.eval(phi.t(i) - h)
            };
            y + lag - y * lag
        })
        .collect())
}

/// `∫_t^∞ kernel(t - s) f(s) ds` at every grid point, given the samples of
/// `f` and the integrals beyond the last grid point for each channel.
fn sweep(config: &OperatorConfig, step: f64, f: &[f64], tail: (f64, f64)) -> Vec<f64> {
    let n = f.len();
    let mut out = vec![0.0; n];
    match config.kind {
        OperatorKind::A { lambda, mu } => {
            let scale = 1.0 / (config.epsilon * (mu - lambda));
            let cl = Channel::new(0, lambda, step, config.panel);
            let cm = Channel::new(0, mu, step, config.panel);
            let (mut il, mut im) = tail;
            out[n - 1] = scale * (il - im);
            for i in (0..n - 1).rev() {
                il = cl.decay * il + cl.panel(f, i);
                im = cm.decay * im + cm.panel(f, i);
                out[i] = scale * (il - im);
            }
        }
        OperatorKind::B => {
            let c1 = Channel::new(0, 2.0, step, config.panel);
            let c2 = Channel::new(1, 2.0, step, config.panel);
            let (mut i1, mut i2) = tail;
            out[n - 1] = 4.0 * i2;
            for i in (0..n - 1).rev() {
                i2 = c2.decay * (i2 + step * i1) + c2.panel(f, i);
                i1 = c1.decay * i1 + c1.panel(f, i);
                out[i] = 4.0 * i2;
            }
        }
    }
    out
}

/// `(m, ρ)` of the two channels whose tail integrals seed [`sweep`].
fn channels(config: &OperatorConfig) -> [(u32, f64); 2] {
    match config.kind {
        OperatorKind::A { lambda, mu } => [(0, lambda), (0, mu)],
        OperatorKind::B => [(0, 2.0), (1, 2.0)],
    }
}

/// The grid values of `𝒦φ`.
pub(crate) fn apply_values(config: &OperatorConfig, phi: &Profile) -> Result<Vec<f64>> {
    Ok(apply_split(config, phi)?.0)
}

/// `(𝒦φ, 1 - 𝒦φ)` on the grid.
///
/// The kernel is applied twice, to `g` and to `1 - g`; each sample is
/// taken from whichever form avoids cancellation (`𝒦g` where `𝒦φ < 1/2`,
/// `1 - 𝒦(1 - g)` elsewhere), so both tails keep full relative accuracy.
fn apply_split(config: &OperatorConfig, phi: &Profile) -> Result<(Vec<f64>, Vec<f64>)> {
    let step = phi.step();
    let t_end = phi.t_max();
    let tail = TailModel::new(&phi.right, config.h).pruned(t_end, config.tail_eps);
    let [c0, c1] = channels(config);
    let g = products(phi, config.h)?;
    let kg = sweep(
        config,
        step,
        &g,
        (tail.integral(c0.0, c0.1, t_end)?, tail.integral(c1.0, c1.1, t_end)?),
    );
    let q = complements(phi, config.h)?;
    let kq = sweep(
        config,
        step,
        &q,
        (
            tail.complement_integral(c0.0, c0.1, t_end)?,
            tail.complement_integral(c1.0, c1.1, t_end)?,
        ),
    );
    Ok(kg
        .iter()
        .zip(&kq)
        .map(|(&a, &b)| {
            if b <= 0.5 {
                let b = b.clamp(0.0, 1.0);
                (1.0 - b, b)
            } else {
                let a = a.clamp(0.0, 1.0);
                (a, 1.0 - a)
            }
        })
        .unzip())
}

fn window_len(count: usize) -> usize {
    (count / 10).max(MIN_FIT_POINTS).min(count)
}

/// Log-linear fit over the first 10% of the samples.
pub(crate) fn refit_left(phi: &Profile, values: &[f64]) -> Result<LeftTail> {
    let head = window_len(values.len());
    let (ts, ls): (Vec<f64>, Vec<f64>) = (0..head)
        .filter(|&i| values[i] > 0.0)
        .map(|i| (phi.t(i), values[i].ln()))
        .unzip();
    if ts.len() < MIN_FIT_POINTS {
        return Ok(LeftTail {
            rate: phi.left.rate,
            coeff: 0.0,
        });
    }
    let (slope, intercept, _) =
        fit_line(&ts, &ls).ok_or_else(|| Error::TailFitFailed("degenerate left window".into()))?;
    if slope < -1e-9 {
        return Err(Error::TailFitFailed(format!(
            "left tail grows towards -inf (rate {slope})"
        )));
    }
    let rate = slope.max(0.0);
    // anchor the coefficient at the first sample for exact continuity
    let anchor = values[0];
    let coeff = if anchor > 0.0 {
        anchor * (-rate * phi.t(0)).exp()
    } else {
        intercept.exp()
    };
    Ok(LeftTail { rate, coeff })
}

/// Refit of `1 - φ` over the last 10% of the samples with positive `1 - φ`.
///
/// The rate is always inherited: the linearized operator maps `e^{rt}` to
/// `m(r) e^{rt}` with `m = 1` exactly at a characteristic root and `m > 1`
/// just above it, so a refit rate that wanders off the root makes the tail
/// grow from one iterate to the next. Degree 0 anchors the coefficient at
/// the last live sample; degree 1 fits `(a, b)` in `(a + b t) e^{rt}` in
/// relative least squares.
pub(crate) fn refit_right(phi: &Profile, gap: &[f64]) -> Result<RightTail> {
    let prev = phi.right;
    let live: Vec<usize> = (0..gap.len()).filter(|&i| gap[i] > RIGHT_FIT_FLOOR).collect();
    if live.is_empty() {
        return Ok(if prev.poly == 0 {
            RightTail::exponential(prev.rate, 0.0)
        } else {
            RightTail::linear_exponential(prev.rate, 0.0, 0.0)
        });
    }
    let window = &live[live.len() - window_len(live.len())..];
    let last = *window.last().unwrap_or(&0);
    if window.len() < MIN_FIT_POINTS {
        let y = gap[last];
        let t = phi.t(last);
        let e = (-prev.rate * t).exp();
        return Ok(if prev.poly == 0 {
            RightTail::exponential(prev.rate, y * e)
        } else {
            let (a, b) = prev.affine();
            let s = y * e / (a + b * t);
            RightTail::linear_exponential(prev.rate, b * s, a * s)
        });
    }
    if prev.poly == 0 {
        // anchored at the last live sample for continuity
        let t = phi.t(last);
        Ok(RightTail::exponential(prev.rate, gap[last] * (-prev.rate * t).exp()))
    } else {
        let r = prev.rate;
        let mut u = Vec::with_capacity(window.len());
        let mut v = Vec::with_capacity(window.len());
        for &i in window {
            let t = phi.t(i);
            let w = (r * t).exp() / gap[i];
            u.push(w);
            v.push(t * w);
        }
        let ones = vec![1.0; window.len()];
        match fit_two_columns(&u, &v, &ones) {
            Some((a, b)) if a.is_finite() && b.is_finite() => Ok(RightTail::linear_exponential(r, b, a)),
            _ => Err(Error::TailFitFailed("degenerate degree-1 right window".into())),
        }
    }
}
