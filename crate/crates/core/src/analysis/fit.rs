use alloc::format;
use alloc::vec::Vec;

use num_traits::Float;
use serde::{Deserialize, Serialize};

use crate::charroots::{MinusRegime, PlusRegime, RootData};
use crate::math::{fit_line, fit_two_columns, golden_min};
use crate::profiles::Profile;
use crate::{Error, Result};

/// A fit is accepted when the rms of `log(model / data)` stays below this.
pub const MAX_RMS_LOG: f64 = 0.05;
/// The window starts where the tail quantity first drops below this.
pub const WINDOW_ONSET: f64 = 1e-3;
/// Window length in units of the leading/secondary separation.
pub const WINDOW_SCALES: f64 = 5.0;
const MIN_WINDOW_POINTS: usize = 8;
/// Secondary-term samples below this fraction of the tail are left out.
const SECONDARY_FLOOR: f64 = 1e-4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum TailSide {
    MinusInf,
    PlusInf,
}

/// Theoretical rates steering one fit: the leading exponent, the exponent
/// of the first correction (which sets the window length and, for the
/// two-term regimes, is fitted), and the polynomial degree.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TailRates {
    pub leading: f64,
    pub secondary: Option<f64>,
    /// The correction is a genuine term of the expansion whose rate is fitted.
    pub fit_secondary: bool,
    pub degree: u8,
}

impl TailRates {
    /// `1 - φ` at `+∞`: `e^{λ₂t}` corrected by `e^{2λ₂t}` (clean),
    /// `e^{λ₁t}` (two exponentials), or `t e^{λ₂t}` at a double root.
    pub fn plus(roots: &RootData, regime: PlusRegime) -> Result<Self> {
        let l2 = roots.require_lambda2()?;
        Ok(match regime {
            PlusRegime::Clean => Self {
                leading: l2,
                secondary: Some(2.0 * l2),
                fit_secondary: false,
                degree: 0,
            },
            PlusRegime::TwoExp => Self {
                leading: l2,
                secondary: roots.lambda1().filter(|l1| l1.is_finite()),
                fit_secondary: true,
                degree: 0,
            },
            PlusRegime::DoubleRoot => Self {
                leading: l2,
                secondary: None,
                fit_secondary: false,
                degree: 1,
            },
        })
    }

    /// `φ` at `-∞`: `-t e^{2t}` (c = 2), `e^{λt} - K e^{μt}`, or `e^{λt}`
    /// with an `e^{2λt}` correction.
    pub fn minus(roots: &RootData, regime: MinusRegime) -> Self {
        let (l, m) = (roots.lambda, roots.mu);
        match regime {
            MinusRegime::CriticalC2 => Self {
                leading: l,
                secondary: None,
                fit_secondary: false,
                degree: 1,
            },
            MinusRegime::TwoTerm => Self {
                leading: l,
                secondary: Some(m),
                fit_secondary: true,
                degree: 0,
            },
            MinusRegime::OneTerm => Self {
                leading: l,
                secondary: Some(m.min(2.0 * l)),
                fit_secondary: false,
                degree: 0,
            },
        }
    }

    /// Length of the dominance window.
    fn window_len(&self) -> f64 {
        let gap = match self.secondary {
            Some(s) => (s - self.leading).abs(),
            None => self.leading.abs(),
        };
        WINDOW_SCALES / gap
    }
}

/// One fitted asymptotic term.
///
/// `fitted_coeff` is the leading constant with the sign convention of the
/// expansion: `1 - φ ≈ K t^p e^{rt}` at `+∞`, `φ ≈ K e^{rt}` or
/// `φ ≈ -K t e^{rt}` at `-∞`. Translations are absorbed into it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExpansionFit {
    pub side: TailSide,
    pub fitted_rate: f64,
    pub fitted_poly_degree: u8,
    pub fitted_coeff: f64,
    pub window: (f64, f64),
    pub rms_log_residual: f64,
    /// Rate of the correction term, after the leading term is removed with
    /// the theoretical rate.
    pub secondary_rate: Option<f64>,
    pub secondary_coeff: Option<f64>,
}

impl ExpansionFit {
    pub fn accepted(&self) -> bool {
        self.rms_log_residual <= MAX_RMS_LOG
    }

    /// Relative deviation of the fitted rate from `expected`.
    pub fn rate_error(&self, expected: f64) -> f64 {
        ((self.fitted_rate - expected) / expected).abs()
    }
}

/// Tail samples `(t, y)` ordered away from the front: `y = 1 - φ` on the
/// right, `y = φ` on the left, with `|t|` increasing.
fn tail_samples(phi: &Profile, side: TailSide) -> Vec<(f64, f64)> {
    let n = phi.len();
    let pick = |i: usize| match side {
        TailSide::PlusInf => (phi.t(i), phi.gap_at(i)),
        TailSide::MinusInf => (phi.t(i), phi.values[i]),
    };
    match side {
        TailSide::PlusInf => (0..n).map(pick).collect(),
        TailSide::MinusInf => (0..n).rev().map(pick).collect(),
    }
}

/// Samples in `[onset, onset + len]` (measured outward), stopping at the
/// first non-positive value.
fn window(samples: &[(f64, f64)], len: f64) -> Result<Vec<(f64, f64)>> {
    let start = samples
        .iter()
        .position(|&(_, y)| y < WINDOW_ONSET)
        .ok_or_else(|| Error::WindowTooShort(format!("tail never drops below {WINDOW_ONSET}")))?;
    let t0 = samples[start].0;
    let picked: Vec<(f64, f64)> = samples[start..]
        .iter()
        .take_while(|&&(t, y)| (t - t0).abs() <= len && y > 0.0 && y.is_finite())
        .copied()
        .collect();
    if picked.len() < MIN_WINDOW_POINTS {
        return Err(Error::WindowTooShort(format!(
            "{} usable samples after t = {t0}",
            picked.len()
        )));
    }
    Ok(picked)
}

/// Relative least squares of `(a + b t) e^{rt}` at a fixed `r`; returns
/// `(a, b, rms log residual)`.
fn affine_at_rate(w: &[(f64, f64)], r: f64) -> Option<(f64, f64, f64)> {
    let u: Vec<f64> = w.iter().map(|&(t, y)| (r * t).exp() / y).collect();
    let v: Vec<f64> = w.iter().zip(&u).map(|(&(t, _), &u)| t * u).collect();
    let ones = alloc::vec![1.0; w.len()];
    let (a, b) = fit_two_columns(&u, &v, &ones)?;
    let mut ss = 0.0;
    for (&(t, _), &ui) in w.iter().zip(&u) {
        let m = (a + b * t) * ui;
        if !(m > 0.0) {
            return None;
        }
        ss += m.ln() * m.ln();
    }
    Some((a, b, (ss / w.len() as f64).sqrt()))
}

fn fit_side(phi: &Profile, side: TailSide, rates: &TailRates) -> Result<ExpansionFit> {
    let samples = tail_samples(phi, side);
    let w = window(&samples, rates.window_len())?;
    let span = (w[0].0, w[w.len() - 1].0);
    let window = (span.0.min(span.1), span.0.max(span.1));

    let two_term = match rates.secondary {
        Some(s) if rates.fit_secondary && rates.degree == 0 => Some(joint_fit(&w, rates.leading, s)?),
        _ => None,
    };
    let (rate, coeff, rms) = if rates.degree == 0 {
        // with a fitted correction, regress what is left after removing it
        let data: Vec<(f64, f64)> = match two_term {
            Some((_, k_sec, sec)) => w.iter().map(|&(t, y)| (t, y - k_sec * (sec * t).exp())).collect(),
            None => w.clone(),
        };
        log_linear(&data)?
    } else {
        // golden search on the rate, (a, b) linear at each trial
        let score = |r: f64| affine_at_rate(&w, r).map_or(f64::INFINITY, |f| f.2);
        let lead = rates.leading;
        let (r, _) = golden_min(score, lead - 0.5 * lead.abs(), lead + 0.5 * lead.abs(), 1e-10);
        let (_, b, rms) = affine_at_rate(&w, r).ok_or(Error::FitRejected {
            rms: f64::INFINITY,
            threshold: MAX_RMS_LOG,
        })?;
        let k = match side {
            TailSide::PlusInf => b,
            TailSide::MinusInf => -b,
        };
        (r, k, rms)
    };
    if !(rms <= MAX_RMS_LOG) {
        return Err(Error::FitRejected {
            rms,
            threshold: MAX_RMS_LOG,
        });
    }
    let (secondary_rate, secondary_coeff) = match two_term {
        Some((k_lead, _, _)) => {
            secondary_fit(&w, rates.leading, k_lead).map_or((None, None), |(r, k)| (Some(r), Some(k)))
        }
        None => (None, None),
    };
    Ok(ExpansionFit {
        side,
        fitted_rate: rate,
        fitted_poly_degree: rates.degree,
        fitted_coeff: coeff,
        window,
        rms_log_residual: rms,
        secondary_rate,
        secondary_coeff,
    })
}

/// `(rate, coeff, rms)` of `log y ≈ log coeff + rate·t`.
fn log_linear(w: &[(f64, f64)]) -> Result<(f64, f64, f64)> {
    if w.iter().any(|p| !(p.1 > 0.0)) {
        return Err(Error::FitRejected {
            rms: f64::INFINITY,
            threshold: MAX_RMS_LOG,
        });
    }
    let ts: Vec<f64> = w.iter().map(|p| p.0).collect();
    let ls: Vec<f64> = w.iter().map(|p| p.1.ln()).collect();
    let (slope, intercept, rms) =
        fit_line(&ts, &ls).ok_or_else(|| Error::WindowTooShort("degenerate window".into()))?;
    Ok((slope, intercept.exp(), rms))
}

/// Relative least squares `y ≈ K e^{lead t} + K' e^{sec t}` with both rates
/// fixed; returns `(K, K', sec)`.
fn joint_fit(w: &[(f64, f64)], lead: f64, sec: f64) -> Result<(f64, f64, f64)> {
    let u: Vec<f64> = w.iter().map(|&(t, y)| (lead * t).exp() / y).collect();
    let v: Vec<f64> = w.iter().map(|&(t, y)| (sec * t).exp() / y).collect();
    let ones = alloc::vec![1.0; w.len()];
    let (k, k2) = fit_two_columns(&u, &v, &ones)
        .ok_or_else(|| Error::WindowTooShort("rates not separable on the window".into()))?;
    Ok((k, k2, sec))
}

/// Log-linear fit of `y - K e^{lead t}` where it is resolved above
/// [`SECONDARY_FLOOR`] relative to `y`.
fn secondary_fit(w: &[(f64, f64)], lead: f64, k_lead: f64) -> Option<(f64, f64)> {
    let rest: Vec<(f64, f64)> = w.iter().map(|&(t, y)| (t, y - k_lead * (lead * t).exp())).collect();
    let sign = rest[0].1.signum();
    let kept: Vec<(f64, f64)> = rest
        .iter()
        .zip(w)
        .filter(|(r, y)| r.1 * sign > SECONDARY_FLOOR * y.1)
        .map(|(r, _)| (r.0, r.1 * sign))
        .collect();
    if kept.len() < MIN_WINDOW_POINTS {
        return None;
    }
    let (rate, k, _) = log_linear(&kept).ok()?;
    Some((rate, sign * k))
}

/// Fit of `1 - φ` at `+∞` over the dominance window.
///
/// The window opens where `1 - φ < 10⁻³` and spans five separations
/// between the leading and the correction rate (five decay lengths when
/// there is no separate correction). The regime fixes the degree; degree 1
/// searches the rate with `(a + bt) e^{rt}` fitted linearly at each trial.
pub fn fit_plus_tail(phi: &Profile, rates: &TailRates) -> Result<ExpansionFit> {
    fit_side(phi, TailSide::PlusInf, rates)
}

/// Mirror of [`fit_plus_tail`] on `φ` at `-∞`.
pub fn fit_minus_tail(phi: &Profile, rates: &TailRates) -> Result<ExpansionFit> {
    fit_side(phi, TailSide::MinusInf, rates)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::profiles::{Grid, LeftTail, RightTail};

    fn profile<F: Fn(f64) -> f64, G: Fn(f64) -> f64>(a: f64, b: f64, f: F, gap: G) -> Profile {
        let grid = Grid::aligned(0.0, 0.01, a, b).unwrap();
        let values = (0..grid.len).map(|i| f(grid.t(i))).collect();
        let gaps = (0..grid.len).map(|i| gap(grid.t(i))).collect();
        Profile::new(
            grid,
            values,
            LeftTail { rate: 0.0, coeff: 0.0 },
            RightTail::exponential(-1.0, 0.0),
        )
        .unwrap()
        .with_gap(gaps)
        .unwrap()
    }

    #[test]
    fn pure_exponential_plus_tail_is_exact() {
        let p = profile(0.0, 30.0, |t| 1.0 - (-t).exp(), |t| (-t).exp());
        let rates = TailRates {
            leading: -1.0,
            secondary: Some(-2.0),
            fit_secondary: false,
            degree: 0,
        };
        let f = fit_plus_tail(&p, &rates).unwrap();
        assert!((f.fitted_rate + 1.0).abs() < 1e-12);
        assert!((f.fitted_coeff - 1.0).abs() < 1e-10);
        assert_eq!(f.fitted_poly_degree, 0);
        assert!(f.rms_log_residual < 1e-12);
    }

    #[test]
    fn linear_exponential_plus_tail() {
        let y = |t: f64| (2.0 * t + 1.0) * (-t).exp();
        let p = profile(0.0, 40.0, |t| 1.0 - y(t), y);
        let rates = TailRates {
            leading: -1.0,
            secondary: None,
            fit_secondary: false,
            degree: 1,
        };
        let f = fit_plus_tail(&p, &rates).unwrap();
        assert!((f.fitted_rate + 1.0).abs() < 1e-6, "{f:?}");
        assert!((f.fitted_coeff - 2.0).abs() < 1e-4, "{f:?}");
        assert_eq!(f.fitted_poly_degree, 1);
    }

    #[test]
    fn pure_exponential_minus_tail() {
        let p = profile(-30.0, 0.0, |t| (2.0 * t).exp(), |t| -(2.0 * t).exp_m1());
        let rates = TailRates {
            leading: 2.0,
            secondary: Some(4.0),
            fit_secondary: false,
            degree: 0,
        };
        let f = fit_minus_tail(&p, &rates).unwrap();
        assert!((f.fitted_rate - 2.0).abs() < 1e-12);
        assert!(f.window.1 < 0.0 && f.window.0 < f.window.1);
    }

    #[test]
    fn critical_minus_tail_sign_convention() {
        let y = |t: f64| (0.5 - 3.0 * t) * (2.0 * t).exp();
        let p = profile(-40.0, -3.0, y, |t| 1.0 - y(t));
        let rates = TailRates {
            leading: 2.0,
            secondary: None,
            fit_secondary: false,
            degree: 1,
        };
        let f = fit_minus_tail(&p, &rates).unwrap();
        assert!((f.fitted_rate - 2.0).abs() < 1e-6);
        assert!((f.fitted_coeff - 3.0).abs() < 1e-4, "{f:?}");
    }

    #[test]
    fn secondary_rate_recovered() {
        let y = |t: f64| (-t).exp() - 0.7 * (-1.4 * t).exp();
        let p = profile(0.0, 40.0, |t| 1.0 - y(t), y);
        let rates = TailRates {
            leading: -1.0,
            secondary: Some(-1.4),
            fit_secondary: true,
            degree: 0,
        };
        let f = fit_plus_tail(&p, &rates).unwrap();
        assert!((f.secondary_rate.unwrap() + 1.4).abs() < 1e-6, "{f:?}");
        assert!((f.secondary_coeff.unwrap() + 0.7).abs() < 1e-5);
    }

    #[test]
    fn short_window_is_reported() {
        let p = profile(0.0, 2.0, |t| 1.0 - (-t).exp(), |t| (-t).exp());
        let rates = TailRates {
            leading: -1.0,
            secondary: None,
            fit_secondary: false,
            degree: 0,
        };
        assert!(matches!(fit_plus_tail(&p, &rates), Err(Error::WindowTooShort(_))));
    }

    #[test]
    fn wrong_degree_is_rejected() {
        // a strongly curved log forced through a straight line
        let y = |t: f64| (-0.05 * t * t).exp() * 1e-3;
        let p = profile(0.0, 40.0, |t| 1.0 - y(t), y);
        let rates = TailRates {
            leading: -0.2,
            secondary: None,
            fit_secondary: false,
            degree: 0,
        };
        assert!(matches!(fit_plus_tail(&p, &rates), Err(Error::FitRejected { .. })));
    }
}
