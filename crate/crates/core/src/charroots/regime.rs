use num_traits::Float;
use serde::{Deserialize, Serialize};

use super::curves::{CriticalCurves, HALF_LN2, INV_E};
use crate::{ModelParams, Result};

/// Default relative band around curve boundaries (in `c`).
pub const DEFAULT_BAND: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Verdict {
    Exists,
    NotExists,
}

/// Leading behaviour of the front at `-∞`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum MinusRegime {
    /// `c = 2`: `-K t e^{λt}`.
    CriticalC2,
    /// `2 < c < 1.5√2`: `e^{λt} - K e^{μt}`.
    TwoTerm,
    /// `c ≥ 1.5√2`: `e^{λt}`.
    OneTerm,
}

/// Leading behaviour of `1 - φ` at `+∞`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum PlusRegime {
    /// `λ₁ ≤ 2λ₂`: `e^{λ₂t}` with an `O(e^{2λ₂t})` remainder.
    Clean,
    /// `2λ₂ < λ₁ < λ₂`: `e^{λ₂t} - K e^{λ₁t}`.
    TwoExp,
    /// `λ₁ = λ₂`: `K t e^{λ₂t}`.
    DoubleRoot,
}

impl MinusRegime {
    pub fn poly_degree(self) -> u8 {
        match self {
            MinusRegime::CriticalC2 => 1,
            _ => 0,
        }
    }
}

impl PlusRegime {
    pub fn poly_degree(self) -> u8 {
        match self {
            PlusRegime::DoubleRoot => 1,
            _ => 0,
        }
    }
}

/// Existence verdict and asymptotic regimes of one `(h, c)`.
///
/// `c_star` and `c_sharp` are `None` where the corresponding speed is
/// unbounded (or, for `c_star`, where no front exists at any speed).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RegimeReport {
    pub h: f64,
    pub c: f64,
    pub epsilon: f64,
    pub verdict: Verdict,
    pub critical_speed: bool,
    pub minus_regime: Option<MinusRegime>,
    pub plus_regime: Option<PlusRegime>,
    pub c_star: Option<f64>,
    pub c_sharp: Option<f64>,
    pub h1: f64,
    pub h0: f64,
}

impl RegimeReport {
    pub fn exists(&self) -> bool {
        self.verdict == Verdict::Exists
    }

    /// `c = 2` within the band: the `ℬ` operator applies.
    pub fn minimal_speed(&self) -> bool {
        self.minus_regime == Some(MinusRegime::CriticalC2)
    }
}

/// Classifies `(h, c)` with a freshly built set of curves.
pub fn classify(params: &ModelParams, tol: f64) -> Result<RegimeReport> {
    Ok(classify_with(&CriticalCurves::new()?, params, tol))
}

/// Existence and regime classification against precomputed curves.
///
/// `tol` is the relative band in `c` inside which `c = c*(h)` and `c = 2`
/// are recognised.
pub fn classify_with(curves: &CriticalCurves, params: &ModelParams, tol: f64) -> RegimeReport {
    let (h, c) = (params.h, params.c);
    let c_star = curves.c_star(h);
    let c_sharp = curves.c_sharp(h);
    let mut report = RegimeReport {
        h,
        c,
        epsilon: params.epsilon,
        verdict: Verdict::NotExists,
        critical_speed: false,
        minus_regime: None,
        plus_regime: None,
        c_star,
        c_sharp: c_sharp.is_finite().then_some(c_sharp),
        h1: curves.h1,
        h0: curves.h0,
    };
    if h > curves.h1 {
        return report;
    }
    if h > INV_E {
        let Some(cs) = c_star else {
            return report;
        };
        if c > cs * (1.0 + tol) {
            return report;
        }
        report.critical_speed = (c - cs).abs() <= tol * cs;
    }
    report.verdict = Verdict::Exists;
    report.minus_regime = Some(if (c - 2.0).abs() <= tol * 2.0 {
        MinusRegime::CriticalC2
    } else if c < 1.5 * 2f64.sqrt() {
        MinusRegime::TwoTerm
    } else {
        MinusRegime::OneTerm
    });
    // λ₁ ≤ 2λ₂ exactly when h ≤ ½ln2, or h ≤ h₀ and c ≤ c#(h)
    let clean = h <= HALF_LN2 || (h <= curves.h0 && c <= c_sharp * (1.0 + tol));
    report.plus_regime = Some(if report.critical_speed {
        PlusRegime::DoubleRoot
    } else if clean {
        PlusRegime::Clean
    } else {
        PlusRegime::TwoExp
    });
    report
}
