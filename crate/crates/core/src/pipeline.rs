//! classification → roots → lower (and upper) solution → iteration → fits.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::analysis::{fit_minus_tail, fit_plus_tail, ExpansionFit, TailRates};
use crate::charroots::{classify_with, CriticalCurves, RegimeReport, RootData, DEFAULT_BAND};
use crate::operators::{iterate, IterationOptions, IterationReport, OperatorConfig, PanelRule};
use crate::profiles::{
    choose_r, lower_critical, lower_noncritical, shift_to_order, upper_noncritical, AnalyticProfile, Profile, Shifted,
    DEFAULT_STEP,
};
use crate::{Error, ModelParams, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolveOptions {
    /// Target grid step (adjusted so the delay is a whole number of steps).
    pub delta: f64,
    pub iteration: IterationOptions,
    /// Relative band in `c` for recognising `c = 2` and `c = c*(h)`.
    pub band: f64,
    /// Bound the iteration by the shifted upper solution where one exists.
    pub use_upper: bool,
}

impl Default for SolveOptions {
    fn default() -> Self {
        Self {
            delta: DEFAULT_STEP,
            iteration: IterationOptions::default(),
            band: DEFAULT_BAND,
            use_upper: true,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LowerKind {
    Noncritical,
    Critical,
}

/// The upper solution actually used to bound the iteration.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UpperInfo {
    pub r: f64,
    pub shift: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolveOutcome {
    pub regime: RegimeReport,
    pub roots: RootData,
    pub config: OperatorConfig,
    pub lower_kind: LowerKind,
    pub upper: Option<UpperInfo>,
    /// Why no upper bound was used, when one was wanted.
    pub upper_note: Option<String>,
    pub profile: Profile,
    pub report: IterationReport,
    /// `φ₋, 𝒦φ₋, …` when requested.
    pub iterates: Vec<Profile>,
    pub plus_fit: Option<ExpansionFit>,
    pub minus_fit: Option<ExpansionFit>,
    pub fit_errors: Vec<String>,
}

/// Computes the front for `params`.
///
/// `Err(NotExists)` outside the existence region. Hitting the iteration cap
/// is not an error here: the outcome carries `report.converged = false`.
pub fn solve(params: &ModelParams, opts: &SolveOptions) -> Result<SolveOutcome> {
    solve_with(&CriticalCurves::new()?, params, opts)
}

pub fn solve_with(curves: &CriticalCurves, params: &ModelParams, opts: &SolveOptions) -> Result<SolveOutcome> {
    let regime = classify_with(curves, params, opts.band);
    if !regime.exists() {
        return Err(Error::NotExists {
            h: params.h,
            c: params.c,
        });
    }
    let roots = if regime.critical_speed {
        RootData::compute_double(params)?
    } else {
        RootData::compute(params)?
    };
    let double = roots.negative.is_some_and(|n| n.double);
    let (lower_kind, lower) = if double {
        (
            LowerKind::Critical,
            lower_critical(&roots)?.sample_default(params.h, opts.delta)?,
        )
    } else {
        (
            LowerKind::Noncritical,
            lower_noncritical(&roots)?.sample_default(params.h, opts.delta)?,
        )
    };
    let config = OperatorConfig::for_regime(&regime)?.with_panel(PanelRule::for_roots(&roots));

    let (upper_profile, upper, upper_note) = if opts.use_upper && !double {
        match bounded_upper(&roots, &lower) {
            Ok((p, info)) => (Some(p), Some(info), None),
            Err(e) => (None, None, Some(format!("{e}"))),
        }
    } else {
        (None, None, None)
    };

    let out = iterate(&config, &lower, upper_profile.as_ref(), &opts.iteration)?;
    let (plus_fit, minus_fit, fit_errors) = fit_tails(&out.profile, &roots, &regime);
    Ok(SolveOutcome {
        regime,
        roots,
        config,
        lower_kind,
        upper,
        upper_note,
        profile: out.profile,
        report: out.report,
        iterates: out.iterates,
        plus_fit,
        minus_fit,
        fit_errors,
    })
}

/// `φ₊(· + σ)` on the lower's grid, with `σ` from the shift search.
fn bounded_upper(roots: &RootData, lower: &Profile) -> Result<(Profile, UpperInfo)> {
    let r = choose_r(roots)?;
    let up = upper_noncritical(roots, r)?.with_left_end(lower.t_min());
    let coarse = up.sample_default(roots.h, lower.step())?;
    let pair = shift_to_order(lower, &coarse)?;
    let exact = Shifted {
        inner: up,
        shift: pair.shift,
    }
    .sample(lower.grid)?;
    Ok((exact, UpperInfo { r, shift: pair.shift }))
}

/// Both tail fits with the regime's expansions; failures are collected,
/// not raised.
pub fn fit_tails(
    phi: &Profile,
    roots: &RootData,
    regime: &RegimeReport,
) -> (Option<ExpansionFit>, Option<ExpansionFit>, Vec<String>) {
    let mut errors = Vec::new();
    let plus = match regime.plus_regime {
        Some(p) => TailRates::plus(roots, p)
            .and_then(|r| fit_plus_tail(phi, &r))
            .map_err(|e| errors.push(format!("plus: {e}")))
            .ok(),
        None => None,
    };
    let minus = match regime.minus_regime {
        Some(m) => fit_minus_tail(phi, &TailRates::minus(roots, m))
            .map_err(|e| errors.push(format!("minus: {e}")))
            .ok(),
        None => None,
    };
    (plus, minus, errors)
}
