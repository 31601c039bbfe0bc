use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use num_traits::Float;
use serde::{Deserialize, Serialize};

use super::fit::{fit_minus_tail, fit_plus_tail, ExpansionFit, TailRates};
use crate::charroots::{MinusRegime, PlusRegime, RootData};
use crate::operators::{half_crossing, iterate, IterationOptions, OperatorConfig, PanelRule};
use crate::profiles::{lower_noncritical, AnalyticProfile, Grid, LeftTail, Profile, RightTail};
use crate::{ModelParams, Result};

/// Sup error against the exact front allowed on [`AZ_ERROR_WINDOW`].
pub const AZ_SUP_TOL: f64 = 1e-3;
pub const AZ_ODE_TOL: f64 = 5e-4;
pub const AZ_ERROR_WINDOW: (f64, f64) = (-10.0, 10.0);
/// Slack of the pointwise ordering checks.
pub const ORDER_TOL: f64 = 1e-12;
/// Iterates `φ₋, 𝒜φ₋, 𝒜²φ₋, 𝒜³φ₋` kept for the ordering check.
const ORDERED_ITERATES: usize = 4;

/// The explicit front at `ε = 6/25, h = 0`:
/// `φ⋆(s) = (1/2 + tanh(5s/12 + s₀)/2)²` with `s₀ = ln 2 / 2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AzExact {
    pub s0: f64,
    pub c: f64,
    pub epsilon: f64,
}

impl Default for AzExact {
    fn default() -> Self {
        Self {
            s0: 0.5 * 2f64.ln(),
            c: 5.0 / 6f64.sqrt(),
            epsilon: 0.24,
        }
    }
}

impl AzExact {
    /// `v = 1/2 + tanh(x)/2 = 1 / (1 + e^{-2x})`, so `φ⋆ = v²`.
    fn v(&self, s: f64) -> f64 {
        let x = 5.0 * s / 12.0 + self.s0;
        1.0 / (1.0 + (-2.0 * x).exp())
    }

    /// `1 - v`, without cancellation.
    fn w(&self, s: f64) -> f64 {
        let x = 5.0 * s / 12.0 + self.s0;
        1.0 / (1.0 + (2.0 * x).exp())
    }

    pub fn eval(&self, s: f64) -> f64 {
        let v = self.v(s);
        v * v
    }
}

impl AnalyticProfile for AzExact {
    fn value(&self, t: f64) -> f64 {
        self.eval(t)
    }

    // φ' = (5/3) v² (1 - v),  φ'' = (25/18) v² (1 - v)(2 - 3v)
    fn d1(&self, t: f64) -> f64 {
        let v = self.v(t);
        5.0 / 3.0 * v * v * self.w(t)
    }

    fn d2(&self, t: f64) -> f64 {
        let v = self.v(t);
        25.0 / 18.0 * v * v * self.w(t) * (2.0 - 3.0 * v)
    }

    fn complement(&self, t: f64) -> f64 {
        // 1 - v² = (1 - v)(1 + v)
        self.w(t) * (1.0 + self.v(t))
    }

    fn left_tail(&self) -> LeftTail {
        // v ≈ e^{2x}: φ⋆ ≈ e^{4 s₀} e^{5s/3}
        LeftTail {
            rate: 5.0 / 3.0,
            coeff: (4.0 * self.s0).exp(),
        }
    }

    fn right_tail(&self) -> RightTail {
        // 1 - φ⋆ ≈ 2 e^{-2x} = 2 e^{-2 s₀} e^{-5s/6}
        RightTail::exponential(-5.0 / 6.0, 2.0 * (-2.0 * self.s0).exp())
    }

    fn natural_range(&self) -> (f64, f64) {
        (-25.0, 50.0)
    }
}

/// One pointwise ordering `lower ≤ upper`; `worst` is `min(upper - lower)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OrderingCheck {
    pub label: String,
    pub worst: f64,
    pub holds: bool,
}

impl OrderingCheck {
    pub fn between(label: String, lower: &[f64], upper: &[f64]) -> Self {
        let worst = lower.iter().zip(upper).fold(f64::INFINITY, |m, (l, u)| m.min(u - l));
        Self {
            label,
            worst,
            holds: worst >= -ORDER_TOL,
        }
    }
}

/// Outcome of the exact-solution check.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AzValidation {
    pub delta: f64,
    pub grid: Grid,
    pub iterations: usize,
    pub converged: bool,
    /// `sup |Φ - φ⋆|` on [`AZ_ERROR_WINDOW`], no shift applied.
    pub sup_error: f64,
    pub final_residual_fp: f64,
    pub final_residual_ode: f64,
    /// Half-crossing of the computed front minus that of `φ⋆`; reported,
    /// never absorbed into `sup_error`.
    pub phase_offset: f64,
    pub plus_fit: Option<ExpansionFit>,
    pub minus_fit: Option<ExpansionFit>,
    pub fit_errors: Vec<String>,
    pub ordering: Vec<OrderingCheck>,
    pub passed: bool,
}

/// Builds `φ₋` at `ε = 0.24, h = 0`, iterates `𝒜` to convergence on a grid
/// of step `delta`, and compares with `φ⋆`.
pub fn validate_az(delta: f64) -> Result<AzValidation> {
    let exact = AzExact::default();
    let params = ModelParams::from_epsilon(0.0, exact.epsilon)?;
    let roots = RootData::compute(&params)?;
    let lower = lower_noncritical(&roots)?.sample_default(0.0, delta)?;
    let config = OperatorConfig::a_op(exact.epsilon, 0.0)?.with_panel(PanelRule::for_roots(&roots));
    let opts = IterationOptions {
        emit_iterates: ORDERED_ITERATES,
        max_iter: 20_000,
        ..IterationOptions::default()
    };
    let out = iterate(&config, &lower, None, &opts)?;
    let phi = &out.profile;

    let star: Vec<f64> = (0..phi.len()).map(|i| exact.eval(phi.t(i))).collect();
    let (a, b) = AZ_ERROR_WINDOW;
    let sup_error = (0..phi.len())
        .filter(|&i| (a..=b).contains(&phi.t(i)))
        .fold(0.0f64, |m, i| m.max((phi.values[i] - star[i]).abs()));
    // φ⋆ = 1/2 where v = 1/√2, i.e. tanh(x) = √2 - 1
    let star_half = ((2f64.sqrt() - 1.0).atanh() - exact.s0) * 12.0 / 5.0;
    let phase_offset = half_crossing(phi)? - star_half;

    let mut fit_errors = Vec::new();
    let plus_fit = TailRates::plus(&roots, PlusRegime::Clean)
        .and_then(|r| fit_plus_tail(phi, &r))
        .map_err(|e| fit_errors.push(format!("plus: {e}")))
        .ok();
    let minus_fit = fit_minus_tail(phi, &TailRates::minus(&roots, MinusRegime::TwoTerm))
        .map_err(|e| fit_errors.push(format!("minus: {e}")))
        .ok();

    let ordering = iterate_ordering(&out.iterates, &star);

    let passed = out.report.converged
        && sup_error <= AZ_SUP_TOL
        && out.report.final_residual_ode <= AZ_ODE_TOL
        && plus_fit.is_some()
        && minus_fit.is_some()
        && ordering.iter().all(|o| o.holds);
    Ok(AzValidation {
        delta,
        grid: phi.grid,
        iterations: out.report.iterations,
        converged: out.report.converged,
        sup_error,
        final_residual_fp: out.report.final_residual_fp,
        final_residual_ode: out.report.final_residual_ode,
        phase_offset,
        plus_fit,
        minus_fit,
        fit_errors,
        ordering,
        passed,
    })
}

/// `φ₋ ≤ 𝒦φ₋ ≤ … ≤ 𝒦^kφ₋` and, when given, `𝒦^kφ₋ ≤ bound`.
pub fn iterate_ordering(iterates: &[Profile], bound: &[f64]) -> Vec<OrderingCheck> {
    let mut checks: Vec<OrderingCheck> = iterates
        .windows(2)
        .enumerate()
        .map(|(j, w)| OrderingCheck::between(format!("K^{j} <= K^{}", j + 1), &w[0].values, &w[1].values))
        .collect();
    if let (Some(last), false) = (iterates.last(), bound.is_empty()) {
        checks.push(OrderingCheck::between(
            format!("K^{} <= limit", iterates.len() - 1),
            &last.values,
            bound,
        ));
    }
    checks
}
