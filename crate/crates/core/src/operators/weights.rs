use num_traits::Float;

use super::config::PanelRule;
use crate::math::{poly_exp_moment, solve3};

/// Below this `|rate·Δ|` the fitted basis is replaced by the linear one.
const FITTED_CUTOFF: f64 = 1e-8;

/// One-panel weights for the kernel `u^k e^{-ρu}` on `[0, Δ]`:
/// `∫₀^Δ u^k e^{-ρu} g(t_i + u) du ≈ left·g_i + right·g_{i+1}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct PanelWeights {
    pub left: f64,
    pub right: f64,
}

/// `∫₀^Δ u^k e^{-b u} du = Δ^{k+1} F_k(bΔ)`.
fn moment(k: u32, b: f64, step: f64) -> f64 {
    step.powi(k as i32 + 1) * poly_exp_moment(k, b * step)
}

pub(crate) fn panel_weights(k: u32, rho: f64, step: f64, rule: PanelRule) -> PanelWeights {
    let rule = match rule {
        PanelRule::ExpFittedDouble { rate } => PanelRule::ExpFitted { rate },
        other => other,
    };
    let total = moment(k, rho, step);
    let right = match rule {
        PanelRule::ExpFitted { rate } if (rate * step).abs() >= FITTED_CUTOFF => {
            // ℓ(u) = (e^{au} - 1)/(e^{aΔ} - 1)
            (moment(k, rho - rate, step) - total) / (rate * step).exp_m1()
        }
        _ => moment(k + 1, rho, step) / step,
    };
    PanelWeights {
        left: total - right,
        right,
    }
}

/// `(B₁(u), B₂(u))` for the basis `1, (e^{au} - 1)/a, (u e^{au} - B₁)/a`,
/// which tends to `1, u, u²/2` as `a → 0`.
fn double_basis(a: f64, u: f64) -> (f64, f64) {
    let x = a * u;
    if x.abs() > 0.5 {
        let b1 = x.exp_m1() / a;
        return (b1, (u * x.exp() - b1) / a);
    }
    // B₁ = u + Σ_{m≥2} a q_m,  B₂ = Σ_{m≥2} (m-1) q_m,  q_m = a^{m-2} u^m / m!
    let mut q = 0.5 * u * u;
    let (mut b1, mut b2) = (u + a * q, q);
    for m in 3..40u32 {
        q *= x / f64::from(m);
        b1 += a * q;
        b2 += f64::from(m - 1) * q;
        if q.abs() < 1e-18 * b2.abs() {
            break;
        }
    }
    (b1, b2)
}

/// `∫₀^Δ uᵏ e^{-ρu} (B₁, B₂)(u) du`.
fn double_moments(k: u32, rho: f64, a: f64, step: f64) -> (f64, f64) {
    if (a * step).abs() > 0.5 {
        let m1 = (moment(k, rho - a, step) - moment(k, rho, step)) / a;
        return (m1, (moment(k + 1, rho - a, step) - m1) / a);
    }
    // with r_m = a^{m-2}/m!: M₁ = F-moment_{k+1} + Σ_{m≥2} a r_m (…)_{k+m},
    // M₂ = Σ_{m≥2} (m-1) r_m (…)_{k+m}
    let mut m1 = moment(k + 1, rho, step);
    let mut m2 = 0.0;
    let mut r = 0.5;
    for m in 2..40u32 {
        if m > 2 {
            r *= a / f64::from(m);
        }
        let t = r * moment(k + m, rho, step);
        m1 += a * t;
        m2 += f64::from(m - 1) * t;
        if t.abs() <= 1e-18 * m2.abs() {
            break;
        }
    }
    (m1, m2)
}

/// Three-point weights on `[0, Δ]` for the kernel `uᵏ e^{-ρu}`, exact on
/// `span{1, e^{au}, u e^{au}}`. Nodes are `0, Δ, 2Δ`, or `-Δ, 0, Δ` when
/// `back` is set (the last panel of a grid).
pub(crate) fn double_weights(k: u32, rho: f64, step: f64, a: f64, back: bool) -> Option<[f64; 3]> {
    let first = if back { -step } else { 0.0 };
    let nodes = [first, first + step, first + 2.0 * step];
    let mut v = [[0.0; 3]; 3];
    for (j, &u) in nodes.iter().enumerate() {
        let (b1, b2) = double_basis(a, u);
        v[0][j] = 1.0;
        v[1][j] = b1 / step;
        v[2][j] = b2 / (step * step);
    }
    let (m1, m2) = double_moments(k, rho, a, step);
    solve3(v, [moment(k, rho, step), m1 / step, m2 / (step * step)])
}

/// Precomputed recurrence data for one operator on one grid.
///
/// A panel `[t_i, t_{i+1}]` contributes `fwd · (g_i, g_{i+1}, g_{i+2})`,
/// except the last one, which contributes `back · (g_{i-1}, g_i, g_{i+1})`.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Channel {
    pub decay: f64,
    pub fwd: [f64; 3],
    pub back: [f64; 3],
}

impl Channel {
    pub fn new(k: u32, rho: f64, step: f64, rule: PanelRule) -> Self {
        let decay = (-rho * step).exp();
        if let PanelRule::ExpFittedDouble { rate } = rule {
            if let (Some(fwd), Some(back)) = (
                double_weights(k, rho, step, rate, false),
                double_weights(k, rho, step, rate, true),
            ) {
                return Self { decay, fwd, back };
            }
        }
        let w = panel_weights(k, rho, step, rule);
        Self {
            decay,
            fwd: [w.left, w.right, 0.0],
            back: [0.0, w.left, w.right],
        }
    }

    /// Contribution of panel `i` of `f`.
    #[inline]
    pub fn panel(&self, f: &[f64], i: usize) -> f64 {
        if i + 2 < f.len() {
            self.fwd[0] * f[i] + self.fwd[1] * f[i + 1] + self.fwd[2] * f[i + 2]
        } else if i >= 1 {
            self.back[0] * f[i - 1] + self.back[1] * f[i] + self.back[2] * f[i + 1]
        } else {
            (self.back[0] + self.back[1]) * f[i] + self.back[2] * f[i + 1]
        }
    }
}
