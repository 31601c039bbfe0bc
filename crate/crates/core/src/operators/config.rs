use serde::{Deserialize, Serialize};

use crate::charroots::{zero_state_roots, RegimeReport, RootData};
use crate::{Error, ModelParams, Result};

pub const DEFAULT_TAIL_EPS: f64 = 1e-15;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum OperatorKind {
    /// `𝒜`, two exponential channels `λ < μ`.
    #[serde(rename = "A_OP")]
    A { lambda: f64, mu: f64 },
    /// `ℬ`, the double rate 2 at `ε = 1/4`.
    #[serde(rename = "B_OP")]
    B,
}

/// How `g` is interpolated on each grid panel before integrating against
/// the exact kernel.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PanelRule {
    /// `g` linear on the panel.
    Linear,
    /// `g ∈ span{1, e^{rate·s}}` on the panel. With `rate = λ₂` the right
    /// tail `1 - e^{λ₂t}` is integrated exactly, so iteration does not drift
    /// the front's phase.
    ExpFitted { rate: f64 },
    /// `g ∈ span{1, e^{rate·s}, s e^{rate·s}}` on three consecutive nodes;
    /// the analogue of `ExpFitted` for a double root, whose tail carries
    /// `t e^{λ₂t}`.
    ExpFittedDouble { rate: f64 },
}

impl PanelRule {
    /// The rule fitted to the front's right tail: three-point at a double
    /// root, two-point otherwise, linear when there is no negative root.
    pub fn for_roots(roots: &RootData) -> Self {
        match roots.negative {
            Some(n) if n.double => PanelRule::ExpFittedDouble { rate: n.lambda2 },
            Some(n) => PanelRule::ExpFitted { rate: n.lambda2 },
            None => PanelRule::Linear,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OperatorConfig {
    pub kind: OperatorKind,
    pub epsilon: f64,
    pub h: f64,
    #[serde(rename = "quad")]
    pub panel: PanelRule,
    pub tail_eps: f64,
}

impl OperatorConfig {
    /// `𝒜` for `ε < 1/4`.
    pub fn a_op(epsilon: f64, h: f64) -> Result<Self> {
        let p = ModelParams::from_epsilon(h, epsilon)?;
        let (lambda, mu) = zero_state_roots(&p)?;
        if !(mu > lambda) {
            return Err(Error::InvalidParameter {
                name: "epsilon",
                value: epsilon,
                reason: "operator A needs epsilon < 1/4; use operator B",
            });
        }
        Ok(Self {
            kind: OperatorKind::A { lambda, mu },
            epsilon,
            h,
            panel: PanelRule::Linear,
            tail_eps: DEFAULT_TAIL_EPS,
        })
    }

    /// `ℬ` (`ε = 1/4`).
    pub fn b_op(h: f64) -> Result<Self> {
        ModelParams::from_epsilon(h, 0.25)?;
        Ok(Self {
            kind: OperatorKind::B,
            epsilon: 0.25,
            h,
            panel: PanelRule::Linear,
            tail_eps: DEFAULT_TAIL_EPS,
        })
    }

    /// `ℬ` inside the `c = 2` band of the classification, `𝒜` otherwise.
    pub fn for_regime(report: &RegimeReport) -> Result<Self> {
        if report.minimal_speed() {
            Self::b_op(report.h)
        } else {
            Self::a_op(report.epsilon, report.h)
        }
    }

    pub fn with_panel(mut self, panel: PanelRule) -> Self {
        self.panel = panel;
        self
    }

    pub fn is_b(&self) -> bool {
        matches!(self.kind, OperatorKind::B)
    }

    /// Exponential rates of the kernel's channels.
    pub fn rates(&self) -> (f64, f64) {
        match self.kind {
            OperatorKind::A { lambda, mu } => (lambda, mu),
            OperatorKind::B => (2.0, 2.0),
        }
    }
}
