//! The integral operators and the monotone iteration driver.
//!
//! With `g(s) = φ(s) φ(s - h)`:
//!
//! ```text
//! (𝒜φ)(t) = 1/(ε(μ-λ)) ∫_t^∞ (e^{λ(t-s)} - e^{μ(t-s)}) g(s) ds     ε < 1/4
//! (ℬφ)(t) = 4 ∫_t^∞ (s-t) e^{2(t-s)} g(s) ds                         ε = 1/4
//! ```
//!
//! Both invert `ε y'' - y' + y = g` with a positive kernel of unit mass, so
//! fixed points are fronts and the maps are order preserving.

mod apply;
mod config;
mod iterate;
mod residuals;
mod tail;
mod weights;

pub use apply::apply;
pub use config::{OperatorConfig, OperatorKind, PanelRule, DEFAULT_TAIL_EPS};
pub use iterate::{iterate, IterationOptions, IterationOutcome, IterationReport};
pub use residuals::{fixed_point_residuals, half_crossing, ode_residual, uniqueness_check};
