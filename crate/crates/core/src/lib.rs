//! Monotone traveling wavefronts of the delayed KPP-Fisher equation
//!
//! ```text
//! u_t = Δu + u(t, x) (1 - u(t - h, x))
//! ```
//!
//! A front `u = φ(ν·x + ct)` is computed in scaled time `s = t/c` as the
//! fixed point of an integral operator, reached by monotone iteration from
//! an explicit lower solution. With `ε = 1/c²` the profile solves
//!
//! ```text
//! ε φ''(t) - φ'(t) + φ(t) (1 - φ(t - h)) = 0,   φ(-∞) = 0, φ(+∞) = 1.
//! ```
//!
//! The crate is organised around the pipeline:
//!
//! * [`charroots`]: characteristic roots at both equilibria, critical curves
//!   `ε*(h)`, `ε#(h)`, constants `h₁`, `h₀`, and existence/regime
//!   classification.
//! * [`profiles`]: grid profiles with analytic tails and the explicit lower
//!   and upper solutions.
//! * [`operators`]: the operators `𝒜` (ε < 1/4) and `ℬ` (ε = 1/4), applied by
//!   an O(N) exponential recurrence, and the monotone iteration driver.
//! * [`analysis`]: asymptotic tail fits and the check against the explicit front at `ε = 0.24, h = 0`.
//! * [`pipeline`]: classification → roots → lower/upper → iteration → fits.
//!
//! The crate is `no_std` (it needs `alloc`); file formats and the CLI live
//! in the companion `wavefront` crate.

#![no_std]
// Newer toolchains resolve float methods inherently and flag the
// `num_traits::Float` imports that no_std needs as unused.
#![allow(unused_imports)]
#![allow(clippy::needless_range_loop)]
#![allow(clippy::manual_range_contains)]
// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

pub mod analysis;
pub mod charroots;
mod error;
pub mod math;
pub mod operators;
mod params;
pub mod pipeline;
pub mod profiles;

pub use error::{Error, Result};
pub use params::ModelParams;

pub mod prelude {
    pub use crate::analysis::{
        fit_minus_tail, fit_plus_tail, validate_az, AzExact, AzValidation, ExpansionFit, TailRates, TailSide,
    };
    pub use crate::charroots::{
        classify, critical_constants, eps_sharp, eps_star, negative_roots, positive_root, zero_state_roots,
        CriticalCurves, MinusRegime, PlusRegime, RegimeReport, RootData, Verdict,
    };
    pub use crate::operators::{
        apply, fixed_point_residuals, iterate, uniqueness_check, IterationOptions, IterationOutcome, IterationReport,
        OperatorConfig, OperatorKind, PanelRule,
    };
    pub use crate::pipeline::{solve, SolveOptions, SolveOutcome};
    pub use crate::profiles::{Grid, LeftTail, LowerUpperPair, Profile, RightTail};
    pub use crate::{Error, ModelParams, Result};
}
