//! Wave profiles on uniform grids and the explicit lower/upper solutions
//! that seed the monotone iteration.

mod analytic;
mod lower;
mod ordering;
mod profile;
mod upper;

pub use analytic::{differential_residual, sweep_residual, AnalyticProfile, Shifted, SweepStats};
pub use lower::{
    lower_critical, lower_critical_scaled, lower_noncritical, CriticalLower, NoncriticalLower, CRITICAL_A_FACTOR,
};
pub use ordering::{shift_to_order, LowerUpperPair, MAX_ORDER_SHIFT};
pub use profile::{Grid, LeftTail, Profile, RightTail, DEFAULT_DEPTH, DEFAULT_STEP, GRID_CLAMP};
pub use upper::{choose_r, upper_noncritical, NoncriticalUpper, UPPER_SWEEP_TOL};
