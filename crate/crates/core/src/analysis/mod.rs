//! Asymptotic tail fits of computed fronts and the check against the
//! explicit front at `ε = 0.24, h = 0`.
//!
//! The regime (from [`crate::charroots::classify`]) fixes which expansion
//! is fitted; nothing is detected automatically.

mod az;
mod fit;

pub use az::{
    iterate_ordering, validate_az, AzExact, AzValidation, OrderingCheck, AZ_ERROR_WINDOW, AZ_ODE_TOL, AZ_SUP_TOL,
    ORDER_TOL,
};
pub use fit::{
    fit_minus_tail, fit_plus_tail, ExpansionFit, TailRates, TailSide, MAX_RMS_LOG, WINDOW_ONSET, WINDOW_SCALES,
};
