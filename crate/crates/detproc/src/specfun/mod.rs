//! Special functions: Airy, Bessel J and I, Gamma, Hermite and Laguerre
//! polynomials, and the standard normal upper tail.
//!
//! Switch points between series and large-argument methods are exported as
//! constants so tests can probe both sides of each.

mod airy;
mod bessel;
mod gamma;
mod normal;
mod orthopoly;

pub use airy::{airy, Airy, AIRY_ASYMPTOTIC_MIN, AIRY_SERIES_MAX};
pub use bessel::{
    bessel_i, bessel_i_scaled, bessel_j, bessel_j_derivative, bessel_series_entire,
    I_ASYMPTOTIC_MIN, J_SERIES_MAX,
};
pub use gamma::{gamma, ln_gamma, rgamma};
pub use normal::{gauss_tail, normal_pdf, normal_quantile};
pub use orthopoly::{
    hermite_function, hermite_functions, laguerre_function, laguerre_functions, orthopoly,
    OrthoKind,
};

pub(crate) use bessel::{bessel_entire_neg, jv};

use crate::error::{Error, Result};

/// A function value with an estimate of its absolute error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpecFunResult {
    pub value: f64,
    pub abs_error_estimate: f64,
}

impl SpecFunResult {
    pub(crate) fn checked(value: f64, err: f64, what: &str) -> Result<Self> {
        if !value.is_finite() {
            return Err(Error::Overflow(format!("{what} is not finite here")));
        }
        Ok(SpecFunResult {
            value,
            abs_error_estimate: err.abs(),
        })
    }
}
