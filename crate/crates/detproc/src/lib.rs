//! Determinantal point processes arising from noncolliding diffusions.
//!
//! The crate covers static and space-time correlation kernels (sine, Airy,
//! Bessel and their finite-N versions), kernels of finite particle systems
//! started from a fixed configuration, Euler-Maruyama integration of the
//! underlying SDE systems, random-matrix samplers, Fredholm determinants on
//! Gauss-Legendre grids, configuration-space predicates and a Monte Carlo
//! validation layer that ties all of it together.

pub mod configspace;
pub mod error;
pub mod exttransition;
pub mod fredholm;
pub mod noneqkernels;
pub mod quadrature;
pub mod rng;
pub mod sampling;
pub mod sde;
pub mod specfun;
pub mod statickernels;
pub mod validate;

pub use error::{Error, Result};
