pub mod bessel;
pub mod eigensolver;
pub mod error;
pub mod harmonics;
pub mod harness;
pub mod perturbation;
pub mod quadrature;
pub mod special;
pub mod spectral;

pub use error::{Error, Result};
