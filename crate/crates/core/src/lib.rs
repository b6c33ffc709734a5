//! Second-kind boundary integral equations for 2-D exterior Helmholtz
//! scattering, discretized by Kress-quadrature Nystrom and piecewise-polynomial
//! Galerkin methods, with the unit-disk spectrum as a closed-form reference.
pub mod dense;
pub mod disk_oracle;
pub mod error;
pub mod galerkin;
pub mod geometry;
pub mod kernels;
pub mod nystrom;
pub mod quadrature;
pub mod scattering;
pub mod solver;
pub mod specfun;
pub mod trig;
pub use error::{HbieError, Result};
