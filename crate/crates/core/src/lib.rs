//! Numerics for the small-gap Couette-Taylor problem: axisymmetric and
//! non-axisymmetric onset, bifurcation coefficients, and the steady and
//! time-dependent Ginzburg-Landau amplitude equation.

pub mod axisym;
pub mod dispersion;
pub mod error;
pub mod gldyn;
pub mod glsteady;
pub mod kernels;
pub mod landau;
pub mod regime;

pub use error::{CoreError, Result};
pub use regime::RegimeParams;
