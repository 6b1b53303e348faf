//! Numerical kernels shared by every module.

pub mod cubic;
pub mod fit;
pub mod linalg;
pub mod ode;
pub mod quad;
pub mod roots;

pub use cubic::cubic_roots;
pub use fit::{polyfit, FitResult, Monomial, Sample};
pub use linalg::{det3, null_direction, solve_dense, CMat3, NullDirection};
pub use ode::{integrate_ivp, integrate_to_grid, Dopri, OdeControl, OdeState, OdeStats};
pub use quad::{boole, quadrature, GaussLegendre};
pub use roots::{find_root, minimize_scalar, Bracket, Minimum};
