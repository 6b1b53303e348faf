use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CoreError {
    #[error("invalid bracket: f({lo}) = {f_lo} and f({hi}) = {f_hi} do not change sign")]
    InvalidBracket { lo: f64, hi: f64, f_lo: f64, f_hi: f64 },
    #[error("step size underflow at x = {x} (h = {h:e})")]
    StepUnderflow { x: f64, h: f64 },
    #[error("step budget of {0} exhausted")]
    TooManySteps(usize),
    #[error("non-finite value encountered: {0}")]
    NonFinite(String),
    #[error("minimum at interval boundary x = {x} (g = {fx})")]
    BoundaryMinimum { x: f64, fx: f64 },
    #[error("domain error: {0}")]
    Domain(String),
    #[error("tan pole: b1/2 within {dist:e} of an odd multiple of pi/2")]
    TanPole { dist: f64 },
    #[error("not found: {0}")]
    NotFound(String),
    #[error("singular system: {0}")]
    Singular(String),
    #[error("Newton iteration did not converge: {0}")]
    NoConvergence(String),
    #[error("eigenvalue {re} + {im}i is not real; symmetry violated")]
    SymmetryViolation { re: f64, im: f64 },
    #[error("fit box too large: relative residual {0:.3e}")]
    BoxTooLarge(f64),
    #[error("{0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, CoreError>;
