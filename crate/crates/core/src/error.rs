use thiserror::Error;

/// Errors raised by the numerical routines in this crate.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// Input violates a documented precondition.
    #[error("contract violation: {0}")]
    Contract(String),

    #[error("iteration did not converge within {iterations} sweeps (residual {residual:.3e})")]
    Convergence { iterations: usize, residual: f64 },

    /// Eigenvalues too close to evaluate a divided difference without derivatives.
    #[error("derivative of order {order} required at a confluent eigenvalue cluster")]
    DerivativeRequired { order: usize },

    #[error("singular Möbius denominator (condition estimate {condition:.3e})")]
    Pole { condition: f64 },

    #[error("boundary sample is not smooth (minimum eigenvalue gap {gap:.3e})")]
    NonSmoothBoundary { gap: f64 },

    #[error("collocation system is degenerate (condition estimate {condition:.3e})")]
    CapacityDegeneracy { condition: f64 },

    /// Point outside (or on) the domain of the conformal map.
    #[error("point {re:+.6e}{im:+.6e}i is not interior to the domain")]
    Domain { re: f64, im: f64 },

    /// An eigenvalue lies on or outside the boundary of the mapped domain.
    #[error("eigenvalue {re:+.6e}{im:+.6e}i is not interior to the numerical range")]
    SpectralDomain { re: f64, im: f64 },

    #[error("principal power undefined: eigenvalue {re:+.6e}{im:+.6e}i on a branch ray or at 0")]
    PrincipalBranch { re: f64, im: f64 },

    #[error("numerical instability: {0}")]
    Instability(String),

    #[error("parameter out of range: {0}")]
    Range(String),

    #[error("degenerate family: {0}")]
    DegenerateFamily(String),
}

impl Error {
    /// True for failures of the numerics (as opposed to bad input).
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::Convergence { .. }
                | Error::Pole { .. }
                | Error::NonSmoothBoundary { .. }
                | Error::CapacityDegeneracy { .. }
                | Error::PrincipalBranch { .. }
                | Error::Instability(_)
                | Error::DerivativeRequired { .. }
        )
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
