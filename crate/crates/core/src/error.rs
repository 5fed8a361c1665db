use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{what} = {value} is out of range ({allowed})")]
    Range {
        what: &'static str,
        value: i128,
        allowed: &'static str,
    },

    #[error("polynomial {poly:#x} is reducible or does not have degree {degree}")]
    Reducible { poly: u64, degree: u32 },

    #[error("inverse of zero")]
    DivisionByZero,

    #[error("parameter must be nonzero")]
    ZeroParameter,

    #[error("enumeration of {needed} terms exceeds the budget of {budget}")]
    BudgetExceeded { needed: u128, budget: u128 },

    #[error("z^2 + z + {0:#x} is not irreducible (trace is zero)")]
    NotIrreducible(u32),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("matrix is not an isometry of the quadratic form")]
    NotIsometry,

    #[error("non-integral result in {0}")]
    NonIntegralResult(&'static str),
}

pub type Result<T> = std::result::Result<T, Error>;
