use thiserror::Error;

/// Errors produced anywhere in the solver pipeline.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum RphError {
    #[error("parse error: {0}")]
    Parse(String),

    #[error("dimension error: {variables} variables but {polynomials} polynomials")]
    Dimension { variables: usize, polynomials: usize },

    #[error("invalid input: {0}")]
    Invalid(String),

    #[error("polynomial {index} has {terms} term(s) after merging; at least 2 are required")]
    Degenerate { index: usize, terms: usize },

    #[error("lifting is not generic: point {point} of polynomial {polynomial} ties the facet of candidate cell {pairs:?}")]
    DegenerateLifting {
        polynomial: usize,
        point: usize,
        pairs: Vec<(usize, usize)>,
    },

    #[error("integer lifting overflow: |{value}| exceeds the exact integer range")]
    Overflow { value: f64 },

    #[error("no generic random lifting found after {attempts} attempts")]
    GenericityFailure { attempts: usize },

    #[error("exponent matrix is singular")]
    SingularExponent,

    #[error("singular Jacobian")]
    SingularJacobian,

    #[error("homotopy exponent {value} is negative: cell and lifting disagree")]
    ConventionViolation { value: f64 },
}

pub type Result<T> = std::result::Result<T, RphError>;
