use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("invalid rational literal {literal:?}: {reason}")]
    Rational { literal: String, reason: String },
    #[error("{path}: {reason}")]
    Field { path: String, reason: String },
    #[error("malformed problem file: {0}")]
    Json(String),
}

/// Failures of the exact Bezoutiant and symbol constructions.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BezoutError {
    /// Some density integrates to zero over `[0, a]`.
    #[error("density {index} has zero mass on [0, a]")]
    ZeroMass { index: usize },
    #[error("conj(alpha) + beta vanishes")]
    DegenerateChoice,
    #[error("endpoint a must be positive")]
    NonPositiveEndpoint,
    #[error("density {index} is the zero polynomial")]
    ZeroDensity { index: usize },
    #[error("degree of the first density ({q1}) is below the second ({q2})")]
    OrderViolation { q1: usize, q2: usize },
    /// Both exponent equalities `n1 = m2`, `m1 = n2` hold.
    #[error("exponents describe the coincidence case; the order formula does not apply")]
    CoincidenceCase,
    #[error("internal consistency: {0}")]
    InternalConsistency(String),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ZeroError {
    #[error("|F| on the contour stays below the threshold after {attempts} nudges")]
    BoundaryZero { attempts: usize },
    #[error("winding integral {value} is not within 0.1 of an integer")]
    NonIntegerWinding { value: f64 },
    #[error("cell of diameter {diameter:e} still holds {count} zeros at the subdivision floor")]
    ClusterUnresolved { diameter: f64, count: i64 },
    #[error("exp(a·|Im z|) overflows double precision on the search rectangle")]
    Overflow,
    #[error("empty search rectangle")]
    EmptyRect,
}
