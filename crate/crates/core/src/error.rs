use std::fmt;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// A general-position violation found while validating a point set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Degeneracy {
    Collinear([usize; 3]),
    Cocircular([usize; 4]),
}

impl fmt::Display for Degeneracy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Degeneracy::Collinear([a, b, c]) => write!(f, "points {a}, {b}, {c} are collinear"),
            Degeneracy::Cocircular([a, b, c, d]) => {
                write!(f, "points {a}, {b}, {c}, {d} are cocircular")
            }
        }
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("degenerate triangle: the three points are collinear")]
    DegenerateTriangle,
    #[error("degenerate input: coincident points")]
    DegeneratePoints,
    #[error("segment endpoints do not lie on the circle")]
    NotAChord,
    #[error("similarity scale must be positive, got {0}")]
    InvalidScale(f64),
    #[error("point {0} has a non-finite coordinate")]
    NonFinite(usize),
    #[error("a point set needs at least 3 points, got {0}")]
    TooFewPoints(usize),
    #[error("points {0} and {1} coincide")]
    DuplicatePoint(usize, usize),
    #[error("general position violated: {0}")]
    GeneralPositionViolated(Degeneracy),
    #[error("invalid constraint edges: {0}")]
    InvalidConstraintEdges(String),
    #[error("invalid constraint: {0}")]
    InvalidConstraint(String),
    #[error("enumeration of {n} points exceeds the cap of {cap}")]
    EnumerationTooLarge { n: usize, cap: usize },
    #[error("triangulations are over different point sets")]
    MismatchedPointSets,
    #[error("site {0} is not strictly inside the circle")]
    SiteOutsideCircle(usize),
    #[error("score vectors belong to different metrics")]
    IncomparableScores,
    #[error("invalid triangulation: {0}")]
    InvalidTriangulation(String),
    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("invalid experiment spec: {0}")]
    InvalidSpec(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
