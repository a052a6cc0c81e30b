use alloc::string::String;
use core::fmt;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// A 1-based time window `[from, to]` outside `[1, len]` or reversed.
    WindowOutOfRange { from: usize, to: usize, len: usize },
    DimensionMismatch { left: usize, right: usize },
    TooFewNodes { n: usize, min: usize },
    EmptySequence,
    /// Snapshot `t` (1-based) has a different node count than the first one.
    NodeCountMismatch { t: usize, expected: usize, found: usize },
    /// Adjacency entry that is not 0 or 1, or a non-symmetric pair.
    InvalidAdjacency { i: usize, j: usize },
    /// Probability entry outside `[0, 1]` (or NaN).
    ProbabilityOutOfRange { i: usize, j: usize, value: f64 },
    InvalidParameter { name: &'static str, value: f64 },
    /// Screening window too wide for the sequence: `2h > T`.
    WindowTooWide { h: usize, len: usize },
    EmptyNeighborhood { node: usize },
    UnknownScenario(String),
    /// Sequence length not divisible by the scenario's segment denominator.
    SegmentDivisibility { scenario: String, len: usize, divisor: usize },
    /// Two consecutive segments of a scenario produce the same matrix at this size.
    DegenerateScenario { scenario: String, segment: usize },
    /// Change-point location outside `[1, len]`.
    PointOutOfRange { point: usize, len: usize },
    Numeric(&'static str),
}

impl Error {
    pub fn is_numeric(&self) -> bool {
        matches!(self, Error::Numeric(_))
    }
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::WindowOutOfRange { from, to, len } => write!(
                f,
                "time window [{from}, {to}] is invalid for a sequence of length {len} (need 1 <= from <= to <= T)"
            ),
            Error::DimensionMismatch { left, right } => {
                write!(f, "matrix dimensions differ: {left} vs {right}")
            }
            Error::TooFewNodes { n, min } => {
                write!(f, "network has {n} nodes, at least {min} required")
            }
            Error::EmptySequence => write!(f, "adjacency sequence is empty"),
            Error::NodeCountMismatch { t, expected, found } => write!(
                f,
                "snapshot {t} has {found} nodes, expected {expected}"
            ),
            Error::InvalidAdjacency { i, j } => write!(
                f,
                "adjacency entry ({i}, {j}) is not a symmetric 0/1 value"
            ),
            Error::ProbabilityOutOfRange { i, j, value } => {
                write!(f, "probability entry ({i}, {j}) = {value} is outside [0, 1]")
            }
            Error::InvalidParameter { name, value } => {
                write!(f, "invalid value {value} for parameter {name}")
            }
            Error::WindowTooWide { h, len } => write!(
                f,
                "screening window h={h} violates 2h <= T (T={len})"
            ),
            Error::EmptyNeighborhood { node } => write!(f, "node {node} has an empty neighborhood"),
            Error::UnknownScenario(id) => write!(f, "unknown scenario or model id '{id}'"),
            Error::SegmentDivisibility { scenario, len, divisor } => write!(
                f,
                "scenario {scenario} needs T divisible by {divisor}, got T={len}"
            ),
            Error::DegenerateScenario { scenario, segment } => write!(
                f,
                "scenario {scenario}: segments {segment} and {} coincide at this network size",
                segment + 1
            ),
            Error::PointOutOfRange { point, len } => {
                write!(f, "change-point {point} is outside [1, {len}]")
            }
            Error::Numeric(what) => write!(f, "numeric failure: {what}"),
        }
    }
}

impl core::error::Error for Error {}
