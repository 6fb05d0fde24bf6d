use thiserror::Error;

/// Errors raised by the core structures.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Sampling from a structure with no entries or zero total weight.
    #[error("cannot sample from an empty {0}")]
    EmptySampler(&'static str),

    /// A vertex id that the structure does not know about.
    #[error("unknown vertex {0}")]
    UnknownVertex(u32),

    /// `alpha * log2(degree)` left the range a 53-bit mantissa can represent.
    #[error("weight overflow: degree {degree} with alpha {alpha}")]
    WeightOverflow {
        /// Degree whose weight overflowed.
        degree: u32,
        /// Attachment exponent.
        alpha: f64,
    },

    /// Invalid model parameters.
    #[error("invalid model spec: {0}")]
    InvalidSpec(&'static str),

    /// Requested edge count does not fit 32-bit vertex ids, or is behind the current state.
    #[error("edge target {target} out of range (current {current}, max {max})", max = crate::MAX_EDGES)]
    EdgeTarget {
        /// Requested target.
        target: u64,
        /// Current edge count.
        current: u64,
    },

    /// The maximum degree reached the tracked threshold range.
    #[error("max degree {max_degree} reached kmax {kmax}")]
    KmaxExceeded {
        /// Observed maximum degree.
        max_degree: u32,
        /// Number of tracked thresholds.
        kmax: usize,
    },

    /// An attachment degree that the threshold vector cannot have produced.
    #[error("inconsistent attachment degree {degree} at {edges} edges")]
    InconsistentDegree {
        /// Claimed old degree of the chosen vertex.
        degree: u32,
        /// Edge count before the attachment.
        edges: u64,
    },

    /// Argument outside the domain of a closed-form function.
    #[error("domain error: {0}")]
    Domain(&'static str),

    /// Too few usable points for a regression.
    #[error("need at least 3 points with positive weight, got {0}")]
    TooFewPoints(usize),
}
