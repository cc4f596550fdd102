use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Error)]
pub enum Error {
    /// Low-pass cutoff outside (0, rate/2).
    #[error("invalid cutoff {cutoff_hz} Hz for rate {rate_hz} Hz: need 0 < cutoff < rate/2")]
    InvalidCutoff { cutoff_hz: f64, rate_hz: f64 },

    /// Smoothing coefficient outside (0, 1].
    #[error("invalid smoothing coefficient {0}: need 0 < alpha <= 1")]
    InvalidAlpha(f64),

    /// Sample rate must be positive (and representable at ms resolution).
    #[error("invalid sample rate {0} Hz")]
    InvalidRate(f64),

    /// Two streams share no common time window.
    #[error("streams share no overlapping time window")]
    NoOverlap,

    /// Every aligned pair was excluded by the gap rule.
    #[error("all {pairs} aligned pairs exceeded the interpolation gap")]
    AllGapsExcluded { pairs: usize },

    /// Metrics requested over an empty residual.
    #[error("residual stream is empty")]
    EmptyResidual,

    /// A detector configuration invariant is violated.
    #[error("invalid detector config: {field}: {reason}")]
    InvalidConfig { field: &'static str, reason: String },

    /// A scenario specification invariant is violated.
    #[error("invalid scenario spec: {field}: {reason}")]
    InvalidSpec { field: &'static str, reason: String },

    /// A sensor model invariant is violated.
    #[error("invalid sensor model: {field}: {reason}")]
    InvalidModel { field: &'static str, reason: String },

    /// Two injected pickups overlap in time.
    #[error("pickups starting at {first_start_s} s and {second_start_s} s overlap")]
    OverlappingPickups {
        first_start_s: f64,
        second_start_s: f64,
    },

    /// Vehicle and torso timelines have different lengths.
    #[error("mismatched timelines: vehicle has {vehicle} nodes, torso has {torso}")]
    MismatchedTimelines { vehicle: usize, torso: usize },

    /// Sample timestamps must be strictly increasing (in-memory position).
    #[error("sample {index}: timestamp {t_ms} ms does not increase over the previous sample")]
    NonMonotonicSample { index: usize, t_ms: i64 },

    /// A sample component is NaN or infinite (in-memory position).
    #[error("sample {index}: non-finite component")]
    NonFiniteSample { index: usize },

    /// Malformed content in a text file (1-based line number).
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    /// File timestamps must be strictly increasing (1-based line number).
    #[error("line {line}: timestamp {t_ms} ms does not increase over the previous line")]
    NonMonotonicLine { line: usize, t_ms: i64 },

    /// A component in a file exceeds the plausibility bound.
    #[error("line {line}: component {value} exceeds the +/-{limit} G plausibility bound")]
    OutOfRangeValue { line: usize, value: f64, limit: f64 },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
