use thiserror::Error;

/// Errors produced by the model, the simulator and their parameter checks.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error(
        "invalid configuration: frame length {frame_len} is shorter than 5 * burst length - 2 \
         (burst length {burst_len}); the single-packet interference terms would be negative"
    )]
    InvalidConfig { frame_len: u64, burst_len: u64 },

    #[error("the analytic model supports exactly 2 copies per packet, got {0}")]
    UnsupportedDiversity(u32),

    #[error("cannot combine interference distributions built for different system configurations")]
    MismatchedConfig,

    #[error("pmf is truncated at {truncated_at} symbols but {needed} symbols are required")]
    InsufficientSupport { needed: u64, truncated_at: u64 },

    #[error("probability {0} is outside [0, 1]")]
    Domain(f64),

    #[error("{copies} non-overlapping copies of {burst_len} symbols cannot fit in a {frame_len}-symbol frame")]
    PlacementImpossible {
        copies: u32,
        burst_len: u64,
        frame_len: u64,
    },

    #[error("copy placement exceeded {limit} rejected draws; the configuration is near-degenerate")]
    RejectionLimit { limit: u64 },
}

pub type Result<T> = std::result::Result<T, Error>;
