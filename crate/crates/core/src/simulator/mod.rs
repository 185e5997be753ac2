//! Monte Carlo frame simulation with threshold decoding.
//!
//! Unlike the analytic model it keeps frame-edge effects and supports any
//! number of copies per packet.

mod estimate;
mod frame;
mod overlap;

pub use estimate::{estimate_point, frame_rng, point_seed, sweep, SimResult, RNG_NAME};
pub use frame::{draw_frame, Frame, REJECTION_LIMIT};
pub use overlap::{decode_frame, pairwise_overlap, per_copy_interference};
