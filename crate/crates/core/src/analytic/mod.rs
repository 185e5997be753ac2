//! Closed-form interference model for two copies per packet.

mod config;
mod curve;
mod events;
mod pmf;

pub use config::SystemConfig;
pub use curve::{analytic_curve, n_tx_for_load, AnalyticModel, CurvePoint};
pub use events::{appendix_group_sums, group_numerators, EventCounts, GroupSums};
pub use pmf::{
    convolve, interference_distribution, p_copy_decoded, p_packet_decoded, single_dp_pmf, InterferencePmf,
};
