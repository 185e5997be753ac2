//! Packet loss and throughput of asynchronous diversity Aloha with threshold
//! decoding.
//!
//! Two independent routes to the same numbers:
//!
//! - [`analytic`]: the interference pmf one disturbing packet causes on a
//!   considered copy, composed by convolution over the other packets of the
//!   frame.
//! - [`simulator`]: Monte Carlo frames with explicit burst placement.
//!
//! [`link`] turns modulation, coding rate and SNR into the integer
//! interference budget both routes decode against.

pub mod analytic;
pub mod error;
pub mod link;
pub mod simulator;

pub use analytic::{AnalyticModel, CurvePoint, InterferencePmf, SystemConfig};
pub use error::{Error, Result};
pub use link::{DecodeBudget, LinkModel};
pub use simulator::{Frame, SimResult};
