use rand::Rng;

use crate::analytic::SystemConfig;
use crate::error::{Error, Result};

/// Draws allowed per copy before placement gives up.
pub const REJECTION_LIMIT: u64 = 1_000_000;

/// Burst start times of one frame, stored packet by packet.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Frame {
    copies: usize,
    starts: Vec<u64>,
}

impl Frame {
    /// Builds a frame from packet-major starts, checking placement rules.
    pub fn from_starts(config: &SystemConfig, starts: Vec<u64>) -> Result<Self> {
        let copies = config.copies as usize;
        if !starts.len().is_multiple_of(copies) {
            return Err(Error::InvalidParameter(format!(
                "{} starts do not split into packets of {copies} copies",
                starts.len()
            )));
        }
        let last_start = config.frame_len - config.burst_len;
        if let Some(s) = starts.iter().find(|&&s| s > last_start) {
            return Err(Error::InvalidParameter(format!(
                "start {s} lets the burst run past the frame end"
            )));
        }
        for packet in starts.chunks(copies) {
            for (i, &a) in packet.iter().enumerate() {
                if packet[..i].iter().any(|&b| a.abs_diff(b) < config.burst_len) {
                    return Err(Error::InvalidParameter(format!(
                        "copies of one packet overlap: {packet:?}"
                    )));
                }
            }
        }
        Ok(Frame { copies, starts })
    }

    pub fn copies(&self) -> usize {
        self.copies
    }

    pub fn n_packets(&self) -> usize {
        self.starts.len() / self.copies
    }

    /// All starts, packet-major.
    pub fn starts(&self) -> &[u64] {
        &self.starts
    }

    pub fn packets(&self) -> impl Iterator<Item = &[u64]> {
        self.starts.chunks(self.copies)
    }
}

/// Places `n_tx` packets of `config.copies` mutually non-overlapping copies,
/// each start uniform over the frame.
///
/// The first copy is uniform; later copies are redrawn while they overlap an
/// earlier copy of the same packet.
pub fn draw_frame<R: Rng + ?Sized>(rng: &mut R, n_tx: u64, config: &SystemConfig) -> Result<Frame> {
    let copies = config.copies as usize;
    let tau = config.burst_len;
    if config.copies as u64 * tau > config.frame_len {
        return Err(Error::PlacementImpossible {
            copies: config.copies,
            burst_len: tau,
            frame_len: config.frame_len,
        });
    }
    let last_start = config.frame_len - tau;
    let mut starts = Vec::with_capacity(n_tx as usize * copies);
    for _ in 0..n_tx {
        let packet_base = starts.len();
        for _ in 0..copies {
            let mut draws = 0u64;
            let start = loop {
                if draws == REJECTION_LIMIT {
                    return Err(Error::RejectionLimit { limit: REJECTION_LIMIT });
                }
                draws += 1;
                let s = rng.random_range(0..=last_start);
                if starts[packet_base..].iter().all(|&t: &u64| s.abs_diff(t) >= tau) {
                    break s;
                }
            };
            starts.push(start);
        }
    }
    Ok(Frame { copies, starts })
}
