use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Frame geometry in whole symbols.
///
/// `symbol_time` only scales symbol counts back to seconds for reporting.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SystemConfig {
    pub symbol_time: f64,
    pub frame_len: u64,
    pub burst_len: u64,
    pub copies: u32,
}

impl SystemConfig {
    /// Geometry usable by the simulator: at least one copy, bursts no longer
    /// than the frame.
    pub fn new(frame_len: u64, burst_len: u64, copies: u32) -> Result<Self> {
        Self::with_symbol_time(1e-6, frame_len, burst_len, copies)
    }

    pub fn with_symbol_time(symbol_time: f64, frame_len: u64, burst_len: u64, copies: u32) -> Result<Self> {
        if burst_len == 0 {
            return Err(Error::InvalidParameter("burst length must be at least 1 symbol".into()));
        }
        if copies == 0 {
            return Err(Error::InvalidParameter("at least one copy per packet is required".into()));
        }
        if frame_len < burst_len {
            return Err(Error::InvalidParameter(format!(
                "frame length {frame_len} is shorter than burst length {burst_len}"
            )));
        }
        if !(symbol_time > 0.0) || !symbol_time.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "symbol time must be positive, got {symbol_time}"
            )));
        }
        Ok(SystemConfig {
            symbol_time,
            frame_len,
            burst_len,
            copies,
        })
    }

    /// Checks the extra constraints of the analytic model: two copies and a
    /// frame long enough for every event count to be nonnegative.
    pub fn check_analytic(&self) -> Result<()> {
        if self.copies != 2 {
            return Err(Error::UnsupportedDiversity(self.copies));
        }
        if self.frame_len + 2 < 5 * self.burst_len {
            return Err(Error::InvalidConfig {
                frame_len: self.frame_len,
                burst_len: self.burst_len,
            });
        }
        Ok(())
    }

    /// Number of distinct start positions of one burst, `T_F' - tau' + 1`.
    pub fn start_positions(&self) -> u64 {
        self.frame_len - self.burst_len + 1
    }

    pub fn frame_to_burst_ratio(&self) -> f64 {
        self.frame_len as f64 / self.burst_len as f64
    }

    pub(crate) fn same_geometry(&self, other: &SystemConfig) -> bool {
        self.frame_len == other.frame_len && self.burst_len == other.burst_len && self.copies == other.copies
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn analytic_bound_is_five_bursts_minus_two() {
        assert!(SystemConfig::new(8, 2, 2).unwrap().check_analytic().is_ok());
        assert_eq!(
            SystemConfig::new(7, 2, 2).unwrap().check_analytic(),
            Err(Error::InvalidConfig { frame_len: 7, burst_len: 2 })
        );
        assert!(SystemConfig::new(3, 1, 2).unwrap().check_analytic().is_ok());
    }

    #[test]
    fn analytic_needs_two_copies() {
        assert_eq!(
            SystemConfig::new(100, 10, 3).unwrap().check_analytic(),
            Err(Error::UnsupportedDiversity(3))
        );
    }

    #[test]
    fn rejects_degenerate_geometry() {
        assert!(SystemConfig::new(10, 0, 2).is_err());
        assert!(SystemConfig::new(10, 2, 0).is_err());
        assert!(SystemConfig::new(5, 6, 1).is_err());
    }
}
