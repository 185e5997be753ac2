//! Decoding-threshold arithmetic.
//!
//! A burst is decodable while its SNIR stays at or above the Shannon-bound
//! threshold `2^R - 1`. With equal received powers the SNIR only depends on
//! how many symbols of the burst are overlapped by other bursts, so the
//! threshold collapses into an integer interference budget `x_dec`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Linear and logarithmic forms of the decoding threshold.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SnirThreshold {
    pub linear: f64,
    pub db: f64,
}

/// How much interference a burst tolerates before it can no longer be decoded.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum DecodeBudget {
    /// SNR alone is already below threshold.
    Undecodable,
    /// Largest number of interfered symbols that still decodes.
    MaxInterference(u64),
}

impl DecodeBudget {
    /// True when a copy that suffers `interference` symbols of overlap decodes.
    #[inline]
    pub fn decodes(self, interference: u64) -> bool {
        match self {
            DecodeBudget::Undecodable => false,
            DecodeBudget::MaxInterference(x_dec) => interference <= x_dec,
        }
    }

    pub fn max_interference(self) -> Option<u64> {
        match self {
            DecodeBudget::Undecodable => None,
            DecodeBudget::MaxInterference(x) => Some(x),
        }
    }
}

/// Spectral efficiency `R = R_C * log2(M)` in bits per symbol.
pub fn spectral_rate(modulation_order: u32, code_rate: f64) -> Result<f64> {
    if modulation_order < 2 {
        return Err(Error::InvalidParameter(format!(
            "modulation order must be at least 2, got {modulation_order}"
        )));
    }
    if !(code_rate > 0.0 && code_rate <= 1.0) {
        return Err(Error::InvalidParameter(format!(
            "code rate must lie in (0, 1], got {code_rate}"
        )));
    }
    Ok(code_rate * f64::from(modulation_order).log2())
}

/// Shannon-bound decoding threshold for a given rate.
pub fn snir_threshold(rate: f64) -> Result<SnirThreshold> {
    if !(rate > 0.0) || !rate.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "rate must be positive and finite, got {rate}"
        )));
    }
    let linear = rate.exp2() - 1.0;
    Ok(SnirThreshold {
        linear,
        db: linear_to_db(linear),
    })
}

/// SNIR of a burst of `burst_len` symbols with `x_symbols` interfered symbols.
///
/// `x_symbols` may exceed `burst_len` when several interferers stack up.
#[inline]
pub fn snir_at(x_symbols: u64, burst_len: u64, snr_linear: f64) -> f64 {
    let fraction = x_symbols as f64 / burst_len as f64;
    snr_linear / (fraction * snr_linear + 1.0)
}

/// Largest interference that keeps the SNIR at or above `snir_dec_linear`.
pub fn interference_budget(burst_len: u64, snr_linear: f64, snir_dec_linear: f64) -> DecodeBudget {
    debug_assert!(burst_len >= 1 && snr_linear > 0.0 && snir_dec_linear > 0.0);
    if snr_linear < snir_dec_linear {
        return DecodeBudget::Undecodable;
    }
    let estimate = (burst_len as f64 * (1.0 / snir_dec_linear - 1.0 / snr_linear)).floor();
    let mut x_dec = if estimate.is_finite() && estimate > 0.0 {
        estimate as u64
    } else {
        0
    };
    // Settle rounding at the boundary against the SNIR formula itself.
    while x_dec > 0 && snir_at(x_dec, burst_len, snr_linear) < snir_dec_linear {
        x_dec -= 1;
    }
    while snir_at(x_dec + 1, burst_len, snr_linear) >= snir_dec_linear {
        x_dec += 1;
    }
    DecodeBudget::MaxInterference(x_dec)
}

pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

pub fn linear_to_db(linear: f64) -> f64 {
    10.0 * linear.log10()
}

/// Modulation, coding and SNR of the link together with the budget they imply
/// for bursts of a given length.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LinkModel {
    pub modulation_order: u32,
    pub code_rate: f64,
    pub rate: f64,
    pub snr_linear: f64,
    pub snir_dec_linear: f64,
    pub burst_len: u64,
    pub budget: DecodeBudget,
}

impl LinkModel {
    /// Derives the threshold from the Shannon bound for `M`-ary modulation at
    /// code rate `code_rate`.
    pub fn new(modulation_order: u32, code_rate: f64, snr_db: f64, burst_len: u64) -> Result<Self> {
        let rate = spectral_rate(modulation_order, code_rate)?;
        let threshold = snir_threshold(rate)?;
        Self::assemble(
            modulation_order,
            code_rate,
            rate,
            db_to_linear(snr_db),
            threshold.linear,
            burst_len,
        )
    }

    /// Replaces the Shannon-bound threshold with an externally supplied one.
    pub fn with_snir_dec(self, snir_dec_linear: f64) -> Result<Self> {
        Self::assemble(
            self.modulation_order,
            self.code_rate,
            self.rate,
            self.snr_linear,
            snir_dec_linear,
            self.burst_len,
        )
    }

    fn assemble(
        modulation_order: u32,
        code_rate: f64,
        rate: f64,
        snr_linear: f64,
        snir_dec_linear: f64,
        burst_len: u64,
    ) -> Result<Self> {
        if burst_len == 0 {
            return Err(Error::InvalidParameter("burst length must be at least 1 symbol".into()));
        }
        if !(snr_linear > 0.0) || !snr_linear.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "SNR must be positive and finite, got {snr_linear}"
            )));
        }
        if !(snir_dec_linear > 0.0) || !snir_dec_linear.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "decoding threshold must be positive and finite, got {snir_dec_linear}"
            )));
        }
        Ok(LinkModel {
            modulation_order,
            code_rate,
            rate,
            snr_linear,
            snir_dec_linear,
            burst_len,
            budget: interference_budget(burst_len, snr_linear, snir_dec_linear),
        })
    }

    pub fn snr_db(&self) -> f64 {
        linear_to_db(self.snr_linear)
    }

    pub fn snir_dec_db(&self) -> f64 {
        linear_to_db(self.snir_dec_linear)
    }
}
