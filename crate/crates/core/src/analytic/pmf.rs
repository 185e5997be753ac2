use super::config::SystemConfig;
use super::events::EventCounts;
use crate::error::{Error, Result};
use crate::link::DecodeBudget;

/// Distribution of the aggregate interference, in symbols, that `dp_count`
/// disturbing packets cause on one considered copy.
///
/// A truncated pmf only carries indices `0..=truncated_at`; every carried value
/// equals the corresponding untruncated one exactly, the upper tail is dropped.
#[derive(Debug, Clone, PartialEq)]
pub struct InterferencePmf {
    config: SystemConfig,
    dp_count: u64,
    probs: Vec<f64>,
    truncated_at: Option<u64>,
}

impl InterferencePmf {
    /// No disturbing packets: all mass at zero interference.
    pub fn delta(config: SystemConfig) -> Self {
        InterferencePmf {
            config,
            dp_count: 0,
            probs: vec![1.0],
            truncated_at: None,
        }
    }

    /// Wraps raw probabilities for `dp_count` disturbing packets.
    pub fn from_probs(config: SystemConfig, dp_count: u64, probs: Vec<f64>) -> Result<Self> {
        if probs.is_empty() {
            return Err(Error::InvalidParameter("a pmf needs at least one entry".into()));
        }
        if let Some(p) = probs.iter().find(|p| !(**p >= 0.0) || !p.is_finite()) {
            return Err(Error::InvalidParameter(format!("pmf entry {p} is not a probability")));
        }
        let support = dp_count * config.burst_len;
        if probs.len() as u64 > support + 1 {
            return Err(Error::InvalidParameter(format!(
                "{} entries exceed the support 0..={support} of {dp_count} disturbing packets",
                probs.len()
            )));
        }
        Ok(InterferencePmf {
            config,
            dp_count,
            probs,
            truncated_at: None,
        })
    }

    pub fn config(&self) -> &SystemConfig {
        &self.config
    }

    pub fn dp_count(&self) -> u64 {
        self.dp_count
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn truncated_at(&self) -> Option<u64> {
        self.truncated_at
    }

    /// Largest interference the full distribution can take, `N * tau'`.
    pub fn max_support(&self) -> u64 {
        self.dp_count * self.config.burst_len
    }

    pub fn total_mass(&self) -> f64 {
        self.probs.iter().sum()
    }

    /// `Pr{interference <= x}`.
    pub fn cdf(&self, x: u64) -> Result<f64> {
        if let Some(t) = self.truncated_at {
            if t < x {
                return Err(Error::InsufficientSupport {
                    needed: x,
                    truncated_at: t,
                });
            }
        }
        let end = (x as usize).saturating_add(1).min(self.probs.len());
        Ok(self.probs[..end].iter().sum())
    }
}

/// Interference pmf of a single disturbing packet with two copies.
pub fn single_dp_pmf(config: &SystemConfig) -> Result<InterferencePmf> {
    let counts = EventCounts::compute(config)?;
    Ok(InterferencePmf {
        config: *config,
        dp_count: 1,
        probs: counts.probabilities(),
        truncated_at: None,
    })
}

/// Linear convolution of two interference pmfs, optionally keeping only the
/// indices `0..=trunc_len`.
pub fn convolve(a: &InterferencePmf, b: &InterferencePmf, trunc_len: Option<u64>) -> Result<InterferencePmf> {
    if !a.config.same_geometry(&b.config) {
        return Err(Error::MismatchedConfig);
    }
    let dp_count = a.dp_count + b.dp_count;
    let full_support = dp_count * a.config.burst_len;

    // Indices beyond a truncated operand's prefix would miss contributions.
    let mut last = full_support;
    for cap in [a.truncated_at, b.truncated_at, trunc_len].into_iter().flatten() {
        last = last.min(cap);
    }
    let natural = (a.probs.len() + b.probs.len() - 1) as u64;
    let out_len = (last + 1).min(natural) as usize;

    let probs = convolve_prefix(&a.probs, &b.probs, out_len);
    Ok(InterferencePmf {
        config: a.config,
        dp_count,
        probs,
        truncated_at: (last < full_support).then_some(last),
    })
}

/// First `out_len` entries of `a * b`.
///
/// Each output index is accumulated in the same order whatever `out_len` is,
/// so a shortened result is bit-identical to the prefix of the full one.
fn convolve_prefix(a: &[f64], b: &[f64], out_len: usize) -> Vec<f64> {
    (0..out_len)
        .map(|k| {
            let lo = k.saturating_sub(b.len() - 1);
            let hi = k.min(a.len() - 1);
            if lo > hi {
                return 0.0;
            }
            a[lo..=hi]
                .iter()
                .zip(b[k - hi..=k - lo].iter().rev())
                .fold(0.0, |acc, (x, y)| acc + x * y)
        })
        .collect()
}

/// Interference pmf of `n_dp` disturbing packets, built as a left fold of the
/// single-packet pmf.
pub fn interference_distribution(config: &SystemConfig, n_dp: u64, trunc_len: Option<u64>) -> Result<InterferencePmf> {
    let single = single_dp_pmf(config)?;
    fold_n(&single, n_dp, trunc_len)
}

pub(crate) fn fold_n(single: &InterferencePmf, n_dp: u64, trunc_len: Option<u64>) -> Result<InterferencePmf> {
    let mut acc = InterferencePmf::delta(single.config);
    for _ in 0..n_dp {
        acc = convolve(&acc, single, trunc_len)?;
    }
    Ok(acc)
}

/// Probability that a considered copy stays within the decoding budget.
pub fn p_copy_decoded(pmf: &InterferencePmf, budget: DecodeBudget) -> Result<f64> {
    match budget {
        DecodeBudget::Undecodable => Ok(0.0),
        DecodeBudget::MaxInterference(x_dec) => pmf.cdf(x_dec),
    }
}

/// Probability that at least one of a packet's two copies decodes.
pub fn p_packet_decoded(p_ccd: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&p_ccd) {
        return Err(Error::Domain(p_ccd));
    }
    let miss = 1.0 - p_ccd;
    Ok(1.0 - miss * miss)
}
