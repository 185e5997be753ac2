use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::config::SystemConfig;
use super::pmf::{convolve, fold_n, p_copy_decoded, p_packet_decoded, single_dp_pmf, InterferencePmf};
use crate::error::{Error, Result};
use crate::link::{DecodeBudget, LinkModel};

/// Analytic packet loss and throughput at one load.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurvePoint {
    pub load: f64,
    pub n_tx: u64,
    pub p_ccd: f64,
    pub plr: f64,
    pub throughput: f64,
}

/// Packets per frame for a normalized load, rounded half away from zero.
pub fn n_tx_for_load(config: &SystemConfig, load: f64) -> u64 {
    debug_assert!(load >= 0.0);
    let packets = load.max(0.0) * config.frame_len as f64 / config.burst_len as f64;
    packets.round() as u64
}

/// Analytic model for one geometry. The single-packet pmf is computed once and
/// shared read-only across threads.
#[derive(Debug, Clone)]
pub struct AnalyticModel {
    single: Arc<InterferencePmf>,
}

impl AnalyticModel {
    pub fn new(config: SystemConfig) -> Result<Self> {
        Ok(AnalyticModel {
            single: Arc::new(single_dp_pmf(&config)?),
        })
    }

    pub fn config(&self) -> &SystemConfig {
        self.single.config()
    }

    pub fn single_dp(&self) -> &InterferencePmf {
        &self.single
    }

    pub fn distribution(&self, n_dp: u64, trunc_len: Option<u64>) -> Result<InterferencePmf> {
        fold_n(&self.single, n_dp, trunc_len)
    }

    /// `P_ccd` for every `N_tx` in `0..=max_n_tx`, walking the convolution chain
    /// once. Index 0 (no packets) is reported as 1.
    pub fn p_ccd_table(&self, budget: DecodeBudget, max_n_tx: u64) -> Result<Vec<f64>> {
        let mut table = Vec::with_capacity(max_n_tx as usize + 1);
        table.push(1.0);
        if max_n_tx == 0 {
            return Ok(table);
        }
        let x_dec = match budget {
            DecodeBudget::Undecodable => {
                table.resize(max_n_tx as usize + 1, 0.0);
                return Ok(table);
            }
            DecodeBudget::MaxInterference(x) => x,
        };
        let mut pmf = InterferencePmf::delta(*self.config());
        for n_tx in 1..=max_n_tx {
            if n_tx > 1 {
                pmf = convolve(&pmf, &self.single, Some(x_dec))?;
            }
            table.push(p_copy_decoded(&pmf, budget)?);
        }
        Ok(table)
    }

    pub fn curve(&self, link: &LinkModel, loads: &[f64]) -> Result<Vec<CurvePoint>> {
        let config = self.config();
        if link.burst_len != config.burst_len {
            return Err(Error::InvalidParameter(format!(
                "link budget was derived for {}-symbol bursts but the frame uses {}",
                link.burst_len, config.burst_len
            )));
        }
        if let Some(bad) = loads.iter().find(|g| !(**g >= 0.0) || !g.is_finite()) {
            return Err(Error::InvalidParameter(format!("load must be nonnegative, got {bad}")));
        }
        let n_tx: Vec<u64> = loads.iter().map(|&g| n_tx_for_load(config, g)).collect();
        let max_n = n_tx.iter().copied().max().unwrap_or(0);
        let table = self.p_ccd_table(link.budget, max_n)?;

        loads
            .iter()
            .zip(n_tx)
            .map(|(&load, n)| {
                if n == 0 {
                    return Ok(CurvePoint {
                        load,
                        n_tx: 0,
                        p_ccd: 1.0,
                        plr: 0.0,
                        throughput: 0.0,
                    });
                }
                let p_ccd = table[n as usize];
                let plr = 1.0 - p_packet_decoded(p_ccd)?;
                Ok(CurvePoint {
                    load,
                    n_tx: n,
                    p_ccd,
                    plr,
                    throughput: load * (1.0 - plr),
                })
            })
            .collect()
    }
}

/// Analytic PLR and throughput for each load.
pub fn analytic_curve(config: &SystemConfig, link: &LinkModel, loads: &[f64]) -> Result<Vec<CurvePoint>> {
    AnalyticModel::new(*config)?.curve(link, loads)
}
