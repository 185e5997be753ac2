//! wasm-bindgen bindings for the static page in `www/`.
//!
//! Every exported function takes plain numbers and returns a flat
//! `Float64Array`, so the page needs no glue beyond the generated module.
//! Simulation runs single-threaded here.

use aloha_interference::analytic::{interference_distribution, AnalyticModel};
use aloha_interference::simulator::estimate_point;
use aloha_interference::{LinkModel, SystemConfig};
use wasm_bindgen::prelude::*;

/// Symbol counts above this make the page unresponsive.
const MAX_SUPPORT: u64 = 200_000;

fn analytic_config(frame_len: u32, burst_len: u32) -> Result<SystemConfig, String> {
    let config = SystemConfig::new(frame_len.into(), burst_len.into(), 2).map_err(|e| e.to_string())?;
    config.check_analytic().map_err(|e| e.to_string())?;
    Ok(config)
}

/// Probabilities of 0, 1, ... interfering symbols caused by `n_dp`
/// disturbing packets.
pub fn pmf(frame_len: u32, burst_len: u32, n_dp: u32) -> Result<Vec<f64>, String> {
    let config = analytic_config(frame_len, burst_len)?;
    if u64::from(n_dp) * u64::from(burst_len) > MAX_SUPPORT {
        return Err(format!("n_dp * tau' must stay below {MAX_SUPPORT}"));
    }
    let p = interference_distribution(&config, n_dp.into(), None).map_err(|e| e.to_string())?;
    Ok(p.probs().to_vec())
}

/// Packet loss rate at each load; throughput is `G * (1 - plr)`.
pub fn curve(frame_len: u32, burst_len: u32, snr_db: f64, loads: &[f64]) -> Result<Vec<f64>, String> {
    let config = analytic_config(frame_len, burst_len)?;
    let link = LinkModel::new(4, 0.5, snr_db, burst_len.into()).map_err(|e| e.to_string())?;
    let model = AnalyticModel::new(config).map_err(|e| e.to_string())?;
    let points = model.curve(&link, loads).map_err(|e| e.to_string())?;
    Ok(points.iter().map(|p| p.plr).collect())
}

/// `[plr_mean, plr_stderr, throughput_mean]` from `rounds` simulated frames.
pub fn simulate(
    frame_len: u32,
    burst_len: u32,
    copies: u32,
    snr_db: f64,
    load: f64,
    rounds: u32,
    seed: u32,
) -> Result<Vec<f64>, String> {
    let config = SystemConfig::new(frame_len.into(), burst_len.into(), copies).map_err(|e| e.to_string())?;
    let link = LinkModel::new(4, 0.5, snr_db, burst_len.into()).map_err(|e| e.to_string())?;
    let r = estimate_point(&config, &link, load, rounds.into(), seed.into()).map_err(|e| e.to_string())?;
    Ok(vec![r.plr_mean, r.plr_stderr, r.throughput_mean])
}

#[wasm_bindgen(js_name = interferencePmf)]
pub fn interference_pmf_js(frame_len: u32, burst_len: u32, n_dp: u32) -> Result<Vec<f64>, JsError> {
    pmf(frame_len, burst_len, n_dp).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = analyticPlr)]
pub fn analytic_plr_js(frame_len: u32, burst_len: u32, snr_db: f64, loads: Vec<f64>) -> Result<Vec<f64>, JsError> {
    curve(frame_len, burst_len, snr_db, &loads).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = simulatePoint)]
pub fn simulate_point_js(
    frame_len: u32,
    burst_len: u32,
    copies: u32,
    snr_db: f64,
    load: f64,
    rounds: u32,
    seed: u32,
) -> Result<Vec<f64>, JsError> {
    simulate(frame_len, burst_len, copies, snr_db, load, rounds, seed).map_err(|e| JsError::new(&e))
}
