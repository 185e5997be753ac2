use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::analytic::{n_tx_for_load, SystemConfig};
use crate::error::{Error, Result};
use crate::link::LinkModel;

use super::frame::draw_frame;
use super::overlap::{decode_frame, per_copy_interference};

/// Generator used for every frame, recorded in run metadata.
pub const RNG_NAME: &str = "ChaCha8Rng/rand_chacha-0.9 seed_from_u64(point_seed), stream=frame_index";

/// Monte Carlo estimate at one load.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SimResult {
    pub load: f64,
    pub n_tx: u64,
    pub rounds: u64,
    pub lost_packets: u64,
    pub plr_mean: f64,
    pub plr_stderr: f64,
    pub throughput_mean: f64,
    pub seed: u64,
}

impl SimResult {
    /// Standard error of `throughput_mean`.
    pub fn throughput_stderr(&self) -> f64 {
        self.load * self.plr_stderr
    }
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Seed of the `index`-th point of a sweep: `splitmix64(master ^ splitmix64(index))`.
pub fn point_seed(master: u64, index: u64) -> u64 {
    splitmix64(master ^ splitmix64(index))
}

/// Generator for one frame: seeded by the point, one ChaCha stream per frame.
pub fn frame_rng(point_seed: u64, frame: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(point_seed);
    rng.set_stream(frame);
    rng
}

fn simulate_frame(config: &SystemConfig, link: &LinkModel, n_tx: u64, seed: u64, frame: u64) -> Result<u64> {
    let mut rng = frame_rng(seed, frame);
    let placed = draw_frame(&mut rng, n_tx, config)?;
    let interference = per_copy_interference(&placed, config);
    Ok(decode_frame(&interference, link.budget, placed.copies()))
}

#[cfg(feature = "parallel")]
fn lost_per_frame(config: &SystemConfig, link: &LinkModel, n_tx: u64, rounds: u64, seed: u64) -> Result<Vec<u64>> {
    use rayon::prelude::*;
    (0..rounds)
        .into_par_iter()
        .map(|f| simulate_frame(config, link, n_tx, seed, f))
        .collect()
}

#[cfg(not(feature = "parallel"))]
fn lost_per_frame(config: &SystemConfig, link: &LinkModel, n_tx: u64, rounds: u64, seed: u64) -> Result<Vec<u64>> {
    (0..rounds)
        .map(|f| simulate_frame(config, link, n_tx, seed, f))
        .collect()
}

/// Simulates `rounds` frames at `load`.
///
/// Frame `f` always uses stream `f` of a generator seeded with `seed`, and the
/// statistics are reduced in frame order, so the result does not depend on how
/// many worker threads run the frames.
pub fn estimate_point(config: &SystemConfig, link: &LinkModel, load: f64, rounds: u64, seed: u64) -> Result<SimResult> {
    if rounds == 0 {
        return Err(Error::InvalidParameter("at least one simulation round is required".into()));
    }
    if !(load >= 0.0) || !load.is_finite() {
        return Err(Error::InvalidParameter(format!("load must be nonnegative, got {load}")));
    }
    if link.burst_len != config.burst_len {
        return Err(Error::InvalidParameter(format!(
            "link budget was derived for {}-symbol bursts but the frame uses {}",
            link.burst_len, config.burst_len
        )));
    }
    let n_tx = n_tx_for_load(config, load);
    let lost = if n_tx == 0 {
        vec![0; rounds as usize]
    } else {
        lost_per_frame(config, link, n_tx, rounds, seed)?
    };

    let lost_packets: u64 = lost.iter().sum();
    let (plr_mean, plr_stderr) = if n_tx == 0 {
        (0.0, 0.0)
    } else {
        let per_frame = n_tx as f64;
        let mean = lost_packets as f64 / (rounds as f64 * per_frame);
        let stderr = if rounds > 1 {
            let ss: f64 = lost
                .iter()
                .map(|&l| {
                    let dev = l as f64 / per_frame - mean;
                    dev * dev
                })
                .sum();
            (ss / (rounds - 1) as f64).sqrt() / (rounds as f64).sqrt()
        } else {
            0.0
        };
        (mean, stderr)
    };

    Ok(SimResult {
        load,
        n_tx,
        rounds,
        lost_packets,
        plr_mean,
        plr_stderr,
        throughput_mean: load * (1.0 - plr_mean),
        seed,
    })
}

/// Runs [`estimate_point`] for every load, seeding point `i` with
/// [`point_seed`]`(seed, i)`.
pub fn sweep(config: &SystemConfig, link: &LinkModel, loads: &[f64], rounds: u64, seed: u64) -> Result<Vec<SimResult>> {
    loads
        .iter()
        .enumerate()
        .map(|(i, &load)| estimate_point(config, link, load, rounds, point_seed(seed, i as u64)))
        .collect()
}
