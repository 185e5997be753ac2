use crate::analytic::SystemConfig;
use crate::link::DecodeBudget;

use super::frame::Frame;

/// Symbols shared by two bursts of equal length.
#[inline]
pub fn pairwise_overlap(s_a: u64, s_b: u64, burst_len: u64) -> u64 {
    burst_len.saturating_sub(s_a.abs_diff(s_b))
}

/// Interfered symbols of every copy, in the frame's packet-major order.
///
/// Overlaps from every copy of every other packet are summed; a packet's own
/// copies never overlap. Starts are sorted once and each copy is compared only
/// with the following copies that begin less than one burst later.
pub fn per_copy_interference(frame: &Frame, config: &SystemConfig) -> Vec<u64> {
    let tau = config.burst_len;
    let starts = frame.starts();
    let copies = frame.copies();

    let mut order: Vec<u32> = (0..starts.len() as u32).collect();
    order.sort_unstable_by_key(|&i| (starts[i as usize], i));

    let mut interference = vec![0u64; starts.len()];
    for (pos, &i) in order.iter().enumerate() {
        let i = i as usize;
        let s_i = starts[i];
        for &j in &order[pos + 1..] {
            let j = j as usize;
            let gap = starts[j] - s_i;
            if gap >= tau {
                break;
            }
            if i / copies != j / copies {
                let shared = tau - gap;
                interference[i] += shared;
                interference[j] += shared;
            }
        }
    }
    interference
}

/// Packets whose every copy exceeds the budget.
pub fn decode_frame(interference: &[u64], budget: DecodeBudget, copies: usize) -> u64 {
    interference
        .chunks(copies)
        .filter(|packet| !packet.iter().any(|&x| budget.decodes(x)))
        .count() as u64
}
