//! Interference that one disturbing packet (two copies) causes on a
//! considered copy placed away from the frame edges.
//!
//! Each outcome is classified by what the disturbing packet's first copy does
//! relative to the considered copy:
//!
//! * full overlap (the copies coincide),
//! * partial overlap,
//! * no overlap and far enough that the second copy keeps every outcome,
//! * no overlap but within one burst length, so the second copy's exclusion
//!   zone removes some outcomes.
//!
//! Counts are kept as exact integers over the common denominator
//! `A * B`, with `A = T_F' - tau' + 1` start positions for the first copy and
//! `B = A - (2 tau' - 1)` positions left for the second.

use serde::{Deserialize, Serialize};

use super::config::SystemConfig;
use crate::error::Result;

/// Per-group event counts indexed by the resulting interference `x'`
/// in `0..=tau'`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EventCounts {
    pub burst_len: u64,
    /// `A`, start positions of a single copy.
    pub first_positions: i128,
    /// `B`, start positions left for the second copy.
    pub second_positions: i128,
    pub full: Vec<i128>,
    pub partial: Vec<i128>,
    pub far: Vec<i128>,
    pub near: Vec<i128>,
}

impl EventCounts {
    pub fn compute(config: &SystemConfig) -> Result<Self> {
        config.check_analytic()?;
        let tau = config.burst_len as i128;
        let a = config.start_positions() as i128;
        let b = a - (2 * tau - 1);
        let len = config.burst_len as usize + 1;
        let top = config.burst_len as usize;

        let mut full = vec![0i128; len];
        let mut partial = vec![0i128; len];
        let mut far = vec![0i128; len];
        let mut near = vec![0i128; len];

        // Positions of the first copy that neither overlap nor crowd the CC.
        let far_positions = a - (4 * tau - 1);

        // First copy covers the CC; the second one cannot overlap it.
        full[top] = b;

        // First copy partial with overlap tau - k from either side; the second
        // copy has k positions left that overlap the CC, adding 1..=k symbols.
        for x in 1..top {
            let xi = x as i128;
            partial[x] += 2 * (b - (tau - xi));
            partial[x] += 2 * (xi - 1);
        }
        partial[top] += 2 * (tau - 1);

        far[top] = far_positions;
        for slot in far.iter_mut().take(top).skip(1) {
            *slot = 2 * far_positions;
        }
        far[0] = far_positions * (a - 2 * (2 * tau - 1));

        // First copy at gap z in 0..tau from the CC, on either side.
        near[top] = 2 * tau;
        for x in 1..top {
            let xi = x as i128;
            near[x] = 2 * xi * 2 + 2 * (tau - xi);
        }
        near[0] = (0..tau).map(|z| 2 * (a - (3 * tau + z - 1))).sum();

        Ok(EventCounts {
            burst_len: config.burst_len,
            first_positions: a,
            second_positions: b,
            full,
            partial,
            far,
            near,
        })
    }

    /// Common denominator `A * B` of every count.
    pub fn denominator(&self) -> i128 {
        self.first_positions * self.second_positions
    }

    /// Total count at interference `x`.
    pub fn at(&self, x: usize) -> i128 {
        self.full[x] + self.partial[x] + self.far[x] + self.near[x]
    }

    /// Sum of each group's counts, in the order full, partial, far, near.
    pub fn group_totals(&self) -> [i128; 4] {
        [
            self.full.iter().sum(),
            self.partial.iter().sum(),
            self.far.iter().sum(),
            self.near.iter().sum(),
        ]
    }

    pub fn probabilities(&self) -> Vec<f64> {
        let denom = self.denominator() as f64;
        (0..=self.burst_len as usize)
            .map(|x| self.at(x) as f64 / denom)
            .collect()
    }
}

/// Probability of each first-copy group, from the closed forms
/// `1/A`, `2(tau'-1)/A`, `(A-(4tau'-1))/A` and `2tau'/A`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GroupSums {
    pub full: f64,
    pub partial: f64,
    pub far: f64,
    pub near: f64,
}

impl GroupSums {
    pub fn total(&self) -> f64 {
        self.full + self.partial + self.far + self.near
    }
}

/// Closed-form numerators over `A` for the four first-copy groups.
pub fn group_numerators(config: &SystemConfig) -> Result<([i128; 4], i128)> {
    config.check_analytic()?;
    let tau = config.burst_len as i128;
    let a = config.start_positions() as i128;
    Ok(([1, 2 * (tau - 1), a - (4 * tau - 1), 2 * tau], a))
}

pub fn appendix_group_sums(config: &SystemConfig) -> Result<GroupSums> {
    let ([full, partial, far, near], a) = group_numerators(config)?;
    let a = a as f64;
    Ok(GroupSums {
        full: full as f64 / a,
        partial: partial as f64 / a,
        far: far as f64 / a,
        near: near as f64 / a,
    })
}
