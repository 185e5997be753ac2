//! The closed-form single-packet pmf against exhaustive enumeration.
//!
//! The model assumes the considered copy sits away from the frame edges and
//! that the disturbing packet's second copy always loses exactly `2 tau - 1`
//! start positions to the first. Both hold exactly on a ring of
//! `A = T_F' - tau' + 1` start positions, so enumerating every ordered
//! placement of the two copies on that ring must reproduce the integer counts.

use aloha_interference::analytic::{
    appendix_group_sums, convolve, interference_distribution, single_dp_pmf, AnalyticModel, EventCounts,
    InterferencePmf,
};
use aloha_interference::link::LinkModel;
use aloha_interference::SystemConfig;
use proptest::prelude::*;

struct RingCounts {
    by_x: Vec<i128>,
    /// Indexed full, partial, far, near by the first copy's position.
    by_group: [i128; 4],
}

fn ring_distance(a: i64, b: i64, ring: i64) -> i64 {
    let d = (a - b).rem_euclid(ring);
    d.min(ring - d)
}

fn enumerate_ring(frame_len: u64, burst_len: u64) -> RingCounts {
    let tau = burst_len as i64;
    let ring = (frame_len - burst_len + 1) as i64;
    let overlap = |s: i64| (tau - ring_distance(s, 0, ring)).max(0);
    let mut by_x = vec![0i128; burst_len as usize + 1];
    let mut by_group = [0i128; 4];
    for first in 0..ring {
        let d = ring_distance(first, 0, ring);
        let group = match d {
            0 => 0,
            d if d < tau => 1,
            d if d < 2 * tau => 3,
            _ => 2,
        };
        for second in 0..ring {
            if ring_distance(first, second, ring) < tau {
                continue;
            }
            let x = overlap(first) + overlap(second);
            by_x[x as usize] += 1;
            by_group[group] += 1;
        }
    }
    RingCounts { by_x, by_group }
}

#[test]
fn closed_form_matches_ring_enumeration() {
    for tau in 1..=9u64 {
        for frame_len in [5 * tau - 2, 5 * tau, 7 * tau + 3, 12 * tau, 30 * tau + 1] {
            let config = SystemConfig::new(frame_len, tau, 2).unwrap();
            let counts = EventCounts::compute(&config).unwrap();
            let ring = enumerate_ring(frame_len, tau);
            let model: Vec<i128> = (0..=tau as usize).map(|x| counts.at(x)).collect();
            assert_eq!(model, ring.by_x, "T_F' = {frame_len}, tau' = {tau}");
            assert_eq!(counts.group_totals(), ring.by_group, "T_F' = {frame_len}, tau' = {tau}");
            assert_eq!(ring.by_x.iter().sum::<i128>(), counts.denominator());
        }
    }
}

#[test]
fn ring_oracle_reproduces_hand_values() {
    // A = 9, B = 6
    let ring = enumerate_ring(10, 2);
    assert_eq!(ring.by_x, vec![20, 20, 14]);
    let ring = enumerate_ring(10, 1);
    assert_eq!(ring.by_x, vec![72, 18]);
}

#[test]
fn normalization_over_parameter_grid() {
    for tau in [1u64, 2, 5, 10, 100] {
        for frame_len in [5 * tau - 2, 10 * tau, 100 * tau] {
            let p = single_dp_pmf(&SystemConfig::new(frame_len, tau, 2).unwrap()).unwrap();
            assert!((p.total_mass() - 1.0).abs() < 1e-9, "tau {tau} T_F {frame_len}");
            assert!(p.probs().iter().all(|&v| v >= 0.0));
            assert_eq!(p.probs().len() as u64, tau + 1);
        }
    }
}

#[test]
fn group_probabilities_match_closed_forms() {
    for tau in [1u64, 2, 5, 10, 100] {
        for frame_len in [5 * tau - 2, 10 * tau, 100 * tau] {
            let config = SystemConfig::new(frame_len, tau, 2).unwrap();
            let counts = EventCounts::compute(&config).unwrap();
            let denom = counts.denominator() as f64;
            let totals = counts.group_totals().map(|t| t as f64 / denom);
            let g = appendix_group_sums(&config).unwrap();
            for (got, want) in totals.iter().zip([g.full, g.partial, g.far, g.near]) {
                assert!((got - want).abs() < 1e-12);
            }
        }
    }
}

#[test]
fn untruncated_distribution_is_normalized() {
    let config = SystemConfig::new(2000, 20, 2).unwrap();
    for n in [1u64, 5, 30, 120] {
        let p = interference_distribution(&config, n, None).unwrap();
        assert_eq!(p.probs().len() as u64, n * 20 + 1);
        assert_eq!(p.truncated_at(), None);
        assert!((p.total_mass() - 1.0).abs() < 1e-9);
    }
}

#[test]
fn truncated_mass_never_exceeds_one() {
    let config = SystemConfig::new(2000, 20, 2).unwrap();
    let p = interference_distribution(&config, 60, Some(100)).unwrap();
    assert_eq!(p.truncated_at(), Some(100));
    assert!(p.total_mass() <= 1.0 + 1e-9);
}

#[test]
fn plr_nondecreasing_in_packets() {
    let config = SystemConfig::new(10_000, 100, 2).unwrap();
    let model = AnalyticModel::new(config).unwrap();
    for snr_db in [2.0, 10.0] {
        let link = LinkModel::new(4, 0.5, snr_db, 100).unwrap();
        let table = model.p_ccd_table(link.budget, 300).unwrap();
        for w in table.windows(2) {
            assert!(w[1] <= w[0], "p_ccd rose: {} -> {}", w[0], w[1]);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn cdf_prefix_nonincreasing_in_n(tau in 1u64..12, extra in 0u64..40, n in 0u64..25, x in 0u64..60) {
        let config = SystemConfig::new(5 * tau - 2 + extra, tau, 2).unwrap();
        let single = single_dp_pmf(&config).unwrap();
        let now = interference_distribution(&config, n, Some(x)).unwrap();
        let next = convolve(&now, &single, Some(x)).unwrap();
        prop_assert!(next.cdf(x).unwrap() <= now.cdf(x).unwrap() + 1e-15);
    }

    #[test]
    fn truncated_fold_is_prefix_exact(tau in 1u64..15, n in 1u64..30, cut in 0u64..200) {
        let config = SystemConfig::new(10 * tau, tau, 2).unwrap();
        let full = interference_distribution(&config, n, None).unwrap();
        let part = interference_distribution(&config, n, Some(cut)).unwrap();
        let len = part.probs().len();
        prop_assert_eq!(part.probs(), &full.probs()[..len]);
        let expected_len = (cut.min(n * tau) + 1) as usize;
        prop_assert_eq!(len, expected_len);
    }

    #[test]
    fn delta_is_a_two_sided_identity(tau in 1u64..10, n in 0u64..6) {
        let config = SystemConfig::new(10 * tau, tau, 2).unwrap();
        let p = interference_distribution(&config, n, None).unwrap();
        let delta = InterferencePmf::delta(config);
        let right = convolve(&p, &delta, None).unwrap();
        let left = convolve(&delta, &p, None).unwrap();
        prop_assert_eq!(right.probs(), p.probs());
        prop_assert_eq!(left.probs(), p.probs());
    }
}
