use aloha_interference::analytic::{analytic_curve, n_tx_for_load};
use aloha_interference::link::{DecodeBudget, LinkModel};
use aloha_interference::simulator::{
    draw_frame, estimate_point, frame_rng, pairwise_overlap, per_copy_interference, sweep, Frame,
};
use aloha_interference::SystemConfig;

fn all_pairs(frame: &Frame, burst_len: u64) -> Vec<u64> {
    let s = frame.starts();
    let d = frame.copies();
    let mut out = vec![0; s.len()];
    for i in 0..s.len() {
        for j in 0..s.len() {
            if i / d != j / d {
                out[i] += pairwise_overlap(s[i], s[j], burst_len);
            }
        }
    }
    out
}

#[test]
fn sweep_line_matches_all_pairs() {
    let mut frames = 0;
    for copies in 1..=3u32 {
        let config = SystemConfig::new(5_000, 50, copies).unwrap();
        for load in [0.1, 1.0, 2.0] {
            let n_tx = n_tx_for_load(&config, load);
            for f in 0..40 {
                let mut rng = frame_rng(copies as u64 * 1000 + (load * 10.0) as u64, f);
                let frame = draw_frame(&mut rng, n_tx, &config).unwrap();
                assert_eq!(per_copy_interference(&frame, &config), all_pairs(&frame, 50));
                frames += 1;
            }
        }
    }
    assert_eq!(frames, 360);
}

#[test]
fn frames_respect_placement_rules() {
    let config = SystemConfig::new(3_000, 100, 3).unwrap();
    let mut rng = frame_rng(5, 0);
    let frame = draw_frame(&mut rng, 500, &config).unwrap();
    assert_eq!(frame.n_packets(), 500);
    for packet in frame.packets() {
        assert!(packet.iter().all(|&s| s <= 2_900));
        for i in 0..3 {
            for j in 0..i {
                assert!(packet[i].abs_diff(packet[j]) >= 100);
            }
        }
    }
}

#[test]
fn unslotted_aloha_throughput() {
    let config = SystemConfig::new(10_000, 100, 1).unwrap();
    // Noise-free link with a threshold above any one-symbol overlap.
    let link = LinkModel::new(4, 0.5, 120.0, 100).unwrap().with_snir_dec(1e3).unwrap();
    assert_eq!(link.budget, DecodeBudget::MaxInterference(0));
    let r = estimate_point(&config, &link, 0.5, 4_000, 11).unwrap();
    let classical = 0.5 * (-1.0f64).exp();
    assert!((r.throughput_mean - classical).abs() < 0.01, "{}", r.throughput_mean);
}

#[test]
fn analytic_is_a_lower_bound_on_short_frames() {
    let config = SystemConfig::new(2_000, 100, 2).unwrap();
    let link = LinkModel::new(4, 0.5, 10.0, 100).unwrap();
    let loads: Vec<f64> = (2..=12).map(|i| i as f64 / 10.0).collect();
    let sim = sweep(&config, &link, &loads, 3_000, 21).unwrap();
    let an = analytic_curve(&config, &link, &loads).unwrap();
    for (a, s) in an.iter().zip(&sim) {
        assert!(a.throughput <= s.throughput_mean + 2.0 * s.throughput_stderr(), "{a:?} {s:?}");
    }
}

#[test]
fn analytic_tracks_simulation_on_long_frames() {
    let config = SystemConfig::new(5_000, 50, 2).unwrap();
    let link = LinkModel::new(4, 0.5, 10.0, 50).unwrap();
    let loads = [0.3, 0.7, 1.1];
    let sim = sweep(&config, &link, &loads, 2_000, 4).unwrap();
    let an = analytic_curve(&config, &link, &loads).unwrap();
    for (a, s) in an.iter().zip(&sim) {
        assert_eq!(a.n_tx, s.n_tx);
        assert!((a.plr - s.plr_mean).abs() <= 0.02f64.max(4.0 * s.plr_stderr), "{a:?} {s:?}");
    }
}

#[test]
fn diversity_helps_at_low_load() {
    let link = LinkModel::new(4, 0.5, 10.0, 100).unwrap();
    let one = SystemConfig::new(10_000, 100, 1).unwrap();
    let two = SystemConfig::new(10_000, 100, 2).unwrap();
    let r1 = estimate_point(&one, &link, 0.3, 2_000, 1).unwrap();
    let r2 = estimate_point(&two, &link, 0.3, 2_000, 1).unwrap();
    assert!(r2.plr_mean < r1.plr_mean);
}
