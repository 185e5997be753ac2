//! Result rows, comparison policies and CSV/JSON rendering.

use std::io::Write;
use std::path::Path;

use aloha_interference::{CurvePoint, SimResult, SystemConfig};
use serde::Serialize;

use crate::error::HarnessError;
use crate::run_spec::PolicyChoice;

/// Exact CSV header.
pub const CSV_HEADER: [&str; 9] = [
    "G",
    "n_tx",
    "plr_analytic",
    "thr_analytic",
    "plr_sim",
    "plr_stderr",
    "thr_sim",
    "abs_diff",
    "pass",
];

/// Frames holding at least this many bursts are compared with the tight policy
/// under `auto`.
pub const TIGHT_MIN_RATIO: f64 = 100.0;

/// Minimum PLR tolerance of the tight policy.
pub const TIGHT_ABS_TOL: f64 = 0.02;
/// Standard errors allowed by the tight policy.
pub const TIGHT_STDERR_MULT: f64 = 4.0;
/// Standard errors allowed by the lower-bound policy.
pub const LOWER_BOUND_STDERR_MULT: f64 = 2.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Policy {
    /// `|plr_analytic - plr_sim| <= max(0.02, 4 stderr)`.
    Tight,
    /// `thr_analytic <= thr_sim + 2 stderr(thr_sim)`.
    LowerBound,
}

impl Policy {
    pub fn resolve(choice: PolicyChoice, config: &SystemConfig) -> Policy {
        match choice {
            PolicyChoice::Tight => Policy::Tight,
            PolicyChoice::LowerBound => Policy::LowerBound,
            PolicyChoice::Auto if config.frame_to_burst_ratio() >= TIGHT_MIN_RATIO => Policy::Tight,
            PolicyChoice::Auto => Policy::LowerBound,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Policy::Tight => "tight",
            Policy::LowerBound => "lower-bound",
        }
    }

    pub fn describe(self) -> &'static str {
        match self {
            Policy::Tight => "|plr_analytic - plr_sim| <= max(0.02, 4*plr_stderr)",
            Policy::LowerBound => "thr_analytic <= thr_sim + 2*G*plr_stderr",
        }
    }

    pub fn accepts(self, analytic: &CurvePoint, sim: &SimResult) -> bool {
        match self {
            Policy::Tight => {
                let tol = TIGHT_ABS_TOL.max(TIGHT_STDERR_MULT * sim.plr_stderr);
                (analytic.plr - sim.plr_mean).abs() <= tol
            }
            Policy::LowerBound => {
                analytic.throughput <= sim.throughput_mean + LOWER_BOUND_STDERR_MULT * sim.throughput_stderr()
            }
        }
    }
}

/// One output line. Quantities a mode does not produce stay empty.
#[derive(Debug, Clone, PartialEq)]
pub struct Row {
    pub load: f64,
    pub n_tx: u64,
    pub plr_analytic: Option<f64>,
    pub thr_analytic: Option<f64>,
    pub plr_sim: Option<f64>,
    pub plr_stderr: Option<f64>,
    pub thr_sim: Option<f64>,
    pub abs_diff: Option<f64>,
    pub pass: Option<bool>,
}

impl Row {
    pub fn analytic(p: &CurvePoint) -> Row {
        Row {
            load: p.load,
            n_tx: p.n_tx,
            plr_analytic: Some(p.plr),
            thr_analytic: Some(p.throughput),
            plr_sim: None,
            plr_stderr: None,
            thr_sim: None,
            abs_diff: None,
            pass: None,
        }
    }

    pub fn simulated(s: &SimResult) -> Row {
        Row {
            load: s.load,
            n_tx: s.n_tx,
            plr_analytic: None,
            thr_analytic: None,
            plr_sim: Some(s.plr_mean),
            plr_stderr: Some(s.plr_stderr),
            thr_sim: Some(s.throughput_mean),
            abs_diff: None,
            pass: None,
        }
    }

    pub fn compared(a: &CurvePoint, s: &SimResult, policy: Policy) -> Row {
        // Difference of the rendered values, so the column is reproducible from the row.
        let diff = (round_sig(a.plr) - round_sig(s.plr_mean)).abs();
        Row {
            abs_diff: Some(diff),
            pass: Some(policy.accepts(a, s)),
            ..Row::analytic(a)
        }
        .with_sim(s)
    }

    fn with_sim(mut self, s: &SimResult) -> Row {
        self.plr_sim = Some(s.plr_mean);
        self.plr_stderr = Some(s.plr_stderr);
        self.thr_sim = Some(s.throughput_mean);
        self
    }

    fn fields(&self) -> [String; 9] {
        let f = |v: Option<f64>| v.map(format_sig).unwrap_or_default();
        [
            format_sig(self.load),
            self.n_tx.to_string(),
            f(self.plr_analytic),
            f(self.thr_analytic),
            f(self.plr_sim),
            f(self.plr_stderr),
            f(self.thr_sim),
            f(self.abs_diff),
            self.pass.map(|p| p.to_string()).unwrap_or_default(),
        ]
    }
}

/// Renders with 10 significant digits, trailing zeros dropped; exponent form
/// outside `1e-5..1e10`.
pub fn format_sig(v: f64) -> String {
    if v == 0.0 {
        return "0".into();
    }
    if !v.is_finite() {
        return v.to_string();
    }
    let sci = format!("{v:.9e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..10).contains(&exp) {
        let decimals = (9 - exp).max(0) as usize;
        trim_zeros(format!("{v:.decimals$}"))
    } else {
        format!("{}e{exp}", trim_zeros(mantissa.to_string()))
    }
}

fn trim_zeros(s: String) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

/// The value a reader of the rendered output sees.
pub fn round_sig(v: f64) -> f64 {
    format_sig(v).parse().unwrap_or(v)
}

pub fn render_csv(rows: &[Row]) -> Result<String, HarnessError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let encode = |e: csv::Error| HarnessError::Encode(e.to_string());
    w.write_record(CSV_HEADER).map_err(encode)?;
    for row in rows {
        w.write_record(row.fields()).map_err(encode)?;
    }
    let bytes = w.into_inner().map_err(|e| HarnessError::Encode(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| HarnessError::Encode(e.to_string()))
}

/// Everything needed to re-run a result: embedded in JSON output.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Metadata {
    pub tool: &'static str,
    pub version: &'static str,
    pub mode: &'static str,
    pub seed: u64,
    pub rng: &'static str,
    pub rounds: u64,
    pub symbol_time_us: f64,
    pub frame_len_symbols: u64,
    pub burst_len_symbols: u64,
    pub copies: u32,
    pub modulation_order: u32,
    pub code_rate: f64,
    pub snr_db: f64,
    pub snir_dec_db: f64,
    /// `null` when the link cannot decode even without interference.
    pub x_dec: Option<u64>,
    pub n_tx_rounding: &'static str,
    pub rerun_args: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PolicyInfo {
    pub name: &'static str,
    pub rule: &'static str,
}

/// Rows of a compare run with the overall verdict.
#[derive(Debug, Clone, PartialEq)]
pub struct ComparisonReport {
    pub rows: Vec<Row>,
    pub policy: Policy,
    pub passed: bool,
}

impl ComparisonReport {
    pub fn new(rows: Vec<Row>, policy: Policy) -> Self {
        let passed = rows.iter().all(|r| r.pass == Some(true));
        ComparisonReport { rows, policy, passed }
    }
}

#[derive(Serialize)]
struct JsonRow {
    #[serde(rename = "G")]
    load: f64,
    n_tx: u64,
    plr_analytic: Option<f64>,
    thr_analytic: Option<f64>,
    plr_sim: Option<f64>,
    plr_stderr: Option<f64>,
    thr_sim: Option<f64>,
    abs_diff: Option<f64>,
    pass: Option<bool>,
}

impl From<&Row> for JsonRow {
    fn from(r: &Row) -> Self {
        let f = |v: Option<f64>| v.map(round_sig);
        JsonRow {
            load: round_sig(r.load),
            n_tx: r.n_tx,
            plr_analytic: f(r.plr_analytic),
            thr_analytic: f(r.thr_analytic),
            plr_sim: f(r.plr_sim),
            plr_stderr: f(r.plr_stderr),
            thr_sim: f(r.thr_sim),
            abs_diff: f(r.abs_diff),
            pass: r.pass,
        }
    }
}

#[derive(Serialize)]
struct JsonDoc<'a> {
    metadata: &'a Metadata,
    policy: Option<PolicyInfo>,
    verdict: Option<&'static str>,
    rows: Vec<JsonRow>,
}

pub fn render_json(rows: &[Row], metadata: &Metadata, report: Option<&ComparisonReport>) -> Result<String, HarnessError> {
    let doc = JsonDoc {
        metadata,
        policy: report.map(|r| PolicyInfo {
            name: r.policy.name(),
            rule: r.policy.describe(),
        }),
        verdict: report.map(|r| if r.passed { "pass" } else { "fail" }),
        rows: rows.iter().map(JsonRow::from).collect(),
    };
    let mut text = serde_json::to_string_pretty(&doc).map_err(|e| HarnessError::Encode(e.to_string()))?;
    text.push('\n');
    Ok(text)
}

/// Writes rendered output to `path`, or to stdout when there is none.
pub fn write_output(text: &str, path: Option<&Path>) -> Result<(), HarnessError> {
    match path {
        Some(p) => {
            if let Some(parent) = p.parent().filter(|d| !d.as_os_str().is_empty()) {
                std::fs::create_dir_all(parent)?;
            }
            std::fs::write(p, text)?;
        }
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())?;
            out.flush()?;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn point(load: f64, plr: f64) -> CurvePoint {
        CurvePoint {
            load,
            n_tx: 10,
            p_ccd: 0.0,
            plr,
            throughput: load * (1.0 - plr),
        }
    }

    fn sim(load: f64, plr: f64, stderr: f64) -> SimResult {
        SimResult {
            load,
            n_tx: 10,
            rounds: 100,
            lost_packets: 0,
            plr_mean: plr,
            plr_stderr: stderr,
            throughput_mean: load * (1.0 - plr),
            seed: 0,
        }
    }

    #[test]
    fn sig_formatting() {
        assert_eq!(format_sig(0.0), "0");
        assert_eq!(format_sig(1.0), "1");
        assert_eq!(format_sig(0.1), "0.1");
        assert_eq!(format_sig(1.0 / 3.0), "0.3333333333");
        assert_eq!(format_sig(2.0 / 3.0 * 100.0), "66.66666667");
        assert_eq!(format_sig(0.000_012_345_678_912_3), "0.00001234567891");
        assert_eq!(format_sig(1.234_567_891_23e-7), "1.234567891e-7");
        assert_eq!(format_sig(123_456_789_012.0), "1.23456789e11");
        assert_eq!(format_sig(-0.25), "-0.25");
    }

    #[test]
    fn analytic_row_leaves_sim_columns_empty() {
        let csv = render_csv(&[Row::analytic(&point(0.5, 0.25))]).unwrap();
        assert_eq!(csv, "G,n_tx,plr_analytic,thr_analytic,plr_sim,plr_stderr,thr_sim,abs_diff,pass\n0.5,10,0.25,0.375,,,,,\n");
    }

    #[test]
    fn compared_row_diff_is_recomputable() {
        let a = point(0.7, 0.434_781_234_567);
        let s = sim(0.7, 0.431_003_987_654, 0.0006);
        let row = Row::compared(&a, &s, Policy::Tight);
        let f = row.fields();
        let plr_a: f64 = f[2].parse().unwrap();
        let plr_s: f64 = f[4].parse().unwrap();
        assert_eq!(f[7], format_sig((plr_a - plr_s).abs()));
        assert_eq!(f[8], "true");
    }

    #[test]
    fn policies() {
        let a = point(1.0, 0.70);
        assert!(Policy::Tight.accepts(&a, &sim(1.0, 0.685, 0.001)));
        assert!(!Policy::Tight.accepts(&a, &sim(1.0, 0.67, 0.001)));
        assert!(Policy::Tight.accepts(&a, &sim(1.0, 0.67, 0.008)));
        // analytic throughput 0.30 against simulated 0.33
        assert!(Policy::LowerBound.accepts(&a, &sim(1.0, 0.67, 0.001)));
        assert!(!Policy::LowerBound.accepts(&a, &sim(1.0, 0.72, 0.001)));
        assert!(Policy::LowerBound.accepts(&a, &sim(1.0, 0.702, 0.001)));
    }

    #[test]
    fn auto_policy_by_ratio() {
        let wide = SystemConfig::new(100_000, 1000, 2).unwrap();
        let narrow = SystemConfig::new(20_000, 1000, 2).unwrap();
        assert_eq!(Policy::resolve(PolicyChoice::Auto, &wide), Policy::Tight);
        assert_eq!(Policy::resolve(PolicyChoice::Auto, &narrow), Policy::LowerBound);
        assert_eq!(Policy::resolve(PolicyChoice::Tight, &narrow), Policy::Tight);
    }

    #[test]
    fn verdict_requires_every_row() {
        let a = point(1.0, 0.70);
        let good = Row::compared(&a, &sim(1.0, 0.70, 0.001), Policy::Tight);
        let bad = Row::compared(&a, &sim(1.0, 0.5, 0.001), Policy::Tight);
        assert!(ComparisonReport::new(vec![good.clone()], Policy::Tight).passed);
        assert!(!ComparisonReport::new(vec![good, bad], Policy::Tight).passed);
    }
}
