use std::path::PathBuf;
use std::time::Instant;

use aloha_interference::analytic::AnalyticModel;
use aloha_interference::link::{snir_threshold, spectral_rate};
use aloha_interference::simulator::{self, RNG_NAME};

use crate::error::HarnessError;
use crate::report::{
    render_csv, render_json, write_output, ComparisonReport, Metadata, Policy, Row,
};
use crate::run_spec::{link_model, parse_spec, Format, Invocation, Mode, RunSpec, ThresholdSpec};

/// Environment variable naming the directory outputs go to when `--out` is absent.
pub const OUTPUT_DIR_ENV: &str = "ALOHA_OUT_DIR";

/// Rows and, for compare runs, the verdict.
#[derive(Debug, Clone, PartialEq)]
pub struct RunOutput {
    pub rows: Vec<Row>,
    pub report: Option<ComparisonReport>,
    pub metadata: Metadata,
}

impl RunOutput {
    pub fn render(&self, format: Format) -> Result<String, HarnessError> {
        match format {
            Format::Csv => render_csv(&self.rows),
            Format::Json => render_json(&self.rows, &self.metadata, self.report.as_ref()),
        }
    }

    /// 0 unless a comparison failed.
    pub fn exit_code(&self) -> i32 {
        match &self.report {
            Some(r) if !r.passed => 1,
            _ => 0,
        }
    }
}

fn metadata(spec: &RunSpec) -> Result<Metadata, HarnessError> {
    let link = spec.link_model()?;
    // Worker count never changes results, so it is left out of the record.
    let rerun_args = RunSpec {
        workers: 0,
        output: None,
        ..spec.clone()
    }
    .to_args();
    Ok(Metadata {
        tool: env!("CARGO_PKG_NAME"),
        version: env!("CARGO_PKG_VERSION"),
        mode: spec.mode.name(),
        seed: spec.seed,
        rng: RNG_NAME,
        rounds: spec.rounds,
        symbol_time_us: spec.symbol_time_us,
        frame_len_symbols: spec.frame_len,
        burst_len_symbols: spec.burst_len,
        copies: spec.copies,
        modulation_order: spec.modulation_order,
        code_rate: spec.code_rate,
        snr_db: spec.snr_db,
        snir_dec_db: link.snir_dec_db(),
        x_dec: link.budget.max_interference(),
        n_tx_rounding: "round(G * T_F / tau), half away from zero",
        rerun_args,
    })
}

/// Computes a run's rows without writing anything.
pub fn execute(spec: &RunSpec) -> Result<RunOutput, HarnessError> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(spec.workers)
        .build()
        .map_err(|e| HarnessError::Usage(format!("cannot start {} workers: {e}", spec.workers)))?;
    pool.install(|| execute_inner(spec))
}

fn execute_inner(spec: &RunSpec) -> Result<RunOutput, HarnessError> {
    let config = spec.system_config()?;
    let link = spec.link_model()?;
    let loads = spec.loads.values();
    let metadata = metadata(spec)?;

    let analytic = || -> Result<_, HarnessError> { Ok(AnalyticModel::new(config)?.curve(&link, &loads)?) };
    let simulated =
        || -> Result<_, HarnessError> { Ok(simulator::sweep(&config, &link, &loads, spec.rounds, spec.seed)?) };

    let (rows, report) = match spec.mode {
        Mode::Analytic => (analytic()?.iter().map(Row::analytic).collect(), None),
        Mode::Simulate => (simulated()?.iter().map(Row::simulated).collect(), None),
        Mode::Compare => {
            let policy = Policy::resolve(spec.policy, &config);
            let curve = analytic()?;
            let sims = simulated()?;
            let rows: Vec<Row> = curve
                .iter()
                .zip(&sims)
                .map(|(a, s)| Row::compared(a, s, policy))
                .collect();
            let report = ComparisonReport::new(rows.clone(), policy);
            (rows, Some(report))
        }
    };
    Ok(RunOutput {
        rows,
        report,
        metadata,
    })
}

fn output_path(spec: &RunSpec) -> Option<PathBuf> {
    spec.output.clone().or_else(|| {
        std::env::var_os(OUTPUT_DIR_ENV)
            .filter(|d| !d.is_empty())
            .map(|dir| PathBuf::from(dir).join(format!("{}.{}", spec.mode.name(), spec.format.extension())))
    })
}

/// Executes a run, writes its artifact and returns the process exit code.
pub fn run(spec: &RunSpec) -> Result<i32, HarnessError> {
    let started = Instant::now();
    let out = execute(spec)?;
    let text = out.render(spec.format)?;
    let path = output_path(spec);
    write_output(&text, path.as_deref())?;

    let elapsed = started.elapsed().as_secs_f64();
    if let Some(p) = &path {
        eprintln!("wrote {}", p.display());
    }
    match &out.report {
        Some(r) => eprintln!(
            "{}: {} of {} loads within policy {} ({:.2}s)",
            if r.passed { "PASS" } else { "FAIL" },
            r.rows.iter().filter(|row| row.pass == Some(true)).count(),
            r.rows.len(),
            r.policy.name(),
            elapsed
        ),
        None => eprintln!("{} loads in {:.2}s", out.rows.len(), elapsed),
    }
    Ok(out.exit_code())
}

/// `threshold` subcommand output.
pub fn threshold_report(t: &ThresholdSpec) -> Result<String, HarnessError> {
    let rate = spectral_rate(t.modulation_order, t.code_rate)?;
    let shannon = snir_threshold(rate)?;
    let link = link_model(t.modulation_order, t.code_rate, t.snr_db, t.snir_dec_db, t.burst_len)?;
    let x_dec = link
        .budget
        .max_interference()
        .map_or_else(|| "undecodable".to_string(), |x| x.to_string());
    Ok(format!(
        "rate_bits_per_symbol={rate}\n\
         snir_dec_shannon_linear={}\n\
         snir_dec_shannon_db={}\n\
         snir_dec_db={}\n\
         snr_db={}\n\
         burst_len_symbols={}\n\
         x_dec={x_dec}\n",
        shannon.linear,
        shannon.db,
        link.snir_dec_db(),
        t.snr_db,
        t.burst_len,
    ))
}

/// Whole command line to exit code; errors are reported on stderr.
pub fn main_with_args<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let outcome = parse_spec(argv).and_then(|inv| match inv {
        Invocation::Run(spec) => run(&spec),
        Invocation::Threshold(t) => {
            write_output(&threshold_report(&t)?, None)?;
            Ok(0)
        }
    });
    match outcome {
        Ok(code) => code,
        Err(HarnessError::Cli(e)) => {
            let _ = e.print();
            HarnessError::Cli(e).exit_code()
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(mode: &str, extra: &[&str]) -> RunSpec {
        let mut argv = vec!["x", mode, "--tf", "2000sym", "--tau", "20sym", "--snr-db", "10", "--loads", "0.2:1.0:0.4"];
        argv.extend_from_slice(extra);
        match parse_spec(argv).unwrap() {
            Invocation::Run(s) => s,
            _ => unreachable!(),
        }
    }

    #[test]
    fn analytic_rows() {
        let out = execute(&spec("analytic", &[])).unwrap();
        assert_eq!(out.rows.len(), 3);
        assert!(out.rows.iter().all(|r| r.plr_sim.is_none() && r.plr_analytic.is_some()));
        assert_eq!(out.exit_code(), 0);
    }

    #[test]
    fn compare_passes_at_ratio_100() {
        let out = execute(&spec("compare", &["--rounds", "400"])).unwrap();
        let report = out.report.as_ref().unwrap();
        assert_eq!(report.policy, Policy::Tight);
        assert!(report.passed, "{:?}", out.rows);
        assert_eq!(out.exit_code(), 0);
    }

    #[test]
    fn tight_policy_fails_on_a_short_frame() {
        // 20 bursts per frame: edge effects push the gap past 0.02.
        let argv = [
            "x", "compare", "--tf", "400sym", "--tau", "20sym", "--snr-db", "10", "--loads", "0.6,0.8,0.9", "--rounds",
            "4000", "--policy", "tight",
        ];
        let Invocation::Run(s) = parse_spec(argv).unwrap() else { unreachable!() };
        let out = execute(&s).unwrap();
        assert!(!out.report.as_ref().unwrap().passed, "{:?}", out.rows);
        assert_eq!(out.exit_code(), 1);
    }

    #[test]
    fn json_carries_metadata() {
        let out = execute(&spec("compare", &["--rounds", "50", "--seed", "77"])).unwrap();
        let text = out.render(Format::Json).unwrap();
        let v: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(v["metadata"]["seed"], 77);
        assert_eq!(v["metadata"]["x_dec"], 18);
        assert!(v["metadata"]["rng"].as_str().unwrap().starts_with("ChaCha8"));
        assert_eq!(v["rows"].as_array().unwrap().len(), 3);
        assert!(v["verdict"].is_string());
    }

    #[test]
    fn threshold_output() {
        let t = ThresholdSpec {
            symbol_time_us: 1.0,
            burst_len: 1000,
            modulation_order: 4,
            code_rate: 0.5,
            snr_db: 10.0,
            snir_dec_db: None,
        };
        let text = threshold_report(&t).unwrap();
        assert!(text.contains("rate_bits_per_symbol=1\n"));
        assert!(text.contains("snir_dec_shannon_db=0\n"));
        assert!(text.contains("x_dec=900\n"));
        let low = threshold_report(&ThresholdSpec { snr_db: -1.0, ..t }).unwrap();
        assert!(low.contains("x_dec=undecodable"));
    }
}
