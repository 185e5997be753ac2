//! Command-line and config-file parsing into a validated [`RunSpec`].

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::path::{Path, PathBuf};

use aloha_interference::{LinkModel, SystemConfig};
use clap::{Args, Parser, Subcommand};

use crate::error::HarnessError;

/// What a run produces.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Analytic,
    Simulate,
    Compare,
}

impl Mode {
    pub fn name(self) -> &'static str {
        match self {
            Mode::Analytic => "analytic",
            Mode::Simulate => "simulate",
            Mode::Compare => "compare",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
        }
    }
}

/// How analytic and simulated rows are compared.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PolicyChoice {
    /// `tight` when the frame holds at least 100 bursts, else `lower-bound`.
    Auto,
    Tight,
    LowerBound,
}

impl PolicyChoice {
    fn name(self) -> &'static str {
        match self {
            PolicyChoice::Auto => "auto",
            PolicyChoice::Tight => "tight",
            PolicyChoice::LowerBound => "lower-bound",
        }
    }
}

/// Normalized loads to evaluate.
#[derive(Debug, Clone, PartialEq)]
pub enum LoadGrid {
    /// `start:stop:step`, inclusive of `stop`.
    Range { start: f64, stop: f64, step: f64 },
    List(Vec<f64>),
}

impl LoadGrid {
    pub fn values(&self) -> Vec<f64> {
        match self {
            LoadGrid::List(v) => v.clone(),
            LoadGrid::Range { start, stop, step } => {
                let count = ((stop - start) / step + 1e-9).floor() as usize;
                (0..=count)
                    .map(|i| ((start + i as f64 * step) * 1e12).round() / 1e12)
                    .collect()
            }
        }
    }

    fn render(&self) -> String {
        match self {
            LoadGrid::Range { start, stop, step } => format!("{start}:{stop}:{step}"),
            LoadGrid::List(v) => v.iter().map(|g| g.to_string()).collect::<Vec<_>>().join(","),
        }
    }
}

/// Everything needed to reproduce one analytic, simulate or compare run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunSpec {
    pub mode: Mode,
    pub symbol_time_us: f64,
    pub frame_len: u64,
    pub burst_len: u64,
    pub copies: u32,
    pub modulation_order: u32,
    pub code_rate: f64,
    pub snr_db: f64,
    pub snir_dec_db: Option<f64>,
    pub loads: LoadGrid,
    pub rounds: u64,
    pub seed: u64,
    pub policy: PolicyChoice,
    pub format: Format,
    pub output: Option<PathBuf>,
    /// Worker threads for the simulator, 0 for one per core. Never changes results.
    pub workers: usize,
}

/// Link parameters for the `threshold` subcommand.
#[derive(Debug, Clone, PartialEq)]
pub struct ThresholdSpec {
    pub symbol_time_us: f64,
    pub burst_len: u64,
    pub modulation_order: u32,
    pub code_rate: f64,
    pub snr_db: f64,
    pub snir_dec_db: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Invocation {
    Run(RunSpec),
    Threshold(ThresholdSpec),
}

impl RunSpec {
    pub fn system_config(&self) -> Result<SystemConfig, HarnessError> {
        Ok(SystemConfig::with_symbol_time(
            self.symbol_time_us * 1e-6,
            self.frame_len,
            self.burst_len,
            self.copies,
        )?)
    }

    pub fn link_model(&self) -> Result<LinkModel, HarnessError> {
        link_model(self.modulation_order, self.code_rate, self.snr_db, self.snir_dec_db, self.burst_len)
    }

    /// Argument vector that parses back to this spec, program name excluded.
    pub fn to_args(&self) -> Vec<String> {
        let mut args = vec![
            self.mode.name().to_string(),
            "--ts".into(),
            format!("{}us", self.symbol_time_us),
            "--tf".into(),
            format!("{}sym", self.frame_len),
            "--tau".into(),
            format!("{}sym", self.burst_len),
            "--copies".into(),
            self.copies.to_string(),
            "--mod".into(),
            self.modulation_order.to_string(),
            "--rate".into(),
            self.code_rate.to_string(),
            "--snr-db".into(),
            self.snr_db.to_string(),
        ];
        if let Some(t) = self.snir_dec_db {
            args.extend(["--snir-dec-db".into(), t.to_string()]);
        }
        args.extend([
            "--loads".into(),
            self.loads.render(),
            "--rounds".into(),
            self.rounds.to_string(),
            "--seed".into(),
            self.seed.to_string(),
            "--policy".into(),
            self.policy.name().into(),
            "--format".into(),
            self.format.extension().into(),
            "--workers".into(),
            self.workers.to_string(),
        ]);
        if let Some(out) = &self.output {
            args.extend(["--out".into(), out.display().to_string()]);
        }
        args
    }
}

pub(crate) fn link_model(
    modulation_order: u32,
    code_rate: f64,
    snr_db: f64,
    snir_dec_db: Option<f64>,
    burst_len: u64,
) -> Result<LinkModel, HarnessError> {
    let link = LinkModel::new(modulation_order, code_rate, snr_db, burst_len)?;
    Ok(match snir_dec_db {
        Some(db) => link.with_snir_dec(aloha_interference::link::db_to_linear(db))?,
        None => link,
    })
}

#[derive(Debug, Parser)]
#[command(
    name = "aloha-interference",
    version,
    about = "Packet loss and throughput of asynchronous diversity Aloha: analytic model and Monte Carlo"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Analytic PLR and throughput curve (two copies per packet).
    Analytic(RawArgs),
    /// Monte Carlo PLR and throughput with standard errors.
    Simulate(RawArgs),
    /// Analytic against Monte Carlo, with a pass/fail verdict.
    Compare(RawArgs),
    /// Rate, decoding threshold and interference budget of a link.
    Threshold(RawArgs),
}

/// Flags are kept as strings and converted once, after the config file merge.
#[derive(Debug, Default, Args)]
struct RawArgs {
    /// TOML file with default values for any of the flags below.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Frame duration, e.g. `1e5us`, `100ms`, or `100000sym`.
    #[arg(long)]
    tf: Option<String>,
    /// Burst duration, same units as --tf.
    #[arg(long)]
    tau: Option<String>,
    /// Symbol time [default: 1us].
    #[arg(long)]
    ts: Option<String>,
    /// Copies per packet [default: 2].
    #[arg(long)]
    copies: Option<String>,
    /// Modulation order M [default: 4].
    #[arg(long = "mod")]
    modulation: Option<String>,
    /// Code rate, decimal or fraction [default: 1/2].
    #[arg(long)]
    rate: Option<String>,
    /// Signal-to-noise ratio in dB.
    #[arg(long = "snr-db", allow_hyphen_values = true)]
    snr_db: Option<String>,
    /// Override the Shannon-bound decoding threshold, in dB.
    #[arg(long = "snir-dec-db", allow_hyphen_values = true)]
    snir_dec_db: Option<String>,
    /// Loads as `start:stop:step` or a comma-separated list.
    #[arg(long)]
    loads: Option<String>,
    /// Frames per load point [default: 10000].
    #[arg(long)]
    rounds: Option<String>,
    /// Master seed [default: 1].
    #[arg(long)]
    seed: Option<String>,
    /// tight, lower-bound or auto [default: auto].
    #[arg(long)]
    policy: Option<String>,
    /// csv or json [default: csv].
    #[arg(long)]
    format: Option<String>,
    /// Output file; defaults to $ALOHA_OUT_DIR/<mode>.<format> or stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Simulator worker threads, 0 = all cores [default: 0].
    #[arg(long)]
    workers: Option<String>,
}

/// Merged flag and file values, keyed by long flag name.
struct Values(BTreeMap<&'static str, String>);

impl Values {
    fn get(&self, key: &str) -> Option<&str> {
        self.0.get(key).map(String::as_str)
    }

    fn required(&self, key: &'static str) -> Result<&str, HarnessError> {
        self.get(key)
            .ok_or_else(|| HarnessError::Usage(format!("missing required flag --{key}")))
    }

    fn number<T: std::str::FromStr>(&self, key: &'static str, default: T) -> Result<T, HarnessError> {
        match self.get(key) {
            None => Ok(default),
            Some(s) => s
                .trim()
                .parse()
                .map_err(|_| HarnessError::Usage(format!("--{key}: cannot parse {s:?}"))),
        }
    }

    fn float(&self, key: &'static str) -> Result<Option<f64>, HarnessError> {
        self.get(key)
            .map(|s| {
                s.trim()
                    .parse::<f64>()
                    .ok()
                    .filter(|v| v.is_finite())
                    .ok_or_else(|| HarnessError::Usage(format!("--{key}: {s:?} is not a number")))
            })
            .transpose()
    }
}

const KEYS: [&str; 15] = [
    "tf", "tau", "ts", "copies", "mod", "rate", "snr-db", "snir-dec-db", "loads", "rounds", "seed", "policy", "format",
    "out", "workers",
];

fn merge(raw: RawArgs, file: Option<&Path>) -> Result<Values, HarnessError> {
    let mut values = BTreeMap::new();
    if let Some(path) = file {
        let text = std::fs::read_to_string(path)
            .map_err(|e| HarnessError::Usage(format!("cannot read config file {}: {e}", path.display())))?;
        let table: toml::Table = text
            .parse()
            .map_err(|e| HarnessError::Usage(format!("config file {}: {e}", path.display())))?;
        for (key, value) in table {
            let known = KEYS
                .iter()
                .find(|k| **k == key || k.replace('-', "_") == key)
                .ok_or_else(|| HarnessError::Usage(format!("unknown key {key:?} in config file")))?;
            let text = match value {
                toml::Value::String(s) => s,
                toml::Value::Integer(i) => i.to_string(),
                toml::Value::Float(f) => f.to_string(),
                other => {
                    return Err(HarnessError::Usage(format!(
                        "config key {key:?}: unsupported value {other}"
                    )))
                }
            };
            values.insert(*known, text);
        }
    }
    let flags = [
        ("tf", raw.tf),
        ("tau", raw.tau),
        ("ts", raw.ts),
        ("copies", raw.copies),
        ("mod", raw.modulation),
        ("rate", raw.rate),
        ("snr-db", raw.snr_db),
        ("snir-dec-db", raw.snir_dec_db),
        ("loads", raw.loads),
        ("rounds", raw.rounds),
        ("seed", raw.seed),
        ("policy", raw.policy),
        ("format", raw.format),
        ("out", raw.out.map(|p| p.display().to_string())),
        ("workers", raw.workers),
    ];
    for (key, value) in flags {
        if let Some(v) = value {
            values.insert(key, v);
        }
    }
    Ok(Values(values))
}

/// Time in microseconds from `<number><unit>` with unit `s`, `ms`, `us` or
/// `ns`; a bare number is taken as microseconds.
fn parse_time_us(text: &str) -> Option<f64> {
    let t = text.trim();
    let (number, scale) = [("ms", 1e3), ("us", 1.0), ("µs", 1.0), ("ns", 1e-3), ("s", 1e6)]
        .iter()
        .find_map(|(unit, scale)| t.strip_suffix(unit).map(|n| (n, *scale)))
        .unwrap_or((t, 1.0));
    let v: f64 = number.trim().parse().ok()?;
    (v.is_finite() && v > 0.0).then_some(v * scale)
}

/// Symbol count of a duration flag, either `<n>sym` or a time.
fn parse_symbols(key: &'static str, text: &str, symbol_time_us: f64) -> Result<u64, HarnessError> {
    if let Some(n) = text.trim().strip_suffix("sym") {
        return n
            .trim()
            .parse::<u64>()
            .map_err(|_| HarnessError::Usage(format!("--{key}: {text:?} is not a whole number of symbols")));
    }
    let us = parse_time_us(text)
        .ok_or_else(|| HarnessError::Usage(format!("--{key}: cannot parse duration {text:?}")))?;
    let symbols = us / symbol_time_us;
    let whole = symbols.round();
    if (symbols - whole).abs() > 1e-9 * whole.max(1.0) || whole < 1.0 {
        return Err(HarnessError::Usage(format!(
            "--{key}: {text} is {symbols} symbols of {symbol_time_us}us, not a whole number"
        )));
    }
    Ok(whole as u64)
}

fn parse_code_rate(text: &str) -> Result<f64, HarnessError> {
    let bad = || HarnessError::Usage(format!("--rate: cannot parse {text:?}"));
    let v = match text.split_once('/') {
        Some((n, d)) => {
            let n: f64 = n.trim().parse().map_err(|_| bad())?;
            let d: f64 = d.trim().parse().map_err(|_| bad())?;
            n / d
        }
        None => text.trim().parse().map_err(|_| bad())?,
    };
    if !(v > 0.0 && v <= 1.0) {
        return Err(HarnessError::Usage(format!("--rate: {text} is outside (0, 1]")));
    }
    Ok(v)
}

fn parse_loads(text: &str) -> Result<LoadGrid, HarnessError> {
    let bad = || HarnessError::Usage(format!("--loads: cannot parse {text:?}"));
    let num = |s: &str| s.trim().parse::<f64>().ok().filter(|v| v.is_finite());
    let grid = if text.contains(':') {
        let parts: Vec<&str> = text.split(':').collect();
        let [start, stop, step] = parts[..] else {
            return Err(bad());
        };
        let (start, stop, step) = (num(start).ok_or_else(bad)?, num(stop).ok_or_else(bad)?, num(step).ok_or_else(bad)?);
        if !(step > 0.0) || stop < start {
            return Err(HarnessError::Usage(format!(
                "--loads: range {text} needs a positive step and stop >= start"
            )));
        }
        LoadGrid::Range { start, stop, step }
    } else {
        LoadGrid::List(text.split(',').map(|s| num(s).ok_or_else(bad)).collect::<Result<_, _>>()?)
    };
    let values = grid.values();
    if values.is_empty() {
        return Err(HarnessError::Usage("--loads: the load grid is empty".into()));
    }
    if let Some(g) = values.iter().find(|g| **g < 0.0) {
        return Err(HarnessError::Usage(format!("--loads: load {g} is negative")));
    }
    Ok(grid)
}

fn build_threshold(v: &Values) -> Result<ThresholdSpec, HarnessError> {
    let symbol_time_us = symbol_time(v)?;
    Ok(ThresholdSpec {
        symbol_time_us,
        burst_len: parse_symbols("tau", v.required("tau")?, symbol_time_us)?,
        modulation_order: v.number("mod", 4)?,
        code_rate: v.get("rate").map(parse_code_rate).transpose()?.unwrap_or(0.5),
        snr_db: v.float("snr-db")?.ok_or_else(|| HarnessError::Usage("missing required flag --snr-db".into()))?,
        snir_dec_db: v.float("snir-dec-db")?,
    })
}

fn symbol_time(v: &Values) -> Result<f64, HarnessError> {
    match v.get("ts") {
        None => Ok(1.0),
        Some(t) => parse_time_us(t).ok_or_else(|| HarnessError::Usage(format!("--ts: cannot parse duration {t:?}"))),
    }
}

fn build_run(mode: Mode, v: &Values) -> Result<RunSpec, HarnessError> {
    let symbol_time_us = symbol_time(v)?;
    let frame_len = parse_symbols("tf", v.required("tf")?, symbol_time_us)?;
    let burst_len = parse_symbols("tau", v.required("tau")?, symbol_time_us)?;
    let snr_db = v.float("snr-db")?.ok_or_else(|| HarnessError::Usage("missing required flag --snr-db".into()))?;
    let loads = parse_loads(v.required("loads")?)?;

    let policy = match v.get("policy").unwrap_or("auto") {
        "auto" => PolicyChoice::Auto,
        "tight" => PolicyChoice::Tight,
        "lower-bound" => PolicyChoice::LowerBound,
        other => return Err(HarnessError::Usage(format!("--policy: unknown policy {other:?}"))),
    };
    let format = match v.get("format").unwrap_or("csv") {
        "csv" => Format::Csv,
        "json" => Format::Json,
        other => return Err(HarnessError::Usage(format!("--format: unknown format {other:?}"))),
    };

    let spec = RunSpec {
        mode,
        symbol_time_us,
        frame_len,
        burst_len,
        copies: v.number("copies", 2)?,
        modulation_order: v.number("mod", 4)?,
        code_rate: v.get("rate").map(parse_code_rate).transpose()?.unwrap_or(0.5),
        snr_db,
        snir_dec_db: v.float("snir-dec-db")?,
        loads,
        rounds: v.number("rounds", 10_000)?,
        seed: v.number("seed", 1)?,
        policy,
        format,
        output: v.get("out").map(PathBuf::from),
        workers: v.number("workers", 0)?,
    };

    if spec.rounds == 0 && mode != Mode::Analytic {
        return Err(HarnessError::Usage("--rounds must be at least 1".into()));
    }
    let config = spec
        .system_config()
        .map_err(|e| HarnessError::Usage(format!("invalid frame geometry: {e}")))?;
    if mode != Mode::Simulate {
        config.check_analytic().map_err(|e| HarnessError::Usage(e.to_string()))?;
    }
    spec.link_model().map_err(|e| HarnessError::Usage(e.to_string()))?;
    Ok(spec)
}

/// Parses an argument vector (program name first). A `--config` file supplies
/// defaults that explicit flags override.
pub fn parse_spec<I, T>(argv: I) -> Result<Invocation, HarnessError>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = Cli::try_parse_from(argv)?;
    let (mode, raw) = match cli.command {
        Command::Analytic(raw) => (Some(Mode::Analytic), raw),
        Command::Simulate(raw) => (Some(Mode::Simulate), raw),
        Command::Compare(raw) => (Some(Mode::Compare), raw),
        Command::Threshold(raw) => (None, raw),
    };
    let file = raw.config.clone();
    let values = merge(raw, file.as_deref())?;
    match mode {
        Some(mode) => build_run(mode, &values).map(Invocation::Run),
        None => build_threshold(&values).map(Invocation::Threshold),
    }
}
