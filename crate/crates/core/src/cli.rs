//! Command-line front end: flag and JSON-config parsing, experiment dispatch,
//! and CSV/manifest output.
//!
//! Each command writes `<name>.csv` and `<name>.manifest.json` into `--out`.
//! The manifest records the fully resolved scenario under `"scenario"`, so
//! `--config <manifest>` reruns the experiment and reproduces the CSV byte for
//! byte.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{Instant, SystemTime, UNIX_EPOCH};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::channel::{alpha_from_db, ReflectionAlphabet, SystemConfig};
use crate::error::Error;
use crate::estimation::BoundForm;
use crate::experiments::{
    run_lar_convergence, run_rate_region, run_sum_rate_sweep, Experiment, GrowDim, LarGrid,
    LarTable, ModelOptions, RegionTable, Scenario, SumRateTable, Workers, DEFAULT_TRIALS,
    D_VERTEX_NOTE, PAPER_SCALE_TRIALS,
};
use crate::numerics::C64;
use crate::rates::LarConstant;
use crate::receiver::{DecodingOrder, MrsSnrConvention, ReceiverOptions};

/// Environment variable consulted for the seed when neither a flag nor the
/// config file sets one.
pub const SEED_ENV: &str = "MRS_LAB_SEED";

const LAR_DEFAULT_TRIALS: usize = 100;

#[derive(Debug, Parser)]
#[command(
    name = "mrs-lab",
    version,
    about = "Achievable-rate Monte Carlo for MRS MIMO links"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Sum rate, legacy-alone rate, MRS rates, estimated-CSI bound and LAR across SNR.
    SumRate(CommonArgs),
    /// Vertices of the averaged K = 1 rate region at each SNR.
    RateRegion(CommonArgs),
    /// Exact sum rate against its large-array limit along a growing dimension.
    Lar(LarArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum OrderArg {
    ColumnNorm,
    GreedySinr,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MrsSnrArg {
    Literal,
    MatchedFilter,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LarConstantArg {
    Limit,
    Printed,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BoundFormArg {
    Consistent,
    Printed,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GrowArg {
    Nr,
    Nt,
}

#[derive(Debug, Clone, Default, Args)]
pub struct CommonArgs {
    /// Legacy transmit antennas.
    #[arg(long)]
    pub nt: Option<usize>,
    /// Receive antennas.
    #[arg(long)]
    pub nr: Option<usize>,
    /// MRS antennas.
    #[arg(long = "K")]
    pub k: Option<usize>,
    /// Keyhole magnitude 20·log10|α|; `-inf` switches the MRS path off.
    #[arg(long, allow_hyphen_values = true)]
    pub alpha_db: Option<f64>,
    /// Keyhole phase in degrees.
    #[arg(long, allow_hyphen_values = true)]
    pub alpha_phase_deg: Option<f64>,
    /// SNR grid in dB: `start:step:stop` or a comma list.
    #[arg(long, allow_hyphen_values = true)]
    pub snr_db: Option<String>,
    /// Noise variance.
    #[arg(long)]
    pub sigma2: Option<f64>,
    /// Legacy pilot length (power of two, at least nt).
    #[arg(long)]
    pub m0: Option<usize>,
    /// MRS pilot repetitions (power of two, at least K + 1).
    #[arg(long)]
    pub m1: Option<usize>,
    /// Coherence interval in samples.
    #[arg(long = "N")]
    pub coherence_len: Option<usize>,
    #[arg(long)]
    pub trials: Option<usize>,
    /// Use the full-scale trial count unless --trials is given.
    #[arg(long)]
    pub paper_scale: bool,
    #[arg(long)]
    pub seed: Option<u64>,
    /// `auto` or a thread count.
    #[arg(long)]
    pub workers: Option<String>,
    /// JSON scenario, or a manifest written by an earlier run.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Output directory.
    #[arg(long, default_value = ".")]
    pub out: PathBuf,
    #[arg(long, value_enum)]
    pub decoding_order: Option<OrderArg>,
    #[arg(long, value_enum)]
    pub mrs_snr: Option<MrsSnrArg>,
    #[arg(long, value_enum)]
    pub lar_constant: Option<LarConstantArg>,
    #[arg(long, value_enum)]
    pub bound_form: Option<BoundFormArg>,
    /// Reflection alphabet size M for M-ary polyphase; continuous phase if absent.
    #[arg(long)]
    pub polyphase: Option<u32>,
}

#[derive(Debug, Clone, Args)]
pub struct LarArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// Dimension that grows.
    #[arg(long, value_enum)]
    pub grow: Option<GrowArg>,
    /// Comma-separated sizes of the growing dimension.
    #[arg(long)]
    pub grid: Option<String>,
}

/// Scenario as read from or written to JSON. Every field is optional on
/// input; the resolved form written into manifests has all of them set.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioFile {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub experiment: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub nt: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub nr: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha_db: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha_phase_deg: Option<f64>,
    /// Exact keyhole factor; takes precedence over the dB form when both appear.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha_re: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha_im: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sigma2: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub m0: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub m1: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub coherence_len: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub snr_grid_db: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trials: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub workers: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub decoding_order: Option<OrderArg>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mrs_snr: Option<MrsSnrArg>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lar_constant: Option<LarConstantArg>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bound_form: Option<BoundFormArg>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub polyphase: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub grow: Option<GrowArg>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub grid: Option<Vec<usize>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OutputDigest {
    pub file: String,
    /// SHA-256 over `"blob <len>\0"` followed by the file bytes.
    pub sha256: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub tool: String,
    pub version: String,
    pub command: String,
    pub scenario: ScenarioFile,
    pub seed: u64,
    pub started_unix_s: u64,
    pub wall_clock_s: f64,
    pub outputs: Vec<OutputDigest>,
    pub notes: Vec<String>,
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Run(#[from] Error),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Run(Error::Input(_) | Error::Config(_) | Error::Size(_)) => 2,
            CliError::Run(Error::Accuracy { .. }) => 3,
            CliError::Run(Error::Internal(_)) | CliError::Io { .. } => 1,
        }
    }
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

/// Parses `start:step:stop` (inclusive) or `a,b,c`.
pub fn parse_snr_grid(spec: &str) -> Result<Vec<f64>, CliError> {
    let num = |s: &str| -> Result<f64, CliError> {
        let v: f64 = s
            .trim()
            .parse()
            .map_err(|_| usage(format!("invalid SNR value {s:?}")))?;
        if v.is_finite() {
            Ok(v)
        } else {
            Err(usage(format!("SNR value {s:?} is not finite")))
        }
    };
    let parts: Vec<&str> = spec.split(':').collect();
    match parts.len() {
        1 => spec.split(',').map(num).collect(),
        3 => {
            let (start, step, stop) = (num(parts[0])?, num(parts[1])?, num(parts[2])?);
            if !(step > 0.0) || stop < start {
                return Err(usage(format!(
                    "SNR range {spec:?} needs step > 0 and stop >= start"
                )));
            }
            let n = ((stop - start) / step + 1e-9).floor() as usize;
            if n > 100_000 {
                return Err(usage(format!("SNR range {spec:?} has too many points")));
            }
            Ok((0..=n).map(|i| start + i as f64 * step).collect())
        }
        _ => Err(usage(format!(
            "SNR grid {spec:?} must be start:step:stop or a comma list"
        ))),
    }
}

fn parse_size_list(spec: &str) -> Result<Vec<usize>, CliError> {
    spec.split(',')
        .map(|s| {
            s.trim()
                .parse()
                .map_err(|_| usage(format!("invalid grid value {s:?}")))
        })
        .collect()
}

fn parse_workers(spec: &str) -> Result<Workers, CliError> {
    if spec == "auto" {
        return Ok(Workers::Auto);
    }
    match spec.parse::<usize>() {
        Ok(n) if n >= 1 => Ok(Workers::Fixed(n)),
        _ => Err(usage(format!(
            "--workers must be auto or a positive count, got {spec:?}"
        ))),
    }
}

fn workers_label(w: Workers) -> String {
    match w {
        Workers::Auto => "auto".into(),
        Workers::Fixed(n) => n.to_string(),
    }
}

fn experiment_name(e: Experiment) -> &'static str {
    match e {
        Experiment::SumRateSweep => "sum_rate_sweep",
        Experiment::RateRegion => "rate_region",
        Experiment::LarConvergence => "lar_convergence",
        Experiment::EstimationSweep => "estimation_sweep",
    }
}

/// Reads a scenario file, accepting either a bare scenario object or a
/// manifest whose `"scenario"` member holds one.
pub fn load_scenario_file(path: &Path) -> Result<ScenarioFile, CliError> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let value: serde_json::Value = serde_json::from_str(&text)
        .map_err(|e| usage(format!("{}: invalid JSON: {e}", path.display())))?;
    let inner = match value.get("scenario") {
        Some(s) if value.get("tool").is_some() => s.clone(),
        _ => value,
    };
    serde_json::from_value(inner).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn seed_from_env() -> Result<Option<u64>, CliError> {
    match std::env::var(SEED_ENV) {
        Ok(s) => s.trim().parse().map(Some).map_err(|_| {
            usage(format!(
                "{SEED_ENV}={s:?} is not an unsigned 64-bit integer"
            ))
        }),
        Err(_) => Ok(None),
    }
}

/// Merges flags over the config file and fills defaults. Returns the
/// scenario and its fully resolved JSON form.
pub fn resolve(
    experiment: Experiment,
    args: &CommonArgs,
    grow: Option<GrowArg>,
    grid: Option<&str>,
) -> Result<(Scenario, ScenarioFile), CliError> {
    let file = match &args.config {
        Some(p) => load_scenario_file(p)?,
        None => ScenarioFile::default(),
    };
    if let Some(e) = &file.experiment {
        if e != experiment_name(experiment) {
            return Err(usage(format!(
                "config describes experiment {e:?}, not {:?}",
                experiment_name(experiment)
            )));
        }
    }
    let grow = grow.or(file.grow);
    let is_lar = experiment == Experiment::LarConvergence;

    let nt = match args.nt.or(file.nt) {
        Some(v) => v,
        None if is_lar && grow == Some(GrowArg::Nr) => 2,
        // Placeholder; every grid point overwrites the grown dimension.
        None if is_lar && grow == Some(GrowArg::Nt) => 1,
        None => return Err(usage("--nt is required")),
    };
    let nr = match args.nr.or(file.nr) {
        Some(v) => v,
        None if is_lar && grow == Some(GrowArg::Nt) => 4,
        None if is_lar && grow == Some(GrowArg::Nr) => 1,
        None => return Err(usage("--nr is required")),
    };
    let k = args.k.or(file.k).unwrap_or(1);

    let alpha = if args.alpha_db.is_some() || args.alpha_phase_deg.is_some() {
        let db = args.alpha_db.or(file.alpha_db).unwrap_or(-3.0);
        let phase = args.alpha_phase_deg.or(file.alpha_phase_deg).unwrap_or(0.0);
        polar_alpha(db, phase)?
    } else if let (Some(re), Some(im)) = (file.alpha_re, file.alpha_im) {
        C64::new(re, im)
    } else {
        polar_alpha(
            file.alpha_db.unwrap_or(-3.0),
            file.alpha_phase_deg.unwrap_or(0.0),
        )?
    };

    let snr_grid_db = match (&args.snr_db, &file.snr_grid_db) {
        (Some(s), _) => parse_snr_grid(s)?,
        (None, Some(g)) => g.clone(),
        (None, None) => match experiment {
            Experiment::RateRegion => vec![10.0, 20.0, 30.0],
            Experiment::LarConvergence => vec![20.0],
            _ => parse_snr_grid("0:2:30")?,
        },
    };
    if snr_grid_db.is_empty() {
        return Err(usage("SNR grid is empty"));
    }

    let mut cfg = SystemConfig::new(nt, nr, k).with_alpha(alpha);
    cfg.gamma_db = snr_grid_db[0];
    if let Some(s) = args.sigma2.or(file.sigma2) {
        cfg.sigma2 = s;
    }
    if let Some(v) = args.m0.or(file.m0) {
        cfg.m0 = v;
    }
    if let Some(v) = args.m1.or(file.m1) {
        cfg.m1 = v;
    }
    if let Some(v) = args.coherence_len.or(file.coherence_len) {
        cfg.coherence_len = v;
    }

    let trials = match args.trials.or(file.trials) {
        Some(t) => t,
        None if args.paper_scale => PAPER_SCALE_TRIALS,
        None if is_lar => LAR_DEFAULT_TRIALS,
        None => DEFAULT_TRIALS,
    };
    let seed = match args.seed.or(file.seed) {
        Some(s) => s,
        None => seed_from_env()?.unwrap_or(0),
    };
    let workers = match args.workers.as_deref().or(file.workers.as_deref()) {
        Some(w) => parse_workers(w)?,
        None => Workers::Auto,
    };

    let decoding_order = args
        .decoding_order
        .or(file.decoding_order)
        .unwrap_or(OrderArg::ColumnNorm);
    let mrs_snr = args.mrs_snr.or(file.mrs_snr).unwrap_or(MrsSnrArg::Literal);
    let lar_constant = args
        .lar_constant
        .or(file.lar_constant)
        .unwrap_or(LarConstantArg::Limit);
    let bound_form = args
        .bound_form
        .or(file.bound_form)
        .unwrap_or(BoundFormArg::Consistent);
    let polyphase = args.polyphase.or(file.polyphase);
    if polyphase == Some(0) {
        return Err(usage("--polyphase must be >= 1"));
    }
    let options = ModelOptions {
        receiver: ReceiverOptions {
            order: match decoding_order {
                OrderArg::ColumnNorm => DecodingOrder::ColumnNorm,
                OrderArg::GreedySinr => DecodingOrder::GreedySinr,
            },
            snr_convention: match mrs_snr {
                MrsSnrArg::Literal => MrsSnrConvention::Literal,
                MrsSnrArg::MatchedFilter => MrsSnrConvention::MatchedFilter,
            },
        },
        alphabet: polyphase.map_or(
            ReflectionAlphabet::Continuous,
            ReflectionAlphabet::Polyphase,
        ),
        lar_constant: match lar_constant {
            LarConstantArg::Limit => LarConstant::Limit,
            LarConstantArg::Printed => LarConstant::Printed,
        },
        bound_form: match bound_form {
            BoundFormArg::Consistent => BoundForm::Consistent,
            BoundFormArg::Printed => BoundForm::Printed,
        },
    };

    let lar = if is_lar {
        let grow = grow.ok_or_else(|| usage("--grow is required"))?;
        let values = match grid {
            Some(g) => parse_size_list(g)?,
            None => file
                .grid
                .clone()
                .ok_or_else(|| usage("--grid is required"))?,
        };
        Some(LarGrid {
            grow: match grow {
                GrowArg::Nr => GrowDim::Nr,
                GrowArg::Nt => GrowDim::Nt,
            },
            values,
        })
    } else {
        None
    };

    let mut scenario = Scenario::new(cfg, experiment);
    scenario.snr_grid_db = snr_grid_db.clone();
    scenario.trials = trials;
    scenario.seed = seed;
    scenario.workers = workers;
    scenario.options = options;
    scenario.lar = lar.clone();

    let resolved = ScenarioFile {
        experiment: Some(experiment_name(experiment).into()),
        // The grown dimension is set by the grid, not by the scenario.
        nt: (grow != Some(GrowArg::Nt) || !is_lar).then_some(scenario.cfg.nt),
        nr: (grow != Some(GrowArg::Nr) || !is_lar).then_some(scenario.cfg.nr),
        k: Some(scenario.cfg.k),
        alpha_db: None,
        alpha_phase_deg: None,
        alpha_re: Some(alpha.re),
        alpha_im: Some(alpha.im),
        sigma2: Some(scenario.cfg.sigma2),
        m0: Some(scenario.cfg.m0),
        m1: Some(scenario.cfg.m1),
        coherence_len: Some(scenario.cfg.coherence_len),
        snr_grid_db: Some(snr_grid_db),
        trials: Some(trials),
        seed: Some(seed),
        workers: Some(workers_label(workers)),
        decoding_order: Some(decoding_order),
        mrs_snr: Some(mrs_snr),
        lar_constant: Some(lar_constant),
        bound_form: Some(bound_form),
        polyphase,
        grow: if is_lar { grow } else { None },
        grid: lar.map(|l| l.values),
    };
    Ok((scenario, resolved))
}

fn polar_alpha(db: f64, phase_deg: f64) -> Result<C64, CliError> {
    if db.is_nan() || db == f64::INFINITY {
        return Err(usage(format!(
            "--alpha-db must be finite or -inf, got {db}"
        )));
    }
    if !phase_deg.is_finite() {
        return Err(usage("--alpha-phase-deg must be finite"));
    }
    if db == f64::NEG_INFINITY {
        return Ok(C64::new(0.0, 0.0));
    }
    Ok(alpha_from_db(db, phase_deg.to_radians()))
}

/// Round-trip exact float text (17 significant digits).
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn sum_rate_csv(table: &SumRateTable) -> String {
    let mut out = String::from("snr_db,metric,mean_bits,stderr_bits,k,trials,seed\n");
    for r in &table.rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{}",
            fmt_f64(r.snr_db),
            r.metric,
            fmt_f64(r.stat.mean),
            fmt_f64(r.stat.stderr),
            r.k,
            table.trials,
            table.seed
        );
    }
    out
}

pub fn rate_region_csv(table: &RegionTable) -> String {
    let mut out = String::from("snr_db,vertex,legacy_bits,legacy_stderr,mrs_bits,mrs_stderr\n");
    for s in &table.snapshots {
        let snr = fmt_f64(s.snr_db);
        for p in &s.points {
            let _ = writeln!(
                out,
                "{snr},{},{},{},{},{}",
                p.vertex,
                fmt_f64(p.legacy.mean),
                fmt_f64(p.legacy.stderr),
                fmt_f64(p.mrs.mean),
                fmt_f64(p.mrs.stderr)
            );
        }
        let _ = writeln!(
            out,
            "{snr},legacy_alone,{},{},{},{}",
            fmt_f64(s.legacy_alone.mean),
            fmt_f64(s.legacy_alone.stderr),
            fmt_f64(0.0),
            fmt_f64(0.0)
        );
    }
    out
}

pub fn lar_csv(table: &LarTable) -> String {
    let mut out = String::from("grow_dim,value,exact_bits,lar_bits,rel_gap\n");
    for r in &table.rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{}",
            r.grow,
            r.value,
            fmt_f64(r.exact.mean),
            fmt_f64(r.lar.mean),
            fmt_f64(r.rel_gap)
        );
    }
    out
}

/// Git-style blob hash: SHA-256 of `"blob <len>\0" ‖ content`, lowercase hex.
pub fn content_hash(content: &[u8]) -> String {
    let mut h = Sha256::new();
    h.update(format!("blob {}\0", content.len()).as_bytes());
    h.update(content);
    h.finalize().iter().map(|b| format!("{b:02x}")).collect()
}

fn write_file(path: &Path, content: &[u8]) -> Result<(), CliError> {
    std::fs::write(path, content).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// Runs one parsed command and returns the paths it wrote.
pub fn execute(cli: &Cli) -> Result<Vec<PathBuf>, CliError> {
    let started = Instant::now();
    let started_unix_s = SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0);
    let (name, args, scenario, resolved, csv, notes) = match &cli.command {
        Command::SumRate(args) => {
            let (sc, res) = resolve(Experiment::SumRateSweep, args, None, None)?;
            let table = run_sum_rate_sweep(&sc)?;
            ("sum_rate", args, sc, res, sum_rate_csv(&table), Vec::new())
        }
        Command::RateRegion(args) => {
            let (sc, res) = resolve(Experiment::RateRegion, args, None, None)?;
            let table = run_rate_region(&sc)?;
            let notes = vec![D_VERTEX_NOTE.to_string()];
            ("rate_region", args, sc, res, rate_region_csv(&table), notes)
        }
        Command::Lar(lar) => {
            let (sc, res) = resolve(
                Experiment::LarConvergence,
                &lar.common,
                lar.grow,
                lar.grid.as_deref(),
            )?;
            let table = run_lar_convergence(&sc)?;
            ("lar", &lar.common, sc, res, lar_csv(&table), Vec::new())
        }
    };
    std::fs::create_dir_all(&args.out).map_err(|source| CliError::Io {
        path: args.out.clone(),
        source,
    })?;
    let csv_name = format!("{name}.csv");
    let csv_path = args.out.join(&csv_name);
    write_file(&csv_path, csv.as_bytes())?;
    let manifest = RunManifest {
        tool: "mrs-lab".into(),
        version: env!("CARGO_PKG_VERSION").into(),
        command: name.replace('_', "-"),
        scenario: resolved,
        seed: scenario.seed,
        started_unix_s,
        wall_clock_s: started.elapsed().as_secs_f64(),
        outputs: vec![OutputDigest {
            file: csv_name,
            sha256: content_hash(csv.as_bytes()),
        }],
        notes,
    };
    let manifest_path = args.out.join(format!("{name}.manifest.json"));
    let mut json = serde_json::to_string_pretty(&manifest)
        .map_err(|e| Error::Internal(format!("cannot serialize manifest: {e}")))?;
    json.push('\n');
    write_file(&manifest_path, json.as_bytes())?;
    Ok(vec![csv_path, manifest_path])
}

/// Entry point shared by the binary and the tests.
pub fn run<I, T>(args: I) -> ExitCode
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match execute(&cli) {
        Ok(paths) => {
            for p in paths {
                println!("{}", p.display());
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
