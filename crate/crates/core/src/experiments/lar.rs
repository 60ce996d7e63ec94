use std::fmt;
use std::str::FromStr;

use super::{run_trials, Scenario, Stat};
use crate::channel::{sample_channel, SystemConfig};
use crate::error::{Error, Result};
use crate::rates::{lar_rx_limit, lar_tx_limit, sum_rate};

/// Largest antenna count the convergence study will allocate.
pub const MAX_GROWN_DIM: usize = 1 << 13;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GrowDim {
    Nr,
    Nt,
}

impl fmt::Display for GrowDim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            GrowDim::Nr => "nr",
            GrowDim::Nt => "nt",
        })
    }
}

impl FromStr for GrowDim {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "nr" => Ok(GrowDim::Nr),
            "nt" => Ok(GrowDim::Nt),
            other => Err(Error::Config(format!(
                "grow dimension must be nr or nt, got {other:?}"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LarGrid {
    pub grow: GrowDim,
    pub values: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LarRow {
    pub grow: GrowDim,
    pub value: usize,
    pub exact: Stat,
    pub lar: Stat,
    /// Median over trials of `|exact − lar| / lar`.
    pub rel_gap: f64,
    /// `|E[exact] − E[lar]| / E[lar]`.
    pub gap_of_means: f64,
    /// Separable approximation of the large-`nt` limit; `None` when growing `nr`.
    pub separable: Option<Stat>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LarTable {
    pub rows: Vec<LarRow>,
    pub gamma_db: f64,
    pub trials: usize,
    pub seed: u64,
}

fn grown(cfg: &SystemConfig, grow: GrowDim, value: usize) -> SystemConfig {
    let mut c = cfg.clone();
    match grow {
        GrowDim::Nr => c.nr = value,
        GrowDim::Nt => c.nt = value,
    }
    c
}

fn relative(a: f64, b: f64) -> f64 {
    if b == 0.0 {
        if a == 0.0 {
            0.0
        } else {
            f64::INFINITY
        }
    } else {
        (a - b).abs() / b
    }
}

fn median(xs: &mut [f64]) -> f64 {
    xs.sort_by(f64::total_cmp);
    let n = xs.len();
    if n % 2 == 1 {
        xs[n / 2]
    } else {
        0.5 * (xs[n / 2 - 1] + xs[n / 2])
    }
}

/// Exact sum rate against its large-array limit along a growing dimension,
/// at the single SNR of `scenario.snr_grid_db`. The limit of each trial is
/// conditioned on the keyhole vectors on the fixed side of that trial.
pub fn run_lar_convergence(scenario: &Scenario) -> Result<LarTable> {
    let grid = scenario
        .lar
        .as_ref()
        .ok_or_else(|| Error::Config("convergence study needs a growth grid".into()))?;
    if grid.values.is_empty() {
        return Err(Error::Config("growth grid is empty".into()));
    }
    if let Some(&v) = grid.values.iter().find(|&&v| v == 0) {
        return Err(Error::Config(format!("grid value {v} must be >= 1")));
    }
    if let Some(&v) = grid.values.iter().find(|&&v| v > MAX_GROWN_DIM) {
        return Err(Error::Size(format!(
            "grown dimension {v} exceeds the limit {MAX_GROWN_DIM}"
        )));
    }
    let snrs = scenario.sorted_grid();
    if snrs.len() != 1 {
        return Err(Error::Config(format!(
            "convergence study runs at a single SNR, got {} values",
            snrs.len()
        )));
    }
    let base = scenario.cfg.with_gamma_db(snrs[0]);
    let mut rows = Vec::with_capacity(grid.values.len());
    for &value in &grid.values {
        let cfg = grown(&base, grid.grow, value);
        Scenario {
            cfg: cfg.clone(),
            ..scenario.clone()
        }
        .validate()?;
        let per_trial = run_trials(scenario.trials, scenario.workers, |t| {
            let r = sample_channel(&cfg, scenario.seed, t);
            let exact = sum_rate(&r, &cfg)?;
            Ok(match grid.grow {
                GrowDim::Nr => {
                    let g_t: Vec<_> = r.keyholes.iter().map(|kh| kh.g_t.clone()).collect();
                    let lar = lar_rx_limit(&g_t, &cfg, scenario.options.lar_constant);
                    (exact, lar, f64::NAN)
                }
                GrowDim::Nt => {
                    let g_r: Vec<_> = r.keyholes.iter().map(|kh| kh.g_r.clone()).collect();
                    let lim = lar_tx_limit(&g_r, &cfg)?;
                    (exact, lim.exact, lim.separable)
                }
            })
        })?;
        let exact_xs: Vec<f64> = per_trial.iter().map(|t| t.0).collect();
        let lar_xs: Vec<f64> = per_trial.iter().map(|t| t.1).collect();
        let exact = Stat::from_samples(&exact_xs);
        let lar = Stat::from_samples(&lar_xs);
        let mut gaps: Vec<f64> = per_trial.iter().map(|t| relative(t.0, t.1)).collect();
        let separable = match grid.grow {
            GrowDim::Nr => None,
            GrowDim::Nt => {
                let xs: Vec<f64> = per_trial.iter().map(|t| t.2).collect();
                Some(Stat::from_samples(&xs))
            }
        };
        rows.push(LarRow {
            grow: grid.grow,
            value,
            exact,
            lar,
            rel_gap: median(&mut gaps),
            gap_of_means: relative(exact.mean, lar.mean),
            separable,
        });
    }
    Ok(LarTable {
        rows,
        gamma_db: snrs[0],
        trials: scenario.trials,
        seed: scenario.seed,
    })
}
