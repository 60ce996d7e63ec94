use std::fmt;

use super::{run_trials, Scenario, Stat};
use crate::channel::{assemble_composite, sample_channel, sample_symbols, SystemConfig};
use crate::error::{Error, Result};
use crate::estimation::{build_pilots, estimate_channel, PilotBlock};
use crate::numerics::C64;
use crate::rates::{lar_rx_limit, legacy_alone_rate, sum_rate};
use crate::receiver::{mrs_postsic_snr, mrs_rate_gaussian, mrs_rate_wpc};
use crate::rng::{substream, StreamLabel};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Metric {
    SumRate,
    LegacyAlone,
    MrsWpc,
    MrsGaussBound,
    EstLowerBound,
    LarNr,
}

impl Metric {
    pub fn name(self) -> &'static str {
        match self {
            Metric::SumRate => "sum_rate",
            Metric::LegacyAlone => "legacy_alone",
            Metric::MrsWpc => "mrs_wpc",
            Metric::MrsGaussBound => "mrs_gauss_bound",
            Metric::EstLowerBound => "est_lower_bound",
            Metric::LarNr => "lar_nr",
        }
    }
}

impl fmt::Display for Metric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SumRateRow {
    pub snr_db: f64,
    pub metric: Metric,
    /// MRS antenna count the row refers to (0 for the legacy-only curves).
    pub k: usize,
    pub stat: Stat,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SumRateTable {
    pub rows: Vec<SumRateRow>,
    pub trials: usize,
    pub seed: u64,
}

impl SumRateTable {
    pub fn get(&self, snr_db: f64, metric: Metric, k: usize) -> Option<&SumRateRow> {
        self.rows
            .iter()
            .find(|r| r.snr_db == snr_db && r.metric == metric && r.k == k)
    }
}

/// Precomputed, trial-independent state of a sum-rate sweep. `trial` returns
/// one value per `(SNR, column)` pair, so single draws can be inspected.
#[derive(Debug, Clone)]
pub struct SweepPlan {
    scenario: Scenario,
    grid: Vec<f64>,
    columns: Vec<(Metric, usize)>,
    with_mrs: Vec<(SystemConfig, PilotBlock)>,
    legacy_only: Vec<(SystemConfig, PilotBlock)>,
}

impl SweepPlan {
    pub fn new(scenario: &Scenario) -> Result<Self> {
        scenario.validate()?;
        let k = scenario.cfg.k;
        let grid = scenario.sorted_grid();
        let mut columns = vec![(Metric::SumRate, k), (Metric::LegacyAlone, 0)];
        if k == 1 {
            columns.push((Metric::MrsWpc, 1));
            columns.push((Metric::MrsGaussBound, 1));
        }
        columns.push((Metric::EstLowerBound, k));
        if k > 0 {
            columns.push((Metric::EstLowerBound, 0));
        }
        columns.push((Metric::LarNr, k));
        if k > 0 {
            columns.push((Metric::LarNr, 0));
        }
        let mut with_mrs = Vec::with_capacity(grid.len());
        let mut legacy_only = Vec::with_capacity(grid.len());
        for &snr in &grid {
            let cfg = scenario.cfg.with_gamma_db(snr);
            let cfg0 = cfg.with_k(0);
            with_mrs.push((cfg.clone(), build_pilots(&cfg)?));
            legacy_only.push((cfg0.clone(), build_pilots(&cfg0)?));
        }
        Ok(Self {
            scenario: scenario.clone(),
            grid,
            columns,
            with_mrs,
            legacy_only,
        })
    }

    pub fn grid(&self) -> &[f64] {
        &self.grid
    }

    pub fn columns(&self) -> &[(Metric, usize)] {
        &self.columns
    }

    /// Values of one trial, indexed `[snr][column]`.
    pub fn trial(&self, trial: u64) -> Result<Vec<Vec<f64>>> {
        let sc = &self.scenario;
        let opts = sc.options;
        let realization = sample_channel(&sc.cfg, sc.seed, trial);
        let legacy_realization = assemble_composite(realization.direct.clone(), Vec::new())?;
        let symbols = sample_symbols(
            &sc.cfg,
            opts.alphabet,
            &mut substream(sc.seed, trial, StreamLabel::Symbols),
        );
        let g_t: Vec<_> = realization
            .keyholes
            .iter()
            .map(|kh| kh.g_t.clone())
            .collect();

        let mut out = Vec::with_capacity(self.grid.len());
        for (s, _) in self.grid.iter().enumerate() {
            let (cfg, pilots) = &self.with_mrs[s];
            let (cfg0, pilots0) = &self.legacy_only[s];
            let mut row = Vec::with_capacity(self.columns.len());
            let gamma1 = if cfg.k == 1 {
                let x0 = symbols.u.scale(C64::new(cfg.rho_d().sqrt(), 0.0));
                mrs_postsic_snr(
                    &realization.first_keyhole_channel(),
                    &x0,
                    cfg,
                    opts.receiver.snr_convention,
                )
            } else {
                0.0
            };
            for &(metric, k) in &self.columns {
                let (c, p, r) = if k == 0 && cfg.k != 0 {
                    (cfg0, pilots0, &legacy_realization)
                } else {
                    (cfg, pilots, &realization)
                };
                let v = match metric {
                    Metric::SumRate => sum_rate(r, c)?,
                    Metric::LegacyAlone => legacy_alone_rate(&realization.direct, cfg)?,
                    Metric::MrsWpc => mrs_rate_wpc(gamma1)?,
                    Metric::MrsGaussBound => mrs_rate_gaussian(gamma1),
                    Metric::EstLowerBound => {
                        // Same pilot noise for every SNR point of the trial.
                        let mut rng = substream(sc.seed, trial, StreamLabel::PilotNoise);
                        estimate_channel(r, p, c, &mut rng, opts.bound_form)?.rate_lower_bound_bits
                    }
                    Metric::LarNr => {
                        let g = if k == 0 { &[][..] } else { &g_t[..] };
                        lar_rx_limit(g, c, opts.lar_constant)
                    }
                };
                if !v.is_finite() {
                    return Err(Error::Internal(format!(
                        "{metric} is not finite at trial {trial}, SNR {} dB",
                        self.grid[s]
                    )));
                }
                row.push(v);
            }
            out.push(row);
        }
        Ok(out)
    }
}

/// Averages every sweep metric over `scenario.trials` channel draws.
pub fn run_sum_rate_sweep(scenario: &Scenario) -> Result<SumRateTable> {
    let plan = SweepPlan::new(scenario)?;
    let per_trial = run_trials(scenario.trials, scenario.workers, |t| plan.trial(t))?;
    let mut rows = Vec::with_capacity(plan.grid.len() * plan.columns.len());
    let mut column = Vec::with_capacity(per_trial.len());
    for (s, &snr_db) in plan.grid.iter().enumerate() {
        for (c, &(metric, k)) in plan.columns.iter().enumerate() {
            column.clear();
            column.extend(per_trial.iter().map(|t| t[s][c]));
            rows.push(SumRateRow {
                snr_db,
                metric,
                k,
                stat: Stat::from_samples(&column),
            });
        }
    }
    Ok(SumRateTable {
        rows,
        trials: scenario.trials,
        seed: scenario.seed,
    })
}
