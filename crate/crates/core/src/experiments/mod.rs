//! Seeded Monte Carlo engine and the canonical experiments.
//!
//! Every trial draws from its own counter-based substreams, trials run on a
//! rayon pool, and results are gathered in trial order before a fixed-shape
//! pairwise reduction. Output is therefore identical for any worker count.

mod engine;
mod estimation_sweep;
mod lar;
mod region;
mod sweep;

pub use engine::{pairwise_sum, run_trials, Stat};
pub use estimation_sweep::{run_estimation_sweep, EstimationRow, EstimationTable};
pub use lar::{run_lar_convergence, GrowDim, LarGrid, LarRow, LarTable, MAX_GROWN_DIM};
pub use region::{
    run_rate_region, RateRegionPoint, RegionSnapshot, RegionTable, Vertex, D_VERTEX_NOTE,
};
pub use sweep::{run_sum_rate_sweep, Metric, SumRateRow, SumRateTable, SweepPlan};

use crate::channel::{ReflectionAlphabet, SystemConfig};
use crate::error::{Error, Result};
use crate::estimation::BoundForm;
use crate::rates::LarConstant;
use crate::receiver::ReceiverOptions;

/// Default trial count.
pub const DEFAULT_TRIALS: usize = 20_000;
/// Trial count used for full-scale reproductions.
pub const PAPER_SCALE_TRIALS: usize = 200_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Experiment {
    SumRateSweep,
    RateRegion,
    LarConvergence,
    EstimationSweep,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Workers {
    #[default]
    Auto,
    Fixed(usize),
}

/// Modelling conventions that have more than one defensible reading.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct ModelOptions {
    pub receiver: ReceiverOptions,
    pub alphabet: ReflectionAlphabet,
    pub lar_constant: LarConstant,
    pub bound_form: BoundForm,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub cfg: SystemConfig,
    pub snr_grid_db: Vec<f64>,
    pub trials: usize,
    pub seed: u64,
    pub experiment: Experiment,
    pub workers: Workers,
    pub options: ModelOptions,
    /// Growth schedule; only read by the convergence experiment.
    pub lar: Option<LarGrid>,
}

impl Scenario {
    pub fn new(cfg: SystemConfig, experiment: Experiment) -> Self {
        Self {
            snr_grid_db: vec![cfg.gamma_db],
            cfg,
            trials: DEFAULT_TRIALS,
            seed: 0,
            experiment,
            workers: Workers::Auto,
            options: ModelOptions::default(),
            lar: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::Config("trials must be >= 1".into()));
        }
        if self.trials as u64 > crate::rng::MAX_TRIAL {
            return Err(Error::Config("too many trials".into()));
        }
        if self.snr_grid_db.is_empty() {
            return Err(Error::Config("SNR grid is empty".into()));
        }
        if let Some(bad) = self.snr_grid_db.iter().find(|s| !s.is_finite()) {
            return Err(Error::Config(format!("SNR grid value {bad} is not finite")));
        }
        if let Workers::Fixed(0) = self.workers {
            return Err(Error::Config("workers must be >= 1".into()));
        }
        self.cfg.validate()
    }

    /// Grid sorted ascending, duplicates removed.
    pub(crate) fn sorted_grid(&self) -> Vec<f64> {
        let mut grid = self.snr_grid_db.clone();
        grid.sort_by(f64::total_cmp);
        grid.dedup();
        grid
    }
}
