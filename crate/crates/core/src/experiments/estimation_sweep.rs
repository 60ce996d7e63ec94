use super::{run_trials, Scenario, Stat};
use crate::channel::sample_channel;
use crate::error::Result;
use crate::estimation::{build_pilots, error_covariance_scale, estimate_channel};
use crate::rates::sum_rate;
use crate::rng::{substream, StreamLabel};

#[derive(Debug, Clone, PartialEq)]
pub struct EstimationRow {
    pub snr_db: f64,
    /// Sum rate with the true channel.
    pub perfect: Stat,
    /// Rate bound with the LS estimate.
    pub bound: Stat,
    /// Per-draw `bound / perfect`.
    pub ratio: Stat,
    /// Mean `|·|²` of the entries of `√β_K·(Ĝ − G)`.
    pub error_entry_power: Stat,
    /// Its predicted value `σ² / (m0·m1·ρp)`.
    pub error_entry_power_theory: f64,
    /// Effective-noise scale `s` added by the estimation error.
    pub error_cov_scale: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EstimationTable {
    pub rows: Vec<EstimationRow>,
    pub trials: usize,
    pub seed: u64,
}

/// Perfect-CSI rate, estimated-CSI bound and LS error power across SNR.
pub fn run_estimation_sweep(scenario: &Scenario) -> Result<EstimationTable> {
    scenario.validate()?;
    let grid = scenario.sorted_grid();
    let mut rows = Vec::with_capacity(grid.len());
    for &snr_db in &grid {
        let cfg = scenario.cfg.with_gamma_db(snr_db);
        let pilots = build_pilots(&cfg)?;
        let beta_sqrt = cfg.beta().sqrt();
        let per_trial = run_trials(scenario.trials, scenario.workers, |t| {
            let r = sample_channel(&cfg, scenario.seed, t);
            let mut rng = substream(scenario.seed, t, StreamLabel::PilotNoise);
            let est = estimate_channel(&r, &pilots, &cfg, &mut rng, scenario.options.bound_form)?;
            let perfect = sum_rate(&r, &cfg)?;
            let err = (&est.g_hat - &r.composite).scale_real(beta_sqrt);
            let power = err.frobenius_norm_sqr() / (err.rows() * err.cols()) as f64;
            Ok((perfect, est.rate_lower_bound_bits, power))
        })?;
        let col = |f: fn(&(f64, f64, f64)) -> f64| {
            let xs: Vec<f64> = per_trial.iter().map(f).collect();
            Stat::from_samples(&xs)
        };
        rows.push(EstimationRow {
            snr_db,
            perfect: col(|t| t.0),
            bound: col(|t| t.1),
            ratio: col(|t| if t.0 > 0.0 { t.1 / t.0 } else { 0.0 }),
            error_entry_power: col(|t| t.2),
            error_entry_power_theory: cfg.sigma2 / (cfg.pilot_len() as f64 * cfg.rho_p()),
            error_cov_scale: error_covariance_scale(&cfg),
        });
    }
    Ok(EstimationTable {
        rows,
        trials: scenario.trials,
        seed: scenario.seed,
    })
}
