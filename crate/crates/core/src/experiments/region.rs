use std::fmt;

use super::{run_trials, Scenario, Stat};
use crate::channel::{sample_channel, sample_symbols};
use crate::error::{Error, Result};
use crate::numerics::C64;
use crate::rates::{legacy_alone_rate, sum_rate, RateSample};
use crate::receiver::{
    joint_known_x1_rate, legacy_sic_rate, mrs_postsic_snr, mrs_rate_gaussian, mrs_rate_wpc,
};
use crate::rng::{substream, StreamLabel};

/// How the fourth corner is drawn: the reflection coefficient is treated as
/// noise and the MRS carries no data, so D shares its legacy rate with B.
pub const D_VERTEX_NOTE: &str = "D = (E[R0], 0): MRS stream treated as noise, no MRS rate";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Vertex {
    /// Legacy transmitter sends no information; MRS rate only.
    A,
    /// Legacy SIC rate with the MRS stream as interference, plus the MRS rate.
    B,
    /// Sum rate carried by the legacy link alone with joint detection.
    C,
    /// Legacy rate with the MRS signal treated as noise and no MRS rate.
    D,
}

impl fmt::Display for Vertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Vertex::A => "A",
            Vertex::B => "B",
            Vertex::C => "C",
            Vertex::D => "D",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RateRegionPoint {
    pub vertex: Vertex,
    pub legacy: Stat,
    pub mrs: Stat,
}

/// Averaged rate pairs at one SNR.
#[derive(Debug, Clone, PartialEq)]
pub struct RegionSnapshot {
    pub snr_db: f64,
    /// `[A, B, C, D]` in that order.
    pub points: [RateRegionPoint; 4],
    pub legacy_alone: Stat,
    pub sum_rate: Stat,
    /// MRS rate with a Gaussian codebook in place of the unit-modulus alphabet.
    pub mrs_gaussian: Stat,
    /// Legacy rate when the reflection coefficient is known to the receiver.
    pub joint_known_x1: Stat,
}

impl RegionSnapshot {
    pub fn point(&self, v: Vertex) -> &RateRegionPoint {
        &self.points[v as usize]
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RegionTable {
    pub snapshots: Vec<RegionSnapshot>,
    pub trials: usize,
    pub seed: u64,
}

impl RegionTable {
    pub fn at(&self, snr_db: f64) -> Option<&RegionSnapshot> {
        self.snapshots.iter().find(|s| s.snr_db == snr_db)
    }
}

fn trial_samples(scenario: &Scenario, grid: &[f64], trial: u64) -> Result<Vec<RateSample>> {
    let realization = sample_channel(&scenario.cfg, scenario.seed, trial);
    let keyhole = realization.first_keyhole_channel();
    let symbols = sample_symbols(
        &scenario.cfg,
        scenario.options.alphabet,
        &mut substream(scenario.seed, trial, StreamLabel::Symbols),
    );
    let opts = scenario.options.receiver;
    grid.iter()
        .map(|&snr| {
            let cfg = scenario.cfg.with_gamma_db(snr);
            let x0 = symbols.u.scale(C64::new(cfg.rho_d().sqrt(), 0.0));
            let legacy = legacy_sic_rate(&realization.direct, &keyhole, &cfg, opts.order)?;
            let gamma1 = mrs_postsic_snr(&keyhole, &x0, &cfg, opts.snr_convention);
            let sample = RateSample {
                sum_rate: sum_rate(&realization, &cfg)?,
                legacy_alone: legacy_alone_rate(&realization.direct, &cfg)?,
                legacy_sic: legacy.rate_bits,
                mrs_wpc: mrs_rate_wpc(gamma1)?,
                mrs_gaussian_bound: mrs_rate_gaussian(gamma1),
                joint_known_x1: joint_known_x1_rate(
                    &realization.direct,
                    &keyhole,
                    symbols.x1[0],
                    &cfg,
                )?,
                gamma1,
                per_stream_sinr: legacy.per_stream_sinr,
            };
            if !sample.is_valid() {
                return Err(Error::Internal(format!(
                    "invalid rate sample at trial {trial}, SNR {snr} dB: {sample:?}"
                )));
            }
            Ok(sample)
        })
        .collect()
}

/// Vertices of the averaged achievable region of the `K = 1` system.
///
/// Segment AB: legacy not assisted by the MRS. Segment BC: time sharing
/// between the SIC point and the joint-detection point.
pub fn run_rate_region(scenario: &Scenario) -> Result<RegionTable> {
    scenario.validate()?;
    if scenario.cfg.k != 1 {
        return Err(Error::Config(format!(
            "the rate region is defined for K = 1, got K = {}",
            scenario.cfg.k
        )));
    }
    let grid = scenario.sorted_grid();
    let per_trial = run_trials(scenario.trials, scenario.workers, |t| {
        trial_samples(scenario, &grid, t)
    })?;
    let snapshots = grid
        .iter()
        .enumerate()
        .map(|(s, &snr_db)| {
            let stat = |f: &dyn Fn(&RateSample) -> f64| {
                let xs: Vec<f64> = per_trial.iter().map(|t| f(&t[s])).collect();
                Stat::from_samples(&xs)
            };
            let wpc = stat(&|r| r.mrs_wpc);
            let sic = stat(&|r| r.legacy_sic);
            let total = stat(&|r| r.sum_rate);
            let alone = stat(&|r| r.legacy_alone);
            RegionSnapshot {
                snr_db,
                points: [
                    RateRegionPoint {
                        vertex: Vertex::A,
                        legacy: Stat::zero(),
                        mrs: wpc,
                    },
                    RateRegionPoint {
                        vertex: Vertex::B,
                        legacy: sic,
                        mrs: wpc,
                    },
                    RateRegionPoint {
                        vertex: Vertex::C,
                        legacy: total,
                        mrs: Stat::zero(),
                    },
                    RateRegionPoint {
                        vertex: Vertex::D,
                        legacy: sic,
                        mrs: Stat::zero(),
                    },
                ],
                legacy_alone: alone,
                sum_rate: total,
                mrs_gaussian: stat(&|r| r.mrs_gaussian_bound),
                joint_known_x1: stat(&|r| r.joint_known_x1),
            }
        })
        .collect();
    Ok(RegionTable {
        snapshots,
        trials: scenario.trials,
        seed: scenario.seed,
    })
}
