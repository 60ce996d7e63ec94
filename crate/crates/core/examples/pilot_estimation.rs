//! Hadamard pilot design, least-squares estimation of the composite channel
//! and the resulting rate bound.
//!
//! `cargo run --release --example pilot_estimation`

use mrs_lab::channel::{sample_channel, SystemConfig};
use mrs_lab::estimation::{build_pilots, error_covariance_scale, estimate_channel, BoundForm};
use mrs_lab::rates::sum_rate;
use mrs_lab::rng::{substream, StreamLabel};

fn main() -> mrs_lab::Result<()> {
    let mut cfg = SystemConfig::new(2, 4, 1);
    cfg.m1 = 2;
    let pilots = build_pilots(&cfg)?;
    println!("{}", pilots.schedule());
    println!(
        "Np = {}, Ψp is {}×{}, error scale s = {}",
        pilots.len,
        pilots.composite.rows(),
        pilots.composite.cols(),
        error_covariance_scale(&cfg)
    );

    let seed = 11;
    for trial in 0..5 {
        let r = sample_channel(&cfg, seed, trial);
        let mut rng = substream(seed, trial, StreamLabel::PilotNoise);
        let est = estimate_channel(&r, &pilots, &cfg, &mut rng, BoundForm::Consistent)?;
        let err = (&est.g_hat - &r.composite).frobenius_norm() / r.composite.frobenius_norm();
        println!(
            "trial {trial}: ‖Ĝ−G‖/‖G‖ = {err:.4}, perfect CSI {:.3} bits, estimated-CSI bound {:.3} bits",
            sum_rate(&r, &cfg)?,
            est.rate_lower_bound_bits
        );
    }
    Ok(())
}
