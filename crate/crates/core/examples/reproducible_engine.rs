//! A custom Monte Carlo study on the engine: per-trial substreams make the
//! result independent of the worker count.
//!
//! `cargo run --release --example reproducible_engine`

use mrs_lab::channel::{sample_channel, SystemConfig};
use mrs_lab::experiments::{run_trials, Stat, Workers};
use mrs_lab::rates::dominance_check;

fn main() -> mrs_lab::Result<()> {
    let cfg = SystemConfig::new(2, 4, 1);
    let study = |workers| -> mrs_lab::Result<Stat> {
        let deltas = run_trials(5000, workers, |t| {
            Ok(dominance_check(&sample_channel(&cfg, 2024, t), &cfg)?.delta)
        })?;
        Ok(Stat::from_samples(&deltas))
    };
    let one = study(Workers::Fixed(1))?;
    let many = study(Workers::Fixed(8))?;
    println!(
        "mean rate gain of the keyhole path: {:.6} ± {:.6} bits",
        one.mean, one.stderr
    );
    println!("bit-identical across worker counts: {}", one == many);
    Ok(())
}
