//! Averaged achievable rate region of the legacy link and a single-antenna
//! MRS node under MMSE-SIC decoding.
//!
//! `cargo run --release --example rate_region [trials]`

use mrs_lab::channel::SystemConfig;
use mrs_lab::experiments::{run_rate_region, Experiment, Scenario, D_VERTEX_NOTE};

fn main() -> mrs_lab::Result<()> {
    let trials = std::env::args()
        .nth(1)
        .map_or(2000, |s| s.parse().expect("trial count"));

    let mut scenario = Scenario::new(SystemConfig::new(2, 4, 1), Experiment::RateRegion);
    scenario.snr_grid_db = vec![10.0, 20.0, 30.0];
    scenario.trials = trials;
    scenario.seed = 7;
    let table = run_rate_region(&scenario)?;

    for snap in &table.snapshots {
        println!("γ = {} dB", snap.snr_db);
        for p in &snap.points {
            println!(
                "  {}  legacy {:7.3} ± {:.3}   mrs {:6.3} ± {:.3}",
                p.vertex, p.legacy.mean, p.legacy.stderr, p.mrs.mean, p.mrs.stderr
            );
        }
        println!("  legacy alone      {:7.3}", snap.legacy_alone.mean);
        println!("  MRS, Gaussian     {:7.3}", snap.mrs_gaussian.mean);
        println!("  legacy, x1 known  {:7.3}", snap.joint_known_x1.mean);
    }
    println!("{D_VERTEX_NOTE}");
    Ok(())
}
