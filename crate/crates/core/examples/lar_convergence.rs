//! Exact sum rate against its large-array limits as `nr` and then `nt` grow.
//!
//! `cargo run --release --example lar_convergence`

use mrs_lab::channel::SystemConfig;
use mrs_lab::experiments::{run_lar_convergence, Experiment, GrowDim, LarGrid, Scenario};

fn main() -> mrs_lab::Result<()> {
    for (grow, fixed) in [
        (GrowDim::Nr, SystemConfig::new(2, 1, 1)),
        (GrowDim::Nt, SystemConfig::new(1, 4, 1)),
    ] {
        let mut scenario = Scenario::new(fixed, Experiment::LarConvergence);
        scenario.trials = 100;
        scenario.seed = 3;
        scenario.lar = Some(LarGrid {
            grow,
            values: vec![16, 64, 256, 1024, 4096],
        });
        let table = run_lar_convergence(&scenario)?;
        println!("growing {grow} at {} dB", table.gamma_db);
        for r in &table.rows {
            print!(
                "  {:>5}  exact {:8.4}  limit {:8.4}  median gap {:.2e}",
                r.value, r.exact.mean, r.lar.mean, r.rel_gap
            );
            match r.separable {
                Some(s) => println!("  separable {:8.4}", s.mean),
                None => println!(),
            }
        }
    }
    Ok(())
}
