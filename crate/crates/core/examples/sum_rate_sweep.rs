//! Sum rate of a 2×4 link with and without one MRS node across SNR, with the
//! estimated-CSI bound and the large-`nr` limit alongside.
//!
//! `cargo run --release --example sum_rate_sweep [trials]`

use mrs_lab::channel::SystemConfig;
use mrs_lab::experiments::{run_sum_rate_sweep, Experiment, Metric, Scenario};

fn main() -> mrs_lab::Result<()> {
    let trials = std::env::args()
        .nth(1)
        .map_or(2000, |s| s.parse().expect("trial count"));

    let mut scenario = Scenario::new(SystemConfig::new(2, 4, 1), Experiment::SumRateSweep);
    scenario.snr_grid_db = (0..=6).map(|i| 5.0 * i as f64).collect();
    scenario.trials = trials;
    scenario.seed = 42;
    let table = run_sum_rate_sweep(&scenario)?;

    println!(
        "{:>6} {:>9} {:>9} {:>9} {:>9} {:>9} {:>9}",
        "SNR", "K=1", "K=0", "est K=1", "est K=0", "MRS wpc", "LAR K=1"
    );
    for &snr in &scenario.snr_grid_db {
        let v = |m, k| table.get(snr, m, k).map_or(f64::NAN, |r| r.stat.mean);
        println!(
            "{snr:>6.1} {:>9.3} {:>9.3} {:>9.3} {:>9.3} {:>9.3} {:>9.3}",
            v(Metric::SumRate, 1),
            v(Metric::LegacyAlone, 0),
            v(Metric::EstLowerBound, 1),
            v(Metric::EstLowerBound, 0),
            v(Metric::MrsWpc, 1),
            v(Metric::LarNr, 1),
        );
    }
    println!("({trials} trials, bits per channel use)");
    Ok(())
}
