use mrs_lab::channel::{assemble_composite, sample_channel, sample_symbols, SystemConfig};
use mrs_lab::estimation::{build_pilots, estimate_channel};
use mrs_lab::experiments::{
    run_estimation_sweep, run_lar_convergence, run_rate_region, run_sum_rate_sweep, run_trials,
    Experiment, GrowDim, LarGrid, Metric, Scenario, Stat, SweepPlan, Vertex, Workers,
};
use mrs_lab::numerics::C64;
use mrs_lab::rates::{dominance_check, lar_rx_limit, legacy_alone_rate, sum_rate};
use mrs_lab::receiver::{mrs_postsic_snr, mrs_rate_gaussian, mrs_rate_wpc};
use mrs_lab::rng::{substream, StreamLabel};
use mrs_lab::Error;

fn fig_cfg() -> SystemConfig {
    let mut cfg = SystemConfig::new(2, 4, 1);
    cfg.m1 = 2;
    cfg
}

fn sweep(trials: usize, seed: u64, grid: &[f64]) -> Scenario {
    let mut sc = Scenario::new(fig_cfg(), Experiment::SumRateSweep);
    sc.trials = trials;
    sc.seed = seed;
    sc.snr_grid_db = grid.to_vec();
    sc
}

#[test]
fn single_trial_is_the_plain_composition() {
    let sc = sweep(1, 99, &[20.0, 5.0]);
    let table = run_sum_rate_sweep(&sc).unwrap();

    let snr = 5.0;
    let cfg = sc.cfg.with_gamma_db(snr);
    let cfg0 = cfg.with_k(0);
    let r = sample_channel(&sc.cfg, 99, 0);
    let r0 = assemble_composite(r.direct.clone(), Vec::new()).unwrap();
    let sym = sample_symbols(
        &sc.cfg,
        Default::default(),
        &mut substream(99, 0, StreamLabel::Symbols),
    );
    let x0 = sym.u.scale(C64::new(cfg.rho_d().sqrt(), 0.0));
    let g1 = sym_gamma(&r, &x0, &cfg);
    let est = |r, c: &SystemConfig| {
        let p = build_pilots(c).unwrap();
        let mut rng = substream(99, 0, StreamLabel::PilotNoise);
        estimate_channel(r, &p, c, &mut rng, Default::default())
            .unwrap()
            .rate_lower_bound_bits
    };
    let g_t: Vec<_> = r.keyholes.iter().map(|k| k.g_t.clone()).collect();
    let expected = [
        (Metric::SumRate, 1, sum_rate(&r, &cfg).unwrap()),
        (
            Metric::LegacyAlone,
            0,
            legacy_alone_rate(&r.direct, &cfg).unwrap(),
        ),
        (Metric::MrsWpc, 1, mrs_rate_wpc(g1).unwrap()),
        (Metric::MrsGaussBound, 1, mrs_rate_gaussian(g1)),
        (Metric::EstLowerBound, 1, est(&r, &cfg)),
        (Metric::EstLowerBound, 0, est(&r0, &cfg0)),
        (
            Metric::LarNr,
            1,
            lar_rx_limit(&g_t, &cfg, Default::default()),
        ),
        (
            Metric::LarNr,
            0,
            lar_rx_limit(&[], &cfg0, Default::default()),
        ),
    ];
    for (m, k, v) in expected {
        let row = table.get(snr, m, k).unwrap();
        assert_eq!(row.stat.mean, v, "{m} k={k}");
        assert_eq!(row.stat.stderr, 0.0);
    }
    // rows sorted by SNR
    assert!(table.rows.windows(2).all(|w| w[0].snr_db <= w[1].snr_db));
    assert_eq!(table.rows.len(), 2 * 8);
}

fn sym_gamma(
    r: &mrs_lab::channel::ChannelRealization,
    x0: &mrs_lab::numerics::CVector,
    cfg: &SystemConfig,
) -> f64 {
    mrs_postsic_snr(&r.first_keyhole_channel(), x0, cfg, Default::default())
}

#[test]
fn stderr_shrinks_as_inverse_root_trials() {
    let small = run_sum_rate_sweep(&sweep(1000, 5, &[10.0])).unwrap();
    let large = run_sum_rate_sweep(&sweep(4000, 5, &[10.0])).unwrap();
    for m in [Metric::SumRate, Metric::MrsWpc, Metric::EstLowerBound] {
        let ratio =
            small.get(10.0, m, 1).unwrap().stat.stderr / large.get(10.0, m, 1).unwrap().stat.stderr;
        assert!((ratio - 2.0).abs() <= 0.4, "{m}: ratio {ratio}");
    }
}

#[test]
fn sweep_is_independent_of_worker_count() {
    let mut sc = sweep(300, 17, &[0.0, 15.0, 30.0]);
    sc.workers = Workers::Fixed(1);
    let a = run_sum_rate_sweep(&sc).unwrap();
    sc.workers = Workers::Fixed(5);
    let b = run_sum_rate_sweep(&sc).unwrap();
    assert_eq!(a, b);
}

#[test]
fn k0_sweep_has_only_legacy_rows() {
    let mut sc = sweep(50, 3, &[10.0]);
    sc.cfg = sc.cfg.with_k(0);
    let t = run_sum_rate_sweep(&sc).unwrap();
    assert!(t.rows.iter().all(|r| r.k == 0));
    assert!(t
        .rows
        .iter()
        .all(|r| !matches!(r.metric, Metric::MrsWpc | Metric::MrsGaussBound)));
    assert_eq!(
        t.get(10.0, Metric::SumRate, 0).unwrap().stat,
        t.get(10.0, Metric::LegacyAlone, 0).unwrap().stat
    );
}

#[test]
fn plan_exposes_single_draw_values() {
    let sc = sweep(10, 1, &[10.0, 20.0]);
    let plan = SweepPlan::new(&sc).unwrap();
    let v = plan.trial(3).unwrap();
    assert_eq!(v.len(), plan.grid().len());
    assert!(v.iter().all(|row| row.len() == plan.columns().len()));
    // Common random numbers: each curve is nondecreasing in SNR per draw.
    for c in 0..plan.columns().len() {
        assert!(v[1][c] >= v[0][c], "{:?}", plan.columns()[c]);
    }
}

#[test]
fn averaged_dominance_pairs() {
    let cfg = fig_cfg();
    let per_trial = run_trials(2000, Workers::Auto, |t| {
        let d = dominance_check(&sample_channel(&cfg, 21, t), &cfg)?;
        Ok((d.with_mrs, d.direct_only, d.delta))
    })
    .unwrap();
    assert!(per_trial.iter().all(|p| p.2 >= -1e-9));
    let with: Vec<f64> = per_trial.iter().map(|p| p.0).collect();
    let without: Vec<f64> = per_trial.iter().map(|p| p.1).collect();
    assert!(Stat::from_samples(&with).mean >= Stat::from_samples(&without).mean);
}

#[test]
fn region_geometry_and_collapse_without_mrs() {
    let mut sc = Scenario::new(fig_cfg(), Experiment::RateRegion);
    sc.snr_grid_db = vec![20.0, 10.0];
    sc.trials = 500;
    sc.seed = 4;
    let t = run_rate_region(&sc).unwrap();
    assert_eq!(t.snapshots[0].snr_db, 10.0);
    for s in &t.snapshots {
        let (a, b, c, d) = (
            s.point(Vertex::A),
            s.point(Vertex::B),
            s.point(Vertex::C),
            s.point(Vertex::D),
        );
        assert_eq!(a.legacy.mean, 0.0);
        assert_eq!(c.mrs.mean, 0.0);
        assert_eq!(b.mrs, a.mrs);
        assert!(c.legacy.mean >= b.legacy.mean);
        assert_eq!((d.legacy, d.mrs.mean), (b.legacy, 0.0));
        assert!(s.mrs_gaussian.mean >= a.mrs.mean);
    }

    sc.cfg = sc.cfg.with_alpha(C64::new(0.0, 0.0));
    let t = run_rate_region(&sc).unwrap();
    for s in &t.snapshots {
        assert_eq!(s.point(Vertex::A).mrs.mean, 0.0);
        let (b, c) = (
            s.point(Vertex::B).legacy.mean,
            s.point(Vertex::C).legacy.mean,
        );
        assert!((b - c).abs() <= 1e-9 * c, "{b} vs {c}");
    }

    sc.cfg = fig_cfg().with_k(2);
    assert!(matches!(run_rate_region(&sc), Err(Error::Config(_))));
}

fn lar(
    grow: GrowDim,
    cfg: SystemConfig,
    values: Vec<usize>,
) -> Result<mrs_lab::experiments::LarTable, Error> {
    let mut sc = Scenario::new(cfg.with_gamma_db(20.0), Experiment::LarConvergence);
    sc.trials = 100;
    sc.seed = 8;
    sc.lar = Some(LarGrid { grow, values });
    run_lar_convergence(&sc)
}

#[test]
fn lar_median_gap_decreases_along_the_grid() {
    for (grow, cfg) in [
        (GrowDim::Nr, SystemConfig::new(2, 1, 1)),
        (GrowDim::Nt, SystemConfig::new(1, 4, 1)),
    ] {
        let t = lar(grow, cfg, vec![64, 256, 1024, 4096]).unwrap();
        assert!(
            t.rows.windows(2).all(|w| w[1].rel_gap < w[0].rel_gap),
            "{grow}: {:?}",
            t.rows
        );
        assert!(t.rows[3].rel_gap <= 0.02);
        assert_eq!(t.rows[0].separable.is_some(), grow == GrowDim::Nt);
    }
}

#[test]
fn lar_without_mrs_reaches_the_direct_only_limit() {
    let t = lar(GrowDim::Nr, SystemConfig::new(2, 1, 0), vec![4096]).unwrap();
    let gamma = 100.0f64;
    let limit = 2.0 * (1.0 + gamma / 2.0).log2();
    assert_eq!(t.rows[0].lar.mean, limit);
    assert!((t.rows[0].exact.mean - limit).abs() / limit <= 0.01);
}

#[test]
fn lar_guards() {
    assert!(matches!(
        lar(GrowDim::Nr, fig_cfg(), vec![1 << 14]),
        Err(Error::Size(_))
    ));
    assert!(matches!(
        lar(GrowDim::Nr, fig_cfg(), vec![]),
        Err(Error::Config(_))
    ));
    let mut cfg = SystemConfig::new(1, 4, 1);
    cfg.nr = 0;
    assert!(lar(GrowDim::Nt, cfg, vec![64]).is_err());
    let mut sc = Scenario::new(fig_cfg(), Experiment::LarConvergence);
    sc.lar = Some(LarGrid {
        grow: GrowDim::Nr,
        values: vec![8],
    });
    sc.snr_grid_db = vec![10.0, 20.0];
    assert!(run_lar_convergence(&sc).is_err());
}

#[test]
fn estimation_sweep_error_power_matches_prediction() {
    let mut sc = Scenario::new(fig_cfg(), Experiment::EstimationSweep);
    sc.snr_grid_db = vec![0.0, 20.0];
    sc.trials = 4000;
    sc.seed = 6;
    let t = run_estimation_sweep(&sc).unwrap();
    for r in &t.rows {
        let rel = (r.error_entry_power.mean - r.error_entry_power_theory).abs()
            / r.error_entry_power_theory;
        assert!(rel <= 0.03, "SNR {}: {rel}", r.snr_db);
        assert_eq!(r.error_cov_scale, 0.03125);
        assert!(r.bound.mean < r.perfect.mean || r.snr_db < 10.0);
    }
}

#[test]
fn invalid_scenarios_are_rejected() {
    let mut sc = sweep(0, 1, &[10.0]);
    assert!(matches!(run_sum_rate_sweep(&sc), Err(Error::Config(_))));
    sc.trials = 10;
    sc.snr_grid_db.clear();
    assert!(matches!(run_sum_rate_sweep(&sc), Err(Error::Config(_))));
    sc.snr_grid_db = vec![f64::NAN];
    assert!(run_sum_rate_sweep(&sc).is_err());
    sc.snr_grid_db = vec![10.0];
    sc.workers = Workers::Fixed(0);
    assert!(run_sum_rate_sweep(&sc).is_err());
    // training needs N > m0·m1
    let mut sc = sweep(10, 1, &[10.0]);
    sc.cfg.coherence_len = 128;
    assert!(matches!(run_sum_rate_sweep(&sc), Err(Error::Config(_))));
}
