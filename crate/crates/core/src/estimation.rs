//! Joint training of the direct and re-scattered paths.
//!
//! The legacy transmitter repeats its pilot block `m1` times while the MRS
//! node holds one reflection value per repetition, taken from the rows of a
//! Hadamard matrix. The composite pilot `Ψp = X1p ⊗ X0p` is then orthogonal
//! and one least-squares projection separates every path.

use rand::Rng;

use crate::channel::{ChannelRealization, SystemConfig};
use crate::error::{Error, Result};
use crate::numerics::{gram_logdet_rate, kronecker, CMatrix, C64};
use crate::rng::cscg_matrix;

/// Largest Hadamard order this module will build.
pub const MAX_HADAMARD_ORDER: usize = 1 << 14;

fn check_order(n: usize) -> Result<()> {
    if !n.is_power_of_two() || n > MAX_HADAMARD_ORDER {
        return Err(Error::Input(format!(
            "Hadamard order must be a power of two <= {MAX_HADAMARD_ORDER}, got {n}"
        )));
    }
    Ok(())
}

/// Sylvester Hadamard matrix of order `n` as row-major ±1 signs, built with
/// the recursion `H_2n = [[1, 1], [1, −1]] ⊗ H_n`.
pub fn hadamard_signs(n: usize) -> Result<Vec<i8>> {
    check_order(n)?;
    let mut h = vec![1i8];
    let mut size = 1;
    while size < n {
        let next = 2 * size;
        let mut out = vec![0i8; next * next];
        for (a, b, sign) in [(0, 0, 1i8), (0, 1, 1), (1, 0, 1), (1, 1, -1)] {
            for i in 0..size {
                for j in 0..size {
                    out[(a * size + i) * next + b * size + j] = sign * h[i * size + j];
                }
            }
        }
        h = out;
        size = next;
    }
    Ok(h)
}

pub fn hadamard(n: usize) -> Result<CMatrix> {
    let signs = hadamard_signs(n)?;
    CMatrix::from_real(
        n,
        n,
        &signs.iter().map(|&s| f64::from(s)).collect::<Vec<_>>(),
    )
}

/// Entry `(i, j)` of the order-`2^k` Sylvester matrix: `(−1)^popcount(i & j)`.
fn sylvester_sign(i: usize, j: usize) -> f64 {
    if (i & j).count_ones().is_multiple_of(2) {
        1.0
    } else {
        -1.0
    }
}

/// First `count` rows of the order-`n` Hadamard matrix, scaled by `amplitude`.
fn hadamard_rows(n: usize, count: usize, amplitude: f64) -> Result<CMatrix> {
    check_order(n)?;
    if count > n {
        return Err(Error::Config(format!(
            "cannot take {count} rows of a Hadamard matrix of order {n}"
        )));
    }
    Ok(CMatrix::from_fn(count, n, |i, j| {
        C64::new(amplitude * sylvester_sign(i, j), 0.0)
    }))
}

/// Training sequences for one coherence interval.
#[derive(Debug, Clone, PartialEq)]
pub struct PilotBlock {
    /// `X0p`, `nt × m0`, entries `±√ρp`.
    pub legacy: CMatrix,
    /// `X1p`, `(K+1) × m1`, entries ±1 with an all-ones first row.
    pub mrs: CMatrix,
    /// `Ψp = X1p ⊗ X0p`, `nt(K+1) × m0·m1`.
    pub composite: CMatrix,
    /// `Np = m0·m1`.
    pub len: usize,
    pub rho_p: f64,
}

impl PilotBlock {
    /// Human-readable description of the training schedule.
    pub fn schedule(&self) -> String {
        format!(
            "legacy pilot block of {} symbols repeated {} times; MRS reflection held constant within a repetition and switched across repetitions (Hadamard rows)",
            self.legacy.cols(),
            self.mrs.cols()
        )
    }
}

pub fn build_pilots(cfg: &SystemConfig) -> Result<PilotBlock> {
    cfg.validate_training()?;
    let rho_p = cfg.rho_p();
    let legacy = hadamard_rows(cfg.m0, cfg.nt, rho_p.sqrt())?;
    let mrs = hadamard_rows(cfg.m1, cfg.k + 1, 1.0)?;
    let composite = kronecker(&mrs, &legacy)?;
    Ok(PilotBlock {
        legacy,
        mrs,
        composite,
        len: cfg.pilot_len(),
        rho_p,
    })
}

/// `Yp = √β_K·G·Ψp + Zp` with `Zp` i.i.d. `CN(0, σ²)` drawn from `rng`.
pub fn observe_pilots<R: Rng + ?Sized>(
    realization: &ChannelRealization,
    pilots: &PilotBlock,
    cfg: &SystemConfig,
    rng: &mut R,
) -> Result<CMatrix> {
    let g = &realization.composite;
    if g.cols() != pilots.composite.rows() {
        return Err(Error::Input(format!(
            "channel has {} columns but the pilot block has {} rows",
            g.cols(),
            pilots.composite.rows()
        )));
    }
    if !(cfg.sigma2 >= 0.0) {
        return Err(Error::Config(format!(
            "sigma2 must be >= 0, got {}",
            cfg.sigma2
        )));
    }
    let clean = (g * &pilots.composite).scale_real(cfg.beta().sqrt());
    let noise = cscg_matrix(rng, g.rows(), pilots.len).scale_real(cfg.sigma2.sqrt());
    Ok(&clean + &noise)
}

/// Least-squares channel estimate.
#[derive(Debug, Clone, PartialEq)]
pub struct LsEstimate {
    /// `Ĝ`, on the same scale as `G`.
    pub g_hat: CMatrix,
    /// `√β_K·Ĝ = Yp·Ψpᴴ / (m0·m1·ρp)`.
    pub normalized: CMatrix,
}

pub fn ls_estimate(yp: &CMatrix, pilots: &PilotBlock, beta: f64) -> Result<LsEstimate> {
    if yp.cols() != pilots.len {
        return Err(Error::Input(format!(
            "received pilots have {} columns, expected {}",
            yp.cols(),
            pilots.len
        )));
    }
    if !(beta > 0.0) {
        return Err(Error::Input(format!("beta must be > 0, got {beta}")));
    }
    let normalized =
        (yp * &pilots.composite.adjoint()).scale_real(1.0 / (pilots.len as f64 * pilots.rho_p));
    let g_hat = normalized.scale_real(1.0 / beta.sqrt());
    Ok(LsEstimate { g_hat, normalized })
}

/// Scalar `s` of the effective-noise covariance `s·I_nr` contributed by the
/// estimation error: `nt(K+1)ρd·σ² / (ρp·m0·m1)`.
pub fn error_covariance_scale(cfg: &SystemConfig) -> f64 {
    cfg.nt as f64 * (cfg.k + 1) as f64 * cfg.rho_d() * cfg.sigma2
        / (cfg.rho_p() * cfg.pilot_len() as f64)
}

/// Gain convention of the estimated-CSI bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum BoundForm {
    /// `γβ_Kσ²/nt`, which reduces to the perfect-CSI sum rate as `s → 0`, `Np → 0`.
    #[default]
    Consistent,
    /// `γβ_Kσ²` without the `1/nt`.
    Printed,
}

/// `((N − Np)/N)·log2 det(I + W⁻¹·g·Ĝ·Ĝᴴ)` with `W = (σ² + s)·I`.
pub fn rate_bound_with(
    g_hat: &CMatrix,
    cfg: &SystemConfig,
    error_scale: f64,
    pilot_len: usize,
    form: BoundForm,
) -> Result<f64> {
    if pilot_len >= cfg.coherence_len {
        return Err(Error::Config(format!(
            "pilot length {pilot_len} leaves no data symbols in N = {}",
            cfg.coherence_len
        )));
    }
    if !(error_scale >= 0.0) {
        return Err(Error::Input(format!(
            "error scale must be >= 0, got {error_scale}"
        )));
    }
    let signal = match form {
        BoundForm::Consistent => cfg.gamma() * cfg.beta() * cfg.sigma2 / cfg.nt as f64,
        BoundForm::Printed => cfg.gamma() * cfg.beta() * cfg.sigma2,
    };
    let gain = signal / (cfg.sigma2 + error_scale);
    let fraction = (cfg.coherence_len - pilot_len) as f64 / cfg.coherence_len as f64;
    Ok(fraction * gram_logdet_rate(g_hat, gain)?)
}

/// Lower bound on the sum rate when only `Ĝ` is known.
pub fn estimated_csi_rate_bound(
    g_hat: &CMatrix,
    cfg: &SystemConfig,
    form: BoundForm,
) -> Result<f64> {
    rate_bound_with(
        g_hat,
        cfg,
        error_covariance_scale(cfg),
        cfg.pilot_len(),
        form,
    )
}

#[derive(Debug, Clone, PartialEq)]
pub struct EstimationResult {
    pub g_hat: CMatrix,
    pub normalized: CMatrix,
    pub error_cov_scale: f64,
    pub rate_lower_bound_bits: f64,
}

/// Training phase followed by the rate bound on the resulting estimate.
pub fn estimate_channel<R: Rng + ?Sized>(
    realization: &ChannelRealization,
    pilots: &PilotBlock,
    cfg: &SystemConfig,
    rng: &mut R,
    form: BoundForm,
) -> Result<EstimationResult> {
    let yp = observe_pilots(realization, pilots, cfg, rng)?;
    let est = ls_estimate(&yp, pilots, cfg.beta())?;
    let bound = estimated_csi_rate_bound(&est.g_hat, cfg, form)?;
    Ok(EstimationResult {
        g_hat: est.g_hat,
        normalized: est.normalized,
        error_cov_scale: error_covariance_scale(cfg),
        rate_lower_bound_bits: bound,
    })
}

/// Fraction of the coherence interval left for data.
pub fn data_fraction(cfg: &SystemConfig) -> f64 {
    (cfg.coherence_len as f64 - cfg.pilot_len() as f64) / cfg.coherence_len as f64
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::sample_channel;
    use crate::rng::{substream, StreamLabel};

    fn int_gram(h: &[i8], n: usize) -> Vec<i64> {
        let mut out = vec![0i64; n * n];
        for i in 0..n {
            for j in 0..n {
                out[i * n + j] = (0..n)
                    .map(|k| i64::from(h[i * n + k]) * i64::from(h[j * n + k]))
                    .sum();
            }
        }
        out
    }

    #[test]
    fn hadamard_small_orders() {
        assert_eq!(hadamard_signs(1).unwrap(), vec![1]);
        assert_eq!(hadamard_signs(2).unwrap(), vec![1, 1, 1, -1]);
        let h4 = hadamard(4).unwrap();
        let h2 = hadamard(2).unwrap();
        assert_eq!(h4, kronecker(&h2, &h2).unwrap());
        let h8 = hadamard_signs(8).unwrap();
        let g = int_gram(&h8, 8);
        for i in 0..8 {
            for j in 0..8 {
                assert_eq!(g[i * 8 + j], if i == j { 8 } else { 0 });
            }
        }
        assert!(hadamard(3).is_err());
        assert!(hadamard(0).is_err());
        assert!(hadamard(1 << 15).is_err());
    }

    #[test]
    fn closed_form_rows_match_recursion() {
        let n = 64;
        let h = hadamard_signs(n).unwrap();
        for i in 0..n {
            for j in 0..n {
                assert_eq!(f64::from(h[i * n + j]), sylvester_sign(i, j));
            }
        }
    }

    #[test]
    fn fig3_pilot_block() {
        let cfg = SystemConfig::new(2, 4, 1);
        let p = build_pilots(&cfg).unwrap();
        assert_eq!(p.composite.shape(), (4, 128));
        let gram = p.composite.gram_outer();
        let target = 128.0 * p.rho_p;
        let resid = (&gram - &CMatrix::identity(4).scale_real(target)).frobenius_norm();
        assert!(resid / (target * 2.0) <= 1e-12);
        for j in 0..p.mrs.cols() {
            assert_eq!(p.mrs[(0, j)], C64::new(1.0, 0.0));
        }
        let x0 = p.legacy.gram_outer();
        assert!(
            (&x0 - &CMatrix::identity(2).scale_real(64.0 * p.rho_p)).max_abs()
                <= 1e-10 * 64.0 * p.rho_p
        );
    }

    #[test]
    fn no_mrs_pilot_is_legacy_pilot() {
        let cfg = SystemConfig::new(2, 4, 0);
        let mut cfg = cfg;
        cfg.m1 = 1;
        let p = build_pilots(&cfg).unwrap();
        assert_eq!(p.mrs.shape(), (1, 1));
        assert_eq!(p.composite, p.legacy);
    }

    #[test]
    fn infeasible_pilots() {
        let mut cfg = SystemConfig::new(2, 4, 3);
        cfg.m1 = 2;
        assert!(matches!(build_pilots(&cfg), Err(Error::Config(_))));
        let mut cfg = SystemConfig::new(2, 4, 1);
        cfg.m0 = 48;
        assert!(build_pilots(&cfg).is_err());
    }

    #[test]
    fn noiseless_observation_and_recovery() {
        let mut cfg = SystemConfig::new(2, 4, 1);
        cfg.sigma2 = 0.0;
        cfg.rho_p = Some(3.0);
        cfg.rho_d = Some(3.0);
        let r = sample_channel(&cfg, 10, 0);
        let p = build_pilots(&SystemConfig {
            sigma2: 1.0,
            ..cfg.clone()
        })
        .unwrap();
        let yp =
            observe_pilots(&r, &p, &cfg, &mut substream(10, 0, StreamLabel::PilotNoise)).unwrap();
        assert_eq!(yp.shape(), (4, 128));
        let clean = (&r.composite * &p.composite).scale_real(cfg.beta().sqrt());
        assert_eq!(yp, clean);
        let est = ls_estimate(&yp, &p, cfg.beta()).unwrap();
        let rel = (&est.g_hat - &r.composite).frobenius_norm() / r.composite.frobenius_norm();
        assert!(rel <= 1e-10);
    }

    #[test]
    fn estimation_error_is_projected_noise() {
        let cfg = SystemConfig::new(2, 4, 1).with_gamma_db(5.0);
        let r = sample_channel(&cfg, 3, 0);
        let p = build_pilots(&cfg).unwrap();
        let yp =
            observe_pilots(&r, &p, &cfg, &mut substream(3, 0, StreamLabel::PilotNoise)).unwrap();
        let est = ls_estimate(&yp, &p, cfg.beta()).unwrap();
        let z = crate::rng::cscg_matrix(&mut substream(3, 0, StreamLabel::PilotNoise), 4, 128);
        let predicted = (&z * &p.composite.adjoint()).scale_real(1.0 / (128.0 * p.rho_p));
        let err = &est.normalized - &r.composite.scale_real(cfg.beta().sqrt());
        assert!((&err - &predicted).max_abs() < 1e-12);
    }

    #[test]
    fn error_scale_examples() {
        let cfg = SystemConfig::new(2, 4, 1);
        assert!((error_covariance_scale(&cfg) - 0.031_25).abs() < 1e-15);
        let mut strong = cfg.clone();
        strong.rho_p = Some(1e300);
        assert!(error_covariance_scale(&strong) < 1e-290);
    }

    #[test]
    fn bound_reduces_to_sum_rate_without_training_cost() {
        let cfg = SystemConfig::new(2, 4, 1);
        let r = sample_channel(&cfg, 4, 0);
        let b = rate_bound_with(&r.composite, &cfg, 0.0, 0, BoundForm::Consistent).unwrap();
        let s = crate::rates::sum_rate(&r, &cfg).unwrap();
        assert_eq!(b, s);
    }

    #[test]
    fn bound_prefactor_and_ceiling() {
        let cfg = SystemConfig::new(2, 4, 1);
        assert!((data_fraction(&cfg) - 0.872).abs() < 1e-15);
        let p = build_pilots(&cfg).unwrap();
        for t in 0..200 {
            let r = sample_channel(&cfg, 12, t);
            let e = estimate_channel(
                &r,
                &p,
                &cfg,
                &mut substream(12, t, StreamLabel::PilotNoise),
                BoundForm::Consistent,
            )
            .unwrap();
            let perfect = gram_logdet_rate(&e.g_hat, cfg.stream_gain()).unwrap();
            assert!(e.rate_lower_bound_bits >= 0.0);
            assert!(e.rate_lower_bound_bits <= 0.872 * perfect + 1e-12);
        }
        let mut bad = cfg.clone();
        bad.coherence_len = 100;
        assert!(
            estimated_csi_rate_bound(&CMatrix::identity(4), &bad, BoundForm::Consistent).is_err()
        );
    }
}
