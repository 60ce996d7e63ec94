//! MMSE-SIC joint decoding for a single MRS antenna.
//!
//! The legacy streams are decoded first, one at a time, with the undecoded
//! legacy streams and every column of `G1` treated as interference (the
//! reflection coefficient is unknown at that point). Once `x0` is known its
//! direct contribution is cancelled and the MRS symbol is read from
//! `y1 = √β1·(G1·x0)·x1 + z`.

use std::f64::consts::LN_2;

use crate::channel::SystemConfig;
use crate::error::{Error, Result};
use crate::numerics::{
    gram_logdet_rate, i0e_unchecked, integrate_with_cutoff, mmse_residual_sinr, CMatrix, CVector,
    C64,
};

/// Below this post-SIC SNR the polyphase rate is taken as `γ1` nats.
pub const WPC_SMALL_SNR: f64 = 1e-4;

/// Absolute quadrature tolerance (nats) for the polyphase rate integral.
pub const WPC_QUAD_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DecodingOrder {
    /// Fixed pre-sort by descending column norm of `G0`, ties by index.
    #[default]
    ColumnNorm,
    /// At each stage decode the remaining stream with the highest SINR.
    GreedySinr,
}

/// How the MRS matched-filter SNR is normalized.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum MrsSnrConvention {
    /// `β1·x0ᴴG1ᴴG1x0 / (nt·σ²)`.
    #[default]
    Literal,
    /// `β1·‖G1x0‖² / σ²`, the matched-filter SNR of `y1` without the `1/nt`.
    MatchedFilter,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct ReceiverOptions {
    pub order: DecodingOrder,
    pub snr_convention: MrsSnrConvention,
}

/// Legacy-stream half of the SIC chain.
#[derive(Debug, Clone, PartialEq)]
pub struct LegacySic {
    /// Stream indices in decoding order.
    pub order: Vec<usize>,
    /// SINR of each stage, aligned with `order`.
    pub per_stream_sinr: Vec<f64>,
    /// `Σ log2(1 + γ_{0,i})`.
    pub rate_bits: f64,
}

/// Full outcome of the joint decoder on one realization.
#[derive(Debug, Clone, PartialEq)]
pub struct SicResult {
    pub order: Vec<usize>,
    pub per_stream_sinr: Vec<f64>,
    pub legacy_rate_bits: f64,
    pub gamma1: f64,
    pub mrs_rate_wpc_bits: f64,
    pub mrs_rate_gaussian_bits: f64,
}

/// Legacy stream indices by descending column norm of `G0`; ties keep index order.
pub fn decoding_order(direct: &CMatrix) -> Vec<usize> {
    let norms = direct.column_norms_sqr();
    let mut order: Vec<usize> = (0..norms.len()).collect();
    order.sort_by(|&a, &b| norms[b].total_cmp(&norms[a]).then(a.cmp(&b)));
    order
}

/// Interference matrix of one stage: `[g0_current | undecoded g0 columns | G1]`.
fn stage_matrix(direct: &CMatrix, keyhole: &CMatrix, current: usize, rest: &[usize]) -> CMatrix {
    let mut cols = vec![current];
    cols.extend_from_slice(rest);
    let legacy = direct.select_columns(&cols);
    CMatrix::hstack(&[&legacy, keyhole]).expect("G0 and G1 share the row count")
}

/// SIC chain over a given decoding order with per-stream gain `gain`.
pub fn legacy_sic_with_order(
    direct: &CMatrix,
    keyhole: &CMatrix,
    gain: f64,
    order: &[usize],
) -> Result<LegacySic> {
    if direct.rows() != keyhole.rows() {
        return Err(Error::Input(
            "G0 and G1 must have the same number of rows".into(),
        ));
    }
    let mut sinr = Vec::with_capacity(order.len());
    for (stage, &current) in order.iter().enumerate() {
        let h = stage_matrix(direct, keyhole, current, &order[stage + 1..]);
        sinr.push(mmse_residual_sinr(&h, gain)?);
    }
    let rate_bits = sinr.iter().map(|s| s.ln_1p()).sum::<f64>() / LN_2;
    Ok(LegacySic {
        order: order.to_vec(),
        per_stream_sinr: sinr,
        rate_bits,
    })
}

/// Legacy MMSE-SIC rate `R0` with `G1` treated as interference, at gain `β1γ/nt`.
pub fn legacy_sic_rate(
    direct: &CMatrix,
    keyhole: &CMatrix,
    cfg: &SystemConfig,
    rule: DecodingOrder,
) -> Result<LegacySic> {
    if cfg.k != 1 {
        return Err(Error::Config(format!(
            "the joint decoder is defined for K = 1, got K = {}",
            cfg.k
        )));
    }
    let gain = cfg.stream_gain();
    match rule {
        DecodingOrder::ColumnNorm => {
            legacy_sic_with_order(direct, keyhole, gain, &decoding_order(direct))
        }
        DecodingOrder::GreedySinr => {
            let mut remaining: Vec<usize> = (0..direct.cols()).collect();
            let mut order = Vec::with_capacity(remaining.len());
            let mut sinr = Vec::with_capacity(remaining.len());
            while !remaining.is_empty() {
                let mut best = (0, f64::NEG_INFINITY);
                for (pos, &cand) in remaining.iter().enumerate() {
                    let rest: Vec<usize> =
                        remaining.iter().copied().filter(|&c| c != cand).collect();
                    let s = mmse_residual_sinr(&stage_matrix(direct, keyhole, cand, &rest), gain)?;
                    if s > best.1 {
                        best = (pos, s);
                    }
                }
                order.push(remaining.remove(best.0));
                sinr.push(best.1);
            }
            let rate_bits = sinr.iter().map(|s| s.ln_1p()).sum::<f64>() / LN_2;
            Ok(LegacySic {
                order,
                per_stream_sinr: sinr,
                rate_bits,
            })
        }
    }
}

/// Post-SIC SNR of the MRS stream.
pub fn mrs_postsic_snr(
    keyhole: &CMatrix,
    x0: &CVector,
    cfg: &SystemConfig,
    convention: MrsSnrConvention,
) -> f64 {
    let beta1 = SystemConfig {
        k: 1,
        ..cfg.clone()
    }
    .beta();
    let energy = keyhole.mul_vec(x0).norm_sqr();
    match convention {
        MrsSnrConvention::Literal => beta1 * energy / (cfg.nt as f64 * cfg.sigma2),
        MrsSnrConvention::MatchedFilter => beta1 * energy / cfg.sigma2,
    }
}

/// Gaussian-codebook bound `log2(1 + γ1)`.
pub fn mrs_rate_gaussian(gamma1: f64) -> f64 {
    gamma1.ln_1p() / LN_2
}

/// `ln(f(u, γ)/u)` for the Rician envelope density `f`, evaluated without
/// forming `f` so it stays finite where `f` underflows.
fn wyner_log_ratio(u: f64, gamma: f64) -> f64 {
    let d = 1.0 - u;
    (2.0 * gamma).ln() - gamma * d * d + i0e_unchecked(2.0 * u * gamma).ln()
}

/// Envelope density `f(u, γ) = 2uγ·e^(−γ(1+u²))·I0(2uγ)` of a unit-modulus
/// symbol in complex noise of variance `1/γ`.
///
/// Evaluated as `2uγ·e^(−γ(1−u)²)·[e^(−2uγ)·I0(2uγ)]` so large `γ` never overflows.
pub fn wyner_envelope_pdf(u: f64, gamma: f64) -> f64 {
    if u <= 0.0 || gamma <= 0.0 {
        return 0.0;
    }
    let d = 1.0 - u;
    2.0 * u * gamma * (-gamma * d * d).exp() * i0e_unchecked(2.0 * u * gamma)
}

/// Upper integration limit for the envelope density.
///
/// `f(u) ≤ 2uγ·e^(−γ(u−1)²)` for `u > 1`, and at this cutoff
/// `γ(u−1)² ≥ 144`, so the dropped tail is below `e^(−130)` for `γ ≤ 1e6`.
pub fn wyner_cutoff(gamma: f64) -> f64 {
    1.0 + 12.0 / gamma.sqrt() + 12.0 / gamma
}

/// `∫₀^∞ f(u, γ) du`; equals one up to quadrature error.
pub fn wyner_pdf_mass(gamma: f64, tol: f64) -> Result<f64> {
    if !(gamma > 0.0) || !gamma.is_finite() {
        return Err(Error::Input(format!(
            "gamma must be finite and > 0, got {gamma}"
        )));
    }
    Ok(integrate_with_cutoff(|u| wyner_envelope_pdf(u, gamma), wyner_cutoff(gamma), tol)?.value)
}

/// Capacity of the unit-modulus-input complex AWGN channel at SNR `γ1`, in nats:
/// `−∫ f·ln(f/u) du + ln(2γ1/e)`.
pub fn mrs_rate_wpc_nats(gamma1: f64) -> Result<f64> {
    if !(gamma1 >= 0.0) || !gamma1.is_finite() {
        return Err(Error::Input(format!(
            "gamma1 must be finite and >= 0, got {gamma1}"
        )));
    }
    if gamma1 < WPC_SMALL_SNR {
        return Ok(gamma1);
    }
    let neg_entropy = integrate_with_cutoff(
        |u| {
            let f = wyner_envelope_pdf(u, gamma1);
            if f == 0.0 {
                0.0
            } else {
                f * wyner_log_ratio(u, gamma1)
            }
        },
        wyner_cutoff(gamma1),
        WPC_QUAD_TOL,
    )?;
    Ok((-neg_entropy.value + (2.0 * gamma1).ln() - 1.0).max(0.0))
}

/// Polyphase MRS rate in bits.
pub fn mrs_rate_wpc(gamma1: f64) -> Result<f64> {
    Ok(mrs_rate_wpc_nats(gamma1)? / LN_2)
}

/// Legacy rate on `G0 + x1·G1` when the reflection coefficient is known.
pub fn joint_known_x1_rate(
    direct: &CMatrix,
    keyhole: &CMatrix,
    x1: C64,
    cfg: &SystemConfig,
) -> Result<f64> {
    if (x1.norm() - 1.0).abs() > 1e-9 {
        return Err(Error::Input(format!(
            "reflection coefficient must be unit modulus, got {x1}"
        )));
    }
    let effective = direct + &keyhole.scale(x1);
    gram_logdet_rate(
        &effective,
        SystemConfig {
            k: 1,
            ..cfg.clone()
        }
        .stream_gain(),
    )
}

/// Runs the whole K = 1 chain: legacy SIC, then the MRS stream.
pub fn mmse_sic(
    direct: &CMatrix,
    keyhole: &CMatrix,
    x0: &CVector,
    cfg: &SystemConfig,
    opts: ReceiverOptions,
) -> Result<SicResult> {
    let legacy = legacy_sic_rate(direct, keyhole, cfg, opts.order)?;
    let gamma1 = mrs_postsic_snr(keyhole, x0, cfg, opts.snr_convention);
    Ok(SicResult {
        order: legacy.order,
        per_stream_sinr: legacy.per_stream_sinr,
        legacy_rate_bits: legacy.rate_bits,
        gamma1,
        mrs_rate_wpc_bits: mrs_rate_wpc(gamma1)?,
        mrs_rate_gaussian_bits: mrs_rate_gaussian(gamma1),
    })
}
