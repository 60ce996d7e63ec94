//! Closed-form achievable rates with full receiver CSI.
//!
//! All rates are in bits per channel use. The common building block is
//! `log2 det(I + γ0·G·Gᴴ)` with `γ0 = γβ_K/nt`.

use std::f64::consts::LN_2;

use crate::channel::{ChannelRealization, SystemConfig};
use crate::error::{Error, Result};
use crate::numerics::{gram_logdet_rate, hermitian_eigenvalues, hpd_rate_bits, CMatrix, CVector};

/// Per-realization rate quantities gathered by the experiments.
#[derive(Debug, Clone, PartialEq)]
pub struct RateSample {
    /// Sum rate of the composite channel.
    pub sum_rate: f64,
    /// Legacy link without the MRS node, normalized with `β0 = 1/nr`.
    pub legacy_alone: f64,
    /// Legacy MMSE-SIC rate with the re-scattered path as interference.
    pub legacy_sic: f64,
    /// MRS rate with unit-modulus (polyphase) signalling.
    pub mrs_wpc: f64,
    /// MRS rate bound with a Gaussian codebook.
    pub mrs_gaussian_bound: f64,
    /// Legacy rate when the reflection coefficient is known at the receiver.
    pub joint_known_x1: f64,
    /// MRS post-SIC SNR (linear).
    pub gamma1: f64,
    pub per_stream_sinr: Vec<f64>,
}

impl RateSample {
    pub fn is_valid(&self) -> bool {
        let rates = [
            self.sum_rate,
            self.legacy_alone,
            self.legacy_sic,
            self.mrs_wpc,
            self.mrs_gaussian_bound,
            self.joint_known_x1,
            self.gamma1,
        ];
        rates.iter().all(|r| r.is_finite() && *r >= 0.0)
            && self
                .per_stream_sinr
                .iter()
                .all(|s| s.is_finite() && *s >= 0.0)
    }
}

/// `log2 det(I + γβ_K·G·Gᴴ/nt)`.
pub fn sum_rate(realization: &ChannelRealization, cfg: &SystemConfig) -> Result<f64> {
    gram_logdet_rate(&realization.composite, cfg.stream_gain())
}

/// Rate of the direct link on its own, normalized as a `K = 0` system.
pub fn legacy_alone_rate(direct: &CMatrix, cfg: &SystemConfig) -> Result<f64> {
    gram_logdet_rate(direct, cfg.with_k(0).stream_gain())
}

/// Rates with and without the keyhole term at one common `γ0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Dominance {
    /// `log2 det(I + F + Δ)`.
    pub with_mrs: f64,
    /// `log2 det(I + F)`.
    pub direct_only: f64,
    /// `with_mrs − direct_only`; never negative beyond rounding.
    pub delta: f64,
}

/// Compares `log2 det(I + F + Δ)` with `log2 det(I + F)` where
/// `F = γ0·G0·G0ᴴ` and `Δ = γ0·Σ Gk·Gkᴴ`.
///
/// Both determinants are taken on the `nr × nr` side so that `Δ = 0` gives
/// bit-identical operands and a delta of exactly zero.
pub fn dominance_check(realization: &ChannelRealization, cfg: &SystemConfig) -> Result<Dominance> {
    if realization.k() == 0 {
        return Err(Error::Config("dominance check needs K >= 1".into()));
    }
    let gain = cfg.stream_gain();
    let direct = realization.direct.gram_outer();
    let mut total = direct.clone();
    for k in &realization.keyholes {
        total = &total + &k.channel.gram_outer();
    }
    let direct_only = hpd_rate_bits(&direct, gain)?;
    let with_mrs = hpd_rate_bits(&total, gain)?;
    Ok(Dominance {
        with_mrs,
        direct_only,
        delta: with_mrs - direct_only,
    })
}

/// Which constant multiplies the eigenvalues in the large-`nr` limit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum LarConstant {
    /// `γ/(nt(K|α|²+1))`, finite as `nr → ∞`.
    #[default]
    Limit,
    /// `γβ_K` exactly as printed, which shrinks with `nr`.
    Printed,
}

/// Limiting rate as `nr → ∞` with `nt`, `K` fixed:
/// `nt·log2(1 + c) + Σ log2(1 + |α|²‖g_tk‖²·c)`.
pub fn lar_rx_limit(g_t: &[CVector], cfg: &SystemConfig, constant: LarConstant) -> f64 {
    let c = match constant {
        LarConstant::Limit => {
            cfg.gamma() / (cfg.nt as f64 * (cfg.k as f64 * cfg.alpha_sqr() + 1.0))
        }
        LarConstant::Printed => cfg.gamma() * cfg.beta(),
    };
    let keyhole_terms: f64 = g_t
        .iter()
        .map(|g| (cfg.alpha_sqr() * g.norm_sqr() * c).ln_1p())
        .sum();
    (cfg.nt as f64 * c.ln_1p() + keyhole_terms) / LN_2
}

/// Limiting rates as `nt → ∞` with `nr ≥ K` fixed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TxLimit {
    /// `log2 det(I + γβ_K·(I + Σ|α|²·g_rk·g_rkᴴ))`.
    pub exact: f64,
    /// `(nr − K)·log2(1 + γβ_K) + Σ log2(1 + |α|²‖g_rk‖²γβ_K)`.
    pub separable: f64,
}

pub fn lar_tx_limit(g_r: &[CVector], cfg: &SystemConfig) -> Result<TxLimit> {
    let k = g_r.len();
    if cfg.nr < k {
        return Err(Error::Config(format!("nr = {} must be >= K = {k}", cfg.nr)));
    }
    let gb = cfg.gamma() * cfg.beta();
    let a2 = cfg.alpha_sqr();
    let base = cfg.nr as f64 * gb.ln_1p() / LN_2;
    // det(I + gb(I + a2·A·Aᴴ)) = (1+gb)^nr · det(I_K + gb·a2/(1+gb) · AᴴA)
    let exact = if k == 0 {
        base
    } else {
        let a = CMatrix::from_fn(cfg.nr, k, |i, j| g_r[j][i]);
        let gram = a.gram_inner().scale_real(gb * a2 / (1.0 + gb));
        let extra: f64 = hermitian_eigenvalues(&gram)?
            .iter()
            .map(|&l| l.max(0.0).ln_1p())
            .sum::<f64>()
            / LN_2;
        base + extra
    };
    let separable = ((cfg.nr - k) as f64 * gb.ln_1p()
        + g_r
            .iter()
            .map(|g| (a2 * g.norm_sqr() * gb).ln_1p())
            .sum::<f64>())
        / LN_2;
    Ok(TxLimit { exact, separable })
}
