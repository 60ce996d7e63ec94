//! Composite direct + keyhole channel, its normalization, and the random
//! symbols carried over it.
//!
//! The receiver sees `y = √β_K · G · ψ + z` with
//! `G = [G0 | G1 | … | GK]`, `Gk = α · g_rk · g_tkᴴ` and
//! `ψ = [1, x1]ᵀ ⊗ x0`. All channel entries are unit-variance CSCG, so
//! `E‖G‖²/nt = nr(K|α|² + 1)` and `β_K` undoes exactly that gain.

use std::f64::consts::TAU;

use rand::Rng;

use crate::error::{Error, Result};
use crate::numerics::{kronecker, CMatrix, CVector, C64};
use crate::rng::{cscg_matrix, cscg_vector, substream, StreamLabel};

/// Scalar parameters of one MRS MIMO link.
#[derive(Debug, Clone, PartialEq)]
pub struct SystemConfig {
    /// Legacy transmit antennas.
    pub nt: usize,
    /// Receive antennas.
    pub nr: usize,
    /// MRS antennas; 0 means the legacy link alone.
    pub k: usize,
    /// Keyhole scale factor.
    pub alpha: C64,
    /// Total average received SNR in dB.
    pub gamma_db: f64,
    pub sigma2: f64,
    /// Data symbol power per antenna; derived from `gamma_db` when `None`.
    pub rho_d: Option<f64>,
    /// Pilot symbol power; equal to the data power when `None`.
    pub rho_p: Option<f64>,
    /// Legacy pilot length.
    pub m0: usize,
    /// MRS pilot repetitions.
    pub m1: usize,
    /// Coherence interval in samples.
    pub coherence_len: usize,
}

/// Converts an amplitude in dB (`20·log10|α|`) and a phase to `α`.
/// `-inf` dB gives `α = 0`.
pub fn alpha_from_db(db: f64, phase_rad: f64) -> C64 {
    C64::from_polar(10f64.powf(db / 20.0), phase_rad)
}

pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

impl SystemConfig {
    /// Link with `|α| = −3 dB`, `γ = 20 dB`, unit noise, `m0 = 64`,
    /// the shortest admissible `m1` (at least 2) and `N = 1000`.
    pub fn new(nt: usize, nr: usize, k: usize) -> Self {
        Self {
            nt,
            nr,
            k,
            alpha: alpha_from_db(-3.0, 0.0),
            gamma_db: 20.0,
            sigma2: 1.0,
            rho_d: None,
            rho_p: None,
            m0: 64,
            m1: (k + 1).next_power_of_two().max(2),
            coherence_len: 1000,
        }
    }

    pub fn with_gamma_db(&self, gamma_db: f64) -> Self {
        Self {
            gamma_db,
            ..self.clone()
        }
    }

    pub fn with_alpha(&self, alpha: C64) -> Self {
        Self {
            alpha,
            ..self.clone()
        }
    }

    /// Same link with a different number of MRS antennas (pilot repetitions kept
    /// unless they become too short).
    pub fn with_k(&self, k: usize) -> Self {
        Self {
            k,
            m1: self.m1.max((k + 1).next_power_of_two()),
            ..self.clone()
        }
    }

    pub fn gamma(&self) -> f64 {
        db_to_linear(self.gamma_db)
    }

    pub fn alpha_sqr(&self) -> f64 {
        self.alpha.norm_sqr()
    }

    /// `ρd = γσ²/nt` unless overridden.
    pub fn rho_d(&self) -> f64 {
        self.rho_d
            .unwrap_or_else(|| self.gamma() * self.sigma2 / self.nt as f64)
    }

    pub fn rho_p(&self) -> f64 {
        self.rho_p.unwrap_or_else(|| self.rho_d())
    }

    /// `β_K = 1 / (nr (K|α|² + 1))`.
    pub fn beta(&self) -> f64 {
        1.0 / (self.nr as f64 * (self.k as f64 * self.alpha_sqr() + 1.0))
    }

    /// Per-stream SNR gain `γβ_K/nt` that multiplies `G·Gᴴ` in every log-det rate.
    pub fn stream_gain(&self) -> f64 {
        self.gamma() * self.beta() / self.nt as f64
    }

    /// Training length `Np = m0·m1`.
    pub fn pilot_len(&self) -> usize {
        self.m0 * self.m1
    }

    /// Checks the invariants every experiment relies on.
    pub fn validate(&self) -> Result<()> {
        if self.nt == 0 || self.nr == 0 {
            return Err(Error::Config(format!(
                "antenna counts must be >= 1 (nt = {}, nr = {})",
                self.nt, self.nr
            )));
        }
        if !self.alpha.is_finite() {
            return Err(Error::Config("alpha must be finite".into()));
        }
        if !self.gamma_db.is_finite() {
            return Err(Error::Config("gamma_db must be finite".into()));
        }
        if !(self.sigma2 > 0.0) || !self.sigma2.is_finite() {
            return Err(Error::Config(format!(
                "sigma2 must be > 0, got {}",
                self.sigma2
            )));
        }
        let rho_d = self.rho_d();
        if !(rho_d > 0.0) || !rho_d.is_finite() {
            return Err(Error::Config(format!("rho_d must be > 0, got {rho_d}")));
        }
        let beta = self.beta();
        if !(beta > 0.0) || !beta.is_finite() {
            return Err(Error::Config(format!("beta_K must be > 0, got {beta}")));
        }
        Ok(())
    }

    /// Additional invariants of the training phase.
    pub fn validate_training(&self) -> Result<()> {
        self.validate()?;
        if !self.m1.is_power_of_two() || self.m1 < self.k + 1 {
            return Err(Error::Config(format!(
                "m1 = {} must be a power of two >= K + 1 = {}",
                self.m1,
                self.k + 1
            )));
        }
        if !self.m0.is_power_of_two() || self.m0 < self.nt {
            return Err(Error::Config(format!(
                "m0 = {} must be a power of two >= nt = {}",
                self.m0, self.nt
            )));
        }
        if self.coherence_len <= self.pilot_len() {
            return Err(Error::Config(format!(
                "coherence length N = {} must exceed the pilot length m0*m1 = {}",
                self.coherence_len,
                self.pilot_len()
            )));
        }
        let rho_p = self.rho_p();
        if !(rho_p > 0.0) || !rho_p.is_finite() {
            return Err(Error::Config(format!("rho_p must be > 0, got {rho_p}")));
        }
        Ok(())
    }
}

/// `β_K` of a configuration.
pub fn scaling_factor(cfg: &SystemConfig) -> f64 {
    cfg.beta()
}

/// One re-scattered path `Gk = α · g_r · g_tᴴ`.
#[derive(Debug, Clone, PartialEq)]
pub struct Keyhole {
    /// Transmitter to MRS antenna, length `nt`.
    pub g_t: CVector,
    /// MRS antenna to receiver, length `nr`.
    pub g_r: CVector,
    /// `nr × nt`, rank one unless `α = 0`.
    pub channel: CMatrix,
}

impl Keyhole {
    pub fn new(alpha: C64, g_t: CVector, g_r: CVector) -> Self {
        let channel = g_r.outer(&g_t).scale(alpha);
        Self { g_t, g_r, channel }
    }
}

/// One draw of the direct channel and the keyholes, plus their concatenation.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelRealization {
    /// `G0`, `nr × nt`.
    pub direct: CMatrix,
    pub keyholes: Vec<Keyhole>,
    /// `G = [G0 | G1 | … | GK]`, `nr × (K+1)nt`.
    pub composite: CMatrix,
}

impl ChannelRealization {
    pub fn nt(&self) -> usize {
        self.direct.cols()
    }

    pub fn nr(&self) -> usize {
        self.direct.rows()
    }

    pub fn k(&self) -> usize {
        self.keyholes.len()
    }

    /// `G1`, or the zero matrix when there is no MRS antenna.
    pub fn first_keyhole_channel(&self) -> CMatrix {
        self.keyholes
            .first()
            .map(|k| k.channel.clone())
            .unwrap_or_else(|| CMatrix::zeros(self.nr(), self.nt()))
    }
}

/// `G0` with i.i.d. unit-variance CSCG entries.
pub fn sample_direct<R: Rng + ?Sized>(cfg: &SystemConfig, rng: &mut R) -> CMatrix {
    cscg_matrix(rng, cfg.nr, cfg.nt)
}

/// Draws `g_t` then `g_r` and forms `α · g_r · g_tᴴ`.
pub fn sample_keyhole<R: Rng + ?Sized>(cfg: &SystemConfig, rng: &mut R) -> Keyhole {
    let g_t = cscg_vector(rng, cfg.nt);
    let g_r = cscg_vector(rng, cfg.nr);
    Keyhole::new(cfg.alpha, g_t, g_r)
}

pub fn assemble_composite(direct: CMatrix, keyholes: Vec<Keyhole>) -> Result<ChannelRealization> {
    let (nr, nt) = direct.shape();
    for (i, k) in keyholes.iter().enumerate() {
        if k.channel.shape() != (nr, nt) || k.g_t.len() != nt || k.g_r.len() != nr {
            return Err(Error::Input(format!(
                "keyhole {} has shape {:?}, expected {:?}",
                i + 1,
                k.channel.shape(),
                (nr, nt)
            )));
        }
    }
    let mut blocks: Vec<&CMatrix> = vec![&direct];
    blocks.extend(keyholes.iter().map(|k| &k.channel));
    let composite = CMatrix::hstack(&blocks)?;
    Ok(ChannelRealization {
        direct,
        keyholes,
        composite,
    })
}

/// Full channel draw for one trial, from the trial's own substreams.
pub fn sample_channel(cfg: &SystemConfig, seed: u64, trial: u64) -> ChannelRealization {
    let direct = sample_direct(cfg, &mut substream(seed, trial, StreamLabel::DirectChannel));
    let mut rng = substream(seed, trial, StreamLabel::Keyholes);
    let keyholes = (0..cfg.k).map(|_| sample_keyhole(cfg, &mut rng)).collect();
    assemble_composite(direct, keyholes).expect("sampled blocks share one shape")
}

/// Alphabet of the MRS reflection coefficients.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ReflectionAlphabet {
    /// Uniform phase on the unit circle.
    #[default]
    Continuous,
    /// `M`-ary polyphase: phases `2πm/M`.
    Polyphase(u32),
}

/// Legacy symbols and MRS reflection coefficients for one channel use.
#[derive(Debug, Clone, PartialEq)]
pub struct SymbolDraw {
    /// Legacy symbols, `x0 = √ρd · u`.
    pub x0: CVector,
    /// Unit-modulus reflection coefficients, one per MRS antenna.
    pub x1: Vec<C64>,
    /// Unit-variance legacy symbols.
    pub u: CVector,
}

impl SymbolDraw {
    /// Equivalent channel input `ψ = [1, x1]ᵀ ⊗ x0`.
    pub fn psi(&self) -> CVector {
        let mut selector = vec![C64::new(1.0, 0.0)];
        selector.extend_from_slice(&self.x1);
        let sel = CMatrix::from_fn(selector.len(), 1, |i, _| selector[i]);
        let stacked = kronecker(&sel, &self.x0.to_column()).expect("small shapes");
        stacked.column(0)
    }
}

pub fn sample_symbols<R: Rng + ?Sized>(
    cfg: &SystemConfig,
    alphabet: ReflectionAlphabet,
    rng: &mut R,
) -> SymbolDraw {
    let u = cscg_vector(rng, cfg.nt);
    let x0 = u.scale(C64::new(cfg.rho_d().sqrt(), 0.0));
    let x1 = (0..cfg.k)
        .map(|_| {
            let phase = match alphabet {
                ReflectionAlphabet::Continuous => TAU * rng.random::<f64>(),
                ReflectionAlphabet::Polyphase(m) => {
                    TAU * f64::from(rng.random_range(0..m.max(1))) / f64::from(m.max(1))
                }
            };
            C64::from_polar(1.0, phase)
        })
        .collect();
    SymbolDraw { x0, x1, u }
}
