//! Achievable-rate laboratory for bi-static modulated re-scatter (MRS) MIMO
//! links.
//!
//! A legacy `nt × nr` link shares the air with `K` single-antenna re-scatter
//! nodes that modulate the legacy signal through unit-modulus reflection
//! coefficients. Each node adds a rank-one keyhole path to the composite
//! channel. The crate provides the channel model, closed-form sum rates and
//! their large-array limits, an MMSE-SIC joint receiver with a constant-
//! envelope rate for the MRS stream, Hadamard-pilot LS channel estimation,
//! and a deterministic parallel Monte Carlo engine that ties them together.
//!
//! ```
//! use mrs_lab::channel::{sample_channel, SystemConfig};
//! use mrs_lab::rates::{legacy_alone_rate, sum_rate};
//!
//! let cfg = SystemConfig::new(2, 4, 1);
//! let r = sample_channel(&cfg, 42, 0);
//! let with_mrs = sum_rate(&r, &cfg).unwrap();
//! let alone = legacy_alone_rate(&r.direct, &cfg).unwrap();
//! assert!(with_mrs.is_finite() && alone.is_finite());
//! ```

pub mod channel;
pub mod cli;
pub mod error;
pub mod estimation;
pub mod experiments;
pub mod numerics;
pub mod rates;
pub mod receiver;
pub mod rng;

pub use error::{Error, Result};
