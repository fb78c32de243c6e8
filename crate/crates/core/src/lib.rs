//! Simulation and verification toolkit for the coordinate Gibbs sampler of
//! the almost-exchangeable prior
//!
//! ```text
//! π_{A,C}(p) ∝ exp(−A² Σ_{i<j} c_ij (p_i − p_j)²),   p ∈ [0,1]^d
//! ```
//!
//! The crate is organised bottom-up:
//!
//! | Module | Purpose |
//! |--------|---------|
//! | [`network`] | weighted networks, Laplacian action, spectra, components |
//! | [`truncnorm`] | the truncated normal law `p + ε(σ², p)` on `[0,1]` |
//! | [`gibbs`] | the single-site kernel, trajectories and noise streams |
//! | [`coupling`] | the shared-noise grand coupling and sandwich runs |
//! | [`stats`] | barycenter, energy, hitting times and bound diagnostics |
//! | [`oracle`] | independent brute-force references |
//!
//! All random input flows through [`gibbs::NoiseStream`], so every run is a
//! deterministic function of `(seed, replica)`.

pub mod builtin;
pub mod coupling;
pub mod error;
pub mod gibbs;
pub mod network;
pub mod normal;
pub mod oracle;
pub mod parallel;
pub mod stats;
pub mod truncnorm;

pub use coupling::{CoupledEnsemble, SandwichOptions, SandwichRecord};
pub use error::{Error, Result};
pub use gibbs::{ChainState, NoiseStream, SamplerParams, StepNoise, StepOutcome};
pub use network::{Component, Components, Network, SpectralSummary};
pub use stats::{HittingTimeResult, MixingSummary};
pub use truncnorm::TruncatedNormal;
