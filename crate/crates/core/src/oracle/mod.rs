//! Independent references for the main modules.
//!
//! Nothing here calls into [`crate::normal`] or [`crate::truncnorm`]:
//! Gaussian weights are evaluated directly and integrated by Gauss–Legendre
//! quadrature with nodes computed on the spot, so agreement with the
//! analytic code is evidence rather than tautology.

mod eigen;
pub mod quadrature;
mod rejection;
mod single_edge;
mod truncated;

pub use eigen::{characteristic_polynomial, real_roots, small_d_eigencheck};
pub use rejection::{
    rejection_sample_stationary, RejectionSamples, MIN_ACCEPTANCE_RATE, PILOT_PROPOSALS,
    PROPOSAL_BUDGET,
};
pub use single_edge::SingleEdgeOracle;
pub use truncated::{
    bisection_quantile, estimate_rho, estimate_rho_with, quad_cdf, quad_moments, RhoEstimate,
};
