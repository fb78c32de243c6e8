//! Trajectory statistics: barycenter, Dirichlet energy, hitting times,
//! deviation events and the drift of `p̄²`, each with the inequality it is
//! checked against in [`bounds`].
//!
//! Long runs are summarized on a schedule of about 2000 recorded steps
//! ([`record_cadence`]); replica means use pairwise summation, so for a fixed
//! replica count the output does not depend on the thread count.

pub mod bounds;
mod hitting;
pub mod summary;
mod trajectories;

pub use hitting::{
    default_k_max, drift_diagnostic, drift_h, drift_summary, hitting_time_t, hitting_time_t_prime,
    hitting_times, DriftDiagnostic, DriftSample, HittingKind, HittingSummary, HittingTimeResult,
};
pub use summary::RecordedMean;
pub use trajectories::{
    barycenter_moment_trajectory, barycenter_path, deviation_event, deviation_event_frequency,
    energy_summary, energy_trajectory, sandwich_replicas, schedule, BarycenterMoments,
    DeviationFrequency, EnergySummary, EnergyTrajectory, MixingSummary,
};

use crate::error::Result;
use crate::network::Network;

/// `⌈k/2000⌉`, at least one.
pub fn record_cadence(k: u64) -> u64 {
    k.div_ceil(2000).max(1)
}

/// `p̄ = ⟨p, 1⟩ = Σ c_i p_i`.
pub fn barycenter(network: &Network, p: &[f64]) -> Result<f64> {
    network.check_len(p)?;
    Ok(barycenter_unchecked(network, p))
}

#[inline]
pub(crate) fn barycenter_unchecked(network: &Network, p: &[f64]) -> f64 {
    network.degrees().iter().zip(p).map(|(c, x)| c * x).sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn barycenter_examples() {
        let edge = Network::from_edges(2, &[(0, 1, 1.0)]).unwrap();
        assert_eq!(barycenter(&edge, &[1.0, 0.0]).unwrap(), 0.5);
        assert_eq!(barycenter(&edge, &[0.3, 0.3]).unwrap(), 0.3);
        let path = Network::from_edges(3, &[(0, 1, 1.0), (1, 2, 1.0)]).unwrap();
        assert_eq!(barycenter(&path, &[0.0, 1.0, 0.0]).unwrap(), 0.5);
        assert!(barycenter(&path, &[0.0]).is_err());
    }

    #[test]
    fn cadence() {
        assert_eq!(record_cadence(0), 1);
        assert_eq!(record_cadence(2000), 1);
        assert_eq!(record_cadence(2001), 2);
        assert_eq!(record_cadence(1_000_000), 500);
    }
}
