//! Weighted networks `C = (c_ij)` and the linear algebra the sampler lives on.
//!
//! A [`Network`] is always normalized so that the degrees `c_i = Σ_{j≠i} c_ij`
//! sum to one; `c` is then the stationary law of the weighted random walk and
//! `⟨p, q⟩ = Σ c_i p_i q_i` the inner product under which the Laplacian
//! `Δ = I − D⁻¹C` is self-adjoint.

mod components;
mod io;
mod spectral;

pub use components::{Component, Components};
pub use io::{load_network, load_network_file, NetworkDocument};
pub use spectral::{symmetric_eigenvalues, SpectralSummary};

use crate::error::{Error, Result};

/// Normalized weights below this are not edges for connectivity purposes.
pub const EDGE_THRESHOLD: f64 = 1e-15;

const SYMMETRY_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone)]
pub struct Network {
    d: usize,
    weights: Vec<f64>,
    degrees: Vec<f64>,
    /// Per vertex, the neighbors `j` with `c_ij > 0` and transition weights `c_ij / c_i`.
    rows: Vec<Vec<(usize, f64)>>,
    connected: bool,
}

impl Network {
    /// Builds a network from a dense row-major `d × d` weight matrix.
    pub fn from_matrix(d: usize, weights: Vec<f64>) -> Result<Self> {
        if d < 2 {
            return Err(Error::Validation(format!("need d ≥ 2 vertices, got {d}")));
        }
        if weights.len() != d * d {
            return Err(Error::Dimension {
                expected: d * d,
                got: weights.len(),
            });
        }
        let mut largest = 0.0_f64;
        for (k, &w) in weights.iter().enumerate() {
            if !w.is_finite() {
                return Err(Error::Validation(format!(
                    "weight ({}, {}) is not finite",
                    k / d,
                    k % d
                )));
            }
            if w < 0.0 {
                return Err(Error::Validation(format!(
                    "weight ({}, {}) = {w} is negative",
                    k / d,
                    k % d
                )));
            }
            largest = largest.max(w);
        }
        for i in 0..d {
            if weights[i * d + i] != 0.0 {
                return Err(Error::Validation(format!(
                    "diagonal entry ({i}, {i}) must be zero"
                )));
            }
            for j in (i + 1)..d {
                let (a, b) = (weights[i * d + j], weights[j * d + i]);
                if (a - b).abs() > SYMMETRY_TOLERANCE * largest {
                    return Err(Error::Validation(format!(
                        "asymmetric weights ({i}, {j}) = {a} vs ({j}, {i}) = {b}"
                    )));
                }
            }
        }
        if largest == 0.0 {
            return Err(Error::ZeroNetwork);
        }
        Ok(Self::normalized(d, weights))
    }

    /// Builds a network from undirected edges `(i, j, w)`; duplicates are summed.
    pub fn from_edges(d: usize, edges: &[(usize, usize, f64)]) -> Result<Self> {
        if d < 2 {
            return Err(Error::Validation(format!("need d ≥ 2 vertices, got {d}")));
        }
        let mut weights = vec![0.0; d * d];
        for &(i, j, w) in edges {
            if i >= d || j >= d {
                return Err(Error::Validation(format!(
                    "edge ({i}, {j}) out of range for d = {d}"
                )));
            }
            if i == j {
                return Err(Error::Validation(format!("self-loop at vertex {i}")));
            }
            if !w.is_finite() || w < 0.0 {
                return Err(Error::Validation(format!("edge ({i}, {j}) has weight {w}")));
            }
            weights[i * d + j] += w;
            weights[j * d + i] += w;
        }
        Self::from_matrix(d, weights)
    }

    fn normalized(d: usize, mut weights: Vec<f64>) -> Self {
        // exact symmetry, then unit total weight over ordered pairs
        for i in 0..d {
            for j in (i + 1)..d {
                let w = 0.5 * (weights[i * d + j] + weights[j * d + i]);
                weights[i * d + j] = w;
                weights[j * d + i] = w;
            }
        }
        let total: f64 = weights.iter().sum();
        weights.iter_mut().for_each(|w| *w /= total);

        let degrees: Vec<f64> = weights.chunks(d).map(|row| row.iter().sum()).collect();
        let rows = (0..d)
            .map(|i| {
                if degrees[i] == 0.0 {
                    return Vec::new();
                }
                (0..d)
                    .filter(|&j| weights[i * d + j] > 0.0)
                    .map(|j| (j, weights[i * d + j] / degrees[i]))
                    .collect()
            })
            .collect();
        let mut network = Self {
            d,
            weights,
            degrees,
            rows,
            connected: false,
        };
        network.connected = components::count_clusters(&network) == 1;
        network
    }

    pub fn d(&self) -> usize {
        self.d
    }

    /// Normalized weight `c_ij`.
    pub fn weight(&self, i: usize, j: usize) -> f64 {
        self.weights[i * self.d + j]
    }

    /// Row-major normalized weight matrix.
    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Degrees `c_i`; they sum to one.
    pub fn degrees(&self) -> &[f64] {
        &self.degrees
    }

    pub fn is_connected(&self) -> bool {
        self.connected
    }

    /// Vertices with zero degree.
    pub fn isolated_vertices(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.d).filter(move |&i| self.degrees[i] == 0.0)
    }

    /// Undirected edges `(i, j, c_ij)` with `i < j` and `c_ij > 0`.
    pub fn edges(&self) -> Vec<(usize, usize, f64)> {
        let mut edges = Vec::new();
        for i in 0..self.d {
            for j in (i + 1)..self.d {
                let w = self.weight(i, j);
                if w > 0.0 {
                    edges.push((i, j, w));
                }
            }
        }
        edges
    }

    /// `p̂_i = (1/c_i) Σ_j c_ij p_j`, clamped to the neighbors' range so that
    /// convexity survives rounding. Requires `c_i > 0`; no checks.
    ///
    /// The weighted sum is evaluated in a fixed order with non-negative
    /// weights, so it is monotone in `p` even in floating point.
    #[inline]
    pub fn average_at(&self, p: &[f64], i: usize) -> f64 {
        let row = &self.rows[i];
        let mut sum = 0.0;
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for &(j, w) in row {
            let v = p[j];
            sum += w * v;
            lo = lo.min(v);
            hi = hi.max(v);
        }
        sum.clamp(lo, hi)
    }

    /// `p̂ = D⁻¹Cp`.
    pub fn one_step_average(&self, p: &[f64]) -> Result<Vec<f64>> {
        self.check_len(p)?;
        if let Some(i) = self.isolated_vertices().next() {
            return Err(Error::IsolatedVertex(i));
        }
        Ok((0..self.d).map(|i| self.average_at(p, i)).collect())
    }

    /// `Δp = p − p̂`.
    pub fn laplacian_apply(&self, p: &[f64]) -> Result<Vec<f64>> {
        let hat = self.one_step_average(p)?;
        Ok(p.iter().zip(hat).map(|(x, h)| x - h).collect())
    }

    /// `⟨p, q⟩ = Σ c_i p_i q_i`.
    pub fn weighted_inner(&self, p: &[f64], q: &[f64]) -> Result<f64> {
        self.check_len(p)?;
        self.check_len(q)?;
        Ok(self.inner_unchecked(p, q))
    }

    #[inline]
    pub(crate) fn inner_unchecked(&self, p: &[f64], q: &[f64]) -> f64 {
        self.degrees
            .iter()
            .zip(p.iter().zip(q))
            .map(|(c, (x, y))| c * x * y)
            .sum()
    }

    /// `⟨p, Δp⟩ = pᵀ(D − C)p`; defined for every network, isolated vertices
    /// contribute nothing.
    pub fn dirichlet_energy(&self, p: &[f64]) -> Result<f64> {
        self.check_len(p)?;
        let d = self.d;
        let mut energy = 0.0;
        for i in 0..d {
            let row = &self.weights[i * d..(i + 1) * d];
            let cp: f64 = row.iter().zip(p).map(|(c, x)| c * x).sum();
            energy += p[i] * (self.degrees[i] * p[i] - cp);
        }
        Ok(energy)
    }

    /// `Σ_{i<j} c_ij (p_i − p_j)²`. Equal to [`Self::dirichlet_energy`] but
    /// free of cancellation near the diagonal.
    pub fn dirichlet_energy_pairwise(&self, p: &[f64]) -> Result<f64> {
        self.check_len(p)?;
        Ok(self.pairwise_energy_unchecked(p))
    }

    #[inline]
    pub(crate) fn pairwise_energy_unchecked(&self, p: &[f64]) -> f64 {
        let d = self.d;
        let mut energy = 0.0;
        for i in 0..d {
            for j in (i + 1)..d {
                let diff = p[i] - p[j];
                energy += self.weights[i * d + j] * diff * diff;
            }
        }
        energy
    }

    pub fn spectral_summary(&self) -> Result<SpectralSummary> {
        if !self.connected {
            return Err(Error::Disconnected);
        }
        Ok(SpectralSummary::compute(self))
    }

    pub fn connected_components(&self) -> Components {
        components::decompose(self)
    }

    pub(crate) fn check_len(&self, p: &[f64]) -> Result<()> {
        if p.len() != self.d {
            return Err(Error::Dimension {
                expected: self.d,
                got: p.len(),
            });
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn single_edge() -> Network {
        Network::from_edges(2, &[(0, 1, 7.0)]).unwrap()
    }

    fn path3() -> Network {
        Network::from_edges(3, &[(0, 1, 1.0), (1, 2, 1.0)]).unwrap()
    }

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn single_edge_normalizes() {
        let n = single_edge();
        assert!(close(n.weight(0, 1), 0.5, 1e-15));
        assert!(close(n.weight(1, 0), 0.5, 1e-15));
        assert_eq!(n.degrees(), &[0.5, 0.5]);
        assert!(n.is_connected());
    }

    #[test]
    fn complete_four_normalizes() {
        let edges: Vec<_> = (0..4)
            .flat_map(|i| ((i + 1)..4).map(move |j| (i, j, 2.5)))
            .collect();
        let n = Network::from_edges(4, &edges).unwrap();
        for i in 0..4 {
            assert!(close(n.degrees()[i], 0.25, 1e-15));
            for j in 0..4 {
                if i != j {
                    assert!(close(n.weight(i, j), 1.0 / 12.0, 1e-15));
                }
            }
        }
    }

    #[test]
    fn path_degrees() {
        let n = path3();
        let c = n.degrees();
        assert!(close(c[0], 0.25, 1e-15) && close(c[1], 0.5, 1e-15) && close(c[2], 0.25, 1e-15));
    }

    #[test]
    fn validation_errors() {
        assert!(matches!(
            Network::from_matrix(2, vec![0.0, -1.0, -1.0, 0.0]),
            Err(Error::Validation(_))
        ));
        assert!(matches!(
            Network::from_matrix(2, vec![0.0, 1.0, 1.1, 0.0]),
            Err(Error::Validation(_))
        ));
        assert!(matches!(
            Network::from_matrix(2, vec![0.0; 4]),
            Err(Error::ZeroNetwork)
        ));
        assert!(matches!(
            Network::from_matrix(2, vec![1.0, 1.0, 1.0, 0.0]),
            Err(Error::Validation(_))
        ));
        assert!(matches!(
            Network::from_edges(3, &[(0, 0, 1.0)]),
            Err(Error::Validation(_))
        ));
        assert!(matches!(
            Network::from_edges(1, &[]),
            Err(Error::Validation(_))
        ));
        // asymmetry within tolerance is accepted and symmetrized
        let n = Network::from_matrix(2, vec![0.0, 1.0, 1.0 + 1e-14, 0.0]).unwrap();
        assert_eq!(n.weight(0, 1), n.weight(1, 0));
    }

    #[test]
    fn averaging_examples() {
        let n = single_edge();
        assert_eq!(n.one_step_average(&[0.2, 0.9]).unwrap(), vec![0.9, 0.2]);
        let n = path3();
        let hat = n.one_step_average(&[0.0, 1.0, 0.0]).unwrap();
        assert!(
            close(hat[0], 1.0, 1e-15) && close(hat[1], 0.0, 1e-15) && close(hat[2], 1.0, 1e-15)
        );
        let hat = n.one_step_average(&[0.37; 3]).unwrap();
        assert!(hat.iter().all(|&h| h == 0.37));
    }

    #[test]
    fn isolated_vertex_blocks_averaging() {
        let n = Network::from_edges(3, &[(0, 1, 1.0)]).unwrap();
        assert!(matches!(
            n.one_step_average(&[0.1, 0.2, 0.3]),
            Err(Error::IsolatedVertex(2))
        ));
        assert!(matches!(
            n.laplacian_apply(&[0.1, 0.2, 0.3]),
            Err(Error::IsolatedVertex(2))
        ));
        // energy stays defined
        assert!(close(
            n.dirichlet_energy(&[0.1, 0.2, 0.9]).unwrap(),
            0.5 * 0.01,
            1e-15
        ));
    }

    #[test]
    fn laplacian_examples() {
        let n = single_edge();
        assert_eq!(n.laplacian_apply(&[1.0, 0.0]).unwrap(), vec![1.0, -1.0]);
        assert!(n
            .laplacian_apply(&[0.4, 0.4])
            .unwrap()
            .iter()
            .all(|&x| x == 0.0));
    }

    #[test]
    fn inner_product_examples() {
        let n = path3();
        assert!(close(
            n.weighted_inner(&[1.0; 3], &[1.0; 3]).unwrap(),
            1.0,
            1e-15
        ));
        let n = single_edge();
        assert!(close(
            n.weighted_inner(&[1.0, 0.0], &[1.0, 0.0]).unwrap(),
            0.5,
            1e-15
        ));
        assert!(matches!(
            n.weighted_inner(&[1.0], &[1.0, 0.0]),
            Err(Error::Dimension {
                expected: 2,
                got: 1
            })
        ));
    }

    #[test]
    fn energy_examples() {
        let n = single_edge();
        assert!(close(n.dirichlet_energy(&[1.0, 0.0]).unwrap(), 0.5, 1e-15));
        assert!(close(
            n.dirichlet_energy_pairwise(&[1.0, 0.0]).unwrap(),
            0.5,
            1e-15
        ));
        assert_eq!(n.dirichlet_energy(&[0.3, 0.3]).unwrap(), 0.0);
    }

    #[test]
    fn edges_listing() {
        let n = path3();
        let e = n.edges();
        assert_eq!(e.len(), 2);
        assert_eq!((e[0].0, e[0].1), (0, 1));
        assert!(close(e[0].2, 0.25, 1e-15));
    }
}
