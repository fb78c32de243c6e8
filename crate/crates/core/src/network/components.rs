use super::{Network, EDGE_THRESHOLD};

/// A connected component with at least one edge.
#[derive(Debug, Clone)]
pub struct Component {
    /// Vertices of the parent network, ascending.
    pub vertices: Vec<usize>,
    /// The induced sub-network renormalized to unit total weight.
    pub network: Network,
    /// `|𝒞|`, the share of the parent's total weight carried by this
    /// component. Sampling the parent at scale `A` matches sampling
    /// `network` at scale `A·√|𝒞|`.
    pub weight_fraction: f64,
}

impl Component {
    /// The scale at which the renormalized sub-network reproduces the
    /// parent's dynamics on this component.
    pub fn effective_scale(&self, a: f64) -> f64 {
        a * self.weight_fraction.sqrt()
    }
}

#[derive(Debug, Clone)]
pub struct Components {
    pub components: Vec<Component>,
    /// Vertices without any edge; uniform under the stationary law.
    pub isolated: Vec<usize>,
}

struct DisjointSets {
    parent: Vec<usize>,
}

impl DisjointSets {
    fn new(n: usize) -> Self {
        Self {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra.max(rb)] = ra.min(rb);
        }
    }
}

fn clusters(network: &Network) -> DisjointSets {
    let d = network.d();
    let mut sets = DisjointSets::new(d);
    for i in 0..d {
        for j in (i + 1)..d {
            if network.weight(i, j) >= EDGE_THRESHOLD {
                sets.union(i, j);
            }
        }
    }
    sets
}

pub(super) fn count_clusters(network: &Network) -> usize {
    let mut sets = clusters(network);
    (0..network.d()).filter(|&i| sets.find(i) == i).count()
}

pub(super) fn decompose(network: &Network) -> Components {
    let d = network.d();
    let mut sets = clusters(network);
    let mut groups: Vec<Vec<usize>> = Vec::new();
    let mut slot = vec![usize::MAX; d];
    for i in 0..d {
        let root = sets.find(i);
        if slot[root] == usize::MAX {
            slot[root] = groups.len();
            groups.push(Vec::new());
        }
        groups[slot[root]].push(i);
    }

    let mut components = Vec::new();
    let mut isolated = Vec::new();
    for vertices in groups {
        if vertices.len() == 1 {
            isolated.push(vertices[0]);
            continue;
        }
        let n = vertices.len();
        let mut weights = vec![0.0; n * n];
        let mut fraction = 0.0;
        for (a, &i) in vertices.iter().enumerate() {
            for (b, &j) in vertices.iter().enumerate() {
                let w = network.weight(i, j);
                weights[a * n + b] = w;
                fraction += w;
            }
        }
        let sub = Network::normalized(n, weights);
        components.push(Component {
            vertices,
            network: sub,
            weight_fraction: fraction,
        });
    }
    Components {
        components,
        isolated,
    }
}
