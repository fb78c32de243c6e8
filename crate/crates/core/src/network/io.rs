use std::path::Path;

use serde::{Deserialize, Serialize};

use super::Network;
use crate::error::{Error, Result};

/// On-disk network format: `{"d": n, "edges": [[i, j, w], ...]}` with 0-based
/// indices.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NetworkDocument {
    pub d: usize,
    pub edges: Vec<(usize, usize, f64)>,
}

impl NetworkDocument {
    pub fn from_network(network: &Network) -> Self {
        Self {
            d: network.d(),
            edges: network.edges(),
        }
    }

    pub fn into_network(self) -> Result<Network> {
        Network::from_edges(self.d, &self.edges)
    }
}

/// Parses either the JSON document or whitespace-separated `i j w` lines.
///
/// Edge-list text may contain `#` comments and an optional `d N` line; without
/// it `d` is one more than the largest index seen.
pub fn load_network(source: &str) -> Result<Network> {
    if source.trim_start().starts_with('{') {
        let doc: NetworkDocument =
            serde_json::from_str(source).map_err(|e| Error::Parse(e.to_string()))?;
        return doc.into_network();
    }
    parse_edge_list(source)?.into_network()
}

pub fn load_network_file(path: impl AsRef<Path>) -> Result<Network> {
    load_network(&std::fs::read_to_string(path)?)
}

fn parse_edge_list(source: &str) -> Result<NetworkDocument> {
    let mut declared = None;
    let mut edges = Vec::new();
    for (lineno, raw) in source.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        let bad = |what: &str| Error::Parse(format!("line {}: {what}: {raw:?}", lineno + 1));
        match fields.as_slice() {
            ["d", n] => {
                declared = Some(n.parse::<usize>().map_err(|_| bad("bad vertex count"))?);
            }
            [i, j, w] => {
                let i = i.parse::<usize>().map_err(|_| bad("bad index"))?;
                let j = j.parse::<usize>().map_err(|_| bad("bad index"))?;
                let w = w.parse::<f64>().map_err(|_| bad("bad weight"))?;
                edges.push((i, j, w));
            }
            _ => return Err(bad("expected `i j w`")),
        }
    }
    let d = match declared {
        Some(d) => d,
        None => edges
            .iter()
            .map(|&(i, j, _)| i.max(j) + 1)
            .max()
            .ok_or_else(|| Error::Parse("no edges".into()))?,
    };
    Ok(NetworkDocument { d, edges })
}
