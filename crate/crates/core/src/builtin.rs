//! Generators for the named example networks.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::network::Network;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BuiltinKind {
    Complete,
    Path,
    Cycle,
    /// Two strongly tied pairs `{0,1}`, `{2,3}` joined by weak cross edges.
    TwoBlocks,
}

impl FromStr for BuiltinKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "complete" => Ok(Self::Complete),
            "path" => Ok(Self::Path),
            "cycle" => Ok(Self::Cycle),
            "two-blocks" => Ok(Self::TwoBlocks),
            other => Err(Error::Validation(format!(
                "unknown network kind {other:?} (complete, path, cycle, two-blocks)"
            ))),
        }
    }
}

impl fmt::Display for BuiltinKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Complete => "complete",
            Self::Path => "path",
            Self::Cycle => "cycle",
            Self::TwoBlocks => "two-blocks",
        })
    }
}

pub fn builtin_network(kind: BuiltinKind, d: usize, epsilon: Option<f64>) -> Result<Network> {
    if kind != BuiltinKind::TwoBlocks && epsilon.is_some() {
        return Err(Error::Validation(format!("{kind} takes no epsilon")));
    }
    match kind {
        BuiltinKind::Complete => complete(d),
        BuiltinKind::Path => path(d),
        BuiltinKind::Cycle => {
            if d < 3 {
                return Err(Error::Validation(format!("cycle needs d ≥ 3, got {d}")));
            }
            let edges: Vec<_> = (0..d).map(|i| (i, (i + 1) % d, 1.0)).collect();
            Network::from_edges(d, &edges)
        }
        BuiltinKind::TwoBlocks => {
            if d != 4 {
                return Err(Error::Validation(format!(
                    "two-blocks needs d = 4, got {d}"
                )));
            }
            let eps =
                epsilon.ok_or_else(|| Error::Validation("two-blocks needs epsilon".into()))?;
            if !(eps > 0.0 && eps < 0.125) {
                return Err(Error::Validation(format!(
                    "epsilon must lie in (0, 1/8), got {eps}"
                )));
            }
            let strong = 0.25 - 2.0 * eps;
            Network::from_edges(
                4,
                &[
                    (0, 1, strong),
                    (2, 3, strong),
                    (0, 2, eps),
                    (0, 3, eps),
                    (1, 2, eps),
                    (1, 3, eps),
                ],
            )
        }
    }
}

pub fn complete(d: usize) -> Result<Network> {
    let edges: Vec<_> = (0..d)
        .flat_map(|i| ((i + 1)..d).map(move |j| (i, j, 1.0)))
        .collect();
    Network::from_edges(d, &edges)
}

pub fn path(d: usize) -> Result<Network> {
    let edges: Vec<_> = (1..d).map(|i| (i - 1, i, 1.0)).collect();
    Network::from_edges(d, &edges)
}
