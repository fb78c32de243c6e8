//! Network and start-point specifications from the command line.

use std::path::Path;

use gibbs_lab::builtin::{builtin_network, BuiltinKind};
use gibbs_lab::network::load_network_file;
use gibbs_lab::Network;

use crate::{usage, Failure};

/// `builtin:KIND:D[:EPS]` or a path.
pub fn network(spec: &str) -> Result<Network, Failure> {
    if let Some(rest) = spec.strip_prefix("builtin:") {
        let parts: Vec<&str> = rest.split(':').collect();
        if !(2..=3).contains(&parts.len()) {
            return Err(usage(format!(
                "expected builtin:KIND:D[:EPS], got {spec:?}"
            )));
        }
        let kind: BuiltinKind = parts[0].parse().map_err(|e| usage(format!("{e}")))?;
        let d: usize = parts[1]
            .parse()
            .map_err(|_| usage(format!("bad dimension {:?} in {spec:?}", parts[1])))?;
        let eps = match parts.get(2) {
            Some(s) => Some(
                s.parse::<f64>()
                    .map_err(|_| usage(format!("bad epsilon {s:?} in {spec:?}")))?,
            ),
            None => None,
        };
        return builtin_network(kind, d, eps).map_err(|e| usage(format!("{e}")));
    }
    load_network_file(spec).map_err(|e| usage(format!("{spec}: {e}")))
}

/// `zero`, `half`, `one`, or a file holding `d` numbers (JSON array or
/// whitespace/comma separated).
pub fn start(spec: &str, d: usize) -> Result<Vec<f64>, Failure> {
    let p = match spec {
        "zero" => vec![0.0; d],
        "half" => vec![0.5; d],
        "one" => vec![1.0; d],
        path => {
            let text = std::fs::read_to_string(Path::new(path))
                .map_err(|e| usage(format!("start file {path}: {e}")))?;
            let text = text.trim();
            let p: Vec<f64> = if text.starts_with('[') {
                serde_json::from_str(text).map_err(|e| usage(format!("start file {path}: {e}")))?
            } else {
                text.split(|c: char| c == ',' || c.is_whitespace())
                    .filter(|s| !s.is_empty())
                    .map(|s| s.parse::<f64>())
                    .collect::<Result<_, _>>()
                    .map_err(|e| usage(format!("start file {path}: {e}")))?
            };
            p
        }
    };
    if p.len() != d {
        return Err(usage(format!(
            "start point has {} coordinates, network has {d}",
            p.len()
        )));
    }
    if let Some(x) = p.iter().find(|x| !(0.0..=1.0).contains(*x)) {
        return Err(usage(format!("start coordinate {x} is outside [0, 1]")));
    }
    Ok(p)
}

pub fn check_a(a: f64) -> Result<(), Failure> {
    if a.is_finite() && a > 0.0 {
        Ok(())
    } else {
        Err(usage(format!("--A must be positive and finite, got {a}")))
    }
}

pub fn check_delta(delta: f64) -> Result<(), Failure> {
    if delta > 0.0 && delta < 1.0 {
        Ok(())
    } else {
        Err(usage(format!("--delta must lie in (0, 1), got {delta}")))
    }
}

pub fn check_replicas(replicas: usize) -> Result<(), Failure> {
    if replicas >= 1 {
        Ok(())
    } else {
        Err(usage("--replicas must be at least 1"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtin_specs() {
        assert_eq!(network("builtin:complete:5").unwrap().d(), 5);
        assert_eq!(network("builtin:two-blocks:4:0.01").unwrap().d(), 4);
        assert!(matches!(
            network("builtin:complete"),
            Err(Failure::Usage(_))
        ));
        assert!(matches!(network("builtin:star:4"), Err(Failure::Usage(_))));
        assert!(matches!(
            network("builtin:two-blocks:4:0.5"),
            Err(Failure::Usage(_))
        ));
        assert!(matches!(
            network("/no/such/file.json"),
            Err(Failure::Usage(_))
        ));
    }

    #[test]
    fn named_starts() {
        assert_eq!(start("zero", 3).unwrap(), vec![0.0; 3]);
        assert_eq!(start("one", 2).unwrap(), vec![1.0; 2]);
        assert!(start("/no/such/start", 2).is_err());
    }
}
