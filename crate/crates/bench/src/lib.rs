//! Shared fixtures for the benchmarks.

use gibbs_lab::builtin::complete;
use gibbs_lab::SamplerParams;

/// Complete graph on `d` vertices at scale `a`.
pub fn complete_params(d: usize, a: f64) -> SamplerParams {
    SamplerParams::new(complete(d).expect("d ≥ 2"), a).expect("a > 0")
}
