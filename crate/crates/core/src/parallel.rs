//! Replica fan-out. Results come back in replica order, so aggregates do not
//! depend on the thread count.

use rayon::prelude::*;

/// `(0..replicas).map(f)` evaluated on the rayon pool, order preserved.
pub fn map_replicas<T, F>(replicas: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    (0..replicas).into_par_iter().map(f).collect()
}
