//! Index-ordered parallel evaluation.

use rayon::prelude::*;
use rayon::ThreadPoolBuildError;

/// Evaluates `f(0), ..., f(count - 1)` on `workers` threads and returns the
/// results in index order. `workers <= 1` runs inline.
pub fn par_map_indexed<T, F>(count: usize, workers: usize, f: F) -> Result<Vec<T>, ThreadPoolBuildError>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    if workers <= 1 {
        return Ok((0..count).map(f).collect());
    }
    let pool = rayon::ThreadPoolBuilder::new().num_threads(workers).build()?;
    Ok(pool.install(|| (0..count).into_par_iter().map(f).collect()))
}
