use rayon::prelude::*;

use crate::report::Format;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunConfig {
    pub seed: u64,
    pub trials: usize,
    pub dim: usize,
    pub format: Format,
    pub budget: usize,
    /// Worker threads for trial batches; results never depend on it.
    pub workers: usize,
    pub timings: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            seed: 0,
            trials: 100,
            dim: 4,
            format: Format::Text,
            budget: 100_000,
            workers: 1,
            timings: false,
        }
    }
}

/// Runs `f(0), ..., f(count - 1)` on `workers` threads and returns the
/// results in trial order.
pub fn run_trials<T, F>(workers: usize, count: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    if workers <= 1 {
        return (0..count).map(f).collect();
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .expect("thread pool");
    pool.install(|| (0..count).into_par_iter().map(f).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_is_preserved() {
        for w in [1, 2, 8] {
            let out = run_trials(w, 100, |i| i * i);
            assert_eq!(out, (0..100).map(|i| i * i).collect::<Vec<_>>());
        }
    }
}
