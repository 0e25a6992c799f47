//! Order-preserving map over parameter samples.
//!
//! With the `parallel` feature the work is spread over the rayon pool;
//! without it, or when `parallel` is false at the call site, it runs on the
//! calling thread. Results are identical either way.

/// `f` applied to every sample, in sample order.
pub fn map<T, F>(samples: &[f64], parallel: bool, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(f64) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if parallel {
        use rayon::prelude::*;
        return samples.par_iter().map(|&s| f(s)).collect();
    }
    let _ = parallel;
    map_sequential(samples, f)
}

/// Always sequential; the baseline for benchmarks and for deterministic debugging.
pub fn map_sequential<T, F>(samples: &[f64], f: F) -> Vec<T>
where
    F: Fn(f64) -> T,
{
    samples.iter().map(|&s| f(s)).collect()
}

/// Whether the crate was built with the rayon backend.
pub const fn parallel_enabled() -> bool {
    cfg!(feature = "parallel")
}
