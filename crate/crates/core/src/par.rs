//! Data-parallel helpers with a sequential fallback.
//!
//! With the `parallel` feature these dispatch to rayon; without it they are
//! plain iterator loops. Results never depend on the schedule: every
//! reduction used by callers is exact rational addition.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Below this many items the parallel versions run sequentially anyway.
pub const MIN_PARALLEL_LEN: usize = 64;

pub fn map_slice<T, U, F>(items: &[T], f: F) -> Vec<U>
where
    T: Sync,
    U: Send,
    F: Fn(&T) -> U + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        if items.len() >= MIN_PARALLEL_LEN {
            return items.par_iter().map(f).collect();
        }
    }
    items.iter().map(f).collect()
}

pub fn map_range<U, F>(n: usize, f: F) -> Vec<U>
where
    U: Send,
    F: Fn(usize) -> U + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        if n >= MIN_PARALLEL_LEN {
            return (0..n).into_par_iter().map(f).collect();
        }
    }
    (0..n).map(f).collect()
}

/// Maps `chunk` over contiguous chunks of `items` and folds the partial
/// results with `merge`.
pub fn chunked_fold<T, A, F, M>(items: &[T], chunk: usize, f: F, merge: M) -> Option<A>
where
    T: Sync,
    A: Send,
    F: Fn(&[T]) -> A + Sync + Send,
    M: Fn(A, A) -> A + Sync + Send,
{
    let chunk = chunk.max(1);
    #[cfg(feature = "parallel")]
    {
        if items.len() >= MIN_PARALLEL_LEN {
            return items.par_chunks(chunk).map(f).reduce_with(merge);
        }
    }
    items.chunks(chunk).map(f).reduce(merge)
}

/// Runs independent jobs, possibly concurrently, returning results in order.
pub fn join_all<U, F>(jobs: Vec<F>) -> Vec<U>
where
    U: Send,
    F: FnOnce() -> U + Send,
{
    #[cfg(feature = "parallel")]
    {
        if jobs.len() > 1 {
            return jobs.into_par_iter().map(|job| job()).collect();
        }
    }
    jobs.into_iter().map(|job| job()).collect()
}

pub fn enabled() -> bool {
    cfg!(feature = "parallel")
}
