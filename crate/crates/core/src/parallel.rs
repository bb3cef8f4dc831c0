//! Order-preserving parallel map over independent work units.
//!
//! With the `parallel` feature the units run on the current rayon pool;
//! otherwise sequentially. Output order always matches input order, so any
//! fold over the result is independent of the worker count.

#[cfg(feature = "parallel")]
pub fn map_indexed<T, F>(n: u64, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(u64) -> T + Sync + Send,
{
    use rayon::prelude::*;
    (0..n).into_par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub fn map_indexed<T, F>(n: u64, f: F) -> Vec<T>
where
    F: Fn(u64) -> T,
{
    (0..n).map(f).collect()
}
