//! Data-parallel helpers. With the `parallel` feature (default) work is split
//! across the rayon pool; without it every call runs sequentially. The runtime
//! [`Execution`] switch lets benchmarks and tests compare both paths inside a
//! single build.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Execution {
    Sequential,
    Parallel,
}

impl Default for Execution {
    fn default() -> Self {
        if cfg!(feature = "parallel") {
            Execution::Parallel
        } else {
            Execution::Sequential
        }
    }
}

impl Execution {
    #[cfg(feature = "parallel")]
    fn parallel(self) -> bool {
        cfg!(feature = "parallel") && self == Execution::Parallel
    }
}

/// Order-preserving map.
pub fn map<T, R, F>(items: &[T], exec: Execution, f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if exec.parallel() {
        return items.par_iter().map(f).collect();
    }
    let _ = exec;
    items.iter().map(f).collect()
}

/// Checked `i128` sum of `f` over `items`; `None` as soon as `f` or the sum
/// overflows.
pub fn sum_i128<T, F>(items: &[T], exec: Execution, f: F) -> Option<i128>
where
    T: Sync,
    F: Fn(&T) -> Option<i128> + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if exec.parallel() {
        return items
            .par_iter()
            .map(&f)
            .reduce(|| Some(0), |a, b| a?.checked_add(b?));
    }
    let _ = exec;
    items.iter().try_fold(0i128, |acc, x| acc.checked_add(f(x)?))
}

/// Runs `f` with a dedicated pool of `threads` workers (no-op without the
/// `parallel` feature or when `threads` is zero).
pub fn with_threads<R: Send>(threads: usize, f: impl FnOnce() -> R + Send) -> R {
    #[cfg(feature = "parallel")]
    if threads > 0 {
        if let Ok(pool) = rayon::ThreadPoolBuilder::new().num_threads(threads).build() {
            return pool.install(f);
        }
    }
    let _ = threads;
    f()
}
