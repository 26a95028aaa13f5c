//! Data-parallel helpers.
//!
//! Every bulk scan in the crate (level evaluation, naturality sweeps,
//! refinement rounds) goes through [`map`]. With the `parallel` feature the
//! work is spread over the rayon pool unless [`set_parallel`] switched it off
//! at runtime; without the feature everything runs sequentially.

use std::sync::atomic::{AtomicBool, Ordering};

static PARALLEL: AtomicBool = AtomicBool::new(true);

/// Enable or disable parallel execution at runtime.
pub fn set_parallel(on: bool) {
    PARALLEL.store(on, Ordering::SeqCst);
}

/// True when scans will actually run on the rayon pool.
pub fn is_parallel() -> bool {
    cfg!(feature = "parallel") && PARALLEL.load(Ordering::SeqCst)
}

/// Order-preserving map over a slice.
pub fn map<T, R, F>(items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        if is_parallel() && items.len() > 1 {
            use rayon::prelude::*;
            return items.par_iter().map(f).collect();
        }
    }
    items.iter().map(f).collect()
}

/// Order-preserving map over an index range.
pub fn map_range<R, F>(len: usize, f: F) -> Vec<R>
where
    R: Send,
    F: Fn(usize) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        if is_parallel() && len > 1 {
            use rayon::prelude::*;
            return (0..len).into_par_iter().map(f).collect();
        }
    }
    (0..len).map(f).collect()
}
