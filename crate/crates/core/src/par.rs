//! Data-parallel helpers. With the `parallel` feature these fan out on the
//! rayon pool; without it they run in order on the calling thread. Output order
//! is the input order either way.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

pub fn map_indices<R, F>(n: usize, f: F) -> Vec<R>
where
    R: Send,
    F: Fn(usize) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        (0..n).into_par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        (0..n).map(f).collect()
    }
}

pub fn map_slice<T, R, F>(items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        items.par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        items.iter().map(f).collect()
    }
}

/// Sizes the global pool from `AFFVIR_THREADS` if set. Safe to call more than
/// once; only the first call has an effect.
pub fn init_thread_pool() {
    #[cfg(feature = "parallel")]
    if let Some(n) = std::env::var("AFFVIR_THREADS").ok().and_then(|s| s.parse::<usize>().ok()) {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global();
    }
}
