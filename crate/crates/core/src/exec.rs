//! Data-parallel execution facade.
//!
//! Grid evaluations, parameter sweeps and per-pair solves are embarrassingly
//! parallel maps. [`map`] runs them on the rayon pool when the `parallel`
//! feature is enabled and sequentially otherwise; [`map_seq`] is always
//! sequential and exists so benchmarks can compare both paths in one build.
//!
//! Both paths preserve input order, so outputs are bit-identical for any
//! thread count. Reductions over the results must stay sequential for the
//! same reason: collect first, then fold in index order.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Order-preserving map over a slice, parallel when the `parallel` feature
/// is on.
pub fn map<T, U, F>(items: &[T], f: F) -> Vec<U>
where
    T: Sync,
    U: Send,
    F: Fn(&T) -> U + Sync + Send,
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

/// Order-preserving sequential map (reference path for benches and for
/// callers that need to stay on the current thread).
pub fn map_seq<T, U, F>(items: &[T], f: F) -> Vec<U>
where
    F: Fn(&T) -> U,
{
    items.iter().map(f).collect()
}

/// Map over an index range `0..n`, parallel when enabled, order preserved.
pub fn map_range<U, F>(n: usize, f: F) -> Vec<U>
where
    U: Send,
    F: Fn(usize) -> U + Sync + Send,
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

/// Sequential counterpart of [`map_range`].
pub fn map_range_seq<U, F>(n: usize, f: F) -> Vec<U>
where
    F: Fn(usize) -> U,
{
    (0..n).map(f).collect()
}

/// Configure the global thread pool size. Returns false if the pool was
/// already initialized (harmless: the existing pool is used).
pub fn configure_threads(n: usize) -> bool {
    #[cfg(feature = "parallel")]
    {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .is_ok()
    }
    #[cfg(not(feature = "parallel"))]
    {
        let _ = n;
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parallel_and_sequential_agree() {
        let xs: Vec<u64> = (0..1000).collect();
        let f = |x: &u64| x.wrapping_mul(0x9e3779b97f4a7c15).rotate_left(17);
        assert_eq!(map(&xs, f), map_seq(&xs, f));
        assert_eq!(map_range(100, |i| i * i), map_range_seq(100, |i| i * i));
    }
}
