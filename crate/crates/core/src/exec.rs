//! Execution policy for the data-parallel loops.
//!
//! Every heavy loop in the crate runs over grid rows or over independent
//! table entries. With the `parallel` feature those loops are spread over the
//! rayon pool; without it (or with [`Exec::Sequential`]) they run in order.
//! Reductions always combine per-row partial results sequentially in row
//! order, so results are bit-identical whatever the thread count.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Exec {
    Sequential,
    /// Falls back to sequential execution when built without `parallel`.
    Parallel,
}

impl Default for Exec {
    fn default() -> Self {
        if cfg!(feature = "parallel") {
            Exec::Parallel
        } else {
            Exec::Sequential
        }
    }
}

impl Exec {
    /// Fills `out` row by row (rows of length `row_len`).
    pub fn fill_rows<T, F>(self, out: &mut [T], row_len: usize, f: F)
    where
        T: Send,
        F: Fn(usize, &mut [T]) + Sync + Send,
    {
        assert!(row_len > 0 && out.len().is_multiple_of(row_len));
        match self {
            #[cfg(feature = "parallel")]
            Exec::Parallel => out
                .par_chunks_mut(row_len)
                .enumerate()
                .for_each(|(j, row)| f(j, row)),
            _ => out
                .chunks_mut(row_len)
                .enumerate()
                .for_each(|(j, row)| f(j, row)),
        }
    }

    /// Evaluates `f` on `0..n` and returns the results in index order.
    pub fn map<T, F>(self, n: usize, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync + Send,
    {
        match self {
            #[cfg(feature = "parallel")]
            Exec::Parallel => (0..n).into_par_iter().map(f).collect(),
            _ => (0..n).map(f).collect(),
        }
    }

    /// Ordered sum of `f(i)` for `i` in `0..n`.
    pub fn sum<T, F>(self, n: usize, f: F) -> T
    where
        T: Send + std::iter::Sum<T>,
        F: Fn(usize) -> T + Sync + Send,
    {
        self.map(n, f).into_iter().sum()
    }
}

/// Sets the size of the global rayon pool. Returns `false` when the pool was
/// already initialised or the crate was built without `parallel`.
pub fn configure_threads(threads: usize) -> bool {
    #[cfg(feature = "parallel")]
    {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
            .is_ok()
    }
    #[cfg(not(feature = "parallel"))]
    {
        let _ = threads;
        false
    }
}
