//! Sequential or rayon-backed execution of chunked loops.
//!
//! Work is always split into chunks of a fixed size and partial results are
//! returned in chunk order, so any reduction over them is independent of the
//! thread count.

use std::ops::Range;

/// Chunk length used by every chunked loop in the crate.
pub const CHUNK: usize = 4096;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Execution {
    Sequential,
    /// Rayon thread pool. Falls back to sequential without the `parallel` feature.
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

fn chunk_ranges(len: usize, chunk: usize) -> impl Iterator<Item = Range<usize>> + Clone {
    let chunk = chunk.max(1);
    (0..len.div_ceil(chunk)).map(move |i| i * chunk..((i + 1) * chunk).min(len))
}

impl Execution {
    pub fn is_parallel(self) -> bool {
        cfg!(feature = "parallel") && self == Execution::Parallel
    }

    /// Apply `f` to consecutive ranges of `0..len` of length `chunk`,
    /// returning the results in range order.
    pub fn map_chunks<T, F>(self, len: usize, chunk: usize, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(Range<usize>) -> T + Sync + Send,
    {
        #[cfg(feature = "parallel")]
        if self.is_parallel() {
            use rayon::prelude::*;
            let ranges: Vec<_> = chunk_ranges(len, chunk).collect();
            return ranges.into_par_iter().map(f).collect();
        }
        chunk_ranges(len, chunk).map(f).collect()
    }

    /// Apply `f` to each index, results in index order.
    pub fn map_indices<T, F>(self, len: usize, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync + Send,
    {
        #[cfg(feature = "parallel")]
        if self.is_parallel() {
            use rayon::prelude::*;
            return (0..len).into_par_iter().map(f).collect();
        }
        (0..len).map(f).collect()
    }

    pub fn sort_by_f64<T: Send>(self, items: &mut [T], key: impl Fn(&T) -> f64 + Sync) {
        #[cfg(feature = "parallel")]
        if self.is_parallel() {
            use rayon::prelude::*;
            items.par_sort_by(|a, b| key(a).total_cmp(&key(b)));
            return;
        }
        items.sort_by(|a, b| key(a).total_cmp(&key(b)));
    }
}
