//! Grid evaluation, either on the rayon pool or on the calling thread.
//!
//! Without the `parallel` feature, [`Execution::Parallel`] runs sequentially.
//! Reductions are written so the result never depends on how work was split:
//! the maximum is taken first, then the smallest index within
//! [`TIE_TOLERANCE`] of it.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Values within this of the maximum count as ties; the lowest index wins.
pub const TIE_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Execution {
    Sequential,
    #[default]
    Parallel,
}

impl Execution {
    /// Whether work actually fans out across threads.
    pub fn is_parallel(self) -> bool {
        cfg!(feature = "parallel") && self == Execution::Parallel
    }

    pub fn map<T, F>(self, len: usize, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync + Send,
    {
        #[cfg(feature = "parallel")]
        if self.is_parallel() {
            return (0..len).into_par_iter().map(f).collect();
        }
        (0..len).map(f).collect()
    }

    /// Index and value of the maximum of `f` over `0..len`.
    pub fn argmax<F>(self, len: usize, f: F) -> Option<(usize, f64)>
    where
        F: Fn(usize) -> f64 + Sync + Send,
    {
        const CHUNK: usize = 4096;
        let chunks = len.div_ceil(CHUNK);
        self.argmax_2d(chunks, CHUNK, |c, k| {
            let i = c * CHUNK + k;
            if i < len {
                f(i)
            } else {
                f64::NEG_INFINITY
            }
        })
        .map(|(c, k, v)| (c * CHUNK + k, v))
    }

    /// Row-major argmax of `f(row, col)`; ties go to the smallest `(row, col)`.
    pub fn argmax_2d<F>(self, rows: usize, cols: usize, f: F) -> Option<(usize, usize, f64)>
    where
        F: Fn(usize, usize) -> f64 + Sync + Send,
    {
        if rows == 0 || cols == 0 {
            return None;
        }
        let row_max = |i: usize| (0..cols).map(|j| f(i, j)).fold(f64::NEG_INFINITY, f64::max);
        let maxima = self.map(rows, row_max);
        let best = maxima.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let floor = best - TIE_TOLERANCE;
        let row = maxima.iter().position(|&m| m >= floor)?;
        let col = (0..cols).position(|j| f(row, j) >= floor)?;
        Some((row, col, f(row, col)))
    }
}
