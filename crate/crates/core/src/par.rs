//! Execution policy for the data-parallel parts of the crate.
//!
//! Work is always split into the same chunks and results are returned in
//! chunk order, so the outcome never depends on the thread count. Without the
//! `parallel` feature every policy runs sequentially.

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Exec {
    Sequential,
    /// A dedicated pool with this many threads; 0 means one per hardware thread.
    Parallel {
        threads: usize,
    },
}

impl Default for Exec {
    fn default() -> Self {
        Exec::Parallel { threads: 0 }
    }
}

impl Exec {
    pub fn with_threads(threads: usize) -> Exec {
        if threads == 1 {
            Exec::Sequential
        } else {
            Exec::Parallel { threads }
        }
    }

    /// Number of worker threads this policy will actually use.
    pub fn effective_threads(&self) -> usize {
        match *self {
            Exec::Sequential => 1,
            #[cfg(feature = "parallel")]
            Exec::Parallel { threads: 0 } => rayon::current_num_threads(),
            #[cfg(feature = "parallel")]
            Exec::Parallel { threads } => threads,
            #[cfg(not(feature = "parallel"))]
            Exec::Parallel { .. } => 1,
        }
    }

    /// Evaluate `f(0), ..., f(n - 1)` and return the results in index order.
    pub fn map<T, F>(&self, n: usize, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync + Send,
    {
        match *self {
            Exec::Sequential => (0..n).map(f).collect(),
            #[cfg(feature = "parallel")]
            Exec::Parallel { threads } => {
                use rayon::prelude::*;
                let pool = rayon::ThreadPoolBuilder::new()
                    .num_threads(threads)
                    .build()
                    .expect("failed to start worker threads");
                pool.install(|| (0..n).into_par_iter().map(f).collect())
            }
            #[cfg(not(feature = "parallel"))]
            Exec::Parallel { .. } => (0..n).map(f).collect(),
        }
    }
}
