//! Sequential / data-parallel execution of the batch workloads (grid sweeps,
//! Monte Carlo trials, randomized verification suites).
//!
//! With the `parallel` feature disabled, [`Execution::Parallel`] silently
//! runs on the calling thread, so results never depend on the feature set.

#[cfg(feature = "parallel")]
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
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

    /// Order-preserving map over `0..len`.
    pub fn map_indices<R, F>(self, len: usize, f: F) -> Vec<R>
    where
        R: Send,
        F: Fn(usize) -> R + Sync + Send,
    {
        #[cfg(feature = "parallel")]
        if self.is_parallel() {
            return (0..len).into_par_iter().map(f).collect();
        }
        (0..len).map(f).collect()
    }

    /// Order-preserving map over a slice.
    pub fn map<T, R, F>(self, items: &[T], f: F) -> Vec<R>
    where
        T: Sync,
        R: Send,
        F: Fn(&T) -> R + Sync + Send,
    {
        self.map_indices(items.len(), |i| f(&items[i]))
    }

    /// Folds `0..len` into per-worker accumulators and merges them.
    ///
    /// `merge` must be associative and `identity` its neutral element; the
    /// sequential path is a single fold followed by one merge with the
    /// identity.
    pub fn fold_reduce<A, Id, Fo, Me>(self, len: usize, identity: Id, fold: Fo, merge: Me) -> A
    where
        A: Send,
        Id: Fn() -> A + Sync + Send,
        Fo: Fn(A, usize) -> A + Sync + Send,
        Me: Fn(A, A) -> A + Sync + Send,
    {
        #[cfg(feature = "parallel")]
        if self.is_parallel() {
            return (0..len)
                .into_par_iter()
                .fold(&identity, &fold)
                .reduce(&identity, &merge);
        }
        let acc = (0..len).fold(identity(), &fold);
        merge(identity(), acc)
    }
}
