//! Data-parallel execution of independent work items.
//!
//! Kernels that map over independent rows, cases or lattice points take an
//! [`Exec`] so callers and the bench suite can pick the sequential path.
//! Without the `parallel` feature both variants run sequentially.

/// Execution strategy for data-parallel kernels.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Exec {
    Sequential,
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
    /// Maps `f` over `items`, preserving order.
    pub fn map<T, R, F>(self, items: &[T], f: F) -> Vec<R>
    where
        T: Sync,
        R: Send,
        F: Fn(&T) -> R + Sync + Send,
    {
        match self {
            #[cfg(feature = "parallel")]
            Exec::Parallel => {
                use rayon::prelude::*;
                items.par_iter().map(f).collect()
            }
            _ => items.iter().map(f).collect(),
        }
    }

    /// Maps `f` over `0..n`, preserving order.
    pub fn map_range<R, F>(self, n: usize, f: F) -> Vec<R>
    where
        R: Send,
        F: Fn(usize) -> R + Sync + Send,
    {
        match self {
            #[cfg(feature = "parallel")]
            Exec::Parallel => {
                use rayon::prelude::*;
                (0..n).into_par_iter().map(f).collect()
            }
            _ => (0..n).map(f).collect(),
        }
    }

    /// Fallible ordered map; returns the first error by index.
    pub fn try_map<T, R, E, F>(self, items: &[T], f: F) -> Result<Vec<R>, E>
    where
        T: Sync,
        R: Send,
        E: Send,
        F: Fn(&T) -> Result<R, E> + Sync + Send,
    {
        self.map(items, f).into_iter().collect()
    }

    /// Sum of `f(i)` over `0..n` for a counting kernel.
    pub fn count_range<F>(self, n: u64, f: F) -> u64
    where
        F: Fn(u64) -> u64 + Sync + Send,
    {
        match self {
            #[cfg(feature = "parallel")]
            Exec::Parallel => {
                use rayon::prelude::*;
                (0..n).into_par_iter().map(f).sum()
            }
            _ => (0..n).map(f).sum(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn strategies_agree() {
        let items: Vec<u64> = (0..1000).collect();
        let a = Exec::Sequential.map(&items, |x| x * x);
        let b = Exec::Parallel.map(&items, |x| x * x);
        assert_eq!(a, b);
        assert_eq!(
            Exec::Sequential.count_range(100, |i| i % 3),
            Exec::Parallel.count_range(100, |i| i % 3)
        );
    }
}
