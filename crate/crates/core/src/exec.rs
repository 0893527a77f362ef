//! Sequential / data-parallel execution switch.
//!
//! With the `parallel` feature (on by default) the parallel strategy fans out
//! over rayon's global pool. Without it every strategy runs sequentially, so
//! callers never need their own `cfg` gates.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// How index-parallel loops are executed.
///
/// Both strategies produce identical output: work items are independent and
/// results are collected in index order.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
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
    /// True when this strategy actually runs on more than one thread.
    pub fn is_parallel(self) -> bool {
        cfg!(feature = "parallel") && self == Exec::Parallel
    }

    /// Evaluates `f(0..len)` and collects the results in index order.
    pub fn map_range<T, F>(self, len: usize, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync + Send,
    {
        match self {
            #[cfg(feature = "parallel")]
            Exec::Parallel => (0..len).into_par_iter().map(f).collect(),
            _ => (0..len).map(f).collect(),
        }
    }

    /// Like [`Exec::map_range`] but stops at an error. Which error is
    /// reported is unspecified when several items fail in parallel.
    pub fn try_map_range<T, E, F>(self, len: usize, f: F) -> Result<Vec<T>, E>
    where
        T: Send,
        E: Send,
        F: Fn(usize) -> Result<T, E> + Sync + Send,
    {
        match self {
            #[cfg(feature = "parallel")]
            Exec::Parallel => (0..len).into_par_iter().map(f).collect(),
            _ => (0..len).map(f).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn strategies_agree() {
        let f = |i: usize| (i as f64).sqrt() * 3.0;
        assert_eq!(
            Exec::Sequential.map_range(1000, f),
            Exec::Parallel.map_range(1000, f)
        );
    }

    #[test]
    fn try_map_reports_error() {
        let r: Result<Vec<usize>, usize> =
            Exec::Parallel.try_map_range(100, |i| if i == 42 { Err(i) } else { Ok(i) });
        assert_eq!(r, Err(42));
    }
}
