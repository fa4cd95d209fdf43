//! Data-parallel helpers.
//!
//! Every batch computation in the crate routes through [`map`] so that the
//! `parallel` feature can be switched off without touching call sites.
//! Results are always returned in input order, which keeps reductions
//! reproducible regardless of thread count.

/// How a batch should be executed.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Execution {
    #[default]
    Parallel,
    Sequential,
}

impl Execution {
    /// `Parallel` silently degrades to sequential when the crate was built
    /// without the `parallel` feature.
    pub fn is_parallel(self) -> bool {
        cfg!(feature = "parallel") && self == Execution::Parallel
    }
}

pub fn map<T, R, F>(exec: Execution, items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        if exec.is_parallel() {
            use rayon::prelude::*;
            return items.par_iter().map(f).collect();
        }
    }
    let _ = exec;
    items.iter().map(f).collect()
}

pub fn map_range<R, F>(exec: Execution, n: usize, f: F) -> Vec<R>
where
    R: Send,
    F: Fn(usize) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        if exec.is_parallel() {
            use rayon::prelude::*;
            return (0..n).into_par_iter().map(f).collect();
        }
    }
    let _ = exec;
    (0..n).map(f).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_is_preserved() {
        let xs: Vec<u64> = (0..1000).collect();
        let a = map(Execution::Parallel, &xs, |x| x * x);
        let b = map(Execution::Sequential, &xs, |x| x * x);
        assert_eq!(a, b);
        assert_eq!(map_range(Execution::Parallel, 10, |i| i), (0..10).collect::<Vec<_>>());
    }
}
