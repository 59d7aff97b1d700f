//! Order-preserving map over a slice, parallel when the `parallel` feature
//! is enabled and sequential otherwise.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Execution {
    Sequential,
    /// Worker threads; `None` uses the global rayon pool.
    Parallel(Option<usize>),
    #[default]
    Auto,
}

impl Execution {
    pub fn from_threads(threads: Option<usize>) -> Self {
        match threads {
            Some(1) => Execution::Sequential,
            Some(n) => Execution::Parallel(Some(n)),
            None => Execution::Auto,
        }
    }
}

pub fn map_sequential<T, R, F>(items: &[T], f: F) -> Vec<R>
where
    F: Fn(&T) -> R,
{
    items.iter().map(f).collect()
}

#[cfg(feature = "parallel")]
pub fn map_parallel<T, R, F>(items: &[T], f: F, threads: Option<usize>) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    match threads {
        None => items.par_iter().map(f).collect(),
        Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(n).build() {
            Ok(pool) => pool.install(|| items.par_iter().map(f).collect()),
            Err(e) => {
                log::warn!("falling back to the global pool: {e}");
                items.par_iter().map(f).collect()
            }
        },
    }
}

#[cfg(not(feature = "parallel"))]
pub fn map_parallel<T, R, F>(items: &[T], f: F, _threads: Option<usize>) -> Vec<R>
where
    F: Fn(&T) -> R,
{
    map_sequential(items, f)
}

pub fn map<T, R, F>(items: &[T], f: F, exec: Execution) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    match exec {
        Execution::Sequential => map_sequential(items, f),
        Execution::Parallel(threads) => map_parallel(items, f, threads),
        Execution::Auto => map_parallel(items, f, None),
    }
}
