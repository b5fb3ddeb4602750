//! Execution mode for the data-parallel maps.

/// Selects between the rayon-backed and the sequential implementation of a
/// map. Both produce identical output in identical order.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExecMode {
    #[cfg(feature = "parallel")]
    Parallel,
    Sequential,
}

impl Default for ExecMode {
    fn default() -> Self {
        #[cfg(feature = "parallel")]
        {
            ExecMode::Parallel
        }
        #[cfg(not(feature = "parallel"))]
        {
            ExecMode::Sequential
        }
    }
}

/// Ordered map over a slice.
pub fn map_slice<T, U, F>(mode: ExecMode, items: &[T], f: F) -> Vec<U>
where
    T: Sync,
    U: Send,
    F: Fn(&T) -> U + Sync + Send,
{
    match mode {
        #[cfg(feature = "parallel")]
        ExecMode::Parallel => {
            use rayon::prelude::*;
            items.par_iter().map(f).collect()
        }
        ExecMode::Sequential => items.iter().map(f).collect(),
    }
}

/// Ordered fallible map over a slice; the first error in input order wins.
pub fn try_map_slice<T, U, E, F>(mode: ExecMode, items: &[T], f: F) -> Result<Vec<U>, E>
where
    T: Sync,
    U: Send,
    E: Send,
    F: Fn(&T) -> Result<U, E> + Sync + Send,
{
    match mode {
        #[cfg(feature = "parallel")]
        ExecMode::Parallel => {
            use rayon::prelude::*;
            let out: Vec<Result<U, E>> = items.par_iter().map(f).collect();
            out.into_iter().collect()
        }
        ExecMode::Sequential => items.iter().map(f).collect(),
    }
}

/// Ordered flat map: each item expands to a vector, concatenated in input order.
pub fn flat_map_slice<T, U, F>(mode: ExecMode, items: &[T], f: F) -> Vec<U>
where
    T: Sync,
    U: Send,
    F: Fn(&T) -> Vec<U> + Sync + Send,
{
    match mode {
        #[cfg(feature = "parallel")]
        ExecMode::Parallel => {
            use rayon::prelude::*;
            let parts: Vec<Vec<U>> = items.par_iter().map(f).collect();
            parts.into_iter().flatten().collect()
        }
        ExecMode::Sequential => items.iter().flat_map(f).collect(),
    }
}
