//! Data-parallel helpers with a sequential fallback.
//!
//! With the `parallel` feature enabled, [`ExecMode::Parallel`] dispatches to
//! rayon. Without it, both modes run on the calling thread. Results are
//! always returned in input order, so output never depends on the mode or
//! the worker count.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// How per-item work (extension, WLP evaluation, certificates) is scheduled.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ExecMode {
    Sequential,
    #[default]
    Parallel,
}

impl ExecMode {
    /// True when this mode actually fans out across threads in this build.
    pub fn is_parallel(self) -> bool {
        cfg!(feature = "parallel") && self == ExecMode::Parallel
    }

    pub fn map<T, U, F>(self, items: &[T], f: F) -> Vec<U>
    where
        T: Sync,
        U: Send,
        F: Fn(&T) -> U + Sync + Send,
    {
        #[cfg(feature = "parallel")]
        if self == ExecMode::Parallel {
            return items.par_iter().map(f).collect();
        }
        items.iter().map(f).collect()
    }

    /// Maps every item to a vector and concatenates the results in order.
    pub fn flat_map<T, U, F>(self, items: &[T], f: F) -> Vec<U>
    where
        T: Sync,
        U: Send,
        F: Fn(&T) -> Vec<U> + Sync + Send,
    {
        self.map(items, f).into_iter().flatten().collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn modes_agree_and_preserve_order() {
        let items: Vec<u32> = (0..1000).collect();
        let seq = ExecMode::Sequential.map(&items, |x| x * 3);
        let par = ExecMode::Parallel.map(&items, |x| x * 3);
        assert_eq!(seq, par);
        assert_eq!(seq[10], 30);
        let flat = ExecMode::Parallel.flat_map(&items[..3], |&x| vec![x; x as usize]);
        assert_eq!(flat, vec![1, 2, 2]);
    }
}
