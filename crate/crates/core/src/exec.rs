//! Execution strategy for the data-parallel loops (cut enumeration, rank
//! trials, search shards, orientation sweeps).
//!
//! With the `parallel` feature disabled, [`Exec::Parallel`] degrades to the
//! sequential path, so callers never need their own `cfg` switches. Every
//! parallel site in the crate reduces with a deterministic rule, so results
//! do not depend on the strategy or the thread count.

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum Exec {
    Sequential,
    #[default]
    Parallel,
}

impl Exec {
    /// Order-preserving map over owned items.
    pub fn map<T, R, F>(self, items: Vec<T>, f: F) -> Vec<R>
    where
        T: Send,
        R: Send,
        F: Fn(T) -> R + Sync + Send,
    {
        #[cfg(feature = "parallel")]
        if self == Exec::Parallel {
            use rayon::prelude::*;
            return items.into_par_iter().map(f).collect();
        }
        items.into_iter().map(f).collect()
    }

    /// Number of worker threads the strategy will use.
    pub fn threads(self) -> usize {
        #[cfg(feature = "parallel")]
        if self == Exec::Parallel {
            return rayon::current_num_threads();
        }
        1
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn map_preserves_order() {
        let items: Vec<u32> = (0..1000).collect();
        let seq = Exec::Sequential.map(items.clone(), |x| x * 3);
        let par = Exec::Parallel.map(items, |x| x * 3);
        assert_eq!(seq, par);
        assert_eq!(seq[999], 2997);
    }
}
