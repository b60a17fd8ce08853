//! Execution of independent indexed jobs (search restarts, sampled trials).
//!
//! With the `parallel` feature the jobs go through rayon; otherwise, or when
//! [`Execution::Sequential`] is requested, they run in index order on the
//! calling thread. Results always come back in index order, so any reduction
//! over them is schedule-independent.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Execution {
    #[default]
    Parallel,
    Sequential,
}

impl Execution {
    /// Whether jobs will actually run on the rayon pool.
    pub fn is_parallel(self) -> bool {
        cfg!(feature = "parallel") && self == Execution::Parallel
    }
}

pub fn map_indexed<T, F>(exec: Execution, count: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if exec.is_parallel() {
        return (0..count).into_par_iter().map(f).collect();
    }
    let _ = exec;
    (0..count).map(f).collect()
}

/// Index and value of the smallest `key`, ties going to the lowest index.
pub fn argmin_by_key<T>(items: &[T], key: impl Fn(&T) -> f64) -> Option<usize> {
    let mut best: Option<(usize, f64)> = None;
    for (i, item) in items.iter().enumerate() {
        let k = key(item);
        match best {
            Some((_, b)) if !(k < b) => {}
            _ => best = Some((i, k)),
        }
    }
    best.map(|(i, _)| i)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn both_modes_return_index_order() {
        let seq = map_indexed(Execution::Sequential, 100, |i| i * i);
        let par = map_indexed(Execution::Parallel, 100, |i| i * i);
        assert_eq!(seq, par);
    }

    #[test]
    fn argmin_breaks_ties_low() {
        let v = [3.0, 1.0, 2.0, 1.0];
        assert_eq!(argmin_by_key(&v, |&x| x), Some(1));
        assert_eq!(argmin_by_key::<f64>(&[], |&x| x), None);
    }
}
