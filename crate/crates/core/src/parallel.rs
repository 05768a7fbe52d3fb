//! Ordered task execution over a bounded rayon pool. Results are merged in
//! task order, so a scan that stops at its first "hit" reports the same hit
//! and the same counts for every thread budget.

use std::sync::atomic::{AtomicBool, AtomicUsize, Ordering};

use rayon::prelude::*;
use rayon::{ThreadPool, ThreadPoolBuilder};

pub(crate) struct Workers {
    pool: Option<ThreadPool>,
}

/// Cancellation handle passed to scan tasks; poll it from long loops.
pub(crate) struct Cancel<'a> {
    index: usize,
    best: &'a AtomicUsize,
    stop: &'a AtomicBool,
    deterministic: bool,
}

impl Cancel<'_> {
    pub(crate) fn is_set(&self) -> bool {
        if self.deterministic {
            self.best.load(Ordering::Relaxed) < self.index
        } else {
            self.stop.load(Ordering::Relaxed)
        }
    }
}

impl Workers {
    pub(crate) fn new(threads: usize) -> Self {
        let pool = (threads > 1).then(|| {
            ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .expect("thread pool construction")
        });
        Workers { pool }
    }

    /// `f(i)` for every `i < count`, in index order.
    pub(crate) fn map<R, F>(&self, count: usize, f: F) -> Vec<R>
    where
        R: Send,
        F: Fn(usize) -> R + Sync + Send,
    {
        match &self.pool {
            None => (0..count).map(f).collect(),
            Some(pool) => pool.install(|| (0..count).into_par_iter().map(f).collect()),
        }
    }

    /// Runs `task(i)` for `i < count`. A task returns `None` when it was
    /// cancelled, or `Some((result, hit))`. In deterministic mode the output
    /// is exactly the results of tasks `0..=h` where `h` is the first hit
    /// (all tasks when there is none), independent of the pool size. Otherwise
    /// the first hit by wall-clock stops everything and the completed results
    /// are returned in index order.
    pub(crate) fn scan<T, F>(&self, count: usize, deterministic: bool, task: F) -> Vec<(T, bool)>
    where
        T: Send,
        F: Fn(usize, &Cancel) -> Option<(T, bool)> + Sync + Send,
    {
        let best = AtomicUsize::new(usize::MAX);
        let stop = AtomicBool::new(false);
        let run = |i: usize| {
            let cancel = Cancel { index: i, best: &best, stop: &stop, deterministic };
            if cancel.is_set() {
                return None;
            }
            let out = task(i, &cancel)?;
            if out.1 {
                best.fetch_min(i, Ordering::Relaxed);
                stop.store(true, Ordering::Relaxed);
            }
            Some(out)
        };
        let results: Vec<Option<(T, bool)>> = match &self.pool {
            None => {
                let mut v = Vec::with_capacity(count);
                for i in 0..count {
                    let r = run(i);
                    let hit = matches!(r, Some((_, true)));
                    v.push(r);
                    if hit {
                        break;
                    }
                }
                v
            }
            Some(pool) => pool.install(|| (0..count).into_par_iter().map(run).collect()),
        };
        let mut out = Vec::new();
        for r in results {
            match r {
                Some((t, hit)) => {
                    out.push((t, hit));
                    if hit {
                        break;
                    }
                }
                None if deterministic => break,
                None => {}
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic_scan_stops_at_first_hit() {
        for threads in [1, 2, 8] {
            let w = Workers::new(threads);
            let out = w.scan(100, true, |i, _| Some((i, i % 17 == 16)));
            assert_eq!(out.len(), 17);
            assert_eq!(out.last(), Some(&(16, true)));
        }
    }

    #[test]
    fn scan_without_hit_returns_everything() {
        let w = Workers::new(4);
        let out = w.scan(50, true, |i, _| Some((i * 2, false)));
        assert_eq!(out.iter().map(|x| x.0).collect::<Vec<_>>(), (0..50).map(|i| i * 2).collect::<Vec<_>>());
    }

    #[test]
    fn map_keeps_order() {
        assert_eq!(Workers::new(3).map(10, |i| i * i), (0..10).map(|i| i * i).collect::<Vec<_>>());
    }
}
