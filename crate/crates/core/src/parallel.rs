//! Deterministic fork-join helper for the class scans. A global worker
//! count (default: all logical cores) is consulted by `par_map`, which
//! chunks the input across scoped threads and reassembles results in input
//! order, so aggregate outputs never depend on the worker count.

use std::sync::atomic::{AtomicUsize, Ordering};

static WORKERS: AtomicUsize = AtomicUsize::new(0);

/// Set the worker count; 0 restores the automatic default.
pub fn set_workers(n: usize) {
    WORKERS.store(n, Ordering::Relaxed);
}

pub fn workers() -> usize {
    match WORKERS.load(Ordering::Relaxed) {
        0 => std::thread::available_parallelism()
            .map(|n| n.get())
            .unwrap_or(1),
        n => n,
    }
}

/// Parallel map with order-preserving output.
pub fn par_map<T: Sync, U: Send>(items: &[T], f: impl Fn(&T) -> U + Sync) -> Vec<U> {
    let w = workers().max(1).min(items.len().max(1));
    if w <= 1 || items.len() < 64 {
        return items.iter().map(&f).collect();
    }
    let mut out: Vec<Option<U>> = (0..items.len()).map(|_| None).collect();
    let chunk = items.len().div_ceil(w);
    std::thread::scope(|s| {
        for (items_chunk, out_chunk) in items.chunks(chunk).zip(out.chunks_mut(chunk)) {
            let f = &f;
            s.spawn(move || {
                for (i, o) in items_chunk.iter().zip(out_chunk.iter_mut()) {
                    *o = Some(f(i));
                }
            });
        }
    });
    out.into_iter().map(|o| o.unwrap()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn par_map_preserves_order() {
        let items: Vec<usize> = (0..1000).collect();
        set_workers(4);
        let doubled = par_map(&items, |&x| 2 * x);
        set_workers(0);
        for (i, v) in doubled.iter().enumerate() {
            assert_eq!(*v, 2 * i);
        }
    }

    #[test]
    fn par_map_matches_sequential() {
        let items: Vec<f64> = (0..500).map(|k| k as f64 * 0.1).collect();
        set_workers(3);
        let a = par_map(&items, |x| x.sin());
        set_workers(1);
        let b = par_map(&items, |x| x.sin());
        set_workers(0);
        assert_eq!(a, b);
    }
}
