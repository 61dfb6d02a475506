//! Minimal deterministic work distribution over scoped threads.
//!
//! The searches in this crate need reproducible results at any worker count,
//! so parallelism is expressed as "map these items, return results in input
//! order". Items are handed out through a shared counter (dynamic load
//! balancing) but results are committed by input index, which keeps output
//! independent of scheduling.

use std::sync::atomic::{AtomicUsize, Ordering};

/// Map `f` over `0..n` using up to `workers` threads, collecting results in
/// index order. `f` must be pure up to interior synchronization of its own.
pub fn ordered_map<T, F>(workers: usize, n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync,
{
    let workers = workers.max(1).min(n.max(1));
    if workers <= 1 || n <= 1 {
        return (0..n).map(f).collect();
    }
    let next = AtomicUsize::new(0);
    let mut slots: Vec<Option<T>> = (0..n).map(|_| None).collect();
    let slot_ptr = SlicePtr(slots.as_mut_ptr());
    std::thread::scope(|scope| {
        for _ in 0..workers {
            let next = &next;
            let f = &f;
            let slot_ptr = &slot_ptr;
            scope.spawn(move || loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                if i >= n {
                    break;
                }
                let out = f(i);
                // Safety: each index is claimed by exactly one thread, and
                // the slots vector outlives the scope.
                unsafe { *slot_ptr.0.add(i) = Some(out) };
            });
        }
    });
    slots.into_iter().map(|s| s.unwrap()).collect()
}

struct SlicePtr<T>(*mut Option<T>);
unsafe impl<T: Send> Sync for SlicePtr<T> {}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn preserves_order_at_any_worker_count() {
        let expect: Vec<usize> = (0..97).map(|i| i * i).collect();
        for w in [1, 2, 3, 8, 64] {
            assert_eq!(ordered_map(w, 97, |i| i * i), expect);
        }
        assert_eq!(ordered_map(4, 0, |i| i), Vec::<usize>::new());
    }
}
