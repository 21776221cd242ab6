//! Deterministic fan-out over a fixed number of worker threads.
//!
//! Results come back in item order no matter how the scheduler interleaves
//! the workers, so every caller produces identical output for any worker
//! count.

use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

/// Apply `f` to every item on up to `workers` threads; results are returned
/// in the order of `items`.
pub fn map_ordered<I, R, F>(items: Vec<I>, workers: usize, f: F) -> Vec<R>
where
    I: Send,
    R: Send,
    F: Fn(usize, I) -> R + Sync,
{
    let workers = workers.max(1).min(items.len().max(1));
    if workers == 1 {
        return items.into_iter().enumerate().map(|(i, it)| f(i, it)).collect();
    }
    let n = items.len();
    let slots: Vec<Mutex<Option<I>>> = items.into_iter().map(|it| Mutex::new(Some(it))).collect();
    let results: Vec<Mutex<Option<R>>> = (0..n).map(|_| Mutex::new(None)).collect();
    let next = AtomicUsize::new(0);
    std::thread::scope(|scope| {
        for _ in 0..workers {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                if i >= n {
                    break;
                }
                let item = slots[i].lock().unwrap().take().expect("each index claimed once");
                let out = f(i, item);
                *results[i].lock().unwrap() = Some(out);
            });
        }
    });
    results
        .into_iter()
        .map(|m| m.into_inner().unwrap().expect("worker filled every slot"))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_is_stable_across_worker_counts() {
        let items: Vec<u64> = (0..97).collect();
        let serial = map_ordered(items.clone(), 1, |i, x| (i as u64) * 1000 + x * x);
        for w in [2, 3, 8, 64] {
            let parallel = map_ordered(items.clone(), w, |i, x| (i as u64) * 1000 + x * x);
            assert_eq!(serial, parallel, "workers={w}");
        }
    }

    #[test]
    fn empty_and_single() {
        let empty: Vec<u8> = vec![];
        assert!(map_ordered(empty, 8, |_, x: u8| x).is_empty());
        assert_eq!(map_ordered(vec![5u8], 8, |_, x| x + 1), vec![6]);
    }
}
