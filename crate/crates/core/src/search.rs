//! Exhaustive subset search in increasing size with a work budget.

use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};
use std::time::{Duration, Instant};

use itertools::Itertools;
use rayon::prelude::*;

use crate::error::{Error, Result};

/// Limits for exhaustive searches. Both limits are optional.
#[derive(Clone, Copy, Debug, Default)]
pub struct Budget {
    pub max_subsets: Option<u64>,
    pub time_limit: Option<Duration>,
}

impl Budget {
    pub fn unlimited() -> Self {
        Self::default()
    }

    pub fn subsets(max: u64) -> Self {
        Self { max_subsets: Some(max), time_limit: None }
    }

    pub fn seconds(secs: f64) -> Self {
        Self { max_subsets: None, time_limit: Some(Duration::from_secs_f64(secs)) }
    }
}

struct Meter {
    budget: Budget,
    start: Instant,
    spent: AtomicU64,
    blown: AtomicBool,
}

impl Meter {
    fn new(budget: Budget) -> Self {
        Self { budget, start: Instant::now(), spent: AtomicU64::new(0), blown: AtomicBool::new(false) }
    }

    /// Charges one subset; returns false once the budget is gone.
    fn charge(&self) -> bool {
        if self.blown.load(Ordering::Relaxed) {
            return false;
        }
        let spent = self.spent.fetch_add(1, Ordering::Relaxed) + 1;
        let over_count = self.budget.max_subsets.is_some_and(|m| spent > m);
        let over_time = spent.is_multiple_of(256) && self.budget.time_limit.is_some_and(|t| self.start.elapsed() > t);
        if over_count || over_time {
            self.blown.store(true, Ordering::Relaxed);
            return false;
        }
        true
    }

    fn exhausted(&self) -> bool {
        self.blown.load(Ordering::Relaxed)
    }
}

fn exceeded(what: &str, k: usize) -> Error {
    let detail = match k {
        0 => "no size was fully excluded".to_string(),
        k => format!("every set of size <= {} was excluded", k - 1),
    };
    Error::Resource(format!("{what}: budget exhausted while scanning size {k}; {detail}"))
}

/// Subsets of `0..n` of size `k` starting with `first`, in lexicographic order.
fn subsets_from(n: usize, k: usize, first: usize) -> impl Iterator<Item = Vec<usize>> {
    (first + 1..n).combinations(k - 1).map(move |rest| {
        let mut s = Vec::with_capacity(k);
        s.push(first);
        s.extend(rest);
        s
    })
}

/// Smallest `k >= start` for which some `k`-subset satisfies `accept`, with the
/// lexicographically smallest witness of that size.
///
/// Returns `Ok(None)` if no subset of any size up to `n` is accepted.
pub fn min_accepted<F>(n: usize, start: usize, budget: Budget, what: &str, accept: F) -> Result<Option<Vec<usize>>>
where
    F: Fn(&[usize]) -> bool + Sync,
{
    let meter = Meter::new(budget);
    for k in start..=n {
        let found = if k == 0 {
            meter.charge();
            accept(&[]).then(Vec::new)
        } else {
            (0..n)
                .into_par_iter()
                .find_map_first(|first| subsets_from(n, k, first).take_while(|_| meter.charge()).find(|s| accept(s)))
        };
        if meter.exhausted() {
            return Err(exceeded(what, k));
        }
        if found.is_some() {
            return Ok(found);
        }
    }
    Ok(None)
}

/// Every `k`-subset satisfying `accept`, in lexicographic order.
pub fn all_accepted<F>(n: usize, k: usize, budget: Budget, what: &str, accept: F) -> Result<Vec<Vec<usize>>>
where
    F: Fn(&[usize]) -> bool + Sync,
{
    let meter = Meter::new(budget);
    let out = if k == 0 {
        meter.charge();
        if accept(&[]) {
            vec![Vec::new()]
        } else {
            Vec::new()
        }
    } else {
        (0..n)
            .into_par_iter()
            .flat_map_iter(|first| {
                subsets_from(n, k, first).take_while(|_| meter.charge()).filter(|s| accept(s)).collect::<Vec<_>>()
            })
            .collect()
    };
    if meter.exhausted() {
        return Err(exceeded(what, k));
    }
    Ok(out)
}
