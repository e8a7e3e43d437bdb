//! Wall-clock budgets and the multi-worker search driver.

use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::OnceLock;
use std::thread;
use std::time::{Duration, Instant};

use steiner_core::search::{search_difference_family, Budget, SearchConfig, SearchError};
use steiner_core::{SearchOutcome, Termination};

pub struct WallClock<'a> {
    start: Instant,
    cancel: Option<&'a AtomicBool>,
}

impl<'a> WallClock<'a> {
    pub fn start() -> Self {
        Self {
            start: Instant::now(),
            cancel: None,
        }
    }

    pub fn with_cancel(start: Instant, cancel: &'a AtomicBool) -> Self {
        Self {
            start,
            cancel: Some(cancel),
        }
    }
}

impl Budget for WallClock<'_> {
    fn elapsed(&self) -> Duration {
        self.start.elapsed()
    }

    fn cancelled(&self) -> bool {
        self.cancel.is_some_and(|c| c.load(Ordering::Relaxed))
    }
}

/// splitmix64 step, used to derive per-worker seeds.
fn mix(seed: u64, worker: u64) -> u64 {
    let mut z = seed.wrapping_add(worker.wrapping_mul(0x9E37_79B9_7F4A_7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Runs the search on `workers` threads.
///
/// One worker reproduces `search_difference_family` exactly. With more,
/// worker `i` gets a seed derived from `(cfg.seed, i)` and a share of the
/// restart budget; the first family found is published and the rest stop.
pub fn run_search(cfg: &SearchConfig, workers: usize) -> Result<SearchOutcome, SearchError> {
    cfg.validate()?;
    if workers <= 1 {
        return search_difference_family(cfg, WallClock::start());
    }

    let start = Instant::now();
    let cancel = AtomicBool::new(false);
    let winner: OnceLock<SearchOutcome> = OnceLock::new();
    let per_worker = cfg.max_restarts.div_ceil(workers as u64).max(1);

    let outcomes: Vec<SearchOutcome> = thread::scope(|s| {
        let handles: Vec<_> = (0..workers as u64)
            .map(|i| {
                let mut wcfg = cfg.clone();
                wcfg.seed = mix(cfg.seed, i);
                wcfg.max_restarts = per_worker;
                let (cancel, winner) = (&cancel, &winner);
                s.spawn(move || {
                    let out = search_difference_family(&wcfg, WallClock::with_cancel(start, cancel))
                        .expect("config validated");
                    if out.found.is_some() && winner.set(out.clone()).is_ok() {
                        cancel.store(true, Ordering::Relaxed);
                    }
                    out
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("worker panicked")).collect()
    });

    let restarts_used = outcomes.iter().map(|o| o.restarts_used).sum();
    let nodes_expanded = outcomes.iter().map(|o| o.nodes_expanded).sum();
    let (found, terminated_by) = match winner.into_inner() {
        Some(w) => (w.found, Termination::Found),
        None if outcomes.iter().any(|o| o.terminated_by == Termination::TimeLimit) => {
            (None, Termination::TimeLimit)
        }
        None => (None, Termination::RestartsExhausted),
    };
    Ok(SearchOutcome {
        found,
        restarts_used,
        nodes_expanded,
        elapsed: start.elapsed(),
        terminated_by,
    })
}
