//! Worker pool over engine windows.

use std::sync::atomic::{AtomicUsize, Ordering};
use std::thread;

use repnum_core::moments::{Collector, Engine, Scanner};
use repnum_core::repr::RepFamily;
use repnum_core::{Error, Result};

/// An [`Engine`] whose windows are handed out to `workers` threads.
///
/// Each worker folds its windows into a clone of the prototype collector; the clones
/// are merged in worker order. Collectors merge exactly, so the schedule never shows
/// in the result. Prototypes must be empty.
#[derive(Debug, Clone)]
pub struct ParallelEngine {
    engine: Engine,
    workers: usize,
}

impl ParallelEngine {
    pub fn new(engine: Engine, workers: usize) -> Self {
        ParallelEngine { engine, workers: workers.max(1) }
    }

    /// One worker per available processor.
    pub fn with_default_workers(engine: Engine) -> Self {
        Self::new(engine, default_workers())
    }

    pub fn engine(&self) -> &Engine {
        &self.engine
    }

    pub fn workers(&self) -> usize {
        self.workers
    }
}

pub fn default_workers() -> usize {
    thread::available_parallelism().map(|n| n.get()).unwrap_or(1)
}

impl Scanner for ParallelEngine {
    fn scan<C: Collector>(&self, rep: RepFamily, x: u64, proto: C) -> Result<C> {
        if x > self.engine.x_max() {
            return Err(Error::Capacity(format!("x = {x} beyond engine x_max {}", self.engine.x_max())));
        }
        let windows: Vec<(u64, u64)> = self.engine.segments(x).collect();
        let workers = self.workers.min(windows.len());
        if workers <= 1 {
            return self.engine.scan(rep, x, proto);
        }
        let cursor = AtomicUsize::new(0);
        let protos: Vec<C> = (0..workers).map(|_| proto.clone()).collect();
        let results: Vec<Result<C>> = thread::scope(|s| {
            let handles: Vec<_> = protos
                .into_iter()
                .map(|mut c| {
                    let (cursor, windows, engine) = (&cursor, &windows, &self.engine);
                    s.spawn(move || -> Result<C> {
                        loop {
                            let i = cursor.fetch_add(1, Ordering::Relaxed);
                            let Some(&(lo, hi)) = windows.get(i) else { break };
                            engine.run_segment(rep, lo, hi, &mut c)?;
                        }
                        Ok(c)
                    })
                })
                .collect();
            handles
                .into_iter()
                .map(|h| h.join().unwrap_or_else(|_| Err(Error::Internal("scan worker panicked".into()))))
                .collect()
        });
        let mut results = results.into_iter();
        let mut acc = results.next().expect("at least one worker")?;
        for r in results {
            acc.merge(r?)?;
        }
        Ok(acc)
    }
}
