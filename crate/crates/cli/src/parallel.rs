use std::sync::atomic::{AtomicUsize, Ordering};
use std::time::{SystemTime, UNIX_EPOCH};

use antilearn_core::harness::{CellOutcome, Grid, GridReport};
use rayon::prelude::*;

use crate::error::{Error, Result};

/// Evaluates every cell on a pool of `threads` workers. The report is the
/// same as [`Grid::run`] for any thread count: cells carry their own seeds
/// and are reassembled in canonical order.
///
/// `progress` receives the number of finished cells, the total, and the
/// cell that just finished; it may be called from any worker.
pub fn run_parallel<F>(grid: &Grid<'_>, threads: usize, progress: F) -> Result<GridReport>
where
    F: Fn(usize, usize, &CellOutcome) + Sync,
{
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads.max(1))
        .build()
        .map_err(|e| Error::Usage(format!("cannot start {threads} worker threads: {e}")))?;
    let keys = grid.cells();
    let total = keys.len();
    let done = AtomicUsize::new(0);
    let cells: Vec<CellOutcome> = pool.install(|| {
        keys.par_iter()
            .map(|&key| {
                let out = grid.run_cell(key);
                progress(done.fetch_add(1, Ordering::Relaxed) + 1, total, &out);
                out
            })
            .collect()
    });
    Ok(grid.assemble(cells))
}

pub fn unix_now() -> Option<u64> {
    SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .ok()
        .map(|d| d.as_secs())
}
