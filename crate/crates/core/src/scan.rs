//! Segmented scans over `[1, N]` that report running totals at checkpoints.
//!
//! The range is cut on a fixed grid of segment-size blocks, and blocks are
//! further split at each checkpoint. Pieces may be computed on any number of
//! threads; they are always merged one by one in ascending order, so results
//! depend only on the segment size and the checkpoints.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::rational::RationalSum;
use crate::sieve::{Sieve, SieveTable, DEFAULT_SEGMENT_SIZE};
use crate::summation::CompensatedSum;

/// Segment size and worker count for sieve-backed counters.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ScanConfig {
    pub segment_size: usize,
    pub threads: usize,
}

impl Default for ScanConfig {
    fn default() -> Self {
        ScanConfig {
            segment_size: DEFAULT_SEGMENT_SIZE,
            threads: std::thread::available_parallelism().map_or(1, |n| n.get()),
        }
    }
}

impl ScanConfig {
    pub fn single_threaded() -> Self {
        ScanConfig {
            threads: 1,
            ..Self::default()
        }
    }
}

/// A partial result that can absorb the partial for the next piece.
pub trait Accumulator: Clone + Send {
    fn empty() -> Self;

    fn merge(&mut self, next: &Self);
}

impl Accumulator for u64 {
    fn empty() -> Self {
        0
    }

    fn merge(&mut self, next: &Self) {
        *self += next;
    }
}

impl Accumulator for CompensatedSum {
    fn empty() -> Self {
        CompensatedSum::new()
    }

    fn merge(&mut self, next: &Self) {
        CompensatedSum::merge(self, next);
    }
}

impl Accumulator for RationalSum {
    fn empty() -> Self {
        RationalSum::new()
    }

    fn merge(&mut self, next: &Self) {
        self.add_sum(next);
    }
}

/// Runs `visit(table, lo, hi)` on every piece of `[1, max checkpoint]` and
/// returns the accumulated total at each checkpoint. `checkpoints` must be
/// strictly increasing and positive.
pub fn scan_checkpoints<A, V>(checkpoints: &[u64], config: &ScanConfig, visit: V) -> Result<Vec<A>>
where
    A: Accumulator,
    V: Fn(&SieveTable, u64, u64) -> A + Sync,
{
    let Some(&limit) = checkpoints.last() else {
        return Ok(Vec::new());
    };
    if checkpoints[0] == 0 || checkpoints.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::invalid(
            "checkpoints must be positive and strictly increasing",
        ));
    }
    if config.threads == 0 {
        return Err(Error::invalid("thread count must be positive"));
    }
    let sieve = Sieve::with_segment_size(limit, config.segment_size)?;
    let blocks: Vec<(u64, u64)> = sieve.grid(limit).collect();

    let run_block = |&(lo, hi): &(u64, u64)| -> Result<Vec<(A, bool)>> {
        let table = sieve.segment(lo, hi)?;
        let first = checkpoints.partition_point(|&c| c < lo);
        let mut pieces = Vec::new();
        let mut start = lo;
        for &c in checkpoints[first..].iter().take_while(|&&c| c <= hi) {
            pieces.push((visit(&table, start, c), true));
            start = c + 1;
        }
        if start <= hi {
            pieces.push((visit(&table, start, hi), false));
        }
        Ok(pieces)
    };

    let per_block: Vec<Vec<(A, bool)>> = if config.threads == 1 {
        blocks.iter().map(run_block).collect::<Result<_>>()?
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(config.threads)
            .build()
            .map_err(|e| Error::Resource(format!("thread pool: {e}")))?;
        pool.install(|| blocks.par_iter().map(run_block).collect::<Result<_>>())?
    };

    let mut running = A::empty();
    let mut totals = Vec::with_capacity(checkpoints.len());
    for (partial, at_checkpoint) in per_block.iter().flatten() {
        running.merge(partial);
        if *at_checkpoint {
            totals.push(running.clone());
        }
    }
    debug_assert_eq!(totals.len(), checkpoints.len());
    Ok(totals)
}

/// First multiple of `m` that is `≥ lo`.
pub(crate) fn first_multiple(lo: u64, m: u64) -> u64 {
    lo.div_ceil(m) * m
}
