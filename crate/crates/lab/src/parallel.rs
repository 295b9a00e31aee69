//! Shard-parallel execution with results in canonical shard order.

use std::ops::Range;
use std::thread;

use ustlab_core::poisson_limit::shard_ranges;

use crate::error::LabResult;
use crate::report::ShardInfo;

/// Runs `work` on each of `shards` contiguous ranges of `0..total`, one
/// thread per shard, and returns the results in shard order. The first error
/// in shard order wins.
pub fn run_sharded<T, F>(total: u64, shards: usize, work: F) -> LabResult<Vec<T>>
where
    T: Send,
    F: Fn(Range<u64>) -> LabResult<T> + Sync,
{
    let ranges = shard_ranges(total, shards);
    if ranges.len() == 1 {
        return Ok(vec![work(ranges[0].clone())?]);
    }
    let results: Vec<LabResult<T>> = thread::scope(|s| {
        let handles: Vec<_> = ranges
            .into_iter()
            .map(|r| {
                let work = &work;
                s.spawn(move || work(r))
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("shard worker panicked"))
            .collect()
    });
    results.into_iter().collect()
}

/// Shard table for a report: ranges plus the seed of each shard's first trial.
pub fn shard_table(total: u64, shards: usize, seed_of: impl Fn(u64) -> u64) -> Vec<ShardInfo> {
    shard_ranges(total, shards)
        .into_iter()
        .enumerate()
        .map(|(shard, r)| ShardInfo {
            shard,
            trial_start: r.start,
            trial_end: r.end,
            first_trial_seed: (r.start < r.end).then(|| seed_of(r.start)),
        })
        .collect()
}
