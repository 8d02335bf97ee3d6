//! Parallel drivers. Work is cut into shards of the leading coordinate and
//! results are merged in shard order, so the output never depends on the
//! number of threads.

use cubicwa_core::local::{congruence_solubility_report, PrimeReport, ReportOptions};
use cubicwa_core::wa::{count, count_range, prefix_count, ApproximationTask, CountQuery, ScanResult, SearchOutcome, SearchPlan};
use cubicwa_core::{CubicForm, Result};
use num_bigint::BigInt;
use num_traits::Zero;
use rayon::prelude::*;

/// Shards per worker thread.
const SHARDS_PER_THREAD: usize = 4;

/// Runs `f` on a pool of `threads` workers (`0` lets rayon decide).
pub fn with_threads<T: Send>(threads: usize, f: impl FnOnce() -> T + Send) -> T {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .expect("thread pool");
    pool.install(f)
}

/// Splits `[lo, hi]` into at most `k` consecutive nonempty pieces.
pub fn shards(lo: &BigInt, hi: &BigInt, k: usize) -> Vec<(BigInt, BigInt)> {
    if lo > hi {
        return Vec::new();
    }
    let len = hi - lo + 1u8;
    let k = BigInt::from(k.max(1)).min(len.clone());
    let step = (&len + &k - 1u8) / &k;
    let mut out = Vec::new();
    let mut a = lo.clone();
    while &a <= hi {
        let b = (&a + &step - 1u8).min(hi.clone());
        out.push((a, b.clone()));
        a = b + 1u8;
    }
    out
}

fn shard_count() -> usize {
    rayon::current_num_threads() * SHARDS_PER_THREAD
}

/// Same result and transcript as [`cubicwa_core::wa::search`].
pub fn search(task: &ApproximationTask) -> Result<SearchOutcome> {
    let plan = SearchPlan::new(task)?;
    let mut transcript = plan.transcript();
    for k in 0..plan.max_steps() {
        let p = plan.scale(k);
        let ranges = plan.ranges(&p);
        let limit = plan.prefix_limit(&ranges);
        let pieces = if ranges.len() == 1 {
            vec![ranges[0].clone()]
        } else {
            shards(&ranges[0].0, &ranges[0].1, shard_count())
        };
        let results: Vec<ScanResult> = pieces.par_iter().map(|s| plan.scan(&p, &ranges, s, limit)).collect();
        let mut merged = ScanResult::default();
        for r in results {
            merged.examined += r.examined;
            merged.rejected += r.rejected;
            if r.hit.is_some() {
                merged.hit = r.hit;
                break;
            }
        }
        transcript.steps.push(plan.record(k, p, ranges, &merged));
        if let Some(h) = merged.hit {
            transcript.checks = h.checks;
            return Ok(SearchOutcome {
                point: Some(h.point),
                transcript,
            });
        }
    }
    Ok(SearchOutcome { point: None, transcript })
}

/// Same value as [`cubicwa_core::wa::count`].
pub fn count_parallel(q: &CountQuery) -> Result<BigInt> {
    let ranges = q.ranges()?;
    if ranges.len() < 2 {
        return count(q);
    }
    let total = prefix_count(&ranges);
    if total > q.budget {
        return Err(cubicwa_core::Error::BudgetExceeded {
            needed: total,
            budget: q.budget,
        });
    }
    let parts = shards(&ranges[0].0, &ranges[0].1, shard_count());
    Ok(parts
        .par_iter()
        .map(|(a, b)| count_range(q, &ranges, a, b))
        .reduce(BigInt::zero, |x, y| x + y))
}

/// The solubility report, one prime per task.
pub fn local_report(c: &CubicForm, primes: &[u64], opts: &ReportOptions) -> Result<Vec<PrimeReport>> {
    let parts: Vec<Result<Vec<PrimeReport>>> = primes
        .par_iter()
        .map(|&p| congruence_solubility_report(c, &[p], opts))
        .collect();
    let mut out = Vec::with_capacity(primes.len());
    for r in parts {
        out.extend(r?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shards_cover_the_range() {
        let s = shards(&BigInt::from(-3), &BigInt::from(6), 4);
        assert_eq!(s.first().unwrap().0, BigInt::from(-3));
        assert_eq!(s.last().unwrap().1, BigInt::from(6));
        for w in s.windows(2) {
            assert_eq!(&w[0].1 + 1u8, w[1].0);
        }
        assert_eq!(shards(&BigInt::from(0), &BigInt::from(1), 8).len(), 2);
        assert!(shards(&BigInt::from(1), &BigInt::from(0), 8).is_empty());
    }
}
