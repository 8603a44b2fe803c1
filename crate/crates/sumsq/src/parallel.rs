//! Threaded verification and classification. Results are merged in a fixed
//! order, so they do not depend on the thread count.

use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::thread;

use sumsq_core::classifier::{certificate_for, classify_seed, Classification, SeedOutcome};
use sumsq_core::engine::{verify_family_range, Family, VerificationReport};
use sumsq_core::{Error, ReprTable, Result};

/// Splits `1..=bound` into contiguous ranges of roughly equal length.
fn ranges(bound: u64, pieces: u64) -> Vec<(u64, u64)> {
    let pieces = pieces.clamp(1, bound.max(1));
    let step = bound.div_ceil(pieces);
    (0..pieces)
        .map(|i| (i * step + 1, ((i + 1) * step).min(bound)))
        .filter(|(lo, hi)| lo <= hi)
        .collect()
}

/// Runs `jobs` on up to `threads` workers, returning results in job order.
fn run_ordered<J: Sync, R: Send>(jobs: &[J], threads: usize, f: impl Fn(&J) -> R + Sync) -> Vec<R> {
    if threads <= 1 || jobs.len() <= 1 {
        return jobs.iter().map(f).collect();
    }
    let next = AtomicUsize::new(0);
    let slots: Vec<Mutex<Option<R>>> = jobs.iter().map(|_| Mutex::new(None)).collect();
    thread::scope(|s| {
        for _ in 0..threads.min(jobs.len()) {
            s.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                let Some(job) = jobs.get(i) else { break };
                let r = f(job);
                *slots[i].lock().expect("worker panicked") = Some(r);
            });
        }
    });
    slots
        .into_iter()
        .map(|m| m.into_inner().expect("worker panicked").expect("every job ran"))
        .collect()
}

/// [`verify_family_range`] over `1..=bound`, split across `threads` workers.
pub fn verify_parallel(fam: &Family, table: &ReprTable, bound: u64, threads: usize) -> Result<VerificationReport> {
    // instance density grows with n; many small ranges keep workers busy
    let jobs = ranges(bound, (threads as u64).saturating_mul(8));
    let parts = run_ordered(&jobs, threads, |&(lo, hi)| verify_family_range(fam, table, lo, hi));
    let parts = parts.into_iter().collect::<Result<Vec<_>>>()?;
    Ok(VerificationReport::merge(table.k(), bound, parts))
}

/// Classification with one seed per worker.
pub fn classify_parallel(bound: u64, k: usize, threads: usize) -> Result<Classification> {
    if k < 3 {
        return Err(Error::Input(format!("k must be at least 3, got {k}")));
    }
    if bound == 0 {
        return Err(Error::Input("N must be positive".into()));
    }
    let cert = certificate_for(k as u64)?;
    let table = ReprTable::new(bound, k)?;
    let outcomes: Vec<SeedOutcome> = run_ordered(&cert.seeds, threads, |s| classify_seed(s, &table, bound))
        .into_iter()
        .collect::<Result<_>>()?;
    Ok(Classification {
        k,
        bound,
        case: cert.case,
        outcomes,
        sign_dof: table.non_representable(bound).len() as u64,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use sumsq_core::classifier::classify;
    use sumsq_core::engine::{FamilyKind, SignAssignment};

    #[test]
    fn ranges_cover_exactly() {
        for (bound, pieces) in [(1, 8), (10, 3), (100, 7), (5, 5), (7, 100)] {
            let r = ranges(bound, pieces);
            assert_eq!(r.first().unwrap().0, 1);
            assert_eq!(r.last().unwrap().1, bound);
            assert!(r.windows(2).all(|w| w[0].1 + 1 == w[1].0));
        }
    }

    #[test]
    fn thread_count_does_not_change_results() {
        let table = ReprTable::new(400, 3).unwrap();
        let fam = Family::new(FamilyKind::Identity, &table, 400, SignAssignment::random(&table, 400, 2))
            .unwrap()
            .with_override(41, 40.into())
            .unwrap();
        let one = verify_parallel(&fam, &table, 400, 1).unwrap();
        for t in [2, 3, 8] {
            assert_eq!(verify_parallel(&fam, &table, 400, t).unwrap(), one);
        }
        assert!(!one.passed());
        assert_eq!(classify_parallel(100, 4, 3).unwrap(), classify(100, 4).unwrap());
    }
}
