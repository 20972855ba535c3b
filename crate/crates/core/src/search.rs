//! Search machinery shared by the solvers.

use crate::model::Instance;
use crate::scalar::{max_of, sort_dedup, Scalar};

/// A single-machine job: available at `release`, runs for `duration`, and
/// contributes `completion + tail` to the objective.
#[derive(Debug, Clone)]
pub(crate) struct Job<T> {
    pub release: T,
    pub duration: T,
    pub tail: T,
}

#[derive(Debug, Clone)]
struct Entry<T> {
    completion: T,
    value: Option<T>,
    last: usize,
    prev: usize,
}

/// Pareto fronts of `(completion, max(completion_j + tail_j))` over all job
/// subsets. Both coordinates only ever hurt later jobs when larger, so a
/// dominated prefix can be discarded; the fronts are exact.
pub(crate) struct SubsetFronts<T> {
    fronts: Vec<Vec<Entry<T>>>,
}

impl<T: Scalar> SubsetFronts<T> {
    /// Builds the fronts of every subset of `jobs`. `budget` bounds the
    /// total number of front entries; `None` is returned when exceeded.
    pub fn build(jobs: &[Job<T>], budget: &mut u64) -> Option<Self> {
        let n = jobs.len();
        assert!(n < 31, "subset search supports at most 30 jobs");
        let size = 1usize << n;
        let mut fronts: Vec<Vec<Entry<T>>> = Vec::with_capacity(size);
        fronts.push(vec![Entry {
            completion: T::zero(),
            value: None,
            last: usize::MAX,
            prev: usize::MAX,
        }]);
        for mask in 1..size {
            let mut front: Vec<Entry<T>> = Vec::new();
            for (last, job) in jobs.iter().enumerate() {
                if mask & (1 << last) == 0 {
                    continue;
                }
                let before = mask ^ (1 << last);
                for (prev, e) in fronts[before].iter().enumerate() {
                    let start = max_of(e.completion.clone(), job.release.clone());
                    let completion = start + job.duration.clone();
                    let here = completion.clone() + job.tail.clone();
                    let value = match &e.value {
                        Some(v) => max_of(v.clone(), here),
                        None => here,
                    };
                    let cand = Entry {
                        completion,
                        value: Some(value),
                        last,
                        prev,
                    };
                    insert_nondominated(&mut front, cand);
                }
            }
            *budget = budget.checked_sub(front.len() as u64)?;
            fronts.push(front);
        }
        Some(SubsetFronts { fronts })
    }

    fn best_entry(&self, mask: usize) -> Option<usize> {
        let front = &self.fronts[mask];
        let mut best: Option<usize> = None;
        for (k, e) in front.iter().enumerate() {
            let better = match best {
                None => true,
                Some(b) => e.value < front[b].value,
            };
            if better {
                best = Some(k);
            }
        }
        best
    }

    /// Minimum objective over orders of `mask`; `None` for the empty set.
    pub fn best(&self, mask: usize) -> Option<T> {
        self.best_entry(mask)
            .and_then(|k| self.fronts[mask][k].value.clone())
    }

    /// An order of the jobs in `mask` attaining [`Self::best`].
    pub fn order(&self, mask: usize) -> Vec<usize> {
        let mut order = Vec::new();
        let (mut mask, mut k) = match self.best_entry(mask) {
            Some(k) => (mask, k),
            None => return order,
        };
        while mask != 0 {
            let e = &self.fronts[mask][k];
            order.push(e.last);
            mask ^= 1 << e.last;
            k = e.prev;
        }
        order.reverse();
        order
    }
}

fn insert_nondominated<T: Scalar>(front: &mut Vec<Entry<T>>, cand: Entry<T>) {
    let dominates = |a: &Entry<T>, b: &Entry<T>| a.completion <= b.completion && a.value <= b.value;
    if front.iter().any(|e| dominates(e, &cand)) {
        return;
    }
    front.retain(|e| !dominates(&cand, e));
    front.push(cand);
}

/// Probe log of a binary search over a sorted candidate list.
#[derive(Debug, Clone, Default)]
pub struct ProbeLog {
    pub probes: Vec<(usize, bool)>,
}

impl ProbeLog {
    /// Whether the recorded outcomes are consistent with a feasibility
    /// predicate that is monotone in the candidate index.
    pub fn is_monotone(&self) -> bool {
        let lowest_feasible = self.probes.iter().filter(|p| p.1).map(|p| p.0).min();
        let highest_infeasible = self.probes.iter().filter(|p| !p.1).map(|p| p.0).max();
        match (lowest_feasible, highest_infeasible) {
            (Some(f), Some(i)) => i < f,
            _ => true,
        }
    }
}

/// Smallest index whose probe succeeds, assuming monotone feasibility.
/// The last candidate is assumed feasible only if its probe says so.
pub(crate) fn min_feasible<T, R>(
    candidates: &[T],
    log: &mut ProbeLog,
    mut probe: impl FnMut(&T) -> Option<R>,
) -> Option<(usize, R)> {
    let (mut lo, mut hi) = (0usize, candidates.len());
    let mut found: Option<(usize, R)> = None;
    while lo < hi {
        let mid = lo + (hi - lo) / 2;
        match probe(&candidates[mid]) {
            Some(r) => {
                log.probes.push((mid, true));
                found = Some((mid, r));
                hi = mid;
            }
            None => {
                log.probes.push((mid, false));
                lo = mid + 1;
            }
        }
    }
    found
}

/// Every value the makespan of a left-shifted schedule can take for the
/// given roles when all branch costs equal `p`.
///
/// The last arrival at the sink comes from a chain of back-to-back tasks on
/// one processor headed by a task starting at its release.
pub(crate) fn canonical_candidates<T: Scalar>(
    inst: &Instance<T>,
    p: &T,
    m_src: usize,
    m_sink: usize,
) -> Vec<T> {
    let n = inst.num_tasks();
    let src_finish = inst.source_finish(m_src);
    let sink = inst.sink_time(m_sink);
    let mut out = vec![src_finish.clone() + sink.clone()];
    for m in 0..inst.num_procs() {
        let q = p.clone() / inst.speeds[m].clone();
        let mut heads: Vec<T> = (0..n).map(|j| inst.release(j, m, m_src)).collect();
        sort_dedup(&mut heads);
        let mut tails: Vec<T> = (0..n).map(|j| inst.out_delay(j, m, m_sink)).collect();
        sort_dedup(&mut tails);
        for head in &heads {
            for k in 1..=n {
                let finish = head.clone() + q.clone() * T::of_usize(k);
                for tail in &tails {
                    out.push(finish.clone() + tail.clone() + sink.clone());
                }
            }
        }
    }
    sort_dedup(&mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Rational;

    fn q(n: i64) -> Rational {
        Rational::from_integer(n.into())
    }

    fn brute(jobs: &[Job<Rational>], mask: usize) -> Option<Rational> {
        fn rec(
            jobs: &[Job<Rational>],
            left: usize,
            t: Rational,
            acc: Option<Rational>,
        ) -> Option<Rational> {
            if left == 0 {
                return acc;
            }
            let mut best: Option<Rational> = None;
            for j in 0..jobs.len() {
                if left & (1 << j) == 0 {
                    continue;
                }
                let c = max_of(t.clone(), jobs[j].release.clone()) + jobs[j].duration.clone();
                let v = c.clone() + jobs[j].tail.clone();
                let acc = Some(match &acc {
                    Some(a) => max_of(a.clone(), v),
                    None => v,
                });
                let r = rec(jobs, left ^ (1 << j), c, acc);
                if best.is_none() || r < best {
                    best = r;
                }
            }
            best
        }
        rec(jobs, mask, q(0), None)
    }

    #[test]
    fn fronts_match_permutation_search() {
        let jobs: Vec<Job<Rational>> = [(0, 3, 5), (2, 1, 9), (1, 2, 0), (6, 2, 1), (0, 1, 4)]
            .iter()
            .map(|&(r, d, t)| Job {
                release: q(r),
                duration: q(d),
                tail: q(t),
            })
            .collect();
        let mut budget = u64::MAX;
        let fronts = SubsetFronts::build(&jobs, &mut budget).unwrap();
        for mask in 0..(1 << jobs.len()) {
            assert_eq!(fronts.best(mask), brute(&jobs, mask), "mask {mask:b}");
            let order = fronts.order(mask);
            assert_eq!(order.len(), (mask as u32).count_ones() as usize);
        }
    }

    #[test]
    fn binary_search_finds_first_feasible() {
        let cands: Vec<i32> = (0..50).collect();
        let mut log = ProbeLog::default();
        let (idx, _) = min_feasible(&cands, &mut log, |&c| (c >= 17).then_some(())).unwrap();
        assert_eq!(idx, 17);
        assert!(log.is_monotone());
        assert!(min_feasible(&cands, &mut ProbeLog::default(), |_| None::<()>).is_none());
    }
}
