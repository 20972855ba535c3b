//! Exhaustive exact solver for small instances.
//!
//! For fixed source and sink processors, processors interact only through
//! the sink: the makespan is the largest arrival over processors. The
//! solver therefore computes, per processor and per task subset, the best
//! arrival over all execution orders (Pareto fronts of completion time and
//! latest arrival), and then the best split of the task set over the
//! processors. Interchangeable processors share their fronts.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::model::{evaluate, Instance, Placement};
use crate::report::{Algorithm, Guarantee, SolveReport};
use crate::scalar::{max_of, Scalar};
use crate::search::{Job, SubsetFronts};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    pub max_tasks: usize,
    /// Bound on the number of expanded search states.
    pub max_states: u64,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_tasks: 10,
            max_states: 10_000_000,
        }
    }
}

/// Minimum makespan over every role choice, assignment and order.
pub fn exact_solve<T: Scalar>(inst: &Instance<T>, limits: Limits) -> Result<SolveReport<T>> {
    exact_solve_with_roles(inst, limits, &inst.role_pairs())
}

/// Like [`exact_solve`] with the `(m_src, m_sink)` choices restricted.
pub fn exact_solve_with_roles<T: Scalar>(
    inst: &Instance<T>,
    limits: Limits,
    roles: &[(usize, usize)],
) -> Result<SolveReport<T>> {
    let n = inst.num_tasks();
    if n > limits.max_tasks || n > 30 {
        return Err(Error::LimitExceeded(format!(
            "{n} branch tasks exceed the oracle limit of {}",
            limits.max_tasks.min(30)
        )));
    }
    if roles.is_empty() {
        return Err(Error::precondition("no source/sink processor choice given"));
    }
    let mut budget = limits.max_states;
    let mut best: Option<(T, Placement)> = None;
    for &(m_src, m_sink) in roles {
        if m_src >= inst.num_procs() || m_sink >= inst.num_procs() {
            return Err(Error::UnknownProcessor(m_src.max(m_sink)));
        }
        let (value, placement) = solve_roles(inst, m_src, m_sink, &mut budget)?;
        if best.as_ref().is_none_or(|(b, _)| value < *b) {
            best = Some((value, placement));
        }
    }
    let (value, placement) = best.expect("at least one role pair");
    let (schedule, len) = evaluate(inst, &placement)?;
    if len != value {
        return Err(Error::Internal(format!(
            "oracle value {value} but schedule length {len}"
        )));
    }
    Ok(
        SolveReport::new(inst, schedule, Algorithm::Oracle, Guarantee::Exact)
            .note("states_left", budget)
            .note("roles", roles.len()),
    )
}

fn exhausted(limit: u64) -> Error {
    Error::LimitExceeded(format!("oracle expanded more than {limit} states"))
}

fn solve_roles<T: Scalar>(
    inst: &Instance<T>,
    m_src: usize,
    m_sink: usize,
    budget: &mut u64,
) -> Result<(T, Placement)> {
    let n = inst.num_tasks();
    let num_procs = inst.num_procs();
    let size = 1usize << n;
    let limit = *budget;

    // processors with identical job data share fronts
    let mut cache: HashMap<(usize, bool, bool), usize> = HashMap::new();
    let mut fronts: Vec<SubsetFronts<T>> = Vec::new();
    let mut proc_front = Vec::with_capacity(num_procs);
    for m in 0..num_procs {
        let rep = (0..=m)
            .find(|&k| inst.interchangeable(k, m))
            .expect("m is interchangeable with itself");
        let key = if m == m_src || m == m_sink {
            (m, true, true)
        } else {
            (rep, inst.co_located(m, m_src), inst.co_located(m, m_sink))
        };
        let idx = match cache.get(&key) {
            Some(&i) => i,
            None => {
                let jobs: Vec<Job<T>> = (0..n)
                    .map(|j| Job {
                        release: inst.release(j, m, m_src),
                        duration: inst.exec_time(j, m),
                        tail: inst.out_delay(j, m, m_sink),
                    })
                    .collect();
                fronts.push(SubsetFronts::build(&jobs, budget).ok_or_else(|| exhausted(limit))?);
                cache.insert(key, fronts.len() - 1);
                fronts.len() - 1
            }
        };
        proc_front.push(idx);
    }

    // arrival[k][mask]: latest arrival at the sink when `mask` runs on processors 0..=k
    let mut table: Vec<Vec<Option<T>>> = Vec::with_capacity(num_procs);
    let mut pick: Vec<Vec<usize>> = Vec::with_capacity(num_procs);
    for k in 0..num_procs {
        let f = &fronts[proc_front[k]];
        let mut row: Vec<Option<T>> = vec![None; size];
        let mut choice = vec![0usize; size];
        if k == 0 {
            for (mask, slot) in row.iter_mut().enumerate() {
                *slot = f.best(mask);
                choice[mask] = mask;
            }
        } else {
            let prev = &table[k - 1];
            for mask in 0..size {
                let mut sub = mask;
                let mut found: Option<(Option<T>, usize)> = None;
                loop {
                    *budget = budget.checked_sub(1).ok_or_else(|| exhausted(limit))?;
                    let value = match (f.best(sub), prev[mask ^ sub].clone()) {
                        (Some(a), Some(b)) => Some(max_of(a, b)),
                        (a, b) => a.or(b),
                    };
                    let better = match &found {
                        None => true,
                        Some((cur, _)) => match (&value, cur) {
                            (None, Some(_)) => true,
                            (Some(v), Some(c)) => v < c,
                            _ => false,
                        },
                    };
                    if better {
                        found = Some((value, sub));
                    }
                    if sub == 0 {
                        break;
                    }
                    sub = (sub - 1) & mask;
                }
                let (value, sub) = found.expect("loop runs at least once");
                row[mask] = value;
                choice[mask] = sub;
            }
        }
        table.push(row);
        pick.push(choice);
    }

    let full = size - 1;
    let src_finish = inst.source_finish(m_src);
    let arrival = match table[num_procs - 1][full].clone() {
        Some(a) => max_of(a, src_finish),
        None => src_finish,
    };
    let value = arrival + inst.sink_time(m_sink);

    let mut placement = Placement::empty(m_src, m_sink, num_procs);
    let mut mask = full;
    for k in (0..num_procs).rev() {
        let sub = pick[k][mask];
        placement.orders[k] = fronts[proc_front[k]].order(sub);
        mask ^= sub;
    }
    Ok((value, placement))
}
