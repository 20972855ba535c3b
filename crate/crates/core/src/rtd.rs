//! Independent tasks with release times and deadlines.
//!
//! Under a bound `T` on the makespan, a remotely placed branch task behaves
//! like an independent task released when the source output arrives and due
//! when its output must leave for the sink. Tasks placed with the source or
//! the sink have their communication zeroed, which this view does not
//! encode; callers add those tasks back themselves.

use std::collections::{HashMap, HashSet};

use crate::error::{Error, Result};
use crate::model::Instance;
use crate::scalar::{cmp, max_of, Scalar};
use crate::search::{Job, SubsetFronts};

#[derive(Debug, Clone, PartialEq)]
pub struct RtdTask<T> {
    pub id: String,
    pub p: T,
    pub r: T,
    pub d: T,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RtdInstance<T> {
    pub tasks: Vec<RtdTask<T>>,
    pub speeds: Vec<T>,
}

impl<T: Scalar> RtdInstance<T> {
    pub fn check(&self) -> Result<()> {
        if self.speeds.is_empty() {
            return Err(Error::invalid("speeds", "at least one machine is required"));
        }
        for (m, s) in self.speeds.iter().enumerate() {
            if !s.is_positive() {
                return Err(Error::invalid(format!("speeds[{m}]"), "speed must be > 0"));
            }
        }
        let mut seen = HashSet::new();
        for (j, t) in self.tasks.iter().enumerate() {
            if !t.p.is_positive() {
                return Err(Error::invalid(format!("tasks[{j}].p"), "cost must be > 0"));
            }
            if !seen.insert(t.id.as_str()) {
                return Err(Error::invalid(
                    format!("tasks[{j}].id"),
                    format!("duplicate id {:?}", t.id),
                ));
            }
        }
        Ok(())
    }
}

/// Minimum-`L_max` schedule of an [`RtdInstance`].
#[derive(Debug, Clone, PartialEq)]
pub struct RtdReport<T> {
    pub assignment: Vec<usize>,
    pub orders: Vec<Vec<usize>>,
    pub starts: Vec<T>,
    pub lmax: T,
}

/// Release/deadline image of the branch tasks for makespan bound `t_max`.
pub fn forkjoin_to_rtd<T: Scalar>(
    inst: &Instance<T>,
    t_max: &T,
    m_src: usize,
    m_sink: usize,
) -> Result<RtdInstance<T>> {
    if !t_max.is_positive() {
        return Err(Error::precondition("makespan bound must be > 0"));
    }
    for m in [m_src, m_sink] {
        if m >= inst.num_procs() {
            return Err(Error::UnknownProcessor(m));
        }
    }
    let src_finish = inst.source_finish(m_src);
    let due = t_max.clone() - inst.sink_time(m_sink);
    Ok(RtdInstance {
        tasks: inst
            .tasks
            .iter()
            .map(|t| RtdTask {
                id: t.id.clone(),
                p: t.p.clone(),
                r: src_finish.clone() + t.gin.clone(),
                d: due.clone() - t.gout.clone(),
            })
            .collect(),
        speeds: inst.speeds.clone(),
    })
}

/// Release/deadline window of one task.
pub type Window<T> = (T, T);

struct Feasibility<'a, T> {
    windows: &'a [Window<T>],
    q: T,
    // failed states: subset of scheduled tasks -> earliest completion that failed
    failed: HashMap<u128, T>,
    order: Vec<usize>,
    by_deadline: Vec<usize>,
}

impl<T: Scalar> Feasibility<'_, T> {
    fn dfs(&mut self, done: u128, time: T) -> bool {
        let n = self.windows.len();
        if self.order.len() == n {
            return true;
        }
        if let Some(t) = self.failed.get(&done) {
            if time >= *t {
                return false;
            }
        }
        // every remaining task must still fit on its own
        let mut remaining = 0usize;
        let mut latest = None::<T>;
        let mut earliest = None::<T>;
        for j in 0..n {
            if done & (1 << j) != 0 {
                continue;
            }
            let (r, d) = &self.windows[j];
            if max_of(time.clone(), r.clone()) + self.q.clone() > *d {
                self.failed.insert(done, time);
                return false;
            }
            remaining += 1;
            latest = Some(match latest {
                Some(l) => max_of(l, d.clone()),
                None => d.clone(),
            });
            earliest = Some(match earliest {
                Some(e) if e <= *r => e,
                _ => r.clone(),
            });
        }
        let start = max_of(time.clone(), earliest.expect("remaining tasks"));
        if start + self.q.clone() * T::of_usize(remaining) > latest.expect("remaining tasks") {
            self.failed.insert(done, time);
            return false;
        }
        for k in 0..n {
            let j = self.by_deadline[k];
            if done & (1 << j) != 0 {
                continue;
            }
            let finish = max_of(time.clone(), self.windows[j].0.clone()) + self.q.clone();
            self.order.push(j);
            if self.dfs(done | (1 << j), finish) {
                return true;
            }
            self.order.pop();
        }
        self.failed.insert(done, time);
        false
    }
}

/// Non-preemptive order of equal-cost tasks on one machine of speed `s`
/// meeting every window, if one exists.
///
/// Depth-first search over orders in deadline order. A set of scheduled
/// tasks is only revisited with a strictly earlier completion time.
pub fn feasible_equal_length<T: Scalar>(windows: &[Window<T>], p: &T, s: &T) -> Option<Vec<usize>> {
    assert!(windows.len() <= 128, "at most 128 tasks");
    let mut by_deadline: Vec<usize> = (0..windows.len()).collect();
    by_deadline.sort_by(|&a, &b| {
        cmp(&windows[a].1, &windows[b].1).then(cmp(&windows[a].0, &windows[b].0))
    });
    let mut search = Feasibility {
        windows,
        q: p.clone() / s.clone(),
        failed: HashMap::new(),
        order: Vec::with_capacity(windows.len()),
        by_deadline,
    };
    search.dfs(0, T::zero()).then_some(search.order)
}

/// Maximum-cardinality subset of equal-cost tasks schedulable on one
/// machine, with a witness order. Among maximum subsets the one that is
/// lexicographically smallest by task index is returned.
pub fn max_throughput_equal_length<T: Scalar>(
    windows: &[Window<T>],
    p: &T,
    s: &T,
) -> (Vec<usize>, Vec<usize>) {
    let q = p.clone() / s.clone();
    let viable: Vec<bool> = windows
        .iter()
        .map(|(r, d)| r.clone() + q.clone() <= *d)
        .collect();
    let mut best: (Vec<usize>, Vec<usize>) = (Vec::new(), Vec::new());
    let mut chosen = Vec::new();
    throughput_rec(windows, p, s, &viable, 0, &mut chosen, &mut best);
    best
}

fn throughput_rec<T: Scalar>(
    windows: &[Window<T>],
    p: &T,
    s: &T,
    viable: &[bool],
    next: usize,
    chosen: &mut Vec<usize>,
    best: &mut (Vec<usize>, Vec<usize>),
) {
    let remaining = viable[next..].iter().filter(|&&v| v).count();
    if chosen.len() + remaining <= best.0.len() {
        return;
    }
    if next == windows.len() {
        let sub: Vec<Window<T>> = chosen.iter().map(|&j| windows[j].clone()).collect();
        if let Some(order) = feasible_equal_length(&sub, p, s) {
            *best = (
                chosen.clone(),
                order.into_iter().map(|k| chosen[k]).collect(),
            );
        }
        return;
    }
    if viable[next] {
        chosen.push(next);
        let sub: Vec<Window<T>> = chosen.iter().map(|&j| windows[j].clone()).collect();
        // any superset of an infeasible set is infeasible
        if feasible_equal_length(&sub, p, s).is_some() {
            throughput_rec(windows, p, s, viable, next + 1, chosen, best);
        }
        chosen.pop();
    }
    throughput_rec(windows, p, s, viable, next + 1, chosen, best);
}

/// Exact minimum maximum lateness on the related machines, by exhaustive
/// search. Fails when the instance has more than `max_tasks` tasks.
pub fn rtd_lmax_solve<T: Scalar>(rtd: &RtdInstance<T>, max_tasks: usize) -> Result<RtdReport<T>> {
    rtd.check()?;
    let n = rtd.tasks.len();
    if n == 0 {
        return Err(Error::precondition(
            "maximum lateness is undefined without tasks",
        ));
    }
    if n > max_tasks || n > 20 {
        return Err(Error::LimitExceeded(format!(
            "{n} tasks exceed the limit of {}",
            max_tasks.min(20)
        )));
    }
    let size = 1usize << n;
    // one set of fronts per distinct speed
    let mut speed_class: Vec<usize> = Vec::new();
    let mut fronts: Vec<SubsetFronts<T>> = Vec::new();
    let mut class_speeds: Vec<T> = Vec::new();
    let mut budget = u64::MAX;
    for s in &rtd.speeds {
        if let Some(c) = class_speeds.iter().position(|x| x == s) {
            speed_class.push(c);
            continue;
        }
        let jobs: Vec<Job<T>> = rtd
            .tasks
            .iter()
            .map(|t| Job {
                release: t.r.clone(),
                duration: t.p.clone() / s.clone(),
                tail: -t.d.clone(),
            })
            .collect();
        fronts.push(SubsetFronts::build(&jobs, &mut budget).expect("unbounded budget"));
        class_speeds.push(s.clone());
        speed_class.push(class_speeds.len() - 1);
    }

    // best[k][mask]: minimum lateness of `mask` on machines 0..=k
    let num_m = rtd.speeds.len();
    let mut best: Vec<Vec<Option<T>>> = Vec::with_capacity(num_m);
    let mut choice: Vec<Vec<usize>> = Vec::with_capacity(num_m);
    for k in 0..num_m {
        let f = &fronts[speed_class[k]];
        let mut row: Vec<Option<T>> = vec![None; size];
        let mut pick = vec![0usize; size];
        for mask in 0..size {
            if k == 0 {
                row[mask] = f.best(mask);
                pick[mask] = mask;
                continue;
            }
            let mut sub = mask;
            let mut found: Option<(T, usize)> = None;
            loop {
                let here = f.best(sub);
                let rest = best[k - 1][mask ^ sub].clone();
                let value = match (here, rest) {
                    (Some(a), Some(b)) => Some(max_of(a, b)),
                    (a, b) => a.or(b),
                };
                let better = match (&value, &found) {
                    (Some(v), Some((f, _))) => v < f,
                    (Some(_), None) => true,
                    (None, _) => false,
                };
                if better {
                    let v = value.expect("checked");
                    found = Some((v, sub));
                }
                if sub == 0 {
                    break;
                }
                sub = (sub - 1) & mask;
            }
            if let Some((v, s)) = found {
                row[mask] = Some(v);
                pick[mask] = s;
            }
        }
        best.push(row);
        choice.push(pick);
    }

    let full = size - 1;
    let lmax = best[num_m - 1][full].clone().expect("non-empty task set");
    let mut assignment = vec![0usize; n];
    let mut orders = vec![Vec::new(); num_m];
    let mut starts = vec![T::zero(); n];
    let mut mask = full;
    for k in (0..num_m).rev() {
        let sub = choice[k][mask];
        let order = fronts[speed_class[k]].order(sub);
        let mut time = T::zero();
        for &j in &order {
            let start = max_of(time, rtd.tasks[j].r.clone());
            time = start.clone() + rtd.tasks[j].p.clone() / rtd.speeds[k].clone();
            starts[j] = start;
            assignment[j] = k;
        }
        orders[k] = order;
        mask ^= sub;
    }
    Ok(RtdReport {
        assignment,
        orders,
        starts,
        lmax,
    })
}
