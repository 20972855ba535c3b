//! Exact and bounded algorithms for structured instances with equal branch
//! costs: two processors, many processors, equal incoming communication and
//! two processor groups.

mod pools;

use crate::error::{Error, Result};
use crate::matching::{grid_candidates, grid_feasible, max_matching, BipartiteGraph};
use crate::model::{canonicalize, evaluate, Instance, Placement};
use crate::report::{Algorithm, Guarantee, SolveReport};
use crate::scalar::{cmp, Scalar};
use crate::search::{canonical_candidates, min_feasible, ProbeLog};

use pools::{split_case, throughput_case};

/// How the processors relate to the source and sink domains for one role
/// choice, when it is covered by an exact engine.
enum Layout {
    Throughput {
        local: Vec<usize>,
        remote: Option<usize>,
    },
    Split {
        near_src: Vec<usize>,
        near_sink: Vec<usize>,
    },
}

fn layout<T: Scalar>(
    inst: &Instance<T>,
    procs: &[usize],
    m_src: usize,
    m_sink: usize,
) -> Option<Layout> {
    if inst.co_located(m_src, m_sink) {
        let (local, rest): (Vec<usize>, Vec<usize>) =
            procs.iter().partition(|&&m| inst.co_located(m, m_src));
        (rest.len() <= 1).then(|| Layout::Throughput {
            local,
            remote: rest.first().copied(),
        })
    } else {
        let near_src: Vec<usize> = procs
            .iter()
            .copied()
            .filter(|&m| inst.co_located(m, m_src))
            .collect();
        let near_sink: Vec<usize> = procs
            .iter()
            .copied()
            .filter(|&m| inst.co_located(m, m_sink))
            .collect();
        (near_src.len() + near_sink.len() == procs.len()).then_some(Layout::Split {
            near_src,
            near_sink,
        })
    }
}

fn run_layout<T: Scalar>(
    inst: &Instance<T>,
    p: &T,
    roles: (usize, usize),
    t_max: &T,
    tasks: &[usize],
    lay: &Layout,
) -> Option<Placement> {
    match lay {
        Layout::Throughput { local, remote } => {
            throughput_case(inst, p, roles, t_max, tasks, local, *remote)
        }
        Layout::Split {
            near_src,
            near_sink,
        } => split_case(inst, p, roles, t_max, tasks, near_src, near_sink),
    }
}

/// Best placement for fixed roles: the first candidate bound accepted by
/// `probe`, searched by bisection.
fn search_roles<T: Scalar>(
    p: &T,
    (m_src, m_sink): (usize, usize),
    candidates: &[T],
    log: &mut ProbeLog,
    probe: impl FnMut(&T) -> Option<Placement>,
) -> Result<Placement> {
    min_feasible(candidates, log, probe)
        .map(|(_, pl)| pl)
        .ok_or_else(|| {
            Error::Internal(format!(
                "no candidate bound accepted for roles ({m_src}, {m_sink}) with cost {p}"
            ))
        })
}

/// Keeps the placement of smallest makespan, first one on ties.
fn keep_best<T: Scalar>(
    inst: &Instance<T>,
    best: &mut Option<(T, Placement)>,
    placement: Placement,
) -> Result<()> {
    let (_, len) = evaluate(inst, &placement)?;
    if best.as_ref().is_none_or(|(b, _)| len < *b) {
        *best = Some((len, placement));
    }
    Ok(())
}

fn finish<T: Scalar>(
    inst: &Instance<T>,
    best: Option<(T, Placement)>,
    algorithm: Algorithm,
    guarantee: Guarantee<T>,
) -> Result<SolveReport<T>> {
    let (_, placement) = best.ok_or_else(|| Error::Internal("no role choice evaluated".into()))?;
    let schedule = canonicalize(inst, &placement)?;
    Ok(SolveReport::new(inst, schedule, algorithm, guarantee))
}

fn require_two_plain<T: Scalar>(inst: &Instance<T>) -> Result<T> {
    if inst.num_procs() != 2 {
        return Err(Error::precondition(format!(
            "exactly 2 processors required, got {}",
            inst.num_procs()
        )));
    }
    if inst.co_located(0, 1) {
        return Err(Error::precondition(
            "the two processors must not share a group",
        ));
    }
    inst.require_common_cost()
}

fn two_proc_exact<T: Scalar>(
    inst: &Instance<T>,
    p: &T,
    roles: (usize, usize),
    log: &mut ProbeLog,
) -> Result<Placement> {
    let procs: Vec<usize> = (0..inst.num_procs()).collect();
    let tasks: Vec<usize> = (0..inst.num_tasks()).collect();
    let lay =
        layout(inst, &procs, roles.0, roles.1).expect("two processors always fit an exact layout");
    let candidates = canonical_candidates(inst, p, roles.0, roles.1);
    search_roles(p, roles, &candidates, log, |t| {
        run_layout(inst, p, roles, t, &tasks, &lay)
    })
}

/// Two processors with source and sink on `proc`: the other processor
/// takes a maximum-throughput set, the rest runs locally.
pub fn p2_sched1<T: Scalar>(inst: &Instance<T>, proc: usize) -> Result<SolveReport<T>> {
    let p = require_two_plain(inst)?;
    if proc >= 2 {
        return Err(Error::UnknownProcessor(proc));
    }
    let mut log = ProbeLog::default();
    let placement = two_proc_exact(inst, &p, (proc, proc), &mut log)?;
    Ok(finish(
        inst,
        Some((p.clone(), placement)),
        Algorithm::P2Sched1,
        Guarantee::Exact,
    )?
    .note("probes", log.probes.len()))
}

/// Two processors with the source on `src` and the sink on the other one.
pub fn p2_sched2<T: Scalar>(inst: &Instance<T>, src: usize, sink: usize) -> Result<SolveReport<T>> {
    let p = require_two_plain(inst)?;
    if src >= 2 || sink >= 2 {
        return Err(Error::UnknownProcessor(src.max(sink)));
    }
    if src == sink {
        return Err(Error::precondition(
            "source and sink must be on different processors",
        ));
    }
    let mut log = ProbeLog::default();
    let placement = two_proc_exact(inst, &p, (src, sink), &mut log)?;
    Ok(finish(
        inst,
        Some((p.clone(), placement)),
        Algorithm::P2Sched2,
        Guarantee::Exact,
    )?
    .note("probes", log.probes.len()))
}

/// Optimal schedule on two processors with equal branch costs.
pub fn solve_q2<T: Scalar>(inst: &Instance<T>) -> Result<SolveReport<T>> {
    let p = require_two_plain(inst)?;
    let mut best = None;
    let mut probes = 0;
    for roles in [(0, 0), (1, 1), (0, 1), (1, 0)] {
        let mut log = ProbeLog::default();
        let placement = two_proc_exact(inst, &p, roles, &mut log)?;
        probes += log.probes.len();
        keep_best(inst, &mut best, placement)?;
    }
    Ok(finish(inst, best, Algorithm::Q2, Guarantee::Exact)?.note("probes", probes))
}

/// Appends copies of the fastest processor until it is available at least
/// `|J| + 2` times.
pub fn pad_unlimited<T: Scalar>(inst: &Instance<T>) -> Instance<T> {
    let fast = inst.max_speed();
    let have = inst.speeds.iter().filter(|s| **s == fast).count();
    let mut out = inst.clone();
    let need = inst.num_tasks() + 2;
    for _ in have..need {
        out.speeds.push(fast.clone());
    }
    out
}

/// Many processors: tasks that cannot meet the bound alone on a fast
/// processor stay with the source and sink, the others get a processor of
/// their own.
pub fn solve_q_inf<T: Scalar>(inst: &Instance<T>) -> Result<SolveReport<T>> {
    if inst.groups.is_some() {
        return Err(Error::precondition(
            "processor groups are not supported here",
        ));
    }
    let p = inst.require_common_cost()?;
    let n = inst.num_tasks();
    if inst.num_procs() < n + 2 {
        return Err(Error::precondition(format!(
            "at least {} processors required for {n} branch tasks, got {}",
            n + 2,
            inst.num_procs()
        )));
    }
    let mut best = None;
    let mut probes = 0;
    for (m_src, m_sink) in inst.role_pairs() {
        let roles = (m_src, m_sink);
        let role_procs: Vec<usize> = if m_src == m_sink {
            vec![m_src]
        } else {
            vec![m_src, m_sink]
        };
        let lay =
            layout(inst, &role_procs, m_src, m_sink).expect("role processors fit an exact layout");
        // the fastest free processors, one per task at most
        let free: Vec<usize> = inst
            .procs_by_speed()
            .into_iter()
            .filter(|m| !role_procs.contains(m))
            .take(n)
            .collect();
        let candidates = canonical_candidates(inst, &p, m_src, m_sink);
        let mut log = ProbeLog::default();
        let placement = search_roles(&p, roles, &candidates, &mut log, |t| {
            q_inf_probe(inst, &p, roles, t, &free, &lay)
        })?;
        probes += log.probes.len();
        keep_best(inst, &mut best, placement)?;
    }
    Ok(finish(inst, best, Algorithm::QInf, Guarantee::Exact)?.note("probes", probes))
}

fn q_inf_probe<T: Scalar>(
    inst: &Instance<T>,
    p: &T,
    (m_src, m_sink): (usize, usize),
    t_max: &T,
    free: &[usize],
    lay: &Layout,
) -> Option<Placement> {
    let due = t_max.clone() - inst.sink_time(m_sink);
    let solo = |j: usize, m: usize| {
        inst.release(j, m, m_src) + inst.exec_time(j, m) + inst.out_delay(j, m, m_sink)
    };
    let n = inst.num_tasks();
    let mut graph = BipartiteGraph::new(n, free.len());
    for j in 0..n {
        for (v, &m) in free.iter().enumerate() {
            if solo(j, m) <= due {
                graph.add_edge(j, v);
            }
        }
    }
    let matching = max_matching(&graph);
    let local: Vec<usize> = (0..n).filter(|&j| matching.left[j].is_none()).collect();
    let mut placement = run_layout(inst, p, (m_src, m_sink), t_max, &local, lay)?;
    for (j, slot) in matching.left.iter().enumerate() {
        if let Some(v) = slot {
            placement.orders[free[*v]].push(j);
        }
    }
    Some(placement)
}

/// Equal branch costs and equal incoming communication: for every role
/// choice and every `k`, the `k` tasks with the largest outgoing
/// communication go to the sink processor and the rest are list-scheduled
/// by earliest arrival at the sink.
pub fn solve_partial_equal<T: Scalar>(inst: &Instance<T>) -> Result<SolveReport<T>> {
    inst.require_common_cost()?;
    if let Some(first) = inst.tasks.first() {
        if inst.tasks.iter().any(|t| t.gin != first.gin) {
            return Err(Error::precondition(
                "all incoming communications must be equal",
            ));
        }
    }
    let n = inst.num_tasks();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| cmp(&inst.tasks[b].gout, &inst.tasks[a].gout).then(a.cmp(&b)));
    let mut best = None;
    for (m_src, m_sink) in inst.role_pairs() {
        for k in 0..=n {
            let mut placement = Placement::empty(m_src, m_sink, inst.num_procs());
            let mut free: Vec<T> = vec![inst.source_finish(m_src); inst.num_procs()];
            for (pos, &j) in order.iter().enumerate() {
                let finish_on = |m: usize| {
                    let start = crate::scalar::max_of(free[m].clone(), inst.release(j, m, m_src));
                    start + inst.exec_time(j, m)
                };
                let m = if pos < k {
                    m_sink
                } else {
                    (0..inst.num_procs())
                        .map(|m| (m, finish_on(m) + inst.out_delay(j, m, m_sink)))
                        .min_by(|a, b| {
                            cmp(&a.1, &b.1)
                                .then(a.0.cmp(&b.0))
                                .then(cmp(&inst.speeds[b.0], &inst.speeds[a.0]))
                        })
                        .map(|(m, _)| m)
                        .expect("at least one processor")
                };
                free[m] = finish_on(m);
                placement.orders[m].push(j);
            }
            keep_best(inst, &mut best, placement)?;
        }
    }
    finish(inst, best, Algorithm::PartialEqual, Guarantee::Exact)
}

/// Two processor groups with free communication inside a group.
///
/// Role choices whose processors split cleanly into a source side and a
/// sink side, or that leave at most one processor outside the shared
/// group, are solved exactly; the others fall back to the slot-matching
/// bound, and the guarantee weakens to the additive one.
pub fn solve_grouped<T: Scalar>(inst: &Instance<T>) -> Result<SolveReport<T>> {
    let groups = inst
        .groups
        .as_ref()
        .ok_or_else(|| Error::precondition("a group label per processor is required"))?;
    let mut labels = groups.clone();
    labels.sort_unstable();
    labels.dedup();
    if labels.len() > 2 {
        return Err(Error::precondition(format!(
            "at most 2 groups supported, got {}",
            labels.len()
        )));
    }
    let p = inst.require_common_cost()?;
    let procs: Vec<usize> = (0..inst.num_procs()).collect();
    let tasks: Vec<usize> = (0..inst.num_tasks()).collect();
    let mut best = None;
    let mut exact = true;
    let mut probes = 0;
    for (m_src, m_sink) in inst.role_pairs() {
        let roles = (m_src, m_sink);
        let mut log = ProbeLog::default();
        let placement = match layout(inst, &procs, m_src, m_sink) {
            Some(lay) => {
                let candidates = canonical_candidates(inst, &p, m_src, m_sink);
                search_roles(&p, roles, &candidates, &mut log, |t| {
                    run_layout(inst, &p, roles, t, &tasks, &lay)
                })?
            }
            None => {
                exact = false;
                let candidates = grid_candidates(inst, &p, m_src, m_sink);
                let mut failure = None;
                let found = search_roles(&p, roles, &candidates, &mut log, |t| {
                    grid_feasible(inst, t, m_src, m_sink).unwrap_or_else(|e| {
                        failure = Some(e);
                        None
                    })
                });
                if let Some(e) = failure {
                    return Err(e);
                }
                found?
            }
        };
        probes += log.probes.len();
        keep_best(inst, &mut best, placement)?;
    }
    let guarantee = if exact {
        Guarantee::Exact
    } else {
        Guarantee::Additive(p / inst.min_speed())
    };
    Ok(finish(inst, best, Algorithm::Grouped, guarantee)?.note("probes", probes))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{validate, BranchTask};
    use crate::oracle::{exact_solve, exact_solve_with_roles, Limits};
    use crate::Rational;

    fn q(n: i64) -> Rational {
        Rational::from_integer(n.into())
    }

    fn inst(speeds: &[i64], p: i64, comms: &[(i64, i64)]) -> Instance<Rational> {
        let tasks = comms
            .iter()
            .enumerate()
            .map(|(j, &(gi, go))| BranchTask::new(format!("t{j}"), q(p), q(gi), q(go)))
            .collect();
        Instance::new(tasks, q(1), q(1), speeds.iter().map(|&s| q(s)).collect()).unwrap()
    }

    #[test]
    fn huge_communication_keeps_everything_local() {
        let i = inst(&[1, 1], 2, &[(100, 100); 3]);
        let r = p2_sched1(&i, 0).unwrap();
        assert_eq!(r.makespan, q(1 + 3 * 2 + 1));
        assert!(validate(&i, &r.schedule).is_empty());
    }

    #[test]
    fn fixed_role_variants_match_oracle() {
        let i = inst(&[1, 1], 1, &[(1, 3), (1, 2), (1, 1)]);
        let r = p2_sched2(&i, 0, 1).unwrap();
        let o = exact_solve_with_roles(&i, Limits::default(), &[(0, 1)]).unwrap();
        assert_eq!(r.makespan, o.makespan);
        let i = inst(&[1, 2], 2, &[(1, 0), (0, 4), (3, 1), (2, 2)]);
        for a in 0..2 {
            let r = p2_sched1(&i, a).unwrap();
            let o = exact_solve_with_roles(&i, Limits::default(), &[(a, a)]).unwrap();
            assert_eq!(r.makespan, o.makespan, "roles ({a}, {a})");
        }
    }

    #[test]
    fn q2_without_tasks() {
        let mut i = inst(&[1, 2], 1, &[]);
        i.p_src = q(2);
        i.p_sink = q(2);
        assert_eq!(solve_q2(&i).unwrap().makespan, q(2));
    }

    #[test]
    fn q2_rejects_other_shapes() {
        assert!(matches!(
            solve_q2(&inst(&[1, 1, 1], 1, &[])),
            Err(Error::Precondition(_))
        ));
        let mut i = inst(&[1, 1], 1, &[(0, 0), (0, 0)]);
        i.tasks[1].p = q(2);
        assert!(matches!(solve_q2(&i), Err(Error::Precondition(_))));
    }

    #[test]
    fn q_inf_without_communication_goes_remote() {
        let i = inst(&[1, 3, 3, 3, 3], 3, &[(0, 0); 3]);
        let r = solve_q_inf(&i).unwrap();
        assert_eq!(r.makespan, Rational::new(1.into(), 3.into()) * q(2) + q(1));
        assert_eq!(
            r.makespan,
            exact_solve(&i, Limits::default()).unwrap().makespan
        );
    }

    #[test]
    fn padding_adds_fast_processors() {
        let i = inst(&[1, 2], 1, &[(0, 0); 3]);
        let padded = pad_unlimited(&i);
        assert_eq!(padded.speeds.iter().filter(|s| **s == q(2)).count(), 5);
    }

    #[test]
    fn partial_equal_single_processor_is_serial() {
        let i = inst(&[2], 2, &[(1, 5), (1, 0), (1, 2)]);
        let r = solve_partial_equal(&i).unwrap();
        assert_eq!(r.makespan, Rational::new(1.into(), 2.into()) * q(1 + 6 + 1));
    }

    #[test]
    fn grouped_pairs_of_singletons_match_q2() {
        let i = inst(&[1, 2], 2, &[(1, 0), (0, 4), (3, 1), (2, 2)]);
        let g = i.clone().with_groups(vec![0, 1]).unwrap();
        let a = solve_grouped(&g).unwrap();
        assert_eq!(a.makespan, solve_q2(&i).unwrap().makespan);
        assert_eq!(a.guarantee, Guarantee::Exact);
    }
}
