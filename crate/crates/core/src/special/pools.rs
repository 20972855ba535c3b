//! Feasibility engines for equal-cost tasks under a makespan bound.
//!
//! Both engines decide exactly whether the given tasks fit under `t_max`
//! for fixed roles, and build a placement when they do.

use crate::matching::{max_matching, BipartiteGraph};
use crate::model::{Instance, Placement};
use crate::rtd::{max_throughput_equal_length, Window};
use crate::scalar::{cmp, Scalar};

/// Source and sink share a communication domain `local`; at most one
/// processor `remote` lies outside it.
///
/// Tasks on `local` have no communication and are only limited in number.
/// Tasks on `remote` form a single-machine throughput problem, so the
/// maximum throughput there minimizes what `local` must absorb.
pub(crate) fn throughput_case<T: Scalar>(
    inst: &Instance<T>,
    p: &T,
    (m_src, m_sink): (usize, usize),
    t_max: &T,
    tasks: &[usize],
    local: &[usize],
    remote: Option<usize>,
) -> Option<Placement> {
    let src_finish = inst.source_finish(m_src);
    let due = t_max.clone() - inst.sink_time(m_sink);
    if src_finish > due {
        return None;
    }
    let mut placement = Placement::empty(m_src, m_sink, inst.num_procs());
    let mut rest: Vec<usize> = tasks.to_vec();
    if let Some(h) = remote {
        let windows: Vec<Window<T>> = tasks
            .iter()
            .map(|&j| {
                (
                    inst.release(j, h, m_src),
                    due.clone() - inst.out_delay(j, h, m_sink),
                )
            })
            .collect();
        let (selected, order) = max_throughput_equal_length(&windows, p, &inst.speeds[h]);
        placement.orders[h] = order.iter().map(|&k| tasks[k]).collect();
        rest = (0..tasks.len())
            .filter(|k| selected.binary_search(k).is_err())
            .map(|k| tasks[k])
            .collect();
    }
    // fill the local processors slot by slot, earliest finish first
    let mut finish: Vec<T> = local.iter().map(|_| src_finish.clone()).collect();
    for j in rest {
        let (best, _) = local
            .iter()
            .enumerate()
            .map(|(k, &m)| (k, finish[k].clone() + p.clone() / inst.speeds[m].clone()))
            .min_by(|a, b| cmp(&a.1, &b.1).then(a.0.cmp(&b.0)))?;
        let m = local[best];
        finish[best] = finish[best].clone() + p.clone() / inst.speeds[m].clone();
        if finish[best] > due {
            return None;
        }
        placement.orders[m].push(j);
    }
    Some(placement)
}

/// Source and sink lie in different communication domains that together
/// cover every processor: `near_src` (free incoming, paid outgoing) and
/// `near_sink` (paid incoming, free outgoing).
///
/// Tasks are taken by non-increasing outgoing communication and kept near
/// the sink whenever the near-sink set stays schedulable; the rest run near
/// the source, where the largest outgoing communication takes the earliest
/// finishing slot.
pub(crate) fn split_case<T: Scalar>(
    inst: &Instance<T>,
    p: &T,
    (m_src, m_sink): (usize, usize),
    t_max: &T,
    tasks: &[usize],
    near_src: &[usize],
    near_sink: &[usize],
) -> Option<Placement> {
    let src_finish = inst.source_finish(m_src);
    let due = t_max.clone() - inst.sink_time(m_sink);
    if src_finish > due {
        return None;
    }
    let mut order: Vec<usize> = tasks.to_vec();
    order.sort_by(|&a, &b| cmp(&inst.tasks[b].gout, &inst.tasks[a].gout).then(a.cmp(&b)));

    // near-sink slots: latest starts counted back from the sink
    let mut sink_slots: Vec<(usize, T)> = Vec::new();
    for &m in near_sink {
        let step = p.clone() / inst.speeds[m].clone();
        let mut start = due.clone() - step.clone();
        while start >= src_finish && sink_slots.len() < 2 * tasks.len() + 2 {
            sink_slots.push((m, start.clone()));
            start = start - step.clone();
        }
    }
    let mut kept: Vec<usize> = Vec::new();
    let mut kept_matching: Vec<usize> = Vec::new();
    let mut spill: Vec<usize> = Vec::new();
    for &j in &order {
        kept.push(j);
        match match_near_sink(inst, m_src, &kept, &sink_slots) {
            Some(m) => kept_matching = m,
            None => {
                kept.pop();
                spill.push(j);
            }
        }
    }

    // near-source slots by finish time; the source itself was first
    let mut src_slots: Vec<(usize, T)> = Vec::new();
    for &m in near_src {
        let step = p.clone() / inst.speeds[m].clone();
        for k in 1..=spill.len() {
            src_slots.push((m, src_finish.clone() + step.clone() * T::of_usize(k)));
        }
    }
    src_slots.sort_by(|a, b| cmp(&a.1, &b.1).then(a.0.cmp(&b.0)));
    if src_slots.len() < spill.len() {
        return None;
    }
    let mut placement = Placement::empty(m_src, m_sink, inst.num_procs());
    for (k, &j) in spill.iter().enumerate() {
        let (m, finish) = &src_slots[k];
        if finish.clone() + inst.out_delay(j, *m, m_sink) > due {
            return None;
        }
        placement.orders[*m].push(j);
    }
    let mut by_start: Vec<(usize, usize)> = kept
        .iter()
        .copied()
        .zip(kept_matching.iter().copied())
        .collect();
    by_start.sort_by(|a, b| cmp(&sink_slots[a.1].1, &sink_slots[b.1].1));
    for (j, slot) in by_start {
        placement.orders[sink_slots[slot].0].push(j);
    }
    Some(placement)
}

/// Slot of each task in `kept`, if they can all be matched.
fn match_near_sink<T: Scalar>(
    inst: &Instance<T>,
    m_src: usize,
    kept: &[usize],
    slots: &[(usize, T)],
) -> Option<Vec<usize>> {
    let mut graph = BipartiteGraph::new(kept.len(), slots.len());
    for (u, &j) in kept.iter().enumerate() {
        for (v, (m, start)) in slots.iter().enumerate() {
            if inst.release(j, *m, m_src) <= *start {
                graph.add_edge(u, v);
            }
        }
    }
    let matching = max_matching(&graph);
    (matching.size == kept.len()).then(|| {
        matching
            .left
            .into_iter()
            .map(|v| v.expect("perfect"))
            .collect()
    })
}
