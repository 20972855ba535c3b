//! Slot-grid approximation for equal processing costs.
//!
//! Start times on processor `m` are restricted to a grid of step `p / s_m`.
//! Under a makespan bound, each task is connected to the grid slots it can
//! use, and a matching that covers every task is a schedule. Rounding any
//! schedule up to the grid delays each task by less than one step, so the
//! smallest grid-feasible bound is within `p / s_min` of the optimum.

use std::collections::VecDeque;

use crate::error::Result;
use crate::model::{canonicalize, Instance, Placement};
use crate::report::{Algorithm, Guarantee, SolveReport};
use crate::scalar::{cmp, sort_dedup, Scalar};
use crate::search::{min_feasible, ProbeLog};

/// Bipartite graph with adjacency lists from left to right nodes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BipartiteGraph {
    pub n_left: usize,
    pub n_right: usize,
    pub adj: Vec<Vec<usize>>,
}

impl BipartiteGraph {
    pub fn new(n_left: usize, n_right: usize) -> Self {
        BipartiteGraph {
            n_left,
            n_right,
            adj: vec![Vec::new(); n_left],
        }
    }

    pub fn add_edge(&mut self, u: usize, v: usize) {
        debug_assert!(u < self.n_left && v < self.n_right);
        self.adj[u].push(v);
    }

    pub fn num_edges(&self) -> usize {
        self.adj.iter().map(Vec::len).sum()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matching {
    /// Right partner of each left node.
    pub left: Vec<Option<usize>>,
    pub size: usize,
}

const INF: usize = usize::MAX;

/// Maximum-cardinality matching (Hopcroft-Karp).
pub fn max_matching(graph: &BipartiteGraph) -> Matching {
    let mut pair_u: Vec<Option<usize>> = vec![None; graph.n_left];
    let mut pair_v: Vec<Option<usize>> = vec![None; graph.n_right];
    let mut dist = vec![INF; graph.n_left];
    let mut size = 0;

    loop {
        // layer the free left nodes
        let mut queue = VecDeque::new();
        for u in 0..graph.n_left {
            if pair_u[u].is_none() {
                dist[u] = 0;
                queue.push_back(u);
            } else {
                dist[u] = INF;
            }
        }
        let mut reachable_free = false;
        while let Some(u) = queue.pop_front() {
            for &v in &graph.adj[u] {
                match pair_v[v] {
                    None => reachable_free = true,
                    Some(w) if dist[w] == INF => {
                        dist[w] = dist[u] + 1;
                        queue.push_back(w);
                    }
                    Some(_) => {}
                }
            }
        }
        if !reachable_free {
            break;
        }
        for u in 0..graph.n_left {
            if pair_u[u].is_none() && augment(graph, u, &mut pair_u, &mut pair_v, &mut dist) {
                size += 1;
            }
        }
    }
    Matching { left: pair_u, size }
}

fn augment(
    graph: &BipartiteGraph,
    u: usize,
    pair_u: &mut [Option<usize>],
    pair_v: &mut [Option<usize>],
    dist: &mut [usize],
) -> bool {
    for &v in &graph.adj[u] {
        let ok = match pair_v[v] {
            None => true,
            Some(w) => dist[w] == dist[u] + 1 && augment(graph, w, pair_u, pair_v, dist),
        };
        if ok {
            pair_u[u] = Some(v);
            pair_v[v] = Some(u);
            return true;
        }
    }
    dist[u] = INF;
    false
}

#[derive(Debug, Clone, PartialEq)]
pub struct Slot<T> {
    pub proc: usize,
    /// Grid index on the processor.
    pub index: usize,
    pub start: T,
}

/// Tasks (left) versus the grid slots they can use (right) under a bound.
#[derive(Debug, Clone)]
pub struct SlotGraph<T> {
    pub t_max: T,
    pub m_src: usize,
    pub m_sink: usize,
    pub slots: Vec<Slot<T>>,
    pub graph: BipartiteGraph,
}

fn grid_offset<T: Scalar>(inst: &Instance<T>, m: usize, m_src: usize) -> T {
    if m == m_src {
        inst.source_finish(m_src)
    } else {
        T::zero()
    }
}

/// First grid index at or after `release`.
fn first_index<T: Scalar>(release: &T, offset: &T, step: &T) -> usize {
    let k = ((release.clone() - offset.clone()) / step.clone()).ceil_val();
    if k.is_negative() {
        0
    } else {
        k.to_f64_lossy().round() as usize
    }
}

/// Grid indices worth offering on processor `m`: a left-shifted grid
/// schedule only uses slots within `n` steps of some task's first slot.
fn useful_indices<T: Scalar>(
    inst: &Instance<T>,
    m: usize,
    m_src: usize,
    offset: &T,
    step: &T,
) -> Vec<usize> {
    let n = inst.num_tasks();
    let mut heads: Vec<usize> = (0..n)
        .map(|j| first_index(&inst.release(j, m, m_src), offset, step))
        .collect();
    heads.sort_unstable();
    heads.dedup();
    let mut out = Vec::new();
    for h in heads {
        let from = out.last().map_or(h, |&last: &usize| h.max(last + 1));
        out.extend(from..h + n);
    }
    out
}

/// Builds the slot graph for bound `t_max` and the given roles. Requires
/// equal branch costs.
pub fn build_slot_graph<T: Scalar>(
    inst: &Instance<T>,
    t_max: &T,
    m_src: usize,
    m_sink: usize,
) -> Result<SlotGraph<T>> {
    let p = inst.require_common_cost()?;
    let n = inst.num_tasks();
    let due = t_max.clone() - inst.sink_time(m_sink);
    let mut slots = Vec::new();
    let mut edges: Vec<Vec<usize>> = vec![Vec::new(); n];
    for m in 0..inst.num_procs() {
        let step = p.clone() / inst.speeds[m].clone();
        let offset = grid_offset(inst, m, m_src);
        for index in useful_indices(inst, m, m_src, &offset, &step) {
            let start = offset.clone() + step.clone() * T::of_usize(index);
            if start.clone() + step.clone() > due {
                break;
            }
            let users: Vec<usize> = (0..n)
                .filter(|&j| {
                    start >= inst.release(j, m, m_src)
                        && start.clone() + step.clone() + inst.out_delay(j, m, m_sink) <= due
                })
                .collect();
            if users.is_empty() {
                continue;
            }
            for j in users {
                edges[j].push(slots.len());
            }
            slots.push(Slot {
                proc: m,
                index,
                start,
            });
        }
    }
    let mut graph = BipartiteGraph::new(n, slots.len());
    for (j, e) in edges.into_iter().enumerate() {
        for v in e {
            graph.add_edge(j, v);
        }
    }
    Ok(SlotGraph {
        t_max: t_max.clone(),
        m_src,
        m_sink,
        slots,
        graph,
    })
}

/// Grid makespan values for the given roles, sorted. The minimal
/// grid-feasible bound is always one of them.
pub fn grid_candidates<T: Scalar>(
    inst: &Instance<T>,
    p: &T,
    m_src: usize,
    m_sink: usize,
) -> Vec<T> {
    let n = inst.num_tasks();
    let sink = inst.sink_time(m_sink);
    let mut out = vec![inst.source_finish(m_src) + sink.clone()];
    for m in 0..inst.num_procs() {
        let step = p.clone() / inst.speeds[m].clone();
        let offset = grid_offset(inst, m, m_src);
        let mut tails: Vec<T> = (0..n).map(|j| inst.out_delay(j, m, m_sink)).collect();
        sort_dedup(&mut tails);
        for index in useful_indices(inst, m, m_src, &offset, &step) {
            let finish = offset.clone() + step.clone() * T::of_usize(index + 1);
            for tail in &tails {
                out.push(finish.clone() + tail.clone() + sink.clone());
            }
        }
    }
    sort_dedup(&mut out);
    out
}

/// Whether `t_max` admits a grid schedule with these roles; returns the
/// placement read off a covering matching.
pub fn grid_feasible<T: Scalar>(
    inst: &Instance<T>,
    t_max: &T,
    m_src: usize,
    m_sink: usize,
) -> Result<Option<Placement>> {
    if inst.source_finish(m_src) + inst.sink_time(m_sink) > *t_max {
        return Ok(None);
    }
    let sg = build_slot_graph(inst, t_max, m_src, m_sink)?;
    let matching = max_matching(&sg.graph);
    if matching.size < inst.num_tasks() {
        return Ok(None);
    }
    let mut placement = Placement::empty(m_src, m_sink, inst.num_procs());
    let mut by_slot: Vec<(usize, usize)> = matching
        .left
        .iter()
        .enumerate()
        .map(|(j, v)| (v.expect("covering matching"), j))
        .collect();
    by_slot.sort_by(|a, b| cmp(&sg.slots[a.0].start, &sg.slots[b.0].start));
    for (v, j) in by_slot {
        placement.orders[sg.slots[v].proc].push(j);
    }
    Ok(Some(placement))
}

/// Search statistics of [`solve_matching_approx_detailed`].
#[derive(Debug, Clone)]
pub struct MatchingStats<T> {
    /// Smallest grid-feasible bound over all role choices.
    pub t_star: T,
    /// Probe outcomes of each role choice's binary search.
    pub logs: Vec<((usize, usize), ProbeLog)>,
}

impl<T> MatchingStats<T> {
    pub fn probes(&self) -> usize {
        self.logs.iter().map(|(_, l)| l.probes.len()).sum()
    }
}

/// Schedule within `OPT + p / s_min` for equal branch costs.
pub fn solve_matching_approx<T: Scalar>(inst: &Instance<T>) -> Result<SolveReport<T>> {
    solve_matching_approx_detailed(inst).map(|(r, _)| r)
}

pub fn solve_matching_approx_detailed<T: Scalar>(
    inst: &Instance<T>,
) -> Result<(SolveReport<T>, MatchingStats<T>)> {
    let p = inst.require_common_cost()?;
    let mut best: Option<(T, Placement)> = None;
    let mut logs = Vec::new();
    for (m_src, m_sink) in inst.role_pairs() {
        let candidates = grid_candidates(inst, &p, m_src, m_sink);
        let mut log = ProbeLog::default();
        let mut failure = None;
        let found = min_feasible(&candidates, &mut log, |t| {
            match grid_feasible(inst, t, m_src, m_sink) {
                Ok(r) => r,
                Err(e) => {
                    failure = Some(e);
                    None
                }
            }
        });
        if let Some(e) = failure {
            return Err(e);
        }
        logs.push(((m_src, m_sink), log));
        if let Some((idx, placement)) = found {
            let t = candidates[idx].clone();
            if best.as_ref().is_none_or(|(b, _)| t < *b) {
                best = Some((t, placement));
            }
        }
    }
    let (t_star, placement) = best.expect("the largest grid candidate is always feasible");
    let schedule = canonicalize(inst, &placement)?;
    let stats = MatchingStats { t_star, logs };
    let report = SolveReport::new(
        inst,
        schedule,
        Algorithm::Bipartite,
        Guarantee::Additive(p / inst.min_speed()),
    )
    .note("t_star", &stats.t_star)
    .note("probes", stats.probes());
    Ok((report, stats))
}
