//! Fork-join instances, schedules and their canonical timing.
//!
//! A schedule is determined by where each branch task runs and in which
//! order each processor executes its tasks. Start times are always derived
//! with [`canonicalize`]: every task starts as soon as its processor is free
//! and its input has arrived.

use std::collections::HashSet;
use std::fmt;

use crate::error::{Error, Result};
use crate::scalar::{cmp, max_of, Scalar};

/// One branch task of the fork-join graph.
#[derive(Debug, Clone, PartialEq)]
pub struct BranchTask<T> {
    pub id: String,
    /// Processing cost; runs in `p / s` on a processor of speed `s`.
    pub p: T,
    /// Communication from the source, paid when not co-located with it.
    pub gin: T,
    /// Communication to the sink, paid when not co-located with it.
    pub gout: T,
}

impl<T: Scalar> BranchTask<T> {
    pub fn new(id: impl Into<String>, p: T, gin: T, gout: T) -> Self {
        BranchTask {
            id: id.into(),
            p,
            gin,
            gout,
        }
    }
}

/// Workload plus processor system.
///
/// When `groups` is set, communication is also free between two distinct
/// processors that carry the same group label.
#[derive(Debug, Clone, PartialEq)]
pub struct Instance<T> {
    pub tasks: Vec<BranchTask<T>>,
    pub p_src: T,
    pub p_sink: T,
    pub speeds: Vec<T>,
    pub groups: Option<Vec<u32>>,
}

impl<T: Scalar> Instance<T> {
    /// Builds and validates an instance without processor groups.
    pub fn new(tasks: Vec<BranchTask<T>>, p_src: T, p_sink: T, speeds: Vec<T>) -> Result<Self> {
        let inst = Instance {
            tasks,
            p_src,
            p_sink,
            speeds,
            groups: None,
        };
        inst.check()?;
        Ok(inst)
    }

    pub fn with_groups(mut self, groups: Vec<u32>) -> Result<Self> {
        self.groups = Some(groups);
        self.check()?;
        Ok(self)
    }

    /// Checks every model invariant, naming the offending field.
    pub fn check(&self) -> Result<()> {
        if self.speeds.is_empty() {
            return Err(Error::invalid(
                "speeds",
                "at least one processor is required",
            ));
        }
        for (m, s) in self.speeds.iter().enumerate() {
            if !s.is_positive() {
                return Err(Error::invalid(
                    format!("speeds[{m}]"),
                    format!("speed must be > 0, got {s}"),
                ));
            }
        }
        if !self.p_src.is_positive() {
            return Err(Error::invalid("p_src", "cost must be > 0"));
        }
        if !self.p_sink.is_positive() {
            return Err(Error::invalid("p_sink", "cost must be > 0"));
        }
        let mut seen = HashSet::new();
        for (j, t) in self.tasks.iter().enumerate() {
            if !t.p.is_positive() {
                return Err(Error::invalid(format!("tasks[{j}].p"), "cost must be > 0"));
            }
            if t.gin.is_negative() {
                return Err(Error::invalid(
                    format!("tasks[{j}].gin"),
                    "communication must be >= 0",
                ));
            }
            if t.gout.is_negative() {
                return Err(Error::invalid(
                    format!("tasks[{j}].gout"),
                    "communication must be >= 0",
                ));
            }
            if !seen.insert(t.id.as_str()) {
                return Err(Error::invalid(
                    format!("tasks[{j}].id"),
                    format!("duplicate id {:?}", t.id),
                ));
            }
        }
        if let Some(groups) = &self.groups {
            if groups.len() != self.speeds.len() {
                return Err(Error::invalid(
                    "groups",
                    format!(
                        "expected {} entries, got {}",
                        self.speeds.len(),
                        groups.len()
                    ),
                ));
            }
        }
        Ok(())
    }

    pub fn num_tasks(&self) -> usize {
        self.tasks.len()
    }

    pub fn num_procs(&self) -> usize {
        self.speeds.len()
    }

    /// Whether communication between processors `a` and `b` is free.
    pub fn co_located(&self, a: usize, b: usize) -> bool {
        a == b || self.groups.as_ref().is_some_and(|g| g[a] == g[b])
    }

    pub fn exec_time(&self, j: usize, m: usize) -> T {
        self.tasks[j].p.clone() / self.speeds[m].clone()
    }

    pub fn source_finish(&self, m_src: usize) -> T {
        self.p_src.clone() / self.speeds[m_src].clone()
    }

    pub fn sink_time(&self, m_sink: usize) -> T {
        self.p_sink.clone() / self.speeds[m_sink].clone()
    }

    pub fn in_delay(&self, j: usize, m: usize, m_src: usize) -> T {
        if self.co_located(m, m_src) {
            T::zero()
        } else {
            self.tasks[j].gin.clone()
        }
    }

    pub fn out_delay(&self, j: usize, m: usize, m_sink: usize) -> T {
        if self.co_located(m, m_sink) {
            T::zero()
        } else {
            self.tasks[j].gout.clone()
        }
    }

    /// Earliest start of task `j` on processor `m`.
    pub fn release(&self, j: usize, m: usize, m_src: usize) -> T {
        self.source_finish(m_src) + self.in_delay(j, m, m_src)
    }

    /// The common branch cost, if all branch costs are equal. An instance
    /// without branch tasks trivially qualifies with cost 1.
    pub fn common_cost(&self) -> Option<T> {
        match self.tasks.first() {
            None => Some(T::one()),
            Some(first) => self
                .tasks
                .iter()
                .all(|t| t.p == first.p)
                .then(|| first.p.clone()),
        }
    }

    pub fn require_common_cost(&self) -> Result<T> {
        self.common_cost()
            .ok_or_else(|| Error::precondition("all branch tasks must have equal processing cost"))
    }

    pub fn min_speed(&self) -> T {
        self.speeds
            .iter()
            .cloned()
            .reduce(|a, b| if b < a { b } else { a })
            .expect("non-empty speeds")
    }

    pub fn max_speed(&self) -> T {
        self.speeds
            .iter()
            .cloned()
            .reduce(max_of)
            .expect("non-empty speeds")
    }

    /// Processors sorted by non-increasing speed, ties by index.
    pub fn procs_by_speed(&self) -> Vec<usize> {
        let mut procs: Vec<usize> = (0..self.num_procs()).collect();
        procs.sort_by(|&a, &b| cmp(&self.speeds[b], &self.speeds[a]).then(a.cmp(&b)));
        procs
    }

    /// Two processors are interchangeable when they agree on speed and group.
    pub fn interchangeable(&self, a: usize, b: usize) -> bool {
        self.speeds[a] == self.speeds[b]
            && match &self.groups {
                Some(g) => g[a] == g[b],
                None => true,
            }
    }

    /// Representative `(m_src, m_sink)` pairs: one per combination of
    /// processor classes, plus the distinct-processor variant when both
    /// roles fall in the same class.
    pub fn role_pairs(&self) -> Vec<(usize, usize)> {
        let reps = self.class_representatives();
        let mut pairs = Vec::new();
        for &a in &reps {
            for &b in &reps {
                if a == b {
                    pairs.push((a, a));
                    if let Some(other) =
                        (0..self.num_procs()).find(|&m| m != a && self.interchangeable(a, m))
                    {
                        pairs.push((a, other));
                    }
                } else {
                    pairs.push((a, b));
                }
            }
        }
        pairs
    }

    /// Lowest processor index of each interchangeability class.
    pub fn class_representatives(&self) -> Vec<usize> {
        (0..self.num_procs())
            .filter(|&m| (0..m).all(|k| !self.interchangeable(k, m)))
            .collect()
    }

    /// Multiplies every cost and communication by `k`.
    pub fn scaled(&self, k: &T) -> Self {
        let mut out = self.clone();
        out.p_src = out.p_src * k.clone();
        out.p_sink = out.p_sink * k.clone();
        for t in &mut out.tasks {
            t.p = t.p.clone() * k.clone();
            t.gin = t.gin.clone() * k.clone();
            t.gout = t.gout.clone() * k.clone();
        }
        out
    }
}

/// Processor roles plus the per-processor execution order of branch tasks
/// (task indices). This is the source of truth of a schedule.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Placement {
    pub m_src: usize,
    pub m_sink: usize,
    pub orders: Vec<Vec<usize>>,
}

impl Placement {
    pub fn empty(m_src: usize, m_sink: usize, num_procs: usize) -> Self {
        Placement {
            m_src,
            m_sink,
            orders: vec![Vec::new(); num_procs],
        }
    }

    /// Builds a placement from a per-task processor and a sort key per task.
    pub fn from_assignment<K: PartialOrd>(
        m_src: usize,
        m_sink: usize,
        num_procs: usize,
        assignment: &[usize],
        key: impl Fn(usize) -> K,
    ) -> Self {
        let mut orders = vec![Vec::new(); num_procs];
        for (j, &m) in assignment.iter().enumerate() {
            orders[m].push(j);
        }
        for order in &mut orders {
            order.sort_by(|&a, &b| {
                key(a)
                    .partial_cmp(&key(b))
                    .expect("comparable keys")
                    .then(a.cmp(&b))
            });
        }
        Placement {
            m_src,
            m_sink,
            orders,
        }
    }
}

/// A timed schedule. Produced by [`canonicalize`]; the fields are public so
/// that externally supplied timings can be checked with [`validate`].
#[derive(Debug, Clone, PartialEq)]
pub struct Schedule<T> {
    pub m_src: usize,
    pub m_sink: usize,
    pub orders: Vec<Vec<usize>>,
    /// Processor of each branch task.
    pub assignment: Vec<usize>,
    /// Start time of each branch task.
    pub starts: Vec<T>,
    pub source_start: T,
    pub sink_start: T,
}

impl<T: Scalar> Schedule<T> {
    pub fn placement(&self) -> Placement {
        Placement {
            m_src: self.m_src,
            m_sink: self.m_sink,
            orders: self.orders.clone(),
        }
    }
}

fn check_placement<T: Scalar>(inst: &Instance<T>, placement: &Placement) -> Result<Vec<usize>> {
    let num_procs = inst.num_procs();
    for m in [placement.m_src, placement.m_sink] {
        if m >= num_procs {
            return Err(Error::UnknownProcessor(m));
        }
    }
    if placement.orders.len() > num_procs {
        return Err(Error::UnknownProcessor(placement.orders.len() - 1));
    }
    let mut assignment = vec![usize::MAX; inst.num_tasks()];
    for (m, order) in placement.orders.iter().enumerate() {
        for &j in order {
            if j >= inst.num_tasks() {
                return Err(Error::invalid(
                    "orders",
                    format!("task index {j} out of range"),
                ));
            }
            if assignment[j] != usize::MAX {
                return Err(Error::DuplicateTask(inst.tasks[j].id.clone()));
            }
            assignment[j] = m;
        }
    }
    if let Some(j) = assignment.iter().position(|&m| m == usize::MAX) {
        return Err(Error::UnassignedTask(inst.tasks[j].id.clone()));
    }
    Ok(assignment)
}

/// Computes the left-shifted start times for a placement.
pub fn canonicalize<T: Scalar>(inst: &Instance<T>, placement: &Placement) -> Result<Schedule<T>> {
    let assignment = check_placement(inst, placement)?;
    let Placement { m_src, m_sink, .. } = *placement;
    let mut orders = placement.orders.clone();
    orders.resize(inst.num_procs(), Vec::new());

    let mut starts = vec![T::zero(); inst.num_tasks()];
    let mut sink_start = inst.source_finish(m_src);
    for (m, order) in orders.iter().enumerate() {
        let mut free = T::zero();
        for &j in order {
            let start = max_of(free, inst.release(j, m, m_src));
            free = start.clone() + inst.exec_time(j, m);
            sink_start = max_of(sink_start, free.clone() + inst.out_delay(j, m, m_sink));
            starts[j] = start;
        }
    }
    Ok(Schedule {
        m_src,
        m_sink,
        orders,
        assignment,
        starts,
        source_start: T::zero(),
        sink_start,
    })
}

/// Schedule length recomputed from the start times.
pub fn makespan<T: Scalar>(inst: &Instance<T>, sched: &Schedule<T>) -> T {
    let mut latest = sched.source_start.clone() + inst.source_finish(sched.m_src);
    for (j, start) in sched.starts.iter().enumerate() {
        let m = sched.assignment[j];
        latest = max_of(
            latest,
            start.clone() + inst.exec_time(j, m) + inst.out_delay(j, m, sched.m_sink),
        );
    }
    latest + inst.sink_time(sched.m_sink)
}

/// Canonicalizes a placement and returns the schedule with its length.
pub fn evaluate<T: Scalar>(inst: &Instance<T>, placement: &Placement) -> Result<(Schedule<T>, T)> {
    let sched = canonicalize(inst, placement)?;
    let len = makespan(inst, &sched);
    Ok((sched, len))
}

/// A task of the fork-join graph, as referenced by violations.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TaskRef {
    Source,
    Sink,
    Branch(usize),
}

impl fmt::Display for TaskRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TaskRef::Source => write!(f, "source"),
            TaskRef::Sink => write!(f, "sink"),
            TaskRef::Branch(j) => write!(f, "task #{j}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    /// Roles, orders or assignment are structurally inconsistent.
    Structure(String),
    Overlap {
        proc: usize,
        first: TaskRef,
        second: TaskRef,
    },
    /// A task runs before its processor-order predecessor.
    OrderMismatch {
        proc: usize,
        task: usize,
    },
    /// Remote task starts before the source output can have arrived.
    BeforeRelease {
        task: usize,
    },
    /// Task co-located with the source starts before the source finishes.
    BeforeSourceFinish {
        task: usize,
    },
    SinkTooEarly {
        waiting_for: TaskRef,
    },
    /// Start time differs from the left-shifted value of the same order.
    NotCanonical {
        task: TaskRef,
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Structure(msg) => write!(f, "structure: {msg}"),
            Violation::Overlap {
                proc,
                first,
                second,
            } => {
                write!(f, "overlap on processor {proc}: {first} and {second}")
            }
            Violation::OrderMismatch { proc, task } => {
                write!(
                    f,
                    "task #{task} on processor {proc} starts before its predecessor"
                )
            }
            Violation::BeforeRelease { task } => {
                write!(f, "task #{task} starts before its input arrives")
            }
            Violation::BeforeSourceFinish { task } => {
                write!(f, "task #{task} starts before the source finishes")
            }
            Violation::SinkTooEarly { waiting_for } => {
                write!(f, "sink starts before the output of {waiting_for} arrives")
            }
            Violation::NotCanonical { task } => write!(f, "{task} is not left-shifted"),
        }
    }
}

/// Lists every way `sched` breaks the model. An empty list means valid.
pub fn validate<T: Scalar>(inst: &Instance<T>, sched: &Schedule<T>) -> Vec<Violation> {
    let mut out = Vec::new();
    let n = inst.num_tasks();
    let num_procs = inst.num_procs();
    if sched.orders.len() != num_procs {
        out.push(Violation::Structure(format!(
            "expected {num_procs} processor orders, got {}",
            sched.orders.len()
        )));
    }
    if sched.assignment.len() != n || sched.starts.len() != n {
        out.push(Violation::Structure(format!(
            "expected {n} assignments and start times"
        )));
    }
    if !out.is_empty() {
        return out;
    }
    match check_placement(inst, &sched.placement()) {
        Err(e) => {
            out.push(Violation::Structure(e.to_string()));
            return out;
        }
        Ok(assignment) if assignment != sched.assignment => {
            out.push(Violation::Structure(
                "assignment disagrees with processor orders".into(),
            ));
            return out;
        }
        Ok(_) => {}
    }

    let (m_src, m_sink) = (sched.m_src, sched.m_sink);
    let src_finish = sched.source_start.clone() + inst.source_finish(m_src);
    let sink_end = sched.sink_start.clone() + inst.sink_time(m_sink);

    // processor occupancy, including the source and sink intervals
    for m in 0..num_procs {
        let mut intervals: Vec<(T, T, TaskRef)> = sched.orders[m]
            .iter()
            .map(|&j| {
                let s = sched.starts[j].clone();
                (s.clone(), s + inst.exec_time(j, m), TaskRef::Branch(j))
            })
            .collect();
        if m == m_src {
            intervals.push((
                sched.source_start.clone(),
                src_finish.clone(),
                TaskRef::Source,
            ));
        }
        if m == m_sink {
            intervals.push((sched.sink_start.clone(), sink_end.clone(), TaskRef::Sink));
        }
        intervals.sort_by(|a, b| cmp(&a.0, &b.0).then(cmp(&a.1, &b.1)));
        for w in intervals.windows(2) {
            if w[0].1 > w[1].0 {
                out.push(Violation::Overlap {
                    proc: m,
                    first: w[0].2,
                    second: w[1].2,
                });
            }
        }
        for w in sched.orders[m].windows(2) {
            if sched.starts[w[1]] < sched.starts[w[0]].clone() + inst.exec_time(w[0], m) {
                out.push(Violation::OrderMismatch {
                    proc: m,
                    task: w[1],
                });
            }
        }
    }

    for j in 0..n {
        let m = sched.assignment[j];
        let release = src_finish.clone() + inst.in_delay(j, m, m_src);
        if sched.starts[j] < release {
            if inst.co_located(m, m_src) {
                out.push(Violation::BeforeSourceFinish { task: j });
            } else {
                out.push(Violation::BeforeRelease { task: j });
            }
        }
        let arrival = sched.starts[j].clone() + inst.exec_time(j, m) + inst.out_delay(j, m, m_sink);
        if sched.sink_start < arrival {
            out.push(Violation::SinkTooEarly {
                waiting_for: TaskRef::Branch(j),
            });
        }
    }
    if sched.sink_start < src_finish {
        out.push(Violation::SinkTooEarly {
            waiting_for: TaskRef::Source,
        });
    }

    if let Ok(canon) = canonicalize(inst, &sched.placement()) {
        if sched.source_start != T::zero() {
            out.push(Violation::NotCanonical {
                task: TaskRef::Source,
            });
        }
        for j in 0..n {
            if canon.starts[j] != sched.starts[j] {
                out.push(Violation::NotCanonical {
                    task: TaskRef::Branch(j),
                });
            }
        }
        if canon.sink_start != sched.sink_start {
            out.push(Violation::NotCanonical {
                task: TaskRef::Sink,
            });
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Rational;

    fn q(n: i64) -> Rational {
        Rational::from_integer(n.into())
    }

    fn inst(speeds: &[i64], tasks: &[(i64, i64, i64)]) -> Instance<Rational> {
        let tasks = tasks
            .iter()
            .enumerate()
            .map(|(j, &(p, gi, go))| BranchTask::new(format!("t{j}"), q(p), q(gi), q(go)))
            .collect();
        Instance::new(tasks, q(1), q(1), speeds.iter().map(|&s| q(s)).collect()).unwrap()
    }

    fn on(m_src: usize, m_sink: usize, orders: Vec<Vec<usize>>) -> Placement {
        Placement {
            m_src,
            m_sink,
            orders,
        }
    }

    #[test]
    fn single_processor_chain() {
        let i = inst(&[1], &[(2, 5, 5)]);
        let s = canonicalize(&i, &on(0, 0, vec![vec![0]])).unwrap();
        assert_eq!(s.source_start, q(0));
        assert_eq!(s.starts[0], q(1));
        assert_eq!(s.sink_start, q(3));
    }

    #[test]
    fn remote_first_task_waits_for_input() {
        let i = inst(&[1, 1], &[(2, 3, 0)]);
        let s = canonicalize(&i, &on(0, 0, vec![vec![], vec![0]])).unwrap();
        assert_eq!(s.starts[0], q(4));
    }

    #[test]
    fn speed_divides_execution() {
        let i = inst(&[1, 2], &[(2, 3, 0)]);
        let (s, _) = evaluate(&i, &on(0, 0, vec![vec![], vec![0]])).unwrap();
        assert_eq!(s.starts[0], q(4));
        assert_eq!(s.starts[0].clone() + i.exec_time(0, 1), q(5));
    }

    #[test]
    fn makespan_examples() {
        let i = inst(&[1, 1], &[(2, 3, 4)]);
        assert_eq!(
            evaluate(&i, &on(0, 0, vec![vec![], vec![0]])).unwrap().1,
            q(11)
        );
        assert_eq!(
            evaluate(&i, &on(0, 0, vec![vec![0], vec![]])).unwrap().1,
            q(4)
        );
        let i = inst(&[1, 2], &[(2, 3, 4)]);
        assert_eq!(
            evaluate(&i, &on(0, 0, vec![vec![], vec![0]])).unwrap().1,
            q(10)
        );
    }

    #[test]
    fn empty_branch_set_with_split_roles() {
        let i = inst(&[1, 2], &[]);
        let (s, len) = evaluate(&i, &on(0, 1, vec![vec![], vec![]])).unwrap();
        assert_eq!(s.sink_start, q(1));
        assert_eq!(len, q(1) + Rational::new(1.into(), 2.into()));
        assert!(validate(&i, &s).is_empty());
    }

    #[test]
    fn placement_errors() {
        let i = inst(&[1, 1], &[(1, 0, 0), (1, 0, 0)]);
        assert_eq!(
            canonicalize(&i, &on(0, 5, vec![vec![0, 1]])).unwrap_err(),
            Error::UnknownProcessor(5)
        );
        assert_eq!(
            canonicalize(&i, &on(0, 0, vec![vec![0, 1], vec![1]])).unwrap_err(),
            Error::DuplicateTask("t1".into())
        );
        assert_eq!(
            canonicalize(&i, &on(0, 0, vec![vec![0]])).unwrap_err(),
            Error::UnassignedTask("t1".into())
        );
    }

    #[test]
    fn validate_flags_overlap() {
        let i = inst(&[1, 1], &[(2, 0, 0), (2, 0, 0)]);
        let mut s = canonicalize(&i, &on(0, 0, vec![vec![], vec![0, 1]])).unwrap();
        s.starts[1] = s.starts[0].clone();
        let v = validate(&i, &s);
        assert!(
            v.iter()
                .any(|v| matches!(v, Violation::Overlap { proc: 1, .. })),
            "{v:?}"
        );
    }

    #[test]
    fn validate_flags_missing_source_time() {
        let i = inst(&[1, 1], &[(2, 3, 0)]);
        let mut s = canonicalize(&i, &on(0, 0, vec![vec![], vec![0]])).unwrap();
        s.starts[0] = q(3);
        let v = validate(&i, &s);
        assert!(v.contains(&Violation::BeforeRelease { task: 0 }), "{v:?}");
        assert!(v.contains(&Violation::NotCanonical {
            task: TaskRef::Branch(0)
        }));
    }

    #[test]
    fn validate_flags_early_sink() {
        let i = inst(&[1, 1], &[(2, 0, 4)]);
        let mut s = canonicalize(&i, &on(0, 0, vec![vec![], vec![0]])).unwrap();
        s.sink_start = q(4);
        let v = validate(&i, &s);
        assert!(v.contains(&Violation::SinkTooEarly {
            waiting_for: TaskRef::Branch(0)
        }));
    }

    #[test]
    fn invariant_violations_are_rejected() {
        let bad_speed = Instance::new(vec![], q(1), q(1), vec![q(0)]);
        assert!(
            matches!(bad_speed, Err(Error::InvalidInstance { ref field, .. }) if field == "speeds[0]")
        );
        let dup = Instance::new(
            vec![
                BranchTask::new("a", q(1), q(0), q(0)),
                BranchTask::new("a", q(1), q(0), q(0)),
            ],
            q(1),
            q(1),
            vec![q(1)],
        );
        assert!(
            matches!(dup, Err(Error::InvalidInstance { ref field, .. }) if field == "tasks[1].id")
        );
        assert!(Instance::new(vec![], q(1), q(1), vec![]).is_err());
    }

    #[test]
    fn groups_zero_communication_within_group() {
        let i = inst(&[1, 1, 1], &[(1, 5, 5)])
            .with_groups(vec![0, 0, 1])
            .unwrap();
        let (s, len) = evaluate(&i, &on(0, 0, vec![vec![], vec![0], vec![]])).unwrap();
        assert_eq!(s.starts[0], q(1));
        assert_eq!(len, q(3));
        assert!(validate(&i, &s).is_empty());
    }

    #[test]
    fn role_pairs_cover_classes() {
        let i = inst(&[1, 1, 2], &[]);
        assert_eq!(i.role_pairs(), vec![(0, 0), (0, 1), (0, 2), (2, 0), (2, 2)]);
    }
}
