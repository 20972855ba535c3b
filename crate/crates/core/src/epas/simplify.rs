use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::model::Instance;
use crate::scalar::Scalar;

/// A rounded communication: a multiple of `epsilon * T`, or too large to be
/// paid at all within `T`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Comm {
    Level(u32),
    Infinite,
}

/// Rounded `(incoming, outgoing)` communication pair.
pub type CommClass = (Comm, Comm);

/// Which role processors of a given type play. Role processors form a type
/// of their own with a single member.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Role {
    Plain,
    Src,
    Sink,
    SrcSink,
}

impl Role {
    pub fn hosts_source(self) -> bool {
        matches!(self, Role::Src | Role::SrcSink)
    }

    pub fn hosts_sink(self) -> bool {
        matches!(self, Role::Sink | Role::SrcSink)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProcType<T> {
    /// Rounded speed is `s_min * (1 + epsilon)^level`.
    pub level: u32,
    pub speed: T,
    pub role: Role,
    pub procs: Vec<usize>,
}

/// Big tasks with rounded cost `cost_base * (1 + epsilon)^level`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BigClass {
    pub level: u32,
    pub comm: CommClass,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TaskClass {
    Big(BigClass),
    Small(CommClass),
}

#[derive(Debug, Clone, PartialEq)]
pub struct SmallGroup<T> {
    pub tasks: Vec<usize>,
    pub volume: T,
    pub placeholders: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimplifiedInstance<T> {
    pub epsilon: T,
    /// `1 / epsilon`.
    pub k: u32,
    pub t_max: T,
    pub m_src: usize,
    pub m_sink: usize,
    pub comm_unit: T,
    /// Execution time below which a task counts as small; also the length
    /// of a block of placeholders.
    pub t_small: T,
    pub p_small: T,
    pub cost_base: T,
    pub big: BTreeMap<BigClass, Vec<usize>>,
    pub small: BTreeMap<CommClass, SmallGroup<T>>,
    pub types: Vec<ProcType<T>>,
    /// Source completion with the rounded source speed.
    pub src_finish: T,
    /// Latest arrival at the sink with the rounded sink speed.
    pub due: T,
    pub back_map: Vec<TaskClass>,
}

/// Snaps `epsilon` down to the nearest `1 / k`, `k >= 2`.
pub fn snap_epsilon<T: Scalar>(epsilon: &T) -> Result<(u32, T)> {
    if *epsilon <= T::zero() || *epsilon > T::ratio(1, 2) {
        return Err(Error::precondition(format!(
            "epsilon must lie in (0, 1/2], got {epsilon}"
        )));
    }
    let k = (T::one() / epsilon.clone()).ceil_val();
    let k = k.to_f64_lossy() as u32;
    Ok((k, T::ratio(1, k as i64)))
}

/// Largest `n` with `base * factor^n <= value`, or `None` if `value < base`.
fn level_below<T: Scalar>(value: &T, base: &T, factor: &T) -> Option<u32> {
    if value < base {
        return None;
    }
    let mut n = 0;
    let mut cur = base.clone() * factor.clone();
    while cur <= *value {
        n += 1;
        cur = cur * factor.clone();
    }
    Some(n)
}

fn round_comm<T: Scalar>(g: &T, unit: &T, k: u32) -> Comm {
    let level = (g.clone() / unit.clone()).ceil_val();
    if level >= T::of_usize(k as usize) {
        Comm::Infinite
    } else {
        Comm::Level(level.to_f64_lossy() as u32)
    }
}

impl<T: Scalar> SimplifiedInstance<T> {
    pub fn comm_value(&self, c: Comm) -> Option<T> {
        match c {
            Comm::Level(i) => Some(self.comm_unit.clone() * T::of_usize(i as usize)),
            Comm::Infinite => None,
        }
    }

    pub fn big_cost(&self, level: u32) -> T {
        self.cost_base.clone() * (T::one() + self.epsilon.clone()).powi(level)
    }

    /// Window `(release, latest finish)` of communication class `comm` on
    /// type `ty`, or `None` if an infinite communication must be paid.
    pub fn window(&self, ty: usize, comm: CommClass) -> Option<(T, T)> {
        let role = self.types[ty].role;
        let release = if role.hosts_source() {
            self.src_finish.clone()
        } else {
            self.src_finish.clone() + self.comm_value(comm.0)?
        };
        let deadline = if role.hosts_sink() {
            self.due.clone()
        } else {
            self.due.clone() - self.comm_value(comm.1)?
        };
        Some((release, deadline))
    }

    /// Execution time of big class `level` on type `ty`.
    pub fn exec(&self, level: u32, ty: usize) -> T {
        self.big_cost(level) / self.types[ty].speed.clone()
    }

    /// Whether big class `level` counts towards the small volume on `ty`.
    pub fn small_on(&self, level: u32, ty: usize) -> bool {
        self.exec(level, ty) <= self.t_small
    }

    /// Distinct finite communication values, zero included.
    pub fn gamma_count(&self) -> usize {
        let mut levels: Vec<u32> = vec![0];
        for c in self
            .big
            .keys()
            .map(|b| b.comm)
            .chain(self.small.keys().copied())
        {
            for g in [c.0, c.1] {
                if let Comm::Level(i) = g {
                    levels.push(i);
                }
            }
        }
        levels.sort_unstable();
        levels.dedup();
        levels.len()
    }

    /// Distinct rounded big costs, plus one for the placeholder class.
    pub fn cost_class_count(&self) -> usize {
        let mut levels: Vec<u32> = self.big.keys().map(|b| b.level).collect();
        levels.sort_unstable();
        levels.dedup();
        levels.len() + usize::from(!self.small.is_empty())
    }

    /// Distinct execution times of big classes over all types, counting
    /// only those above the small threshold.
    pub fn exec_categories(&self) -> Vec<T> {
        let mut out = Vec::new();
        for b in self.big.keys() {
            for ty in 0..self.types.len() {
                if !self.small_on(b.level, ty) {
                    out.push(self.exec(b.level, ty));
                }
            }
        }
        crate::scalar::sort_dedup(&mut out);
        out
    }

    pub fn small_placeholders(&self, comm: CommClass) -> u64 {
        self.small.get(&comm).map_or(0, |g| g.placeholders)
    }
}

/// Rounds an instance for a target makespan `t_max` and fixed roles.
///
/// Communications are rounded up to multiples of `epsilon * t_max`, big
/// costs down to a geometric grid, speeds down to a geometric grid, and the
/// volume of small tasks of each communication class is replaced by
/// placeholders of cost `s_min * epsilon^3 * t_max`.
pub fn simplify<T: Scalar>(
    inst: &Instance<T>,
    t_max: &T,
    epsilon: &T,
    m_src: usize,
    m_sink: usize,
) -> Result<SimplifiedInstance<T>> {
    if *t_max <= T::zero() {
        return Err(Error::precondition(format!(
            "target makespan must be positive, got {t_max}"
        )));
    }
    if inst.groups.is_some() {
        return Err(Error::precondition(
            "processor groups are not supported by the approximation scheme",
        ));
    }
    if m_src >= inst.num_procs() || m_sink >= inst.num_procs() {
        return Err(Error::UnknownProcessor(m_src.max(m_sink)));
    }
    let (k, eps) = snap_epsilon(epsilon)?;
    let factor = T::one() + eps.clone();
    let s_min = inst.min_speed();
    let comm_unit = eps.clone() * t_max.clone();
    let t_small = eps.clone() * eps.clone() * t_max.clone();
    let cost_base = s_min.clone() * t_small.clone();
    let p_small = cost_base.clone() * eps.clone();

    let mut big: BTreeMap<BigClass, Vec<usize>> = BTreeMap::new();
    let mut small: BTreeMap<CommClass, SmallGroup<T>> = BTreeMap::new();
    let mut back_map = Vec::with_capacity(inst.num_tasks());
    for (j, task) in inst.tasks.iter().enumerate() {
        let comm = (
            round_comm(&task.gin, &comm_unit, k),
            round_comm(&task.gout, &comm_unit, k),
        );
        if task.p <= cost_base {
            let g = small.entry(comm).or_insert_with(|| SmallGroup {
                tasks: Vec::new(),
                volume: T::zero(),
                placeholders: 0,
            });
            g.tasks.push(j);
            g.volume = g.volume.clone() + task.p.clone();
            back_map.push(TaskClass::Small(comm));
        } else {
            let level =
                level_below(&task.p, &cost_base, &factor).expect("big tasks exceed the base cost");
            let class = BigClass { level, comm };
            big.entry(class).or_default().push(j);
            back_map.push(TaskClass::Big(class));
        }
    }
    for g in small.values_mut() {
        let count = (g.volume.clone() / p_small.clone()).ceil_val();
        g.placeholders = count.to_f64_lossy() as u64;
    }

    let rounded: Vec<(u32, T)> = inst
        .speeds
        .iter()
        .map(|s| {
            let level = level_below(s, &s_min, &factor).expect("speeds are at least the minimum");
            (level, s_min.clone() * factor.clone().powi(level))
        })
        .collect();
    let mut types: Vec<ProcType<T>> = Vec::new();
    for m in 0..inst.num_procs() {
        let role = match (m == m_src, m == m_sink) {
            (true, true) => Role::SrcSink,
            (true, false) => Role::Src,
            (false, true) => Role::Sink,
            (false, false) => Role::Plain,
        };
        let (level, speed) = rounded[m].clone();
        match types
            .iter_mut()
            .find(|t| role == Role::Plain && t.role == Role::Plain && t.level == level)
        {
            Some(t) => t.procs.push(m),
            None => types.push(ProcType {
                level,
                speed,
                role,
                procs: vec![m],
            }),
        }
    }
    types.sort_by(|a, b| (a.role, a.level).cmp(&(b.role, b.level)));

    let src_finish = inst.p_src.clone() / rounded[m_src].1.clone();
    let due = t_max.clone() - inst.p_sink.clone() / rounded[m_sink].1.clone();
    Ok(SimplifiedInstance {
        epsilon: eps,
        k,
        t_max: t_max.clone(),
        m_src,
        m_sink,
        comm_unit,
        t_small,
        p_small,
        cost_base,
        big,
        small,
        types,
        src_finish,
        due,
        back_map,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::BranchTask;
    use crate::Rational;

    fn q(n: i64) -> Rational {
        Rational::from_integer(n.into())
    }

    fn half() -> Rational {
        Rational::new(1.into(), 2.into())
    }

    #[test]
    fn communication_rounds_up_to_multiples() {
        let tasks = vec![BranchTask::new("a", q(5), q(3), q(0))];
        let inst = Instance::new(tasks, q(1), q(1), vec![q(1)]).unwrap();
        let s = simplify(&inst, &q(8), &half(), 0, 0).unwrap();
        let class = *s.big.keys().next().unwrap();
        assert_eq!(s.comm_value(class.comm.0), Some(q(4)));
        assert_eq!(s.comm_value(class.comm.1), Some(q(0)));
    }

    #[test]
    fn small_cutoff() {
        let tasks = vec![
            BranchTask::new("a", q(2), q(0), q(0)),
            BranchTask::new("b", q(3), q(0), q(0)),
        ];
        let inst = Instance::new(tasks, q(1), q(1), vec![q(1)]).unwrap();
        let s = simplify(&inst, &q(8), &half(), 0, 0).unwrap();
        assert!(matches!(s.back_map[0], TaskClass::Small(_)));
        assert!(matches!(
            s.back_map[1],
            TaskClass::Big(BigClass { level: 1, .. })
        ));
        // one placeholder of cost 1 per unit of small volume
        assert_eq!(s.small.values().next().unwrap().placeholders, 2);
    }

    #[test]
    fn speeds_round_down_geometrically() {
        let inst = Instance::new(
            vec![],
            q(1),
            q(1),
            vec![q(1), Rational::new(29.into(), 10.into())],
        )
        .unwrap();
        let s = simplify(&inst, &q(8), &half(), 0, 0).unwrap();
        let speeds: Vec<Rational> = s.types.iter().map(|t| t.speed.clone()).collect();
        assert!(speeds.contains(&Rational::new(9.into(), 4.into())));
        assert!(speeds.contains(&q(1)));
    }

    #[test]
    fn epsilon_is_snapped() {
        let (k, e) = snap_epsilon(&Rational::new(2.into(), 5.into())).unwrap();
        assert_eq!((k, e), (3, Rational::new(1.into(), 3.into())));
        assert!(snap_epsilon(&Rational::new(3.into(), 5.into())).is_err());
        assert!(snap_epsilon(&q(0)).is_err());
    }
}
