//! Configuration-ILP approximation scheme for arbitrary branch costs.
//!
//! For a target makespan `T` and fixed source/sink processors the instance
//! is rounded ([`simplify`]), every processor type gets its maximal
//! single-processor configurations ([`enumerate_configurations`]) and an
//! integer program picks a configuration per processor and distributes the
//! task classes over types ([`build_ilp`], [`solve_ilp`]). A solution is
//! mapped back to the original tasks ([`reconstruct_schedule`]). The target
//! is searched on a geometric grid.

mod config;
mod ilp;
mod reconstruct;
mod simplify;

pub use config::{
    enumerate_configurations, items_for_type, Configuration, Item, ItemKey, Packer, TypeConfigs,
};
pub use ilp::{build_ilp, solve_ilp, ConfigIlp, IntegerProgram, Row, RowCounts, Sense};
pub use reconstruct::reconstruct_schedule;
pub use simplify::{
    simplify, snap_epsilon, BigClass, Comm, CommClass, ProcType, Role, SimplifiedInstance,
    SmallGroup, TaskClass,
};

use log::debug;

use crate::error::{Error, Result};
use crate::model::{canonicalize, evaluate, Instance, Placement};
use crate::report::{Algorithm, Guarantee, SolveReport};
use crate::scalar::{max_of, Scalar};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EpasLimits {
    /// Feasible configurations visited per processor type.
    pub max_configs: usize,
    /// Search nodes per integer program.
    pub max_nodes: u64,
    /// Target values tried.
    pub max_probes: usize,
}

impl Default for EpasLimits {
    fn default() -> Self {
        EpasLimits {
            max_configs: 100_000,
            max_nodes: 10_000_000,
            max_probes: 64,
        }
    }
}

/// `(1 + 6e) / (1 - 2e - e^2)`.
pub fn ratio_bound<T: Scalar>(epsilon: &T) -> T {
    let e = epsilon.clone();
    let six = T::of_usize(6);
    let two = T::of_usize(2);
    (T::one() + six * e.clone()) / (T::one() - two * e.clone() - e.clone() * e)
}

/// Size statistics of the rounded instance at the final target.
#[derive(Debug, Clone, PartialEq)]
pub struct EpasStats<T> {
    pub epsilon: T,
    pub t_max: T,
    pub gamma: usize,
    pub cost_classes: usize,
    pub exec_categories: usize,
    pub configs: usize,
    pub rows: RowCounts,
    /// `(target, feasible)` in probe order.
    pub probes: Vec<(T, bool)>,
}

struct Probe<T> {
    placement: Placement,
    makespan: T,
    stats: EpasStats<T>,
}

/// Best reconstructed placement over all role choices at target `t_max`.
fn probe<T: Scalar>(
    inst: &Instance<T>,
    t_max: &T,
    epsilon: &T,
    limits: &EpasLimits,
) -> Result<Option<Probe<T>>> {
    let mut best: Option<Probe<T>> = None;
    let s_max = inst.max_speed();
    for (m_src, m_sink) in inst.role_pairs() {
        let simp = simplify(inst, t_max, epsilon, m_src, m_sink)?;
        if simp.src_finish > simp.due
            || inst
                .tasks
                .iter()
                .any(|t| t.p > s_max.clone() * t_max.clone())
        {
            continue;
        }
        let configs = (0..simp.types.len())
            .map(|ty| enumerate_configurations(&simp, ty, limits.max_configs))
            .collect::<Result<Vec<_>>>()?;
        let ilp = build_ilp(&simp, &configs);
        let Some(solution) = solve_ilp(&ilp.program, limits.max_nodes)? else {
            continue;
        };
        let placement = reconstruct_schedule(inst, &simp, &configs, &ilp, &solution)?;
        let (_, makespan) = evaluate(inst, &placement)?;
        if best.as_ref().is_none_or(|b| makespan < b.makespan) {
            let stats = EpasStats {
                epsilon: simp.epsilon.clone(),
                t_max: t_max.clone(),
                gamma: simp.gamma_count(),
                cost_classes: simp.cost_class_count(),
                exec_categories: simp.exec_categories().len(),
                configs: configs.iter().map(|c| c.configs.len()).sum(),
                rows: ilp.counts,
                probes: Vec::new(),
            };
            best = Some(Probe {
                placement,
                makespan,
                stats,
            });
        }
    }
    Ok(best)
}

/// Placement found for target `t_max` with the best role choice, if the
/// rounded program is feasible at that target.
pub fn feasible_at<T: Scalar>(
    inst: &Instance<T>,
    t_max: &T,
    epsilon: &T,
    limits: &EpasLimits,
) -> Result<Option<Placement>> {
    let (_, eps) = snap_epsilon(epsilon)?;
    if inst.groups.is_some() {
        return Err(Error::precondition(
            "processor groups are not supported by the approximation scheme",
        ));
    }
    Ok(probe(inst, t_max, &eps, limits)?.map(|p| p.placement))
}

/// Lower bounds from the longest source-branch-sink chain and from the total volume.
fn lower_bound<T: Scalar>(inst: &Instance<T>) -> T {
    let s_max = inst.max_speed();
    let longest = inst
        .tasks
        .iter()
        .map(|t| t.p.clone())
        .fold(T::zero(), max_of);
    let chain = (inst.p_src.clone() + longest + inst.p_sink.clone()) / s_max;
    let volume = inst
        .tasks
        .iter()
        .fold(inst.p_src.clone() + inst.p_sink.clone(), |acc, t| {
            acc + t.p.clone()
        });
    let total_speed = inst.speeds.iter().fold(T::zero(), |acc, s| acc + s.clone());
    max_of(chain, volume / total_speed)
}

pub fn epas_solve<T: Scalar>(inst: &Instance<T>, epsilon: &T) -> Result<SolveReport<T>> {
    epas_solve_detailed(inst, epsilon, EpasLimits::default()).map(|(r, _)| r)
}

/// Makespan within `(1 + 6e) / (1 - 2e - e^2)` of the optimum, `e` being
/// `epsilon` snapped down to `1 / k`.
pub fn epas_solve_detailed<T: Scalar>(
    inst: &Instance<T>,
    epsilon: &T,
    limits: EpasLimits,
) -> Result<(SolveReport<T>, EpasStats<T>)> {
    let (_, eps) = snap_epsilon(epsilon)?;
    if inst.groups.is_some() {
        return Err(Error::precondition(
            "processor groups are not supported by the approximation scheme",
        ));
    }
    let factor = T::one() + eps.clone();
    let lb = lower_bound(inst);
    let serial = inst
        .tasks
        .iter()
        .fold(inst.p_src.clone() + inst.p_sink.clone(), |acc, t| {
            acc + t.p.clone()
        })
        / inst.max_speed();
    let target = |i: usize| lb.clone() * factor.powi(i as u32);

    let mut probes: Vec<(T, bool)> = Vec::new();
    let mut best: Option<Probe<T>> = None;
    let run =
        |i: usize, probes: &mut Vec<(T, bool)>, best: &mut Option<Probe<T>>| -> Result<bool> {
            let t = target(i);
            let found = probe(inst, &t, &eps, &limits)?;
            debug!(
                "target {t}: {}",
                if found.is_some() {
                    "feasible"
                } else {
                    "infeasible"
                }
            );
            probes.push((t, found.is_some()));
            let ok = found.is_some();
            if let Some(p) = found {
                if best.as_ref().is_none_or(|b| p.makespan < b.makespan) {
                    *best = Some(p);
                }
            }
            Ok(ok)
        };

    // first grid point that covers the serial schedule, then upwards until feasible
    let mut hi = 0;
    while target(hi) < serial {
        hi += 1;
    }
    while !run(hi, &mut probes, &mut best)? {
        hi += 1;
        if probes.len() >= limits.max_probes {
            return Err(Error::LimitExceeded(format!(
                "no feasible target within {} probes",
                limits.max_probes
            )));
        }
    }
    let mut lo = 0;
    while lo < hi {
        if probes.len() >= limits.max_probes {
            return Err(Error::LimitExceeded(format!(
                "target search exceeded {} probes",
                limits.max_probes
            )));
        }
        let mid = lo + (hi - lo) / 2;
        if run(mid, &mut probes, &mut best)? {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }

    let best = best.expect("a feasible probe was recorded");
    let mut stats = best.stats;
    stats.probes = probes;
    let schedule = canonicalize(inst, &best.placement)?;
    let report = SolveReport::new(
        inst,
        schedule,
        Algorithm::Epas,
        Guarantee::Ratio(ratio_bound(&eps)),
    )
    .note("epsilon", &stats.epsilon)
    .note("target", &stats.t_max)
    .note("gamma", stats.gamma)
    .note("cost_classes", stats.cost_classes)
    .note("exec_categories", stats.exec_categories)
    .note("configurations", stats.configs)
    .note("probes", stats.probes.len());
    Ok((report, stats))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{validate, BranchTask};
    use crate::oracle::{exact_solve, Limits};
    use crate::Rational;

    fn q(n: i64) -> Rational {
        Rational::from_integer(n.into())
    }

    #[test]
    fn ratio_instances() {
        assert_eq!(
            ratio_bound(&Rational::new(1.into(), 3.into())),
            Rational::new(27.into(), 2.into())
        );
        assert_eq!(ratio_bound(&Rational::new(1.into(), 2.into())), q(-16));
    }

    #[test]
    fn single_task_within_ratio() {
        let tasks = vec![BranchTask::new("a", q(3), q(1), q(2))];
        let inst = Instance::new(tasks, q(1), q(1), vec![q(1), q(2)]).unwrap();
        let third = Rational::new(1.into(), 3.into());
        let r = epas_solve(&inst, &third).unwrap();
        let opt = exact_solve(&inst, Limits::default()).unwrap().makespan;
        assert!(validate(&inst, &r.schedule).is_empty());
        assert!(r.makespan <= ratio_bound(&third) * opt);
    }
}
